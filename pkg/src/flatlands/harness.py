"""Exhaustive and sampled verification sweeps, plus compatibility checks.

The theorem being verified: a coloring is accepted by the greedy peel
recognizer iff it induces no matroid from the forbidden catalog.  Small
geometries are swept per coloring; the big sweeps (up to 2^25
colorings) run through a vectorized numpy engine:

* forbidden side: for every flat whose rank matches a catalog member, a
  boolean lookup table over the local green pattern says whether that
  pattern spans the flat and is isomorphic to a catalog matroid;
* accept side: a coloring can only be accepted if it is monochromatic
  or one color misses a hyperplane (the peel's first step), which cuts
  the candidates to a tiny fraction that is then peeled in Python.
"""

import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .geometry import Geometry, Flat, PROJECTIVE, AFFINE
from .coloring import Coloring, NestedSequence, peel, accepts_mask
from .catalog import catalog, subset_rank_table, rank_tables_isomorphic

SWEEP_BUDGET = 1 << 25
CHUNK = 1 << 19
MISMATCH_CAP = 16


class BudgetExceeded(ValueError):
    """The exhaustive sweep would exceed 2^25 colorings."""


@dataclass(frozen=True)
class VerificationReport:
    descriptor: str
    total_colorings: int
    accepted: int
    forbidden_free: int
    mismatches: tuple  # up to MISMATCH_CAP green index tuples
    elapsed: float
    mode: str

    @property
    def ok(self):
        return not self.mismatches

    def to_dict(self):
        return {
            "geometry": self.descriptor,
            "total_colorings": self.total_colorings,
            "accepted": self.accepted,
            "forbidden_free": self.forbidden_free,
            "mismatches": [list(m) for m in self.mismatches],
            "elapsed": self.elapsed,
            "mode": self.mode,
        }


# -- forbidden-side lookup tables ---------------------------------------


def _forbidden_scans(g):
    """(flat mask, point tuple, bool table over local patterns) per scan flat."""
    cached = getattr(g, "_forbidden_scans", None)
    if cached is not None:
        return cached
    members = catalog(g.kind, g.field.q)
    ranks = sorted({m.rank for m in members})
    sizes = {m.n for m in members}
    scans = []
    for rk in ranks:
        cands_rk = [m for m in members if m.rank == rk]
        for fm in g.flats_of_rank(rk):
            pts = g.indices_of(fm)
            w = len(pts)
            rt = subset_rank_table(g, pts)
            table = np.zeros(1 << w, dtype=bool)
            # expansion of a local sub-pattern index into the flat's table
            for pattern in range(1, 1 << w):
                s = bin(pattern).count("1")
                if s not in sizes or rt[pattern] != rk:
                    continue
                cands = [m for m in cands_rk if m.n == s]
                if not cands:
                    continue
                bits = [i for i in range(w) if pattern & (1 << i)]
                sub = tuple(
                    rt[sum(1 << bits[j] for j in range(s) if t & (1 << j))]
                    for t in range(1 << s)
                )
                if any(rank_tables_isomorphic(s, sub, m.rank_table) for m in cands):
                    table[pattern] = True
            scans.append((fm, pts, table))
    g._forbidden_scans = scans
    return scans


def has_forbidden(g, green_mask):
    """Fast per-coloring witness-existence check via the scan tables."""
    for _, pts, table in _forbidden_scans(g):
        local = 0
        for j, p in enumerate(pts):
            local |= ((green_mask >> p) & 1) << j
        if table[local]:
            return True
    return False


# -- the vectorized sweep -----------------------------------------------


def _sweep_chunk(g, masks):
    """Counts and mismatches for a uint64 array of green masks."""
    n = g.n
    scans = _forbidden_scans(g)
    bad = np.zeros(len(masks), dtype=bool)
    for _, pts, table in scans:
        local = np.zeros(len(masks), dtype=np.uint64)
        for j, p in enumerate(pts):
            local |= ((masks >> np.uint64(p)) & np.uint64(1)) << np.uint64(j)
        bad |= table[local]
    full = np.uint64((1 << n) - 1)
    cand = (masks == np.uint64(0)) | (masks == full)
    if g.r >= 2:
        for h in g.hyperplane_masks():
            comp = np.uint64(((1 << n) - 1) & ~h)
            mg = masks & comp
            cand |= (mg == comp) | (mg == np.uint64(0))
    accepts = np.zeros(len(masks), dtype=bool)
    for i in np.nonzero(cand)[0]:
        accepts[i] = accepts_mask(g, int(masks[i]))
    mism = np.nonzero(accepts == bad)[0]
    examples = [g.indices_of(int(masks[i])) for i in mism[:MISMATCH_CAP]]
    return (
        len(masks),
        int(accepts.sum()),
        int((~bad).sum()),
        int(len(mism)),
        examples,
    )


def _thread_count(threads):
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("FLATLANDS_THREADS")
    return max(1, int(env)) if env else 1


def _run_sweep(g, chunks, threads):
    total = accepted = free = nmism = 0
    examples = []
    workers = _thread_count(threads)
    if workers > 1:
        _forbidden_scans(g)  # build memos once before going parallel
        g.hyperplane_masks() if g.r >= 2 else None
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda m: _sweep_chunk(g, m), chunks))
    else:
        results = [_sweep_chunk(g, m) for m in chunks]
    for t, a, f, nm, ex in results:
        total += t
        accepted += a
        free += f
        nmism += nm
        if len(examples) < MISMATCH_CAP:
            examples.extend(ex[: MISMATCH_CAP - len(examples)])
    return total, accepted, free, examples


def verify_theorem(g, threads=None):
    """Sweep every coloring of g; report recognizer/catalog agreement."""
    n = g.n
    if (1 << n) > SWEEP_BUDGET:
        raise BudgetExceeded(
            f"{g!r} has 2^{n} colorings, over the 2^25 exhaustive budget"
        )
    start = time.monotonic()
    chunks = [
        np.arange(lo, min(lo + CHUNK, 1 << n), dtype=np.uint64)
        for lo in range(0, 1 << n, CHUNK)
    ]
    total, accepted, free, examples = _run_sweep(g, chunks, threads)
    return VerificationReport(
        descriptor=repr(g),
        total_colorings=total,
        accepted=accepted,
        forbidden_free=free,
        mismatches=tuple(examples),
        elapsed=time.monotonic() - start,
        mode="exhaustive",
    )


def _splitmix64(x):
    mask = np.uint64(0xFFFFFFFFFFFFFFFF)
    x = (x + np.uint64(0x9E3779B97F4A7C15)) & mask
    z = x
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & mask
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & mask
    return z ^ (z >> np.uint64(31))


def sample_verify(g, samples, seed, threads=None):
    """Check recognizer/catalog agreement on counter-derived random colorings.

    Sample i is splitmix64(seed * 2^32 + i) truncated to n bits, so runs
    are reproducible for a given seed regardless of chunking or threads.
    """
    n = g.n
    if n > 63:
        raise BudgetExceeded("sampled masks must fit in 63 bits")
    start = time.monotonic()
    base = np.uint64((seed & 0xFFFFFFFF) << 32)
    nmask = np.uint64((1 << n) - 1)
    chunks = []
    for lo in range(0, samples, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, samples), dtype=np.uint64)
        chunks.append(_splitmix64(base + idx) & nmask)
    total, accepted, free, examples = _run_sweep(g, chunks, threads)
    return VerificationReport(
        descriptor=repr(g),
        total_colorings=total,
        accepted=accepted,
        forbidden_free=free,
        mismatches=tuple(examples),
        elapsed=time.monotonic() - start,
        mode=f"sampled(n={samples},seed={seed})",
    )


# -- minimal non-targets ------------------------------------------------


def find_minimal_non_targets(g):
    """Rejected colorings whose every proper flat restriction is accepted."""
    n = g.n
    if (1 << n) > SWEEP_BUDGET:
        raise BudgetExceeded(f"{g!r} is too large for the minimal scan")
    proper = [m for k in range(1, g.r) for m in g.flats_of_rank(k)]
    out = []
    for gm in range(1 << n):
        if accepts_mask(g, gm):
            continue
        if all(accepts_mask(g, gm & fm, ambient=fm) for fm in proper):
            out.append(Coloring(g, frozenset(g.indices_of(gm))))
    return out


def disjoint_hyperplane_scan(g):
    """True iff every minimal non-target has a disjoint red/green hyperplane pair.

    A hyperplane is red (green) for the coloring when the red (green)
    trace on it has full hyperplane rank.
    """
    if g.kind != AFFINE:
        raise ValueError("disjoint hyperplane pairs exist only in affine geometries")
    r = g.r
    hyps = g.hyperplane_masks()
    pairs = [
        (h1, h2)
        for i, h1 in enumerate(hyps)
        for h2 in hyps[i + 1:]
        if h1 & h2 == 0
    ]
    for c in find_minimal_non_targets(g):
        gm = c.green_mask
        rm = g.full_mask & ~gm
        if g.rank_mask(gm) < r or g.rank_mask(rm) < r:
            continue
        found = False
        for h1, h2 in pairs:
            if (
                g.rank_mask(rm & h1) == r - 1
                and g.rank_mask(gm & h2) == r - 1
            ) or (
                g.rank_mask(gm & h1) == r - 1
                and g.rank_mask(rm & h2) == r - 1
            ):
                found = True
                break
        if not found:
            return False
    return True


# -- compatibility across a hyperplane ----------------------------------


@dataclass(frozen=True)
class CompatibilityInstance:
    """A target on PG minus a hyperplane H plus a target on H."""

    projective: Geometry = dc_field(compare=False)
    hyperplane: Flat = dc_field()
    affine_green: frozenset = dc_field()     # subset of E - H
    hyperplane_green: frozenset = dc_field()  # subset of H


def _canonical_masks(g, ambient, green, deleted=0):
    """Ascending canonical flat masks of an accepted coloring, else None."""
    ok, chain = peel(g, ambient, green, deleted=deleted)
    if not ok:
        return None
    asc = list(reversed(chain))
    if asc[0] != 0:
        asc.insert(0, 0)
    if len(asc) > 1:
        first = asc[1] & ~asc[0]
        if first and not (first & green):
            asc.insert(0, 0)
    return asc


def check_compatibility_direct(inst):
    """Is the merged coloring a projective target?  (ground truth)"""
    g = inst.projective
    merged = g.mask_of(inst.affine_green | inst.hyperplane_green)
    return accepts_mask(g, merged)


def _canonical_chains(g, ambient, green, deleted=0):
    """All canonical defining chains of the coloring inside `ambient`.

    A canonical sequence is determined by a strictly increasing chain of
    nonempty flats ending at `ambient` whose shells are monochromatic
    with alternating colors (the leading empty flats only record
    parity).  Such sequences are not unique, so compatibility checks
    must quantify over all of them.  Returns (chain, first_is_green)
    pairs; empty list iff the coloring is not a target here.
    """
    cache = getattr(g, "_chain_cache", None)
    if cache is None:
        cache = g._chain_cache = {}
    key = (ambient, green, deleted)
    if key in cache:
        return cache[key]
    if deleted:
        flats = sorted({f & ~deleted for f in g.all_flat_masks()})
    else:
        flats = [f for f in g.all_flat_masks() if f & ~ambient == 0]
    flats = [f for f in flats if f and f != ambient] + [ambient]
    memo = {}

    def extend(cur, prev_green):
        key = (cur, prev_green)
        if key in memo:
            return memo[key]
        if cur == ambient:
            out = [[]]
        else:
            out = []
            for f in flats:
                shell = f & ~cur
                if not shell or cur & ~f:
                    continue
                is_green = bool(shell & green)
                if shell & green and shell & ~green & ambient:
                    continue  # shell not monochromatic
                if prev_green is not None and is_green == prev_green:
                    continue
                for tail in extend(f, is_green):
                    out.append([f] + tail)
        memo[key] = out
        return out

    chains = []
    for first in extend(0, None):
        first_green = bool(first[0] & green) if first else True
        chains.append((first, first_green))
    out = [(c, fg) for c, fg in chains if c]
    cache[key] = out
    return out


def check_compatibility_conditions(inst):
    """Decide compatibility from defining sequences of the components alone.

    The sequence conditions: there are defining nested sequences
    F_0..F_k of the affine side (first nonempty flat F_beta) and
    S_0..S_t of the hyperplane side, repeated flats allowed, and an
    m with t = m + k - beta such that (i) F_beta union S_m is a flat,
    r(S_m) = r(F_beta) - 1, and the merged coloring restricted to it is
    a target; and (ii) every F_{beta+a} union S_{m+a} is a flat whose
    shell is monochromatic.

    Because repeats may shift any flat to a position of either parity,
    the parity bookkeeping drops out and the conditions reduce to a
    search: a seed pair satisfying (i) from which a monotone co-walk of
    mono-shell flat chains on the two sides reaches (E - H, H) with all
    intermediate unions flats with monochromatic shells.
    """
    g = inst.projective
    hmask = inst.hyperplane.mask
    green = g.mask_of(inst.affine_green | inst.hyperplane_green)
    amb = g.full_mask & ~hmask
    ok_a, _ = peel(g, amb, green & amb, deleted=hmask)
    ok_s, _ = peel(g, hmask, green & hmask)
    if not (ok_a and ok_s):
        raise ValueError("both component colorings must be targets")
    aff_flats = sorted({f & ~hmask for f in g.all_flat_masks()} - {0})
    hyp_flats = [f for f in g.all_flat_masks() if f & ~hmask == 0]

    def mono(shell):
        return not (shell & green and shell & ~green & g.full_mask)

    goal = (amb, hmask)
    seen = set()

    def walk(a, b):
        if (a, b) == goal:
            return True
        if (a, b) in seen:
            return False
        seen.add((a, b))
        for a2 in aff_flats:
            if a & ~a2 or a2 == a:
                continue
            for b2 in hyp_flats:
                if b & ~b2:
                    continue
                if a2 == a and b2 == b:
                    continue
                u2 = a2 | b2
                if g.closure_mask(u2) != u2:
                    continue
                if not mono(u2 & ~(a | b)):
                    continue
                if walk(a2, b2):
                    return True
        # advance the hyperplane side alone
        for b2 in hyp_flats:
            if b & ~b2 or b2 == b:
                continue
            u2 = a | b2
            if g.closure_mask(u2) != u2:
                continue
            if not mono(b2 & ~b):
                continue
            if walk(a, b2):
                return True
        return False

    for c1 in aff_flats:
        if not mono(c1):
            continue
        r1 = g.rank_mask(c1)
        for s in hyp_flats:
            if g.rank_mask(s) != r1 - 1:
                continue
            u = c1 | s
            if g.closure_mask(u) != u:
                continue
            if not accepts_mask(g, green & u, ambient=u):
                continue
            seen.clear()
            if walk(c1, s):
                return True
    return False


def enumerate_compatibility_instances(g, h):
    """All compatible-component pairs across hyperplane h of projective g."""
    hmask = h.mask if isinstance(h, Flat) else h
    amb = g.full_mask & ~hmask
    aff_pts = g.indices_of(amb)
    hyp_pts = g.indices_of(hmask)
    hflat = g.make_flat(hmask)
    aff_targets = []
    for bits in range(1 << len(aff_pts)):
        gm = sum(1 << aff_pts[i] for i in range(len(aff_pts)) if bits & (1 << i))
        ok, _ = peel(g, amb, gm, deleted=hmask)
        if ok:
            aff_targets.append(frozenset(g.indices_of(gm)))
    hyp_targets = []
    for bits in range(1 << len(hyp_pts)):
        gm = sum(1 << hyp_pts[i] for i in range(len(hyp_pts)) if bits & (1 << i))
        if accepts_mask(g, gm, ambient=hmask):
            hyp_targets.append(frozenset(g.indices_of(gm)))
    for ag in aff_targets:
        for hg in hyp_targets:
            yield CompatibilityInstance(g, hflat, ag, hg)


# -- random generation ---------------------------------------------------


def random_flat_chain(g, rng):
    """Random strictly increasing flat chain masks from 0 to E."""
    chain = [0]
    cur = 0
    while cur != g.full_mask:
        outside = list(g.indices_of(g.full_mask & ~cur))
        nxt = g.closure_mask(cur | (1 << rng.choice(outside)))
        while nxt != g.full_mask and rng.random() < 0.35:
            outside = list(g.indices_of(g.full_mask & ~nxt))
            nxt = g.closure_mask(nxt | (1 << rng.choice(outside)))
        chain.append(nxt)
        cur = nxt
    if rng.random() < 0.5:
        chain.insert(1, 0)
    return chain


def random_nested_sequence(g, rng):
    chain = random_flat_chain(g, rng)
    return NestedSequence(g, tuple(frozenset(g.indices_of(m)) for m in chain))


def random_target(g, rng):
    from .coloring import target_from_sequence

    return target_from_sequence(random_nested_sequence(g, rng))


def sequence_with_rank_profile(g, profile, rng):
    """Random nested sequence whose flats have the given rank profile."""
    flats = []
    cur = 0
    cur_rank = 0
    for rho in profile:
        while cur_rank < rho:
            outside = list(g.indices_of(g.full_mask & ~cur))
            cur = g.closure_mask(cur | (1 << rng.choice(outside)))
            cur_rank += 1
        flats.append(cur)
    return NestedSequence(g, tuple(frozenset(g.indices_of(m)) for m in flats))


def green_matroids_isomorphic(c1, c2):
    """Rank-table isomorphism of the green-set matroids of two colorings."""
    g1, g2 = sorted(c1.green), sorted(c2.green)
    if len(g1) != len(g2):
        return False
    if len(g1) > 10:
        raise ValueError("green sets above 10 elements are out of oracle range")
    t1 = subset_rank_table(c1.geometry, g1)
    t2 = subset_rank_table(c2.geometry, g2)
    return rank_tables_isomorphic(len(g1), t1, t2)
