"""Small matroids on rank oracles: the forbidden catalog and witness search.

Every catalog member is stored as a full 2^n rank table, so one
isomorphism routine covers uniform matroids, direct and 2-sums, the
parallel connection, and the (non-binary) rank-3 whirl alike.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .geometry import Flat, PROJECTIVE, AFFINE
from .fields import _factor_prime_power, MAX_ORDER

MAX_GROUND = 8


class UnsupportedOrder(ValueError):
    """No catalog is defined for this (kind, q)."""


class InvalidBasepoint(ValueError):
    """Basepoint out of range, or a loop/coloop of its operand."""


class TooLarge(ValueError):
    """The construction would exceed the 8-element ground cap."""


class WrongRegime(ValueError):
    """Line profiles only decide projective q >= 3 / affine q >= 4."""


def _popcount(x):
    return bin(x).count("1")


@dataclass(frozen=True)
class SmallMatroid:
    """Rank oracle on at most 8 elements; axioms checked at construction."""

    n: int
    rank_table: tuple = dc_field(repr=False)
    name: str | None = None

    def __post_init__(self):
        n, t = self.n, self.rank_table
        if n > MAX_GROUND:
            raise TooLarge(f"{n} elements exceeds the {MAX_GROUND}-element cap")
        if len(t) != 1 << n:
            raise ValueError("rank table has wrong length")
        if t[0] != 0:
            raise ValueError("rank of the empty set must be 0")
        for mask in range(1 << n):
            for e in range(n):
                if mask & (1 << e):
                    continue
                d = t[mask | (1 << e)] - t[mask]
                if d not in (0, 1):
                    raise ValueError("rank function violates unit increase")
        for a in range(1 << n):
            for b in range(1 << n):
                if t[a | b] + t[a & b] > t[a] + t[b]:
                    raise ValueError("rank function violates submodularity")

    @property
    def rank(self):
        return self.rank_table[-1]

    def r(self, subset_mask):
        return self.rank_table[subset_mask]


@dataclass(frozen=True)
class ForbiddenWitness:
    name: str
    points: tuple  # green points realizing the catalog matroid
    flat: Flat     # the ambient closure certifying "induced"


# -- rank-table utilities ----------------------------------------------


def subset_rank_table(g, ground):
    """Ranks in geometry g of every subset of the ordered point list `ground`."""
    ground = list(ground)
    n = len(ground)
    ranks = [0] * (1 << n)
    closures = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        e = low.bit_length() - 1
        prev = mask ^ low
        pbit = 1 << ground[e]
        if closures[prev] & pbit:
            ranks[mask] = ranks[prev]
            closures[mask] = closures[prev]
        else:
            ranks[mask] = ranks[prev] + 1
            closures[mask] = g.closure_mask(closures[prev] | pbit)
    return tuple(ranks)


def rank_tables_isomorphic(n, t1, t2):
    """Exhaustive bijection search over rank tables, pruned incrementally."""
    if t1[-1] != t2[-1]:
        return False
    if sorted(t1) != sorted(t2):
        return False
    perm = [0] * n
    used = [False] * n

    def image(mask):
        out = 0
        i = 0
        while mask:
            if mask & 1:
                out |= 1 << perm[i]
            mask >>= 1
            i += 1
        return out

    def extend(k):
        if k == n:
            return True
        for j in range(n):
            if used[j]:
                continue
            perm[k] = j
            used[j] = True
            ok = True
            hi = 1 << k
            for sub in range(hi):
                m1 = sub | hi
                if t1[m1] != t2[image(m1)]:
                    ok = False
                    break
            if ok and extend(k + 1):
                return True
            used[j] = False
        return False

    return extend(0)


def matroids_isomorphic(a, b):
    if a.n != b.n:
        return False
    return rank_tables_isomorphic(a.n, a.rank_table, b.rank_table)


def _circuits(n, table):
    out = []
    for mask in range(1, 1 << n):
        size = _popcount(mask)
        if table[mask] == size:
            continue
        minimal = True
        m = mask
        while m:
            low = m & -m
            if table[mask ^ low] != size - 1:
                minimal = False
                break
            m ^= low
        if minimal:
            out.append(mask)
    return out


def _table_from_circuits(n, circuits):
    indep = [True] * (1 << n)
    for c in circuits:
        for mask in range(1 << n):
            if mask & c == c:
                indep[mask] = False
    table = [0] * (1 << n)
    for mask in range(1, 1 << n):
        if indep[mask]:
            table[mask] = _popcount(mask)
        else:
            best = 0
            m = mask
            while m:
                low = m & -m
                best = max(best, table[mask ^ low])
                m ^= low
            table[mask] = best
    return tuple(table)


# -- constructions ------------------------------------------------------


def make_uniform(m, n):
    if n > MAX_GROUND:
        raise TooLarge(f"U({m},{n}) exceeds the ground cap")
    table = tuple(min(_popcount(s), m) for s in range(1 << n))
    return SmallMatroid(n, table, name=f"U({m},{n})")


def make_direct_sum(a, b, name=None):
    n = a.n + b.n
    if n > MAX_GROUND:
        raise TooLarge("direct sum exceeds the ground cap")
    amask = (1 << a.n) - 1
    table = tuple(
        a.rank_table[s & amask] + b.rank_table[s >> a.n] for s in range(1 << n)
    )
    return SmallMatroid(n, table, name=name or f"{a.name}+{b.name}")


def _check_basepoint(m, p):
    if not 0 <= p < m.n:
        raise InvalidBasepoint(f"basepoint {p} out of range")
    if m.rank_table[1 << p] == 0:
        raise InvalidBasepoint("basepoint is a loop")
    full = (1 << m.n) - 1
    if m.rank_table[full] - m.rank_table[full ^ (1 << p)] == 1:
        raise InvalidBasepoint("basepoint is a coloop")


def _parallel_connection_table(a, b, pa, pb):
    # ground layout: elements of a minus pa, elements of b minus pb, basepoint
    _check_basepoint(a, pa)
    _check_basepoint(b, pb)
    n = a.n + b.n - 1
    if n > MAX_GROUND:
        raise TooLarge("parallel connection exceeds the ground cap")
    a_elems = [e for e in range(a.n) if e != pa]
    b_elems = [e for e in range(b.n) if e != pb]
    p_new = n - 1

    def relabel(circuit, elems, basepoint, offset):
        out = 0
        for e in range(8):
            if circuit & (1 << e):
                if e == basepoint:
                    out |= 1 << p_new
                else:
                    out |= 1 << (offset + elems.index(e))
        return out

    ca = _circuits(a.n, a.rank_table)
    cb = _circuits(b.n, b.rank_table)
    circuits = []
    for c in ca:
        circuits.append(relabel(c, a_elems, pa, 0))
    for c in cb:
        circuits.append(relabel(c, b_elems, pb, len(a_elems)))
    pbit_a = 1 << pa
    pbit_b = 1 << pb
    for c1 in ca:
        if not c1 & pbit_a:
            continue
        for c2 in cb:
            if not c2 & pbit_b:
                continue
            joined = relabel(c1 ^ pbit_a, a_elems, pa, 0) | relabel(
                c2 ^ pbit_b, b_elems, pb, len(a_elems)
            )
            circuits.append(joined)
    return n, _table_from_circuits(n, circuits)


def make_parallel_connection(a, b, basepoints=None, name=None):
    pa, pb = basepoints if basepoints is not None else (a.n - 1, b.n - 1)
    n, table = _parallel_connection_table(a, b, pa, pb)
    return SmallMatroid(n, table, name=name or f"P({a.name},{b.name})")


def make_two_sum(a, b, basepoints=None, name=None):
    """Parallel connection with the basepoint deleted."""
    pa, pb = basepoints if basepoints is not None else (a.n - 1, b.n - 1)
    n, table = _parallel_connection_table(a, b, pa, pb)
    # basepoint is the last element; deletion keeps the low half of the table
    return SmallMatroid(n - 1, table[: 1 << (n - 1)],
                        name=name or f"2-sum({a.name},{b.name})")


_WHIRL_LINES = (0b000111, 0b011100, 0b110001)  # {a1,b1,a2} {a2,b2,a3} {a3,b3,a1}


def make_whirl3():
    """The rank-3 whirl: 6 elements with three 3-point lines in a cycle."""
    table = []
    for s in range(1 << 6):
        size = _popcount(s)
        if size >= 2 and any(s & ~line == 0 for line in _WHIRL_LINES):
            table.append(2)
        else:
            table.append(min(size, 3))
    return SmallMatroid(6, tuple(table), name="W3 [whirl]")


# -- the forbidden catalog ---------------------------------------------


def catalog(kind, q):
    """Forbidden induced restrictions for targets of the given regime."""
    pk = _factor_prime_power(q)
    if pk is None or q > MAX_ORDER:
        raise UnsupportedOrder(f"unsupported field order {q}")
    u23 = make_uniform(2, 3)
    if kind == PROJECTIVE:
        if q == 2:
            claw = make_uniform(3, 3)
            claw = SmallMatroid(3, claw.rank_table, name="U(3,3) [claw]")
            anti = make_direct_sum(u23, make_uniform(1, 1),
                                   name="U(2,3)+U(1,1) [anti-claw]")
            return [claw, anti]
        return [make_uniform(2, j) for j in range(2, q)]
    if kind == AFFINE:
        if q == 2:
            return [make_uniform(4, 4)]
        if q == 3:
            return [
                make_uniform(3, 3),
                make_uniform(3, 4),
                make_direct_sum(u23, make_uniform(1, 1),
                                name="U(2,3)+U(1,1) [anti-claw]"),
                make_two_sum(u23, make_uniform(2, 4)),
                make_parallel_connection(u23, u23),
                make_whirl3(),
            ]
        return [make_uniform(2, j) for j in range(2, q - 1)]
    raise UnsupportedOrder(f"unknown geometry kind {kind!r}")


# -- witness search -----------------------------------------------------


def find_forbidden(c):
    """First catalog matroid induced in the green set, or None.

    Seeds run over green subsets of size up to 4 (every catalog matroid
    has rank at most 4, so a spanning seed of that size reaches it
    inside its own closure), smallest seed first, lexicographic within a
    size.
    """
    g = c.geometry
    members = catalog(g.kind, g.field.q)
    by_size = {}
    for m in members:
        by_size.setdefault(m.n, []).append(m)
    green_sorted = sorted(c.green)
    green_set = c.green
    max_rank = max(m.rank for m in members)
    seen_flats = set()
    for size in range(1, min(4, max_rank) + 1):
        for seed in combinations(green_sorted, size):
            flat = g.closure_mask(g.mask_of(seed))
            if flat in seen_flats:
                continue
            seen_flats.add(flat)
            ground = [i for i in g.indices_of(flat) if i in green_set]
            cands = by_size.get(len(ground))
            if not cands:
                continue
            table = subset_rank_table(g, ground)
            for m in cands:
                if table[-1] == m.rank and rank_tables_isomorphic(
                    len(ground), table, m.rank_table
                ):
                    return ForbiddenWitness(m.name, tuple(ground), g.make_flat(flat))
    return None


def line_profile_forbidden(c):
    """Fast witness scan over lines, valid for projective q >= 3 / affine q >= 4."""
    g = c.geometry
    q = g.field.q
    if g.kind == PROJECTIVE and q >= 3:
        bound = q - 1
    elif g.kind == AFFINE and q >= 4:
        bound = q - 2
    else:
        raise WrongRegime(f"line profiles do not decide {g.kind} with q={q}")
    green_mask = c.green_mask
    for line in g.flats_of_rank(2):
        j = _popcount(line & green_mask)
        if 2 <= j <= bound:
            pts = tuple(i for i in g.indices_of(line) if i in c.green)
            return ForbiddenWitness(f"U(2,{j})", pts, g.make_flat(line))
    return None
