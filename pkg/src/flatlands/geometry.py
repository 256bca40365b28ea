"""Point enumeration, closure and rank machinery for PG(r-1,q) and AG(r-1,q).

Point sets are canonical and deterministic: projective points are the
vectors of GF(q)^r whose first nonzero coordinate is 1, in lexicographic
order; affine points are all vectors of GF(q)^(r-1) in lexicographic
order.  Internally point sets are bit masks (bit i = point i), which is
what makes the exhaustive sweeps in the harness feasible.
"""

import threading
from dataclasses import dataclass, field as dc_field
from itertools import product

from .fields import FiniteField

PROJECTIVE = "PG"
AFFINE = "AG"

POINT_CAP = 1 << 16


class TooLarge(ValueError):
    """The geometry would exceed the point cap."""


class NotHyperplane(ValueError):
    """The given flat is not a hyperplane of the geometry."""


class ParallelFamilies(ValueError):
    """The two partitions do not form a proper grid."""


class Geometry:
    """An enumerated projective or affine geometry over GF(q).

    Immutable after construction; memoized internals (hyperplane lists,
    per-flat hyperplane lists, flat ranks) are guarded by a lock so the
    query operations are safe for concurrent use.
    """

    def __init__(self, kind, r, field):
        if kind not in (PROJECTIVE, AFFINE):
            raise ValueError(f"unknown geometry kind {kind!r}")
        if r < 1:
            raise ValueError("rank must be at least 1")
        q = field.q
        n = (q**r - 1) // (q - 1) if kind == PROJECTIVE else q ** (r - 1)
        if n > POINT_CAP:
            raise TooLarge(f"{kind}({r - 1},{q}) has {n} points, cap is {POINT_CAP}")
        self.kind = kind
        self.r = r
        self.field = field
        dim = r if kind == PROJECTIVE else r - 1
        if kind == PROJECTIVE:
            pts = [v for v in product(range(q), repeat=dim)
                   if any(v) and next(x for x in v if x) == 1]
        else:
            pts = list(product(range(q), repeat=dim))
        self.points = tuple(pts)
        self.n = len(pts)
        assert self.n == n
        self.index = {v: i for i, v in enumerate(pts)}
        self.full_mask = (1 << n) - 1
        self._lock = threading.Lock()
        self._hyp_masks = None
        self._hyp_funcs = None          # mask -> functional, affine only
        self._flat_hyps = {}            # flat mask -> tuple of sub-hyperplane masks
        self._flat_ranks = {0: 0, self.full_mask: r}
        self._flats_by_rank = {}
        self._quotients = {}

    # -- basics ---------------------------------------------------------

    def __repr__(self):
        return f"{self.kind}({self.r - 1},{self.field.q})"

    def homvec(self, i):
        """Homogeneous coordinates of point i (affine points get a leading 1)."""
        v = self.points[i]
        return v if self.kind == PROJECTIVE else (1,) + v

    def mask_of(self, indices):
        m = 0
        for i in indices:
            if not 0 <= i < self.n:
                raise IndexError(f"point index {i} out of range for {self}")
            m |= 1 << i
        return m

    def indices_of(self, mask):
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return tuple(out)

    # -- rank and closure ----------------------------------------------

    def rank_mask(self, mask):
        f = self.field
        basis = []
        rank = 0
        for i in self.indices_of(mask):
            v = list(self.homvec(i))
            for pivot, b in basis:
                c = v[pivot]
                if c:
                    v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, b)]
            for j, x in enumerate(v):
                if x:
                    inv = f.inv(x)
                    basis.append((j, [f.mul(inv, y) for y in v]))
                    rank += 1
                    break
        return rank

    def flat_rank(self, mask):
        """Rank of a (known) flat, memoized."""
        rk = self._flat_ranks.get(mask)
        if rk is None:
            rk = self.rank_mask(mask)
            with self._lock:
                self._flat_ranks[mask] = rk
        return rk

    def hyperplane_masks(self):
        if self._hyp_masks is None:
            self._build_hyperplanes()
        return self._hyp_masks

    def _build_hyperplanes(self):
        if self.r < 2:
            raise ValueError("hyperplanes need rank >= 2")
        f = self.field
        q = f.q
        masks = []
        funcs = {}
        dim = self.r if self.kind == PROJECTIVE else self.r - 1
        normals = [a for a in product(range(q), repeat=dim)
                   if any(a) and next(x for x in a if x) == 1]
        if self.kind == PROJECTIVE:
            for a in normals:
                m = 0
                for i, v in enumerate(self.points):
                    s = 0
                    for aj, vj in zip(a, v):
                        s = f.add(s, f.mul(aj, vj))
                    if s == 0:
                        m |= 1 << i
                masks.append(m)
        else:
            for a in normals:
                dots = []
                for v in self.points:
                    s = 0
                    for aj, vj in zip(a, v):
                        s = f.add(s, f.mul(aj, vj))
                    dots.append(s)
                for c in range(q):
                    m = 0
                    for i, s in enumerate(dots):
                        if s == c:
                            m |= 1 << i
                    masks.append(m)
                    funcs[m] = (a, c)
        with self._lock:
            if self._hyp_masks is None:
                for m in masks:
                    self._flat_ranks[m] = self.r - 1
                self._hyp_funcs = funcs
                self._hyp_masks = tuple(masks)

    def flat_hyperplanes(self, flat_mask):
        """Masks of the rank-(rho-1) flats inside a rank-rho flat."""
        cached = self._flat_hyps.get(flat_mask)
        if cached is not None:
            return cached
        if flat_mask == 0:
            subs = ()
        elif flat_mask == self.full_mask and self.r >= 2:
            subs = self.hyperplane_masks()
        elif self.flat_rank(flat_mask) <= 1:
            subs = (0,)
        else:
            rho = self.flat_rank(flat_mask)
            seen = set()
            for h in self.hyperplane_masks():
                cut = flat_mask & h
                if cut != flat_mask and cut:
                    seen.add(cut)
            subs = tuple(sorted(seen))
            with self._lock:
                for s in subs:
                    self._flat_ranks.setdefault(s, rho - 1)
        with self._lock:
            self._flat_hyps[flat_mask] = subs
        return subs

    def closure_mask(self, mask, within=None):
        """Smallest flat containing `mask`, optionally inside the flat `within`."""
        if mask == 0:
            return 0
        amb = self.full_mask if within is None else within
        cl = amb
        for h in self.flat_hyperplanes(amb):
            if mask & ~h == 0:
                cl &= h
        return cl

    def flats_of_rank(self, k):
        """All flats of the given rank, as a sorted tuple of masks."""
        if not 0 <= k <= self.r:
            return ()
        cached = self._flats_by_rank.get(k)
        if cached is not None:
            return cached
        if k == 0:
            out = (0,)
        elif k == self.r:
            out = (self.full_mask,)
        elif k == 1:
            out = tuple(1 << i for i in range(self.n))
        elif k == self.r - 1:
            out = tuple(sorted(self.hyperplane_masks()))
        else:
            below = self.flats_of_rank(k - 1)
            seen = set()
            for fm in below:
                rest = self.full_mask & ~fm
                for i in self.indices_of(rest):
                    seen.add(self.closure_mask(fm | (1 << i)))
            out = tuple(sorted(seen))
        with self._lock:
            for m in out:
                self._flat_ranks.setdefault(m, k)
            self._flats_by_rank[k] = out
        return out

    def all_flat_masks(self, max_rank=None):
        top = self.r if max_rank is None else max_rank
        out = []
        for k in range(top + 1):
            out.extend(self.flats_of_rank(k))
        return out

    def make_flat(self, mask):
        return Flat(self, frozenset(self.indices_of(mask)), self.flat_rank(mask))


@dataclass(frozen=True)
class Flat:
    """A closed point set of a geometry, with cached rank."""

    geometry: Geometry = dc_field(compare=False)
    members: frozenset = dc_field()
    rank: int = dc_field()

    @property
    def mask(self):
        return self.geometry.mask_of(self.members)


@dataclass(frozen=True)
class PartitionGrid:
    """Two crossing parallel hyperplane families and their q x q cell grid."""

    geometry: Geometry = dc_field(compare=False)
    x_family: tuple = dc_field()
    y_family: tuple = dc_field()
    cells: tuple = dc_field()  # cells[i][j] = X_i intersect Y_j


@dataclass(frozen=True)
class Embedding:
    """AG(r-1,q) sitting inside PG(r-1,q) as the complement of a hyperplane."""

    affine: Geometry = dc_field(compare=False)
    projective: Geometry = dc_field(compare=False)
    point_map: tuple = dc_field()
    complement: Flat = dc_field()


# -- module-level operations -------------------------------------------


def build_geometry(kind, r, field):
    return Geometry(kind, r, field)


def closure(g, points):
    m = g.mask_of(points)
    cm = g.closure_mask(m)
    return g.make_flat(cm)


def rank_of(g, points):
    return g.rank_mask(g.mask_of(points))


def hyperplanes(g):
    return [g.make_flat(m) for m in g.hyperplane_masks()]


def ag_parallel_partition(g, h):
    """The q disjoint hyperplanes parallel to h (h itself first)."""
    if g.kind != AFFINE:
        raise NotHyperplane("parallel partitions exist only in affine geometries")
    g.hyperplane_masks()
    hm = h.mask if isinstance(h, Flat) else h
    func = g._hyp_funcs.get(hm)
    if func is None:
        raise NotHyperplane("flat is not a hyperplane of this geometry")
    a, c = func
    out = [g.make_flat(hm)]
    for m, (a2, c2) in g._hyp_funcs.items():
        if a2 == a and c2 != c:
            out.append(g.make_flat(m))
    return out


def grid_make(g, x_family, y_family):
    q = g.field.q
    xm = [f.mask for f in x_family]
    ym = [f.mask for f in y_family]
    if len(xm) != q or len(ym) != q:
        raise ParallelFamilies("each family must contain q hyperplanes")
    if set(xm) == set(ym):
        raise ParallelFamilies("families coincide")
    if all(x & y == 0 for x in xm for y in ym):
        raise ParallelFamilies("families are parallel, all cells empty")
    cells = tuple(
        tuple(g.make_flat(x & y) for y in ym) for x in xm
    )
    return PartitionGrid(g, tuple(x_family), tuple(y_family), cells)


def embed_affine(g):
    """Embed an affine geometry in the projective geometry of the same rank."""
    if g.kind != AFFINE or g.r < 2:
        raise ValueError("embedding needs an affine geometry of rank >= 2")
    pg = Geometry(PROJECTIVE, g.r, g.field)
    point_map = tuple(pg.index[(1,) + v] for v in g.points)
    image = pg.mask_of(point_map)
    comp = pg.full_mask & ~image
    return Embedding(g, pg, point_map, pg.make_flat(comp))


def quotient_by_point(g, e):
    """Contract point e of a projective geometry and simplify.

    Returns (PG(r-2,q), class_map) where class_map sends each point
    x != e to the quotient point standing for the line through e and x.
    """
    if g.kind != PROJECTIVE or g.r < 2:
        raise ValueError("quotients are defined for projective geometries of rank >= 2")
    cached = g._quotients.get(e)
    if cached is not None:
        return cached
    f = g.field
    ve = g.points[e]
    j = next(i for i, x in enumerate(ve) if x)  # pivot, ve[j] == 1
    qg = Geometry(PROJECTIVE, g.r - 1, f)
    class_map = {}
    for x in range(g.n):
        if x == e:
            continue
        w = list(g.points[x])
        c = w[j]
        if c:
            w = [f.sub(wi, f.mul(c, vi)) for wi, vi in zip(w, ve)]
        del w[j]
        lead = next(wi for wi in w if wi)
        if lead != 1:
            inv = f.inv(lead)
            w = [f.mul(inv, wi) for wi in w]
        class_map[x] = qg.index[tuple(w)]
    with g._lock:
        g._quotients[e] = (qg, class_map)
    return qg, class_map
