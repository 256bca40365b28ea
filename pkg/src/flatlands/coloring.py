"""Green/red colorings, targets from nested flat sequences, and recognition.

A coloring is a geometry plus its green point set (red is the
complement).  A target is a coloring whose green set is the union of
F_{i+1} - F_i over even i for some nested sequence of flats
F_0 = empty <= F_1 <= ... <= F_k = E.  The recognizer peels flats
greedily from the outside and either produces a canonical defining
sequence or a stuck flat in which both colors are spanning.
"""

from dataclasses import dataclass, field as dc_field

from .geometry import Geometry, Flat

GREEN = "Green"
RED = "Red"
HALF_HALF = "HalfHalf"
MIXED = "Mixed"


class NotAFlat(ValueError):
    """A sequence entry is not closed."""


class NotNested(ValueError):
    """The sequence is not an increasing chain from empty to E."""


class RedContraction(ValueError):
    """Contraction is only defined for green points."""


class TooLargeForOracle(ValueError):
    """The green flat exceeds the 8-element small-matroid cap."""


@dataclass(frozen=True)
class Coloring:
    geometry: Geometry = dc_field(compare=False)
    green: frozenset = dc_field()

    def __post_init__(self):
        if any(not 0 <= i < self.geometry.n for i in self.green):
            raise IndexError("green point index out of range")

    @property
    def green_mask(self):
        return self.geometry.mask_of(self.green)

    @property
    def red(self):
        return frozenset(range(self.geometry.n)) - self.green

    def complement(self):
        return Coloring(self.geometry, self.red)


@dataclass(frozen=True)
class NestedSequence:
    geometry: Geometry = dc_field(compare=False)
    flats: tuple = dc_field()  # tuple of frozensets, ascending


@dataclass(frozen=True)
class TargetDecision:
    accepted: bool
    sequence: NestedSequence | None = None
    stuck_flat: Flat | None = None


# -- the greedy peel on masks (shared with the harness) -----------------


def peel(g, ambient, green, deleted=0):
    """Greedy peel of the coloring `green` inside the flat `ambient`.

    Returns (True, chain) with the descending list of visited flats when
    the peel bottoms out, or (False, stuck_mask) when it gets stuck in a
    flat spanned by both colors.  Ties (both closures proper, possible
    only for complementary monochromatic binary-affine hyperplanes) peel
    to the red closure so the green shell sits outermost.

    With a nonzero `deleted` mask the peel runs in the deletion of those
    points, whose flats are exactly the ambient flats minus the deleted
    set; this is how an affine piece of a projective geometry is peeled
    in place.
    """
    f = ambient
    chain = [f]
    while True:
        gf = f & green
        rf = f & ~gf
        if f == 0 or gf == 0 or rf == 0:
            return True, chain
        if deleted:
            to_red = g.closure_mask(rf) & ~deleted
        else:
            to_red = g.closure_mask(rf, within=f)
        if to_red != f:
            f = to_red
        else:
            if deleted:
                to_green = g.closure_mask(gf) & ~deleted
            else:
                to_green = g.closure_mask(gf, within=f)
            if to_green == f:
                return False, f
            f = to_green
        chain.append(f)


def accepts_mask(g, green_mask, ambient=None):
    """True iff the peel succeeds on the (restricted) coloring."""
    amb = g.full_mask if ambient is None else ambient
    ok, _ = peel(g, amb, green_mask)
    return ok


def _sequence_from_chain(g, chain, green):
    asc = [m for m in reversed(chain)]
    if asc[0] != 0:
        asc.insert(0, 0)
    first = asc[1] & ~asc[0]
    if first and not (first & green):
        asc.insert(0, 0)
    return NestedSequence(g, tuple(frozenset(g.indices_of(m)) for m in asc))


# -- operations ---------------------------------------------------------


def _flat_masks(seq):
    g = seq.geometry
    return [g.mask_of(f) for f in seq.flats]


def _validate_sequence(seq):
    g = seq.geometry
    masks = _flat_masks(seq)
    if not masks or masks[0] != 0 or masks[-1] != g.full_mask:
        raise NotNested("sequence must run from the empty set to all points")
    prev = 0
    for m in masks:
        if prev & ~m:
            raise NotNested("flats are not nested")
        prev = m
    for m in masks:
        if g.closure_mask(m) != m:
            raise NotAFlat("sequence entry is not a flat")
    return masks


def target_from_sequence(seq):
    """Color the union of F_{i+1} - F_i for even i green."""
    g = seq.geometry
    masks = _validate_sequence(seq)
    green = 0
    for i in range(0, len(masks) - 1, 2):
        green |= masks[i + 1] & ~masks[i]
    return Coloring(g, frozenset(g.indices_of(green)))


def canonicalize(seq):
    """Merge repeated flats and same-colored shells; fix parity with F_1 = empty.

    Preserves the coloring: target_from_sequence(canonicalize(s)) equals
    target_from_sequence(s).
    """
    g = seq.geometry
    masks = _validate_sequence(seq)
    shells = []  # (upper flat mask, is_green) per nonempty difference
    for i in range(len(masks) - 1):
        diff = masks[i + 1] & ~masks[i]
        if diff:
            shells.append([masks[i + 1], i % 2 == 0])
    merged = []
    for upper, color in shells:
        if merged and merged[-1][1] == color:
            merged[-1][0] = upper
        else:
            merged.append([upper, color])
    flats = [0] + [upper for upper, _ in merged]
    if merged and not merged[0][1]:
        flats.insert(0, 0)
    return NestedSequence(g, tuple(frozenset(g.indices_of(m)) for m in flats))


def recognize_target(c):
    g = c.geometry
    green = c.green_mask
    ok, result = peel(g, g.full_mask, green)
    if ok:
        return TargetDecision(True, sequence=_sequence_from_chain(g, result, green))
    return TargetDecision(False, stuck_flat=g.make_flat(result))


def verify_sequence(c, seq):
    """True iff seq is a valid nested flat sequence replaying exactly to c."""
    if seq.geometry is not c.geometry:
        return False
    try:
        replay = target_from_sequence(seq)
    except (NotAFlat, NotNested):
        return False
    return replay.green == c.green


def induced_restriction(c, points):
    """Rank oracle on the green trace of the closure of `points`.

    The flats of the green matroid are the sets G intersect cl(X); this
    is the induced-restriction witness machinery for the catalog.
    """
    from .catalog import SmallMatroid, subset_rank_table

    g = c.geometry
    if not set(points) <= c.green:
        raise ValueError("seed points must be green")
    flat = g.closure_mask(g.mask_of(points))
    ground = sorted(c.green & set(g.indices_of(flat)))
    if len(ground) > 8:
        raise TooLargeForOracle(f"green flat has {len(ground)} elements")
    return SmallMatroid(len(ground), subset_rank_table(g, ground))


def contract_point(c, e):
    """Contract a green point of a projective coloring and simplify.

    A quotient point is green iff its parallel class contains at least
    one green point other than e.
    """
    from .geometry import quotient_by_point

    g = c.geometry
    if e not in c.green:
        raise RedContraction(f"point {e} is red; contract via complement-conjugation")
    qg, class_map = quotient_by_point(g, e)
    qgreen = {class_map[x] for x in c.green if x != e}
    return Coloring(qg, frozenset(qgreen))


def flat_color(c, flat):
    """Classify a flat as Green, Red, HalfHalf, or Mixed.

    HalfHalf (both color ranks one below full, both traces flats) is the
    binary-affine case; targets over other regimes only ever see Green
    or Red on nonempty flats.
    """
    g = c.geometry
    fm = flat.mask if isinstance(flat, Flat) else flat
    rf = g.flat_rank(fm)
    gm = fm & c.green_mask
    rm = fm & ~gm
    rg = g.rank_mask(gm)
    rr = g.rank_mask(rm)
    if rg == rf and rr < rf:
        return GREEN
    if rr == rf and rg < rf:
        return RED
    if rg == rr == rf - 1 and g.closure_mask(gm) == gm and g.closure_mask(rm) == rm:
        return HALF_HALF
    return MIXED
