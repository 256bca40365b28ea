import os

import pytest

from flatlands import (
    PROJECTIVE,
    AFFINE,
    Coloring,
    verify_theorem,
    sample_verify,
    has_forbidden,
    find_forbidden,
    find_minimal_non_targets,
    disjoint_hyperplane_scan,
    check_compatibility_direct,
    check_compatibility_conditions,
    enumerate_compatibility_instances,
    CompatibilityInstance,
    BudgetExceeded,
    recognize_target,
    Geometry,
    field_make,
)
from flatlands.coloring import accepts_mask
from conftest import build


def test_verify_pg22_pinned():
    rep = verify_theorem(build(PROJECTIVE, 3, 2))
    assert rep.total_colorings == 128
    assert rep.accepted == 72
    assert rep.forbidden_free == 72
    assert rep.mismatches == ()
    assert rep.ok


def test_verify_ag22_all_accept():
    rep = verify_theorem(build(AFFINE, 3, 2))
    assert rep.total_colorings == 16
    assert rep.accepted == 16          # every 2-coloring of AG(2,2) is a target
    assert rep.forbidden_free == 16    # no rank-4 flat exists to host U(4,4)
    assert rep.ok


def test_budget():
    with pytest.raises(BudgetExceeded):
        verify_theorem(Geometry(AFFINE, 6, field_make(3)))


def test_sweep_engine_agrees_with_reference():
    # dual-route check: the vectorized fast paths must match the honest
    # per-coloring recognizer and catalog search, coloring by coloring
    for kind, r, q in [(PROJECTIVE, 3, 2), (AFFINE, 4, 2), (AFFINE, 3, 3),
                       (PROJECTIVE, 2, 5), (AFFINE, 2, 4)]:
        g = build(kind, r, q)
        for gm in range(1 << g.n):
            c = Coloring(g, frozenset(g.indices_of(gm)))
            assert has_forbidden(g, gm) == (find_forbidden(c) is not None)
            assert accepts_mask(g, gm) == recognize_target(c).accepted


def test_sample_determinism_and_thread_independence():
    g = build(AFFINE, 4, 3)
    a = sample_verify(g, 5000, seed=42)
    b = sample_verify(g, 5000, seed=42, threads=4)
    assert (a.accepted, a.forbidden_free) == (b.accepted, b.forbidden_free)
    assert a.ok and b.ok
    d = sample_verify(g, 5000, seed=42)
    assert (d.accepted, d.forbidden_free) == (a.accepted, a.forbidden_free)


def test_threads_env(monkeypatch):
    g = build(PROJECTIVE, 3, 2)
    monkeypatch.setenv("FLATLANDS_THREADS", "3")
    rep = verify_theorem(g)
    assert rep.accepted == 72 and rep.ok


def test_minimal_non_targets():
    pg = build(PROJECTIVE, 3, 2)
    minimals = find_minimal_non_targets(pg)
    assert minimals  # e.g. the claw colorings
    for c in minimals:
        g = c.geometry
        assert not accepts_mask(g, c.green_mask)
        # both colors have full rank
        assert g.rank_mask(c.green_mask) == g.r
        assert g.rank_mask(g.full_mask & ~c.green_mask) == g.r


def test_minimal_non_targets_vacuous():
    assert find_minimal_non_targets(build(AFFINE, 3, 2)) == []


def test_disjoint_hyperplane_scan():
    assert disjoint_hyperplane_scan(build(AFFINE, 3, 2))  # vacuous
    assert disjoint_hyperplane_scan(build(AFFINE, 4, 2))
    assert disjoint_hyperplane_scan(build(AFFINE, 3, 3))
    with pytest.raises(ValueError):
        disjoint_hyperplane_scan(build(PROJECTIVE, 3, 2))


def test_compatibility_small():
    g = build(PROJECTIVE, 3, 2)
    h = g.make_flat(g.hyperplane_masks()[0])
    seen_true = seen_false = 0
    for inst in enumerate_compatibility_instances(g, h):
        direct = check_compatibility_direct(inst)
        cond = check_compatibility_conditions(inst)
        assert direct == cond
        seen_true += direct
        seen_false += not direct
    assert seen_true and seen_false


def test_compatibility_requires_component_targets():
    from flatlands.coloring import peel

    g = build(PROJECTIVE, 4, 2)
    hmask = g.hyperplane_masks()[0]
    h = g.make_flat(hmask)
    amb = g.full_mask & ~hmask
    aff_pts = g.indices_of(amb)
    # find an affine-side coloring that the deletion-peel rejects
    non_target = None
    for bits in range(1, 1 << len(aff_pts)):
        gm = sum(1 << aff_pts[i] for i in range(len(aff_pts)) if bits & (1 << i))
        ok, _ = peel(g, amb, gm, deleted=hmask)
        if not ok:
            non_target = frozenset(g.indices_of(gm))
            break
    assert non_target is not None
    inst = CompatibilityInstance(g, h, non_target, frozenset())
    with pytest.raises(ValueError):
        check_compatibility_conditions(inst)
