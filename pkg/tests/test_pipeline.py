import random

import pytest

from lattice_tiling.errors import BudgetExceeded, Infeasible, PreconditionError, Unsupported
from lattice_tiling.pipeline import (
    almost_partition_into_grid,
    almost_partition_into_poset,
    find_refinement,
    plan_pipeline,
    split_parts,
    theoretical_bounds,
    verify_almost_partition,
)
from lattice_tiling.posets import BooleanLattice, FinitePoset, GridPoset, chain, is_copy
from lattice_tiling.verify import exact_cover_tiling_search, verify_implicit_sampled

HOST32 = BooleanLattice(32)


def test_split_parts():
    assert split_parts(9, 1) == (9,)
    assert split_parts(32, 2) == (16, 16)
    assert split_parts(11, 3) == (5, 3, 3)


def test_plan_examples():
    assert plan_pipeline(9, (3,), "precise").h == 6
    assert plan_pipeline(9, (4,), "precise").h == 8
    cfg = plan_pipeline(32, (2, 2), "precise")
    assert cfg.h == 16 and cfg.m_parts == (16, 16)
    with pytest.raises(Infeasible):
        plan_pipeline(16, (2, 2), "strict")
    with pytest.raises(BudgetExceeded):
        plan_pipeline(60, (2, 2), "compact")
    with pytest.raises(PreconditionError):
        plan_pipeline(1, (2, 2), "compact")


def test_compact_plans():
    assert plan_pipeline(9, (3,), "compact").h == 3
    assert plan_pipeline(9, (4,), "compact").h == 4
    assert plan_pipeline(32, (2, 2), "compact").h == 4
    with pytest.raises(Infeasible):
        plan_pipeline(14, (2, 2), "compact")


@pytest.mark.parametrize("dims,leftover", [((3,), 2), ((4,), 0), ((2,), 0)])
def test_explicit_n9(dims, leftover):
    ap = almost_partition_into_grid(plan_pipeline(9, dims, "compact"))
    rep = verify_almost_partition(ap)
    assert rep.passed, rep.violations[:3]
    assert len(ap.leftover_S) == leftover
    assert len(ap.leftover_S) <= ap.config.leftover_bound


def test_explicit_two_dimensional():
    ap = almost_partition_into_grid(plan_pipeline(18, (2, 2), "compact"))
    assert ap.config.m_parts == (9, 9)
    rep = verify_almost_partition(ap)
    assert rep.passed and len(ap.leftover_S) <= ap.config.leftover_bound


def test_locate_agrees_with_materialized():
    ap = almost_partition_into_grid(plan_pipeline(10, (3,), "compact"))
    tiling = ap.to_tiling()
    owners = tiling.owner_map()
    for x in range(1 << 10):
        loc = ap.locate(x)
        if loc is None:
            assert x in ap.leftover_S
        else:
            assert owners[x] == loc


def test_implicit_n32_round_trip():
    ap = almost_partition_into_grid(plan_pipeline(32, (2, 2), "compact"))
    rep = verify_implicit_sampled(ap, 2000, seed=5)
    assert rep.passed and rep.stats["inconsistencies"] == 0
    rng = random.Random(0)
    for _ in range(200):
        x = rng.getrandbits(32)
        tid, pos = ap.locate(x)
        members = ap.materialize_tile(tid)
        assert members[pos] == x and is_copy(members, HOST32, GridPoset((2, 2)))
        assert {ap.block_of(y) for y in members} == {ap.block_of(x)}


def test_unknown_tile_id():
    ap = almost_partition_into_grid(plan_pipeline(9, (4,), "compact"))
    with pytest.raises(PreconditionError):
        ap.materialize_tile(10**9)
    with pytest.raises(PreconditionError):
        ap.materialize_tile(-1)


def test_precise_n9_is_width_infeasible():
    with pytest.raises(Infeasible) as err:
        almost_partition_into_grid(plan_pipeline(9, (3,), "precise"))
    assert err.value.certificate == "width" and "factor 0" in str(err.value)


def test_refinement_by_supplied_tiling():
    grid_tiling = exact_cover_tiling_search(GridPoset((4,)), chain(2))
    ap = almost_partition_into_poset(9, chain(2), grid_tiling)
    assert ap.refinement is not None and ap.config.target_dims == (4,)
    assert verify_almost_partition(ap).passed
    assert verify_implicit_sampled(ap, 500, seed=1).passed


def test_refinement_rejects_bad_tiling():
    grid_tiling = exact_cover_tiling_search(GridPoset((4,)), chain(2))
    grid_tiling.tiles[0] = ((1,), (3,))
    with pytest.raises(PreconditionError):
        almost_partition_into_poset(9, chain(2), grid_tiling)


def test_grid_target_skips_refinement():
    ap = almost_partition_into_poset(9, chain(4))
    assert ap.refinement is None and verify_almost_partition(ap).passed


def test_poset_without_unique_extremes():
    v_cap = FinitePoset.from_covers(3, [(0, 2), (1, 2)], name="v")
    with pytest.raises(PreconditionError):
        almost_partition_into_poset(9, v_cap)


def test_refinement_search_capability_gap():
    crown = FinitePoset.from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], name="crown")
    with pytest.raises(Unsupported):
        find_refinement(crown, max_host=100)


def test_bounds():
    assert theoretical_bounds(4, 2).grid_leftover == 147456
    assert theoretical_bounds(1, 1).grid_leftover == 24
    assert theoretical_bounds(2, 1, 10).c_P == 1024
    big = theoretical_bounds(7, 3, 400)
    assert big.c_P == max(2**400, 24**3 * 14**18)
