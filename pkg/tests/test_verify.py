import pytest

from lattice_tiling.errors import Infeasible, PreconditionError
from lattice_tiling.grids import tile_rectangle
from lattice_tiling.pipeline import AlmostPartition, almost_partition_into_grid, plan_pipeline
from lattice_tiling.posets import BooleanLattice, GridPoset, chain, diamond
from lattice_tiling.tiling import Tiling
from lattice_tiling.verify import (
    Report,
    exact_cover_tiling_search,
    verify_implicit_sampled,
    verify_tiling_exhaustive,
)


def good():
    return tile_rectangle(2, 2, 13)


def failed(tiling):
    return {k for k, ok in verify_tiling_exhaustive(tiling.host, tiling, tiling.target).checks.items() if not ok}


def test_good_tiling_passes():
    assert not failed(good())


def test_drop_tile_breaks_coverage():
    t = good()
    del t.tiles[0]
    assert failed(t) == {"coverage"}


def test_duplicate_element_breaks_disjointness():
    t = good()
    t.tiles[1] = (t.tiles[0][0],) + t.tiles[1][1:]
    assert "disjointness" in failed(t)


def test_shifted_tile_breaks_shape():
    t = good()
    a, b = t.tiles[0], t.tiles[12]
    t.tiles[0], t.tiles[12] = (b[0],) + a[1:], (a[0],) + b[1:]
    assert failed(t) == {"isomorphism"}


def test_leftover_overlap():
    t = good()
    t.leftover = frozenset([t.tiles[0][0]])
    assert "disjointness" in failed(t)


def test_foreign_element_is_precondition():
    t = good()
    t.tiles[0] = ((99, 99),) + t.tiles[0][1:]
    with pytest.raises(PreconditionError):
        failed(t)


def test_empty_tiling_of_empty_leftover():
    host = GridPoset((2, 2))
    t = Tiling(host, GridPoset((2, 2)), {}, frozenset(host.labels()))
    rep = verify_tiling_exhaustive(host, t, t.target)
    assert rep.passed and rep.tiles == 0 and rep.leftover == 4


def test_report_round_trip():
    t = good()
    del t.tiles[3]
    rep = verify_tiling_exhaustive(t.host, t, t.target)
    back = Report.from_text(rep.to_text())
    assert back.passed is False and back.tiles == rep.tiles and back.violations == rep.violations


def test_exact_cover_examples():
    assert len(exact_cover_tiling_search(BooleanLattice(2), diamond()).tiles) == 1
    t = exact_cover_tiling_search(GridPoset((6,)), chain(2))
    assert len(t.tiles) == 3
    t = exact_cover_tiling_search(BooleanLattice(4), chain(2))
    assert len(t.tiles) == 8 and not failed(t)
    with pytest.raises(Infeasible):
        exact_cover_tiling_search(GridPoset((3, 3)), chain(3), leftover=0, rows=[((1, 1), (1, 2), (1, 3))])
    with pytest.raises(PreconditionError):
        exact_cover_tiling_search(GridPoset((2, 2)), chain(2), rows=[((1, 2), (2, 1))])


class Planted(AlmostPartition):
    """Misreports positions inside one tile id in every ``modulus``."""

    def __init__(self, base, modulus):
        super().__init__(base.config, base.factor_partitions, base.target, base.refinement)
        self.modulus = modulus

    def locate(self, x):
        loc = super().locate(x)
        if loc is not None and loc[0] % self.modulus == 0:
            tid, pos = loc
            return tid, (pos + 1) % self.target.size
        return loc


def test_sampled_verifier_catches_planted_fault():
    ap = almost_partition_into_grid(plan_pipeline(32, (2, 2), "compact"))
    assert verify_implicit_sampled(ap, 3000, seed=2).passed
    rep = verify_implicit_sampled(Planted(ap, 1000), 20000, seed=2)
    assert not rep.passed and 0 < rep.stats["inconsistencies"] < 100


def test_sampled_verifier_catches_wrong_leftover():
    ap = almost_partition_into_grid(plan_pipeline(9, (3,), "compact"))
    assert len(ap.leftover_S) == 2
    ap.__dict__["leftover_S"] = frozenset()
    rep = verify_implicit_sampled(ap, 4000, seed=0)
    assert not rep.passed
