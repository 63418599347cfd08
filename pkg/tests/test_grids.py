import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lattice_tiling.errors import PreconditionError
from lattice_tiling.grids import (
    DivisibilityError,
    plan_grid,
    rect_params,
    rect_tile_lookup,
    rect_tiles,
    tile_grid,
    tile_grid_first_even,
    tile_rectangle,
)
from lattice_tiling.posets import GridPoset
from lattice_tiling.svg import tiling_svg
from lattice_tiling.verify import exact_cover_tiling_search, verify_tiling_exhaustive


def check(tiling):
    rep = verify_tiling_exhaustive(tiling.host, tiling, tiling.target)
    assert rep.passed, rep.violations[:3]
    return rep


def test_divisible_rectangle():
    t = tile_rectangle(2, 2, 12)
    assert check(t).tiles == 12


@pytest.mark.parametrize("a,b,c", [(2, 2, 13), (2, 3, 17)])
def test_remainder_rectangles(a, b, c):
    p = rect_params(a, b, c)
    assert p.r == 1 and p.epsilon == 1
    t = tile_rectangle(a, b, c)
    assert check(t).tiles == c and not t.leftover


def test_rectangle_tile_families():
    p = rect_params(2, 2, 13)
    tiles = rect_tiles(p)
    # ids: 6 A tiles, 6 B tiles, 1 patch chain
    assert sorted(tiles) == list(range(13))
    assert p.q == 6


def test_rectangle_preconditions():
    with pytest.raises(PreconditionError, match="even"):
        tile_rectangle(3, 2, 30)
    with pytest.raises(PreconditionError, match="a\\^2 b"):
        tile_rectangle(2, 2, 11)
    # precise mode only needs q >= b r + eps
    check(tile_rectangle(2, 2, 7, mode="precise"))
    with pytest.raises(PreconditionError, match="q >= b r"):
        tile_rectangle(2, 2, 5, mode="precise")


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 4, 6]), st.integers(1, 3), st.integers(1, 80), st.sampled_from(["strict", "precise"]))
def test_rectangle_property(a, b, c, mode):
    try:
        p = rect_params(a, b, c, mode)
    except PreconditionError:
        assume(False)
    t = tile_rectangle(a, b, c, mode)
    check(t)
    assert len(t.tiles) == c
    for x, owner in t.owner_map().items():
        assert rect_tile_lookup(x, p) == owner


@pytest.mark.parametrize(
    "sides,dims",
    [((12, 16), (2, 2)), ((16, 12), (2, 2)), ((4, 13), (2, 2)), ((12, 12, 12), (3, 1, 1)), ((18, 24), (3, 3)), ((18, 31), (3, 3)), ((30,), (5,))],
)
def test_grid_tilings_and_lookup(sides, dims):
    plan = plan_grid(sides, dims)
    t = plan.tiling()
    check(t)
    assert len(t.tiles) == plan.n_tiles
    for x, owner in t.owner_map().items():
        assert plan.lookup(x) == owner


def test_odd_first_side_doubles():
    plan = plan_grid((6, 24), (3, 1))
    assert plan.doubled and plan.slab == 6
    check(plan.tiling())


def test_strict_mode():
    with pytest.raises(DivisibilityError):
        plan_grid((12, 12), (2, 2), "strict")
    with pytest.raises(PreconditionError, match="12\\|P\\|\\^2"):
        plan_grid((48, 48), (2, 2), "strict")
    check(tile_grid((192, 200), (2, 2), "strict"))


def test_failing_dimension_reported():
    with pytest.raises(PreconditionError, match="side 1"):
        plan_grid((24, 7), (3, 2))


def test_first_even_layer():
    t = tile_grid_first_even((2, 2), (13,))
    assert t.host.dims == (4, 13)
    check(t)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=2, max_size=3), st.data())
def test_grid_property(dims, data):
    size = 1
    for a in dims:
        size *= a
    slab = size if dims[0] % 2 == 0 else 2 * size
    others = [data.draw(st.integers(1, 30)) for _ in dims[1:]]
    sides = tuple([slab * data.draw(st.integers(1, 2))] + others)
    try:
        plan = plan_grid(sides, dims)
    except PreconditionError:
        assume(False)
    t = plan.tiling()
    check(t)
    owners = t.owner_map()
    for x in list(owners)[:200]:
        assert plan.lookup(x) == owners[x]


@pytest.mark.parametrize("sides,dims", [((4, 13), (2, 2)), ((4, 6), (2, 2)), ((6, 4), (2, 3))])
def test_exact_cover_agrees(sides, dims):
    host, target = GridPoset(sides), GridPoset(dims)
    check(exact_cover_tiling_search(host, target))
    check(plan_grid(sides, dims).tiling())


def test_svg_output():
    svg = tiling_svg(tile_rectangle(2, 2, 13))
    assert svg.count("<rect") == 52
    assert 'width="20"' in svg and 'stroke="#000000"' in svg
    with pytest.raises(PreconditionError):
        tiling_svg(tile_grid((8, 8, 8), (2, 2, 2)))
