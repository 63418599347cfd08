"""Explicit tilings of grids by copies of a smaller grid.

Three layers, each available as a materialized :class:`Tiling` and as a
constant-time point lookup ``coord -> (tile_id, position)``:

* :func:`tile_rectangle` -- ``[ab] x [c]`` into copies of ``[a] x [b]``;
* :func:`tile_grid_first_even` -- ``[F] x [c_1] x ... x [c_{d-1}]`` into copies
  of ``P = [a_1] x ... x [a_d]`` by merging the first two sides of ``P`` and
  recursing on the dimension;
* :func:`tile_grid` -- any grid with one side divisible by the slab width,
  cut into slabs and handed to the previous layer.

Positions index the target grid row-major, so ``tiles[t][k]`` is the image
of target element ``k``.  Coordinates are 1-based throughout.

Tile ids
--------
Rectangle, remainder ``r = 0``: block ``(i, j)`` in ``[a] x [q]`` gets
``(i-1) q + (j-1)``.  Remainder ``r > 0``: ``A_{i,j}`` gets ``(i-1) q + (j-1)``,
``B_{i,j}`` gets ``(a/2) q + (i-1) q + (j-1)`` and the patch chain ``C_k``
gets ``a q + k - 1``.  Grid tilings compose as ``outer * c + rect_id``, a
doubled target appends ``* 2 + half``, and slabs prefix ``slab * per_slab``.

Modes
-----
``strict`` enforces the sufficient bounds ``c >= a^2 b + 2a`` for rectangles
and ``c_i >= 12 |P|^2`` for grids, always doubling the first side of ``P``.
``precise`` enforces only what each step uses: a rectangle needs ``a | c`` or
``q >= b r + eps``; no doubling when ``a_1`` is already even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import PreconditionError
from .posets import GridPoset
from .tiling import Tiling

MODES = ("strict", "precise")


class DivisibilityError(PreconditionError):
    """No side of the host is divisible by the required slab width."""


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}, got {mode!r}")


# --------------------------------------------------------------------------
# rectangles


@dataclass(frozen=True)
class RectParams:
    """Sides of ``[ab] x [c]`` and the derived ``c = a q + r``."""

    a: int
    b: int
    c: int

    @property
    def q(self) -> int:
        return self.c // self.a

    @property
    def r(self) -> int:
        return self.c % self.a

    @property
    def epsilon(self) -> int | None:
        if self.r == 0:
            return None
        return 1 if self.r == 1 else 2

    @property
    def width(self) -> int:
        return self.a * self.b

    @property
    def n_tiles(self) -> int:
        return self.c


def rect_params(a: int, b: int, c: int, mode: str = "strict") -> RectParams:
    """Validate the sides of a rectangle tiling and return its parameters."""
    _check_mode(mode)
    if min(a, b, c) < 1:
        raise PreconditionError(f"sides must be positive, got a={a}, b={b}, c={c}")
    if a % 2:
        raise PreconditionError(f"a must be even, got a={a}")
    p = RectParams(a, b, c)
    if p.r == 0:
        return p
    if mode == "strict":
        if c < a * a * b + 2 * a:
            raise PreconditionError(f"c >= a^2 b + 2a fails: c={c} < {a * a * b + 2 * a} (a={a}, b={b})")
    elif p.q < b * p.r + p.epsilon:
        raise PreconditionError(f"q >= b r + eps fails: q={p.q} < {b * p.r + p.epsilon} (a={a}, b={b}, c={c})")
    return p


def _a_tile(p: RectParams, i: int, j: int) -> list[tuple[int, int]]:
    a, b, r = p.a, p.b, p.r
    return [(b * (i - 1) + v, r + a * (j - 1) + u) for u in range(1, a + 1) for v in range(1, b + 1)]


def _b_tile(p: RectParams, i: int, j: int) -> list[tuple[int, int]]:
    a, b = p.a, p.b
    return [(a * b // 2 + b * (i - 1) + v, a * (j - 1) + u) for u in range(1, a + 1) for v in range(1, b + 1)]


def _x(p: RectParams, i: int, j: int) -> tuple[int, int]:
    """Maximum of ``A_{i,j}``."""
    return (p.b * i, p.r + p.a * j)


def _y(p: RectParams, i: int, j: int) -> tuple[int, int]:
    """Minimum of ``B_{i,j+eps}``."""
    return (p.a * p.b // 2 + p.b * (i - 1) + 1, p.a * (j + p.epsilon - 1) + 1)


def _switch_index(p: RectParams, i: int, j: int) -> int:
    return (i - 1) * p.b * p.r + (j - 1)


def _phi(p: RectParams, i: int, j: int) -> tuple[int, int]:
    """Row-major bijection ``[a/2] x [br] -> T = [ab/2+1, ab] x [aq+1, c]``."""
    t = _switch_index(p, i, j)
    return (p.a * p.b // 2 + 1 + t // p.r, p.a * p.q + 1 + t % p.r)


def _psi(p: RectParams, i: int, j: int) -> tuple[int, int]:
    """Row-major bijection ``[a/2] x [br] -> S = [ab/2] x [r]``."""
    t = _switch_index(p, i, j)
    return (1 + t // p.r, 1 + t % p.r)


def _patch_chain(p: RectParams, k: int) -> list[tuple[int, int]]:
    half = p.a // 2
    out = []
    for u in range(1, p.a + 1):
        for v in range(1, p.b + 1):
            jj = p.b * (k - 1) + v
            out.append(_x(p, u, jj) if u <= half else _y(p, u - half, jj))
    return out


def rect_tiles(p: RectParams) -> dict[int, tuple]:
    """Materialize the rectangle construction, tiles listed in target order."""
    a, q, r = p.a, p.q, p.r
    tiles: dict[int, tuple] = {}
    if r == 0:
        for i in range(1, a + 1):
            for j in range(1, q + 1):
                tiles[(i - 1) * q + (j - 1)] = tuple(_a_tile(p, i, j))
        return tiles
    half, eps, br = a // 2, p.epsilon, p.b * r
    top, bottom = a * p.b - 1, 0
    for i in range(1, half + 1):
        for j in range(1, q + 1):
            t = _a_tile(p, i, j)
            if j <= br:
                assert t[top] == _x(p, i, j)
                t[top] = _phi(p, i, j)
            tiles[(i - 1) * q + (j - 1)] = tuple(t)
    for i in range(1, half + 1):
        for j in range(1, q + 1):
            t = _b_tile(p, i, j)
            if eps < j <= br + eps:
                assert t[bottom] == _y(p, i, j - eps)
                t[bottom] = _psi(p, i, j - eps)
            tiles[half * q + (i - 1) * q + (j - 1)] = tuple(t)
    for k in range(1, r + 1):
        tiles[a * q + k - 1] = tuple(_patch_chain(p, k))
    return tiles


def tile_rectangle(a: int, b: int, c: int, mode: str = "strict") -> Tiling:
    """Partition ``[ab] x [c]`` into ``c`` copies of ``[a] x [b]``."""
    p = rect_params(a, b, c, mode)
    return Tiling(GridPoset((a * b, c)), GridPoset((a, b)), rect_tiles(p))


def rect_tile_lookup(coord: Sequence[int], p: RectParams) -> tuple[int, int]:
    """Closed-form inverse of :func:`rect_tiles`: ``(tile_id, position)``."""
    x, y = coord
    a, b, c, q, r = p.a, p.b, p.c, p.q, p.r
    w = a * b
    if not (1 <= x <= w and 1 <= y <= c):
        raise PreconditionError(f"{tuple(coord)} is outside [{w}] x [{c}]")
    if r == 0:
        i, j = (x - 1) // b + 1, (y - 1) // a + 1
        u, v = (y - 1) % a + 1, (x - 1) % b + 1
        return (i - 1) * q + (j - 1), (u - 1) * b + (v - 1)
    half, eps, br = a // 2, p.epsilon, b * r
    if x <= w // 2:
        if y <= r:
            # S: the new minimum of a switched B tile
            t = (x - 1) * r + (y - 1)
            i, j = t // br + 1, t % br + 1
            return half * q + (i - 1) * q + (j + eps - 1), 0
        i, j = (x - 1) // b + 1, (y - r - 1) // a + 1
        u, v = (y - r - 1) % a + 1, (x - 1) % b + 1
        if u == a and v == b and j <= br:
            # x_{i,j} moved to patch chain C_k as target point (i, jj)
            k, jj = (j - 1) // b + 1, (j - 1) % b + 1
            return a * q + k - 1, (i - 1) * b + (jj - 1)
        return (i - 1) * q + (j - 1), (u - 1) * b + (v - 1)
    if y > a * q:
        # T: the new maximum of a switched A tile
        t = (x - w // 2 - 1) * r + (y - a * q - 1)
        i, j = t // br + 1, t % br + 1
        return (i - 1) * q + (j - 1), a * b - 1
    i, j = (x - w // 2 - 1) // b + 1, (y - 1) // a + 1
    u, v = (y - 1) % a + 1, (x - w // 2 - 1) % b + 1
    if u == 1 and v == 1 and eps < j <= br + eps:
        jj_all = j - eps
        k, jj = (jj_all - 1) // b + 1, (jj_all - 1) % b + 1
        return a * q + k - 1, (i + half - 1) * b + (jj - 1)
    return half * q + (i - 1) * q + (j - 1), (u - 1) * b + (v - 1)


# --------------------------------------------------------------------------
# d-dimensional grids


def _row_major(coords: Sequence[int], dims: Sequence[int]) -> int:
    i = 0
    for x, a in zip(coords, dims):
        i = i * a + (x - 1)
    return i


def _unrow_major(i: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for a in reversed(dims):
        i, x = divmod(i, a)
        out.append(x + 1)
    return tuple(reversed(out))


@dataclass(frozen=True)
class _Core:
    """``[|P|] x [c_1] x ... x [c_{d-1}]`` tiled by ``P`` with ``a_1`` even."""

    dims: tuple[int, ...]
    sides: tuple[int, ...]
    mode: str

    @cached_property
    def rect(self) -> RectParams:
        return rect_params(self.dims[0], self.dims[1], self.sides[-1], self.mode)

    @cached_property
    def inner(self) -> "_Core":
        merged = (self.dims[0] * self.dims[1],) + self.dims[2:]
        return _Core(merged, self.sides[:-1], self.mode)

    def tiles(self) -> dict[int, tuple]:
        if len(self.dims) == 1:
            return {0: tuple((k,) for k in range(1, self.dims[0] + 1))}
        a2 = self.dims[1]
        inner_dims = self.inner.dims
        inner_tiles = self.inner.tiles()
        rect = rect_tiles(self.rect)
        c = self.sides[-1]
        out = {}
        for oid, outer in inner_tiles.items():
            for rid, rtile in rect.items():
                tile = []
                for k in range(math.prod(self.dims)):
                    u = _unrow_major(k, self.dims)
                    p1, z = rtile[(u[0] - 1) * a2 + (u[1] - 1)]
                    g = outer[_row_major((p1,) + u[2:], inner_dims)]
                    tile.append(g + (z,))
                out[oid * c + rid] = tuple(tile)
        return out

    def lookup(self, g: Sequence[int]) -> tuple[int, int]:
        if len(self.dims) == 1:
            return 0, g[0] - 1
        oid, opos = self.inner.lookup(g[:-1])
        w = _unrow_major(opos, self.inner.dims)
        rid, rpos = rect_tile_lookup((w[0], g[-1]), self.rect)
        u1, u2 = divmod(rpos, self.dims[1])
        return oid * self.sides[-1] + rid, _row_major((u1 + 1, u2 + 1) + w[1:], self.dims)


@dataclass(frozen=True)
class GridPlan:
    """A validated plan for tiling the grid ``sides`` by ``target_dims``."""

    sides: tuple[int, ...]
    target_dims: tuple[int, ...]
    mode: str
    axis: int
    slab: int
    doubled: bool

    @property
    def target_size(self) -> int:
        return math.prod(self.target_dims)

    @property
    def others(self) -> tuple[int, ...]:
        return self.sides[: self.axis] + self.sides[self.axis + 1 :]

    @property
    def per_slab(self) -> int:
        return self.slab * math.prod(self.others) // self.target_size

    @property
    def n_tiles(self) -> int:
        return math.prod(self.sides) // self.target_size

    @cached_property
    def core(self) -> _Core:
        dims = self.target_dims
        if self.doubled:
            dims = (2 * dims[0],) + dims[1:]
        return _Core(dims, self.others, self.mode)

    def _slab_coords(self, g: Sequence[int]) -> tuple[int, tuple[int, ...]]:
        x = g[self.axis]
        s, off = divmod(x - 1, self.slab)
        return s, (off + 1,) + tuple(g[: self.axis]) + tuple(g[self.axis + 1 :])

    def _host_coords(self, s: int, local: Sequence[int]) -> tuple[int, ...]:
        rest = list(local[1:])
        rest.insert(self.axis, s * self.slab + local[0])
        return tuple(rest)

    def _split(self, cid: int, cpos: int) -> tuple[int, int]:
        if not self.doubled:
            return cid, cpos
        u = _unrow_major(cpos, self.core.dims)
        a1 = self.target_dims[0]
        half, u1 = divmod(u[0] - 1, a1)
        return cid * 2 + half, _row_major((u1 + 1,) + u[1:], self.target_dims)

    def lookup(self, g: Sequence[int]) -> tuple[int, int]:
        """``(tile_id, position)`` of host coordinate ``g``."""
        g = tuple(g)
        if len(g) != len(self.sides) or any(not 1 <= x <= c for x, c in zip(g, self.sides)):
            raise PreconditionError(f"{g} is outside the host {self.sides}")
        s, local = self._slab_coords(g)
        if len(self.sides) == 1:
            k, pos = divmod(g[0] - 1, self.target_dims[0])
            return k, pos
        tid, pos = self._split(*self.core.lookup(local))
        return s * self.per_slab + tid, pos

    def tiles(self) -> dict[int, tuple]:
        if len(self.sides) == 1:
            a = self.target_dims[0]
            return {k: tuple((k * a + i,) for i in range(1, a + 1)) for k in range(self.sides[0] // a)}
        core_tiles = self.core.tiles()
        out = {}
        n_slabs = self.sides[self.axis] // self.slab
        for s in range(n_slabs):
            for cid, ctile in core_tiles.items():
                groups: dict[int, list] = {}
                for cpos, local in enumerate(ctile):
                    tid, pos = self._split(cid, cpos)
                    groups.setdefault(tid, [None] * self.target_size)[pos] = self._host_coords(s, local)
                for tid, members in groups.items():
                    out[s * self.per_slab + tid] = tuple(members)
        return out

    def tiling(self) -> Tiling:
        return Tiling(GridPoset(self.sides), GridPoset(self.target_dims), self.tiles())


def plan_grid(sides: Sequence[int], target_dims: Sequence[int], mode: str = "precise") -> GridPlan:
    """Check preconditions and fix the slab axis for tiling ``sides`` by ``target_dims``."""
    _check_mode(mode)
    sides, dims = tuple(int(c) for c in sides), tuple(int(a) for a in target_dims)
    if not dims or any(a < 1 for a in dims):
        raise PreconditionError(f"target sides must be positive, got {dims}")
    if len(sides) != len(dims) or any(c < 1 for c in sides):
        raise PreconditionError(f"host {sides} must be a positive {len(dims)}-dimensional grid")
    size = math.prod(dims)
    if len(dims) == 1:
        if sides[0] % size:
            raise DivisibilityError(f"{size} does not divide {sides[0]}")
        return GridPlan(sides, dims, mode, 0, size, False)
    if mode == "strict" or dims[0] % 2:
        slab, doubled = 2 * size, True
    else:
        slab, doubled = size, False
    axis = next((j for j, c in enumerate(sides) if c % slab == 0), None)
    if axis is None:
        raise DivisibilityError(f"no side of {sides} is divisible by {slab}")
    if mode == "strict":
        bound = 12 * size * size
        low = [j for j, c in enumerate(sides) if c < bound]
        if low:
            raise PreconditionError(f"side {low[0]} is {sides[low[0]]} < 12|P|^2 = {bound}")
    plan = GridPlan(sides, dims, mode, axis, slab, doubled)
    host_index = [j for j in range(len(sides)) if j != axis]
    core = plan.core
    while len(core.dims) > 1:
        try:
            core.rect
        except PreconditionError as exc:
            side = host_index[len(core.sides) - 1]
            raise PreconditionError(f"side {side} ({sides[side]}) of host {sides}: {exc}") from exc
        core = core.inner
    return plan


def tile_grid(sides: Sequence[int], target_dims: Sequence[int], mode: str = "precise") -> Tiling:
    """Tile a grid with a side divisible by the slab width into copies of ``target_dims``."""
    return plan_grid(sides, target_dims, mode).tiling()


def tile_grid_first_even(target_dims: Sequence[int], sides: Sequence[int], mode: str = "precise") -> Tiling:
    """Tile ``[F] x [c_1] x ... x [c_{d-1}]`` where ``F`` is the slab width for ``target_dims``.

    ``F = 2|P|`` in strict mode or when ``a_1`` is odd, otherwise ``|P|``.
    """
    dims = tuple(target_dims)
    size = math.prod(dims)
    f = size if (len(dims) == 1 or (mode == "precise" and dims[0] % 2 == 0)) else 2 * size
    plan = plan_grid((f,) + tuple(sides), dims, mode)
    if plan.axis != 0:  # pragma: no cover - first side is always divisible
        raise AssertionError("slab axis should be the first side")
    return plan.tiling()


@lru_cache(maxsize=256)
def cached_plan(sides: tuple[int, ...], target_dims: tuple[int, ...], mode: str) -> GridPlan:
    return plan_grid(sides, target_dims, mode)


def grid_tile_lookup(coord: Sequence[int], plan: GridPlan) -> tuple[int, int]:
    return plan.lookup(coord)


def can_tile(sides: Sequence[int], target_dims: Sequence[int], mode: str) -> bool:
    try:
        cached_plan(tuple(sides), tuple(target_dims), mode)
    except PreconditionError:
        return False
    return True
