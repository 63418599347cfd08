"""Almost-partitions of ``2^[n]`` into copies of a grid, and refinements to other posets.

Write ``n = m_1 + ... + m_d`` and split a mask into ``d`` bit fields, so
``2^[n]`` is the product of the ``2^[m_i]``.  A uniform chain partition of
every factor turns the product into blocks ``B_j = C_{1,j_1} x ... x C_{d,j_d}``,
each order-isomorphic to the grid of its chain lengths.  Every block with a
chain of length ``h`` in it is tiled by :mod:`.grids`; the all-exceptional
block ``B_{0..0}`` is tiled as far as a corner sub-box allows and the rest of
it is the leftover ``S``.

Indices are 0-based here: chain 0 of each factor is the exceptional one.

Tile ids
--------
``block_rank * K + local`` where ``block_rank`` is the mixed-radix rank of
``(j_1..j_d)`` with radices ``(r_1..r_d)``, ``local`` is the id inside the
block's grid tiling and ``K`` bounds the tiles per block.  A refined
partition appends ``* R + rid`` for the ``R`` tiles of the refinement grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

from .chains import MAX_EXPLICIT_N, ChainPartition, chain_count, uniform_chain_partition, width
from .errors import BudgetExceeded, Infeasible, PreconditionError, Unsupported
from .grids import GridPlan, cached_plan, can_tile
from .posets import BooleanLattice, GridPoset, Poset, has_unique_max_min
from .tiling import Tiling
from .verify import Report, exact_cover_tiling_search, verify_tiling_exhaustive

MODES = ("strict", "precise", "compact")
#: Largest ``[2|P|]^d0`` searched for a refinement tiling.
MAX_REFINEMENT_HOST = 4096
#: Node budget for each copy enumeration and exact-cover run in that search.
REFINEMENT_BUDGET = 200_000
#: Largest ``n`` for which :meth:`AlmostPartition.to_tiling` enumerates ``2^[n]``.
MAX_EXPLICIT_HOST = 22


def split_parts(n: int, d: int) -> tuple[int, ...]:
    """Equal split of ``n`` into ``d`` parts with the remainder on the first."""
    q, r = divmod(n, d)
    return (q + r,) + (q,) * (d - 1)


def slab_width(dims: Sequence[int], grid_mode: str) -> int:
    size = math.prod(dims)
    if len(dims) == 1:
        return size
    return 2 * size if grid_mode == "strict" or dims[0] % 2 else size


def rectangle_bound(dims: Sequence[int], grid_mode: str) -> int:
    """Largest ``a^2 b + 2a`` over the merge steps of the grid tiler (0 for ``d = 1``)."""
    a = dims[0] * (2 if grid_mode == "strict" or dims[0] % 2 else 1)
    best = 0
    for b in dims[1:]:
        best = max(best, a * a * b + 2 * a)
        a *= b
    return best


@dataclass(frozen=True)
class PipelineConfig:
    n: int
    target_dims: tuple[int, ...]
    m_parts: tuple[int, ...]
    h: int
    mode: str

    @property
    def d(self) -> int:
        return len(self.target_dims)

    @property
    def target_size(self) -> int:
        return math.prod(self.target_dims)

    @property
    def grid_mode(self) -> str:
        return "strict" if self.mode == "strict" else "precise"

    @property
    def offsets(self) -> tuple[int, ...]:
        out, o = [], 0
        for m in self.m_parts:
            out.append(o)
            o += m
        return tuple(out)

    @property
    def chain_counts(self) -> tuple[int, ...]:
        return tuple(chain_count(m, self.h)[0] for m in self.m_parts)

    @property
    def first_sizes(self) -> tuple[int, ...]:
        return tuple(chain_count(m, self.h)[1] for m in self.m_parts)

    @property
    def leftover_bound(self) -> int:
        return (2 * self.h) ** self.d


def _block_kinds(cfg: PipelineConfig) -> list[tuple[int, ...]]:
    """Side tuples of every block other than ``B_{0..0}``."""
    kinds = set()
    for use_first in product((True, False), repeat=cfg.d):
        if all(use_first):
            continue
        if any(not f and r < 2 for f, r in zip(use_first, cfg.chain_counts)):
            continue
        kinds.add(tuple(c1 if f else cfg.h for f, c1 in zip(use_first, cfg.first_sizes)))
    return sorted(kinds)


def _untileable_kind(cfg: PipelineConfig) -> tuple[int, ...] | None:
    for sides in _block_kinds(cfg):
        if not can_tile(sides, cfg.target_dims, cfg.grid_mode):
            return sides
    return None


def _width_blocker(m_parts: Sequence[int], h: int) -> str | None:
    for i, m in enumerate(m_parts):
        r, first = chain_count(m, h)
        if max(h, first) > m + 1:
            return f"factor {i}: a chain of size {max(h, first)} does not fit in 2^[{m}]"
        if r < width(m):
            return f"factor {i}: {r} chains of size {h} cannot cover an antichain of {width(m)} in 2^[{m}]"
    return None


def plan_pipeline(n: int, target_dims: Sequence[int], mode: str = "precise", *, h: int | None = None) -> PipelineConfig:
    """Choose ``h`` and the factor split for tiling ``2^[n]`` by ``grid(target_dims)``.

    ``strict`` uses ``h = 12|P|^2``; ``precise`` the least multiple of ``2|P|``
    at or above the rectangle bound; ``compact`` the least multiple of the
    slab width for which every factor passes the width test and every block
    shape tiles.  An explicit ``h`` overrides the choice.
    """
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}")
    dims = tuple(int(a) for a in target_dims)
    if not dims or min(dims) < 1:
        raise PreconditionError(f"bad target sides {dims}")
    d, size = len(dims), math.prod(dims)
    if n < d:
        raise PreconditionError(f"n={n} is smaller than the grid dimension {d}")
    parts = split_parts(n, d)
    if max(parts) > MAX_EXPLICIT_N:
        raise BudgetExceeded(f"factor 2^[{max(parts)}] exceeds the explicit chain range m <= {MAX_EXPLICIT_N}")
    grid_mode = "strict" if mode == "strict" else "precise"
    slab = slab_width(dims, grid_mode)
    if h is None:
        if mode == "strict":
            h = 12 * size * size
        elif mode == "precise":
            step = 2 * size
            h = step * max(1, -(-rectangle_bound(dims, grid_mode) // step))
        else:
            blocker, shape = None, None
            for cand in range(slab, min(parts) + 2, slab):
                blocker = _width_blocker(parts, cand)
                if blocker is None:
                    cfg = PipelineConfig(n, dims, parts, cand, mode)
                    bad = _untileable_kind(cfg)
                    if bad is None:
                        return cfg
                    shape = f"h={cand}: blocks of shape {bad} do not tile"
            if shape is not None:
                raise PreconditionError(f"no usable chain size for n={n}, factors {parts}; {shape}")
            raise Infeasible("width", f"no chain size h for n={n}, factors {parts}: {blocker or 'no candidate h'}")
    if h < 1 or h % slab:
        raise PreconditionError(f"h={h} must be a positive multiple of the slab width {slab}")
    for i, m in enumerate(parts):
        if h > m + 1:
            raise Infeasible("size", f"h={h} exceeds the longest chain of 2^[{m}] (factor {i}); unreachable at n={n}")
    cfg = PipelineConfig(n, dims, parts, h, mode)
    bad = _untileable_kind(cfg)
    if bad is not None:
        raise PreconditionError(f"blocks of shape {bad} cannot be tiled by {dims} in {grid_mode} mode")
    return cfg


def _corner_plan(sides: tuple[int, ...], dims: tuple[int, ...], grid_mode: str) -> GridPlan | None:
    """Largest tileable corner box of ``sides``, searched within ``2|P|`` of each side."""
    if can_tile(sides, dims, grid_mode):
        return cached_plan(sides, dims, grid_mode)
    slack = 2 * math.prod(dims)
    ranges = [range(c, max(0, c - slack), -1) for c in sides]
    best = None
    for box in product(*ranges):
        vol = math.prod(box)
        if best is not None and vol <= best[0]:
            continue
        if can_tile(box, dims, grid_mode):
            best = (vol, box)
    return None if best is None else cached_plan(best[1], dims, grid_mode)


@dataclass
class AlmostPartition:
    """Implicit almost-partition; see the module docstring for the id scheme."""

    config: PipelineConfig
    factor_partitions: list[ChainPartition]
    target: Poset
    refinement: Tiling | None = None
    _plans: dict = field(default_factory=dict, repr=False)
    _tiles: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        cfg = self.config
        self.radices = tuple(cp.r for cp in self.factor_partitions)
        self.corner = _corner_plan(self._sides((0,) * cfg.d), cfg.target_dims, cfg.grid_mode)
        counts = [self._plan(k).n_tiles for k in _block_kinds(cfg)]
        counts.append(self.corner.n_tiles if self.corner else 0)
        self.per_block = max(counts)
        if self.refinement is not None:
            self._ref_owner = self.refinement.owner_map()
            self._ref_positions = {
                rid: [self.refinement.host.index(x) for x in elems] for rid, elems in self.refinement.tiles.items()
            }

    # -- structure --------------------------------------------------------

    def _sides(self, block: Sequence[int]) -> tuple[int, ...]:
        return tuple(len(cp.chains[j]) for cp, j in zip(self.factor_partitions, block))

    def _plan(self, sides: tuple[int, ...]) -> GridPlan:
        plan = self._plans.get(sides)
        if plan is None:
            plan = cached_plan(sides, self.config.target_dims, self.config.grid_mode)
            self._plans[sides] = plan
        return plan

    def block_plan(self, block: Sequence[int]) -> GridPlan | None:
        if not any(block):
            return self.corner
        return self._plan(self._sides(block))

    def _plan_tiles(self, plan: GridPlan) -> dict:
        key = (plan.sides, plan.target_dims)
        t = self._tiles.get(key)
        if t is None:
            t = self._tiles[key] = plan.tiles()
        return t

    def split(self, x: int) -> tuple[int, ...]:
        cfg = self.config
        return tuple((x >> o) & ((1 << m) - 1) for o, m in zip(cfg.offsets, cfg.m_parts))

    def block_of(self, x: int) -> tuple[int, ...]:
        return tuple(cp.chain_of(part)[0] for cp, part in zip(self.factor_partitions, self.split(x)))

    def block_rank(self, block: Sequence[int]) -> int:
        rank = 0
        for j, r in zip(block, self.radices):
            rank = rank * r + j
        return rank

    def block_unrank(self, rank: int) -> tuple[int, ...]:
        out = []
        for r in reversed(self.radices):
            rank, j = divmod(rank, r)
            out.append(j)
        if rank:
            raise PreconditionError("block rank out of range")
        return tuple(reversed(out))

    @property
    def n_refined(self) -> int:
        return len(self.refinement.tiles) if self.refinement is not None else 1

    @cached_property
    def leftover_S(self) -> frozenset:
        sides = self._sides((0,) * self.config.d)
        keep = self.corner.sides if self.corner else (0,) * len(sides)
        out = []
        for coords in product(*(range(1, c + 1) for c in sides)):
            if any(x > k for x, k in zip(coords, keep)):
                out.append(self._mask((0,) * self.config.d, coords))
        return frozenset(out)

    def _mask(self, block: Sequence[int], coords: Sequence[int]) -> int:
        x = 0
        for cp, j, c, o in zip(self.factor_partitions, block, coords, self.config.offsets):
            x |= cp.chains[j][c - 1] << o
        return x

    # -- queries ----------------------------------------------------------

    def locate(self, x: int) -> tuple[int, int] | None:
        """``(tile_id, position)`` of mask ``x``, or ``None`` for the leftover."""
        if not 0 <= x < (1 << self.config.n):
            raise PreconditionError(f"{x:#x} is not a subset of [{self.config.n}]")
        block, coords = [], []
        for cp, part in zip(self.factor_partitions, self.split(x)):
            j, k = cp.chain_of(part)
            block.append(j)
            coords.append(k + 1)
        plan = self.block_plan(block)
        if plan is None or any(c > s for c, s in zip(coords, plan.sides)):
            return None
        local, pos = plan.lookup(coords)
        gid = self.block_rank(block) * self.per_block + local
        if self.refinement is None:
            return gid, pos
        rid, k = self._ref_owner[self.refinement.host.label(pos)]
        return gid * self.n_refined + rid, k

    def decode_tile_id(self, tid: int) -> tuple:
        """``(block, local_id)`` plus the refinement tile id when refined."""
        if tid < 0:
            raise PreconditionError(f"unknown tile id {tid}")
        gid, rid = divmod(tid, self.n_refined)
        rank, local = divmod(gid, self.per_block)
        block = self.block_unrank(rank)
        return (block, local) if self.refinement is None else (block, local, rid)

    def materialize_tile(self, tid: int) -> list[int]:
        """Masks of tile ``tid`` in target element order."""
        dec = self.decode_tile_id(tid)
        block, local = dec[0], dec[1]
        plan = self.block_plan(block)
        if plan is None or local >= plan.n_tiles:
            raise PreconditionError(f"unknown tile id {tid}")
        coords = self._plan_tiles(plan)[local]
        if self.refinement is None:
            return [self._mask(block, c) for c in coords]
        return [self._mask(block, coords[p]) for p in self._ref_positions[dec[2]]]

    @property
    def n_tiles(self) -> int:
        # a block's shape only depends on which coordinates pick the first chain
        total = 0
        for firsts in product((True, False), repeat=len(self.radices)):
            count = math.prod(1 if f else r - 1 for f, r in zip(firsts, self.radices))
            if count:
                plan = self.block_plan(tuple(0 if f else 1 for f in firsts))
                total += count * (plan.n_tiles if plan else 0)
        return total * self.n_refined

    def to_tiling(self) -> Tiling:
        """Materialize every tile block by block (independent of :meth:`locate`)."""
        if self.config.n > MAX_EXPLICIT_HOST:
            raise BudgetExceeded(f"n={self.config.n} is too large to materialize")
        tiles = {}
        for block in product(*(range(r) for r in self.radices)):
            plan = self.block_plan(block)
            if plan is None:
                continue
            base = self.block_rank(block) * self.per_block
            for local, coords in self._plan_tiles(plan).items():
                masks = [self._mask(block, c) for c in coords]
                if self.refinement is None:
                    tiles[base + local] = tuple(masks)
                else:
                    for rid, ps in self._ref_positions.items():
                        tiles[(base + local) * self.n_refined + rid] = tuple(masks[p] for p in ps)
        return Tiling(BooleanLattice(self.config.n), self.target, tiles, self.leftover_S)


def _factor_partitions(cfg: PipelineConfig, seed: int = 0) -> list[ChainPartition]:
    cache: dict[int, ChainPartition] = {}
    out = []
    for i, m in enumerate(cfg.m_parts):
        if m not in cache:
            try:
                cache[m] = uniform_chain_partition(m, cfg.h, seed=seed)
            except Infeasible as exc:
                raise Infeasible(exc.certificate, f"factor {i} (m={m}, h={cfg.h}): {exc.detail}") from exc
        out.append(cache[m])
    return out


def almost_partition_into_grid(
    config: PipelineConfig, *, target: Poset | None = None, refinement: Tiling | None = None, seed: int = 0
) -> AlmostPartition:
    parts = _factor_partitions(config, seed)
    if target is None:
        target = GridPoset(config.target_dims)
    return AlmostPartition(config, parts, target, refinement)


def find_refinement(p: Poset, *, max_host: int = MAX_REFINEMENT_HOST, budget: int = REFINEMENT_BUDGET) -> Tiling:
    """Search ``[2|P|]^d0`` for ``d0 = 1, 2, ...`` for a perfect tiling by ``p``."""
    side = 2 * p.size
    d0 = 1
    while side**d0 <= max_host:
        host = GridPoset((side,) * d0)
        try:
            return exact_cover_tiling_search(host, p, leftover=0, copy_budget=budget, budget=budget)
        except (Infeasible, BudgetExceeded):
            d0 += 1
    raise Unsupported(
        f"no tiling of [{side}]^d by {p.name} within {max_host} elements; larger grid powers rely on an "
        "existence argument this package does not construct"
    )


def almost_partition_into_poset(
    n: int,
    p: Poset,
    grid_tiling: Tiling | None = None,
    mode: str = "compact",
    *,
    seed: int = 0,
) -> AlmostPartition:
    """Almost-partition ``2^[n]`` into copies of ``p`` through a grid tiled by ``p``.

    ``grid_tiling`` is a perfect tiling of some grid by ``p`` (typically
    ``[2|P|]^d0``).  Grid targets without a supplied tiling are handled
    directly.
    """
    if not has_unique_max_min(p):
        raise PreconditionError(f"{p.name} needs a unique maximum and minimum")
    if grid_tiling is None and isinstance(p, GridPoset):
        return almost_partition_into_grid(plan_pipeline(n, p.dims, mode), seed=seed)
    if grid_tiling is None:
        grid_tiling = find_refinement(p)
    if not isinstance(grid_tiling.host, GridPoset) or grid_tiling.leftover:
        raise PreconditionError("the refinement must be a perfect tiling of a grid")
    rep = verify_tiling_exhaustive(grid_tiling.host, grid_tiling, p)
    if not rep.passed:
        raise PreconditionError(f"the refinement is not a tiling by {p.name}: {rep.violations[0]}")
    cfg = plan_pipeline(n, grid_tiling.host.dims, mode)
    return almost_partition_into_grid(cfg, target=p, refinement=grid_tiling, seed=seed)


def verify_almost_partition(ap: AlmostPartition) -> Report:
    """Exhaustive check of the materialized tiling plus the leftover bound."""
    tiling = ap.to_tiling()
    rep = verify_tiling_exhaustive(tiling.host, tiling, ap.target)
    s = len(ap.leftover_S)
    if s > ap.config.leftover_bound:
        rep.fail("leftover-bound", f"|S| = {s} > (2h)^d = {ap.config.leftover_bound}")
    rep.checks.setdefault("leftover-bound", True)
    rep.stats.update(h=ap.config.h, leftover_bound=ap.config.leftover_bound)
    return rep


@dataclass(frozen=True)
class Bounds:
    target_size: int
    d: int
    n0: int | None
    grid_leftover: int
    grid_power_leftover: int
    c_P: int | None


def theoretical_bounds(target_size: int, d: int, n0: int | None = None) -> Bounds:
    """Leftover bounds ``(24|P|^2)^d`` and ``24^d (2|P|)^(2d^2)`` and ``c(P)`` as exact integers."""
    if target_size < 1 or d < 1 or (n0 is not None and n0 < 0):
        raise PreconditionError("|P| and d must be positive and n0 nonnegative")
    grid = (24 * target_size**2) ** d
    power = 24**d * (2 * target_size) ** (2 * d * d)
    c = None if n0 is None else max(2**n0, power)
    return Bounds(target_size, d, n0, grid, power, c)
