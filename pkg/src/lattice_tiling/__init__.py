"""Tilings of grids and Boolean lattices by copies of small posets."""

from .chains import ChainPartition, chain_of, symmetric_chain_decomposition, uniform_chain_partition
from .errors import BudgetExceeded, Infeasible, PreconditionError, TilingError, Unsupported
from .grids import RectParams, grid_tile_lookup, plan_grid, rect_tile_lookup, tile_grid, tile_grid_first_even, tile_rectangle
from .pipeline import (
    AlmostPartition,
    PipelineConfig,
    almost_partition_into_grid,
    almost_partition_into_poset,
    plan_pipeline,
    theoretical_bounds,
)
from .posets import BooleanLattice, FinitePoset, GridPoset, Poset, chain, diamond, enumerate_copies, is_copy, s2k_poset
from .tiling import Tiling
from .verify import Report, exact_cover_tiling_search, verify_chain_partition, verify_implicit_sampled, verify_tiling_exhaustive
from .weights import (
    WeightFunction,
    find_t_partition,
    lift_to_blocks,
    one_mod_t_partition,
    realize_function,
    realize_point_difference,
    verify_weight_function,
)

__all__ = [name for name in dir() if not name.startswith("_")]
