from __future__ import annotations

from dataclasses import dataclass, field

from .posets import Poset


@dataclass
class Tiling:
    """A partition of ``host`` into copies of ``target`` plus a leftover set.

    ``tiles`` maps a tile id to the tile's host labels listed in ``target``
    element order, so ``tiles[t][k]`` is the image of target element ``k``.
    """

    host: Poset
    target: Poset
    tiles: dict[int, tuple]
    leftover: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.tiles)

    def owner_map(self) -> dict:
        """``label -> (tile_id, position)`` for every tiled element."""
        return {x: (tid, k) for tid, elems in self.tiles.items() for k, x in enumerate(elems)}
