"""Static SVG pictures of two-dimensional grid tilings."""

from __future__ import annotations

import hashlib

from .errors import PreconditionError
from .posets import GridPoset
from .tiling import Tiling

CELL = 20


def tile_color(tid: int) -> str:
    h = hashlib.md5(str(tid).encode()).hexdigest()
    # keep the fill light enough for the grid lines to stay visible
    r, g, b = (96 + int(h[i : i + 2], 16) * 159 // 255 for i in (0, 2, 4))
    return f"#{r:02x}{g:02x}{b:02x}"


def tiling_svg(tiling: Tiling) -> str:
    """One square per host cell, first coordinate left to right, second bottom to top."""
    host = tiling.host
    if not isinstance(host, GridPoset) or host.d != 2:
        raise PreconditionError("SVG output needs a two-dimensional grid host")
    w, h = host.dims
    owner = {x: tid for tid, elems in tiling.tiles.items() for x in elems}
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w * CELL}" height="{h * CELL}">',
    ]
    for x in range(1, w + 1):
        for y in range(1, h + 1):
            tid = owner.get((x, y))
            fill = "#ffffff" if tid is None else tile_color(tid)
            out.append(
                f'<rect x="{(x - 1) * CELL}" y="{(h - y) * CELL}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" stroke="#000000" stroke-width="1"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
