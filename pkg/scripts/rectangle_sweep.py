"""Sweep the rectangle construction over (a, b, c) and report timings.

    python scripts/rectangle_sweep.py --a 2 4 6 --b 1 2 3 --extra 40 --mode precise
"""

import argparse
import time
from dataclasses import dataclass

from lattice_tiling.errors import PreconditionError
from lattice_tiling.grids import rect_params, rect_tile_lookup, tile_rectangle
from lattice_tiling.verify import verify_tiling_exhaustive


@dataclass
class SweepConfig:
    a_values: tuple = (2, 4)
    b_values: tuple = (1, 2, 3)
    extra: int = 25
    mode: str = "strict"


def first_c(a, b, mode):
    # smallest c the mode accepts, found by probing upward
    c = 1
    while True:
        try:
            rect_params(a, b, c, mode)
            return c
        except PreconditionError:
            c += 1


def sweep(cfg: SweepConfig):
    rows = []
    for a in cfg.a_values:
        for b in cfg.b_values:
            lo = first_c(a, b, cfg.mode)
            ok = tried = 0
            start = time.perf_counter()
            for c in range(lo, lo + cfg.extra + 1):
                try:
                    t = tile_rectangle(a, b, c, cfg.mode)
                except PreconditionError:
                    continue
                tried += 1
                p = rect_params(a, b, c, cfg.mode)
                good = verify_tiling_exhaustive(t.host, t, t.target).passed
                good = good and all(rect_tile_lookup(x, p) == o for x, o in t.owner_map().items())
                ok += good
            rows.append((a, b, lo, ok, tried, time.perf_counter() - start))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=int, nargs="+", default=[2, 4])
    ap.add_argument("--b", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--extra", type=int, default=25)
    ap.add_argument("--mode", choices=("strict", "precise"), default="strict")
    args = ap.parse_args()
    cfg = SweepConfig(tuple(args.a), tuple(args.b), args.extra, args.mode)
    print(f"{'a':>3} {'b':>3} {'c_min':>6} {'verified':>9} {'secs':>7}")
    for a, b, lo, ok, total, secs in sweep(cfg):
        print(f"{a:>3} {b:>3} {lo:>6} {ok:>4}/{total:<4} {secs:7.2f}")


if __name__ == "__main__":
    main()
