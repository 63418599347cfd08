"""Tabulate which (n, h) admit a uniform chain partition of 2^[n].

For every pair the table shows the outcome of ``uniform_chain_partition``:
``ok`` when a verified partition was built, otherwise the certificate tag.
"""

import argparse
import time
from dataclasses import dataclass

from lattice_tiling.chains import chain_count, uniform_chain_partition, width
from lattice_tiling.errors import Infeasible
from lattice_tiling.verify import verify_chain_partition


@dataclass
class FeasibilityConfig:
    n_max: int = 12
    h_max: int = 16
    build: bool = True


def outcome(n, h, build):
    if not build:
        r, first = chain_count(n, h)
        return "ok?" if r >= width(n) and first <= n + 1 else "width"
    try:
        cp = uniform_chain_partition(n, h)
    except Infeasible as err:
        return err.certificate
    return "ok" if verify_chain_partition(cp).passed else "BAD"


def main():
    ap = argparse.ArgumentParser(description="uniform chain partition feasibility table")
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--h-max", type=int, default=16)
    ap.add_argument("--no-build", action="store_true", help="only apply the counting test")
    args = ap.parse_args()
    cfg = FeasibilityConfig(args.n_max, args.h_max, not args.no_build)
    start = time.perf_counter()
    hs = range(2, cfg.h_max + 1)
    print("n\\h " + " ".join(f"{h:>6}" for h in hs))
    for n in range(1, cfg.n_max + 1):
        cells = [outcome(n, h, cfg.build) if h <= n + 1 else "-" for h in hs]
        print(f"{n:>3} " + " ".join(f"{c:>6}" for c in cells))
    print(f"({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
