"""Command-line entry point.

Exit status: 0 on success or a passing verification, 1 when the requested
object is shown not to exist (or a verification fails), 2 on usage, input or
resource errors.  Errors go to stderr as ``error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .chains import uniform_chain_partition
from .errors import BudgetExceeded, Infeasible, PreconditionError, Unsupported
from .formats import (
    file_kind,
    parse_poset,
    read_almost,
    read_chains,
    read_tiling,
    read_weights,
    write_almost,
    write_chains,
    write_tiling,
    write_weights,
)
from .grids import DivisibilityError, MODES, plan_grid, tile_rectangle
from .pipeline import (
    MODES as PIPELINE_MODES,
    AlmostPartition,
    PipelineConfig,
    almost_partition_into_grid,
    almost_partition_into_poset,
    plan_pipeline,
    theoretical_bounds,
)
from .posets import BooleanLattice, GridPoset
from .svg import tiling_svg
from .tiling import Tiling
from .verify import Report, verify_chain_partition, verify_implicit_sampled, verify_tiling_exhaustive
from .weights import find_t_partition, lift_to_blocks, one_mod_t_partition, verify_weight_function

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # keep the one-line error convention
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"error: usage: {message}\n")


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(a) for a in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected sides like 12x16, got {text!r}") from None
    if not dims or min(dims) < 1:
        raise argparse.ArgumentTypeError(f"sides must be positive, got {text!r}")
    return dims


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(rep: Report) -> int:
    sys.stdout.write(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_INFEASIBLE


# --------------------------------------------------------------------------
# verbs


def cmd_tile_rect(args) -> int:
    t = tile_rectangle(args.a, args.b, args.c, args.mode)
    _emit(write_tiling(t), args.out)
    if args.svg:
        Path(args.svg).write_text(tiling_svg(t))
    return EXIT_OK


def cmd_tile_grid(args) -> int:
    target = parse_poset(args.target)
    if not isinstance(target, GridPoset):
        raise PreconditionError("tile-grid needs a grid target")
    t = plan_grid(args.dims, target.dims, args.mode).tiling()
    _emit(write_tiling(t), args.out)
    if args.svg:
        Path(args.svg).write_text(tiling_svg(t))
    return EXIT_OK


def cmd_chain_partition(args) -> int:
    cp = uniform_chain_partition(args.n, args.h, seed=args.seed)
    _emit(write_chains(cp), args.out)
    return EXIT_OK


def cmd_weak_partition(args) -> int:
    target = parse_poset(args.target)
    if args.kind == "one-mod-t":
        _, w = one_mod_t_partition(target, args.t)
        kind = "one-mod-t"
    else:
        if args.m is None:
            raise PreconditionError("--kind t needs --m")
        w = find_t_partition(target, args.m, args.t)
        if args.lift:
            w = lift_to_blocks(w, target)
        kind = "exact-t"
    rep = verify_weight_function(w, args.t, kind)
    if not rep.passed:  # pragma: no cover - constructions are verified
        return _report(rep)
    _emit(write_weights(w, args.t, kind), args.out)
    return EXIT_OK


def cmd_almost_partition(args) -> int:
    target = parse_poset(args.target)
    if isinstance(target, GridPoset):
        cfg = plan_pipeline(args.n, target.dims, args.mode, h=args.h)
        ap = almost_partition_into_grid(cfg, seed=args.seed)
    else:
        ap = almost_partition_into_poset(args.n, target, mode=args.mode, seed=args.seed)
    mode = "implicit" if args.implicit else "explicit"
    tiling = None
    if args.implicit:
        rep = verify_implicit_sampled(ap, args.samples, args.seed)
    else:
        tiling = ap.to_tiling()
        rep = verify_tiling_exhaustive(tiling.host, tiling, ap.target)
    if args.out:
        out = Path(args.out)
        chain_files, refine = [], None
        for i, cp in enumerate(ap.factor_partitions):
            name = f"{out.name}.factor{i}.chains"
            (out.parent / name).write_text(write_chains(cp))
            chain_files.append(name)
        if ap.refinement is not None:
            refine = f"{out.name}.refine.tiling"
            (out.parent / refine).write_text(write_tiling(ap.refinement))
        out.write_text(write_almost(ap, mode, chain_files, tiling, refine))
    rep.stats.update(n=ap.config.n, h=ap.config.h, leftover_bound=ap.config.leftover_bound)
    return _report(rep)


def _verify_almost(text: str, base: Path, samples: int, seed: int) -> Report:
    head, factors, leftover, tiles = read_almost(text)
    n = int(head["n"])
    target = parse_poset(head["target"], base)
    if head.get("mode") == "explicit":
        host = BooleanLattice(n)
        return verify_tiling_exhaustive(host, Tiling(host, target, tiles, leftover), target)
    parts = [read_chains((base / f["chains"]).read_text()) for f in factors]
    dims = tuple(int(a) for a in head["grid"].split("x"))
    cfg = PipelineConfig(n, dims, tuple(cp.host_n for cp in parts), int(head["h"]), head.get("plan", "precise"))
    refinement = read_tiling((base / head["refine"]).read_text(), base) if "refine" in head else None
    for cp in parts:
        r = verify_chain_partition(cp)
        if not r.passed:
            return r
    ap = AlmostPartition(cfg, parts, target, refinement)
    rep = verify_implicit_sampled(ap, samples, seed)
    if ap.leftover_S != leftover:
        rep.fail("leftover", "manifest leftover differs from the rebuilt partition")
    return rep


def cmd_verify(args) -> int:
    path = Path(args.file)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from exc
    kind, base = file_kind(text), path.parent
    if kind == "tiling":
        t = read_tiling(text, base)
        rep = verify_tiling_exhaustive(t.host, t, t.target)
    elif kind == "chains":
        rep = verify_chain_partition(read_chains(text))
    elif kind == "weights":
        w, t, k = read_weights(text, base)
        rep = verify_weight_function(w, t, k)
    elif kind == "almost":
        rep = _verify_almost(text, base, args.samples, args.seed)
    elif kind == "verdict":
        rep = Report.from_text(text)
    else:
        raise PreconditionError(f"unrecognised file kind {kind!r}")
    return _report(rep)


def cmd_bounds(args) -> int:
    target = parse_poset(args.target)
    d = args.d if args.d is not None else (target.d if isinstance(target, GridPoset) else 1)
    b = theoretical_bounds(target.size, d, args.n0)
    lines = [
        f"bounds target={target.name} size={b.target_size} d={b.d} n0={b.n0 if b.n0 is not None else '-'}",
        f"grid_leftover {b.grid_leftover}",
        f"grid_power_leftover {b.grid_power_leftover}",
    ]
    if b.c_P is not None:
        lines.append(f"c_P {b.c_P}")
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattice-tiling", description="Tilings of grids and Boolean lattices by small posets.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("tile-rect", help="tile [ab] x [c] by [a] x [b]")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--c", type=int, required=True)
    s.add_argument("--mode", choices=MODES, default="strict")
    s.add_argument("--svg")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tile_rect)

    s = sub.add_parser("tile-grid", help="tile a grid by a smaller grid")
    s.add_argument("--dims", type=_dims, required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--mode", choices=MODES, default="precise")
    s.add_argument("--svg")
    s.add_argument("--out")
    s.set_defaults(func=cmd_tile_grid)

    s = sub.add_parser("chain-partition", help="uniform chain partition of 2^[n]")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_chain_partition)

    s = sub.add_parser("weak-partition", help="t-partition or (1 mod t)-partition")
    s.add_argument("--target", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--kind", choices=("t", "one-mod-t"), default="one-mod-t")
    s.add_argument("--m", type=int)
    s.add_argument("--lift", action="store_true", help="lift a t-partition of [2]^m to [2|P|]^m")
    s.add_argument("--out")
    s.set_defaults(func=cmd_weak_partition)

    s = sub.add_parser("almost-partition", help="almost-partition 2^[n] into copies of a target")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--target", required=True)
    s.add_argument("--mode", choices=PIPELINE_MODES, default="compact")
    s.add_argument("--h", type=int)
    s.add_argument("--implicit", action="store_true")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_almost_partition)

    s = sub.add_parser("verify", help="verify any file written by this tool")
    s.add_argument("file")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bounds", help="leftover bounds and c(P) as exact integers")
    s.add_argument("--target", required=True)
    s.add_argument("--d", type=int)
    s.add_argument("--n0", type=int)
    s.set_defaults(func=cmd_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Infeasible, DivisibilityError) as exc:
        tag = "infeasible" if isinstance(exc, Infeasible) else "divisibility"
        print(f"error: {tag}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceeded as exc:
        print(f"error: budget: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Unsupported as exc:
        print(f"error: unsupported: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"error: precondition: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
