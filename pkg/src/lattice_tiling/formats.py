"""Line-oriented text formats and the poset shorthand grammar.

Every format starts with a header line ``<kind> key=value ...``.  Elements
are written as ``(x,y,...)`` for grid coordinates, lowercase hex ``0x1a`` for
Boolean masks and plain integers otherwise.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from .chains import ChainPartition
from .errors import PreconditionError
from .posets import (
    BooleanLattice,
    FinitePoset,
    GridPoset,
    Poset,
    boolean_lattice,
    chain,
    diamond,
    s2k_poset,
)
from .tiling import Tiling
from .weights import WeightFunction


# --------------------------------------------------------------------------
# posets


def parse_poset(spec: str, base: Path | None = None) -> Poset:
    """``grid:AxB``, ``chain:N``, ``boolean:N``, ``s2k:K``, ``diamond`` or ``@file``."""
    spec = spec.strip()
    if spec.startswith("@"):
        path = Path(spec[1:])
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise PreconditionError(f"cannot read poset file {path}: {exc.strerror}") from exc
        return read_poset(text, name=spec)
    if spec == "diamond":
        return diamond()
    kind, _, arg = spec.partition(":")
    try:
        if kind == "grid":
            dims = tuple(int(a) for a in arg.split("x"))
            if not dims or min(dims) < 1:
                raise ValueError
            return GridPoset(dims)
        if kind == "chain":
            return chain(int(arg))
        if kind == "boolean":
            return boolean_lattice(int(arg))
        if kind == "s2k":
            return s2k_poset(int(arg))
    except ValueError:
        pass
    raise PreconditionError(f"malformed poset spec {spec!r}")


def poset_spec(p: Poset) -> str:
    return p.name


def write_poset(p: Poset) -> str:
    """``poset n=<k> name=<name>`` then one ``cover i j`` line per covering pair."""
    fp = p if isinstance(p, FinitePoset) else FinitePoset(p.matrix, p.name)
    lines = [f"poset n={fp.size} name={p.name}"]
    lines += [f"cover {i} {j}" for i, j in fp.covers()]
    return "\n".join(lines) + "\n"


def read_poset(text: str, name: str | None = None) -> FinitePoset:
    head, body = _split(text, "poset")
    n = _int(head, "n")
    covers = []
    for line in body:
        parts = line.split()
        if len(parts) != 3 or parts[0] != "cover":
            raise PreconditionError(f"bad poset line {line!r}")
        covers.append((int(parts[1]), int(parts[2])))
    return FinitePoset.from_covers(n, covers, name=name or head.get("name", "poset"))


# --------------------------------------------------------------------------
# elements and headers


def format_element(x, host: Poset) -> str:
    if isinstance(host, BooleanLattice):
        return hex(x)
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    return str(x)


_ELEM = re.compile(r"\([^)]*\)|\S+")


def parse_elements(text: str) -> list:
    out = []
    for tok in _ELEM.findall(text):
        if tok.startswith("("):
            out.append(tuple(int(v) for v in tok[1:-1].split(",") if v.strip()))
        else:
            out.append(int(tok, 0))
    return out


def _split(text: str, kind: str) -> tuple[dict, list[str]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0].split()[0] != kind:
        raise PreconditionError(f"expected a {kind!r} header")
    head = {}
    for tok in lines[0].split()[1:]:
        k, eq, v = tok.partition("=")
        if not eq:
            raise PreconditionError(f"bad header field {tok!r}")
        head[k] = v
    return head, lines[1:]


def _int(head: dict, key: str) -> int:
    try:
        return int(head[key])
    except (KeyError, ValueError):
        raise PreconditionError(f"header needs an integer {key}=") from None


def file_kind(text: str) -> str:
    for ln in text.splitlines():
        if ln.strip() and not ln.lstrip().startswith("#"):
            return ln.split()[0]
    return ""


# --------------------------------------------------------------------------
# chain partitions


def write_chains(cp: ChainPartition) -> str:
    lines = [f"chains n={cp.host_n} h={cp.h}"]
    lines += [f"chain {i}: " + " ".join(hex(x) for x in c) for i, c in enumerate(cp.chains)]
    return "\n".join(lines) + "\n"


def read_chains(text: str) -> ChainPartition:
    head, body = _split(text, "chains")
    chains = []
    for line in body:
        tag, _, rest = line.partition(":")
        if not tag.startswith("chain"):
            raise PreconditionError(f"bad chain line {line!r}")
        chains.append(parse_elements(rest))
    return ChainPartition(_int(head, "n"), _int(head, "h"), chains)


# --------------------------------------------------------------------------
# tilings


def _tile_lines(tiling: Tiling) -> list[str]:
    out = []
    for tid in sorted(tiling.tiles):
        out.append(f"tile {tid}: " + " ".join(format_element(x, tiling.host) for x in tiling.tiles[tid]))
    if tiling.leftover:
        left = sorted(tiling.leftover, key=tiling.host.index)
        out.append("leftover: " + " ".join(format_element(x, tiling.host) for x in left))
    return out


def write_tiling(tiling: Tiling, mode: str = "explicit") -> str:
    head = f"tiling host={tiling.host.name} target={poset_spec(tiling.target)} mode={mode}"
    return "\n".join([head] + _tile_lines(tiling)) + "\n"


def _read_tile_body(body: Iterable[str]) -> tuple[dict, frozenset]:
    tiles, leftover = {}, frozenset()
    for line in body:
        tag, _, rest = line.partition(":")
        if tag == "leftover":
            leftover = frozenset(parse_elements(rest))
        elif tag.startswith("tile "):
            tiles[int(tag.split()[1])] = tuple(parse_elements(rest))
        else:
            raise PreconditionError(f"bad tiling line {line!r}")
    return tiles, leftover


def read_tiling(text: str, base: Path | None = None) -> Tiling:
    head, body = _split(text, "tiling")
    host = parse_poset(head.get("host", ""), base)
    target = parse_poset(head.get("target", ""), base)
    tiles, leftover = _read_tile_body(body)
    return Tiling(host, target, tiles, leftover)


# --------------------------------------------------------------------------
# weight functions


def write_weights(w: WeightFunction, t: int, kind: str) -> str:
    lines = [f"weights host={w.host.name} target={poset_spec(w.target)} t={t} kind={kind}"]
    for c in sorted(w.entries, key=lambda c: [w.host.index(x) for x in c]):
        lines.append(f"w {w.entries[c]}: " + " ".join(format_element(x, w.host) for x in c))
    return "\n".join(lines) + "\n"


def read_weights(text: str, base: Path | None = None) -> tuple[WeightFunction, int, str]:
    head, body = _split(text, "weights")
    w = WeightFunction(parse_poset(head.get("host", ""), base), parse_poset(head.get("target", ""), base))
    for line in body:
        tag, _, rest = line.partition(":")
        parts = tag.split()
        if len(parts) != 2 or parts[0] != "w":
            raise PreconditionError(f"bad weight line {line!r}")
        w.add(parse_elements(rest), int(parts[1]))
    return w, _int(head, "t"), head.get("kind", "one-mod-t")


# --------------------------------------------------------------------------
# almost-partition manifests


def write_almost(
    ap,
    mode: str,
    chain_files: list[str] | None = None,
    tiling: Tiling | None = None,
    refine_file: str | None = None,
) -> str:
    """Manifest: header, one ``factor`` line per chain file, leftover, optional tiles."""
    cfg = ap.config
    dims = "x".join(str(a) for a in cfg.target_dims)
    head = f"almost n={cfg.n} target={poset_spec(ap.target)} h={cfg.h} mode={mode} plan={cfg.mode} grid={dims}"
    if refine_file:
        head += f" refine={refine_file}"
    lines = [head]
    for i, m in enumerate(cfg.m_parts):
        ref = chain_files[i] if chain_files else "-"
        lines.append(f"factor {i} m={m} chains={ref}")
    lines.append("leftover: " + " ".join(hex(x) for x in sorted(ap.leftover_S)))
    if tiling is not None:
        lines += [ln for ln in _tile_lines(tiling) if not ln.startswith("leftover")]
    return "\n".join(lines) + "\n"


def read_almost(text: str) -> tuple[dict, list[dict], frozenset, dict]:
    """``(header, factor records, leftover, tiles)``; tiles are empty for implicit manifests."""
    head, body = _split(text, "almost")
    factors, leftover, tile_lines = [], frozenset(), []
    for line in body:
        if line.startswith("factor "):
            rec = dict(tok.split("=", 1) for tok in line.split()[2:])
            factors.append(rec)
        elif line.startswith("leftover"):
            leftover = frozenset(parse_elements(line.partition(":")[2]))
        else:
            tile_lines.append(line)
    tiles, _ = _read_tile_body(tile_lines)
    return head, factors, leftover, tiles
