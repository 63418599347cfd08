"""Independent checks: exhaustive tiling verification, sampled implicit
verification, chain-partition contracts and the exact-cover tiling oracle."""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field

from .errors import BudgetExceeded, Infeasible, PreconditionError
from .exact_cover import EXACT_COVER_BUDGET, solve_exact_cover
from .posets import MAX_ELEMENTS, SEARCH_BUDGET, Poset, enumerate_copies, is_copy
from .tiling import Tiling


@dataclass
class Report:
    """Outcome of a verification run.

    Serialises to the line format ``verdict PASS|FAIL``, ``tiles <k>``,
    ``leftover <s>``, ``violation <kind> <detail>``.
    """

    passed: bool = True
    tiles: int = 0
    leftover: int = 0
    checks: dict[str, bool] = field(default_factory=dict)
    violations: list[tuple[str, str]] = field(default_factory=list)
    stats: dict[str, float] = field(default_factory=dict)

    def fail(self, kind: str, detail: str) -> None:
        self.passed = False
        self.checks[kind] = False
        self.violations.append((kind, detail))

    def to_text(self, max_violations: int = 20) -> str:
        lines = [f"verdict {'PASS' if self.passed else 'FAIL'}", f"tiles {self.tiles}", f"leftover {self.leftover}"]
        for k, v in self.stats.items():
            lines.append(f"stat {k} {v}")
        for kind, detail in self.violations[:max_violations]:
            lines.append(f"violation {kind} {detail}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Report":
        rep = cls()
        for line in text.splitlines():
            word, _, rest = line.partition(" ")
            if word == "verdict":
                rep.passed = rest.strip() == "PASS"
            elif word == "tiles":
                rep.tiles = int(rest)
            elif word == "leftover":
                rep.leftover = int(rest)
            elif word == "violation":
                kind, _, detail = rest.partition(" ")
                rep.violations.append((kind, detail))
            elif word == "stat":
                k, _, v = rest.partition(" ")
                rep.stats[k] = float(v)
        return rep


# --------------------------------------------------------------------------
# tilings


def verify_tiling_exhaustive(host: Poset, tiling: Tiling, target: Poset) -> Report:
    """Disjointness, coverage and per-tile isomorphism, all checked in full."""
    if host.size > MAX_ELEMENTS:
        raise BudgetExceeded(f"{host.name} is too large for exhaustive verification")
    rep = Report(tiles=len(tiling.tiles), leftover=len(tiling.leftover))
    owner: dict = {}
    for tid, elems in tiling.tiles.items():
        for x in elems:
            if x not in host:
                raise PreconditionError(f"tile {tid} references {x!r}, which is not in {host.name}")
            if x in owner:
                rep.fail("disjointness", f"{x!r} in tiles {owner[x]} and {tid}")
            else:
                owner[x] = tid
        if len(set(elems)) != len(elems):
            rep.fail("disjointness", f"tile {tid} repeats an element")
        if not is_copy(elems, host, target):
            rep.fail("isomorphism", f"tile {tid} is not a copy of {target.name}")
    for x in tiling.leftover:
        if x not in host:
            raise PreconditionError(f"leftover references {x!r}, which is not in {host.name}")
        if x in owner:
            rep.fail("disjointness", f"{x!r} in tile {owner[x]} and in the leftover")
        owner.setdefault(x, "leftover")
    if len(owner) != host.size:
        missing = host.size - len(owner)
        rep.fail("coverage", f"{missing} host elements uncovered")
    for k in ("disjointness", "coverage", "isomorphism"):
        rep.checks.setdefault(k, True)
    return rep


def exact_cover_tiling_search(
    host: Poset,
    target: Poset,
    *,
    rows: list | None = None,
    leftover: int | None = None,
    copy_budget: int = SEARCH_BUDGET,
    budget: int = EXACT_COVER_BUDGET,
) -> Tiling:
    """Tile ``host`` by copies of ``target`` with Algorithm X.

    Rows default to every copy of ``target`` in ``host``; pass ``rows`` to
    restrict the family (each row is still certified as a copy).  When
    ``|host|`` is not a multiple of ``|target|`` the remainder may stay
    uncovered.  Raises :class:`Infeasible` (``exhausted``) if no tiling exists
    within the family and :class:`BudgetExceeded` on resource limits.
    """
    labels = host.labels()
    if rows is None:
        rows = enumerate_copies(host, target, budget=copy_budget)
    else:
        for r in rows:
            if not is_copy(r, host, target):
                raise PreconditionError(f"row {r!r} is not a copy of {target.name}")
    if leftover is None:
        leftover = host.size % target.size
    index = {x: i for i, x in enumerate(labels)}
    table = {i: [index[x] for x in r] for i, r in enumerate(rows)}
    sol = solve_exact_cover(list(range(len(labels))), table, leftover=leftover, budget=budget)
    if sol is None:
        raise Infeasible("exhausted", f"no tiling of {host.name} by {target.name} among {len(rows)} copies")
    chosen, skipped = sol
    tiles = {}
    from .posets import find_copy_map

    for tid, r in enumerate(sorted(chosen)):
        elems = [labels[i] for i in sorted(table[r])]
        tiles[tid] = tuple(find_copy_map(elems, host, target))
    return Tiling(host, target, tiles, frozenset(labels[i] for i in skipped))


# --------------------------------------------------------------------------
# chain partitions


def verify_chain_partition(cp) -> Report:
    """Disjoint cover of ``2^[n]``, chains totally ordered, size contract with ``C_1`` first."""
    n, h = cp.host_n, cp.h
    rep = Report(tiles=len(cp.chains))
    seen: Counter = Counter()
    full = 1 << n
    for i, c in enumerate(cp.chains):
        for x in c:
            if not 0 <= x < full:
                rep.fail("range", f"chain {i} has {x:#x} outside 2^[{n}]")
        seen.update(c)
        for a, b in zip(c, c[1:]):
            if a == b or a & ~b:
                rep.fail("order", f"chain {i}: {a:#x} is not below {b:#x}")
                break
    dup = [x for x, k in seen.items() if k > 1]
    if dup:
        rep.fail("disjointness", f"{len(dup)} elements repeated, e.g. {dup[0]:#x}")
    if len(seen) != full:
        rep.fail("coverage", f"{full - len(seen)} elements missing")
    sizes = [len(c) for c in cp.chains]
    if not sizes:
        rep.fail("contract", "no chains")
    else:
        if not h <= sizes[0] < 2 * h:
            rep.fail("contract", f"|C_1|={sizes[0]} not in [{h}, {2 * h})")
        bad = [i for i, s in enumerate(sizes[1:], start=1) if s != h]
        if bad:
            rep.fail("contract", f"chain {bad[0]} has size {sizes[bad[0]]} != {h}")
    for k in ("disjointness", "coverage", "order", "contract"):
        rep.checks.setdefault(k, True)
    return rep


# --------------------------------------------------------------------------
# implicit almost-partitions


def verify_implicit_sampled(ap, samples: int, seed: int = 0) -> Report:
    """Round-trip ``locate``/``materialize_tile`` on uniformly sampled elements.

    Each sample is located; its tile is materialized, certified as a copy of
    the target, and every member is located again and must report the same
    tile id and its own position.  Block coordinates are recomputed from the
    per-factor chain partitions independently of ``locate``.  Leftover hits
    must match ``|S| / 2^n`` within five standard deviations.
    """
    from .posets import BooleanLattice

    rng = random.Random(seed)
    host = BooleanLattice(ap.config.n)
    rep = Report(leftover=len(ap.leftover_S))
    hits = 0
    tiles_seen: dict[int, tuple] = {}
    bad = 0
    for _ in range(samples):
        x = rng.getrandbits(ap.config.n)
        loc = ap.locate(x)
        if loc is None:
            hits += 1
            if x not in ap.leftover_S:
                bad += 1
                rep.fail("leftover", f"{x:#x} reported leftover but not in S")
            continue
        tid, pos = loc
        if x in ap.leftover_S:
            bad += 1
            rep.fail("leftover", f"{x:#x} is in S but located in tile {tid}")
            continue
        blocks = ap.block_of(x)
        if ap.decode_tile_id(tid)[0] != blocks:
            bad += 1
            rep.fail("block", f"{x:#x}: tile {tid} names a block other than {blocks}")
            continue
        elems = tiles_seen.get(tid)
        if elems is None:
            elems = tuple(ap.materialize_tile(tid))
            tiles_seen[tid] = elems
            if not is_copy(elems, host, ap.target):
                bad += 1
                rep.fail("isomorphism", f"tile {tid} is not a copy of {ap.target.name}")
                continue
        if pos >= len(elems) or elems[pos] != x:
            bad += 1
            rep.fail("round-trip", f"{x:#x} not at position {pos} of tile {tid}")
            continue
        for j, y in enumerate(elems):
            if ap.locate(y) != (tid, j):
                bad += 1
                rep.fail("round-trip", f"member {y:#x} of tile {tid} relocates to {ap.locate(y)}")
                break
    rep.tiles = len(tiles_seen)
    p = len(ap.leftover_S) / float(1 << ap.config.n)
    sigma = math.sqrt(max(samples * p * (1 - p), 0.0))
    if abs(hits - samples * p) > 5 * sigma + 1e-9 and not (p == 0 and hits == 0):
        rep.fail("leftover-rate", f"{hits} leftover hits vs expected {samples * p:.2f}")
    rep.stats.update(samples=samples, leftover_hits=hits, inconsistencies=bad, distinct_tiles=len(tiles_seen))
    return rep
