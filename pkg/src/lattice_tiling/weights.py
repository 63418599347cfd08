"""Weight functions over families of copies, t-partitions and (1 mod t)-partitions.

A weight function assigns nonnegative integers to copies of ``P`` inside a
host; the weight of a host element is the total weight of copies through it.
Keys are copies stored as label tuples sorted by host index, so equal sets
always collide.  Only nonzero weights are stored.

The (1 mod t) construction works on ``Q = [2|P|]^m`` with ``m = 2d - 1``,
where ``d`` is the least dimension with ``P`` inside ``2^[d]``:

* :func:`realize_point_difference` gives weights congruent to
  ``I_x - I_a`` (``a`` = all-2s anchor) by swapping the top or bottom of a
  copy placed in a low or high corner subcube;
* :func:`realize_function` sums those witnesses for any ``f`` with
  ``sum f = 0 (mod t)``;
* :func:`one_mod_t_partition` realizes ``I_Q - s I_A`` and adds ``s`` copies of
  ``A`` back.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping

from .errors import BudgetExceeded, Infeasible, PreconditionError
from .posets import (
    SEARCH_BUDGET,
    GridPoset,
    Poset,
    enumerate_copies,
    has_unique_max_min,
    is_copy,
    maximal_elements,
    minimal_cube_dim,
    minimal_elements,
)
from .verify import Report

KINDS = ("exact-t", "one-mod-t")
#: Largest ``Q`` the (1 mod t) construction will materialize.
MAX_Q = 1 << 16


def _key(host: Poset, labels) -> tuple:
    return tuple(sorted(labels, key=host.index))


@dataclass
class WeightFunction:
    host: Poset
    target: Poset
    entries: dict[tuple, int] = field(default_factory=dict)

    def add(self, copy, weight: int = 1) -> None:
        if weight < 0:
            raise PreconditionError("weights are nonnegative")
        if weight:
            k = _key(self.host, copy)
            self.entries[k] = self.entries.get(k, 0) + weight

    def __add__(self, other: "WeightFunction") -> "WeightFunction":
        if other.host.name != self.host.name:
            raise PreconditionError("weight functions live on different hosts")
        out = WeightFunction(self.host, self.target, dict(self.entries))
        for k, w in other.entries.items():
            out.entries[k] = out.entries.get(k, 0) + w
        return out

    def scaled(self, k: int) -> "WeightFunction":
        if k < 0:
            raise PreconditionError("scale must be nonnegative")
        return WeightFunction(self.host, self.target, {c: w * k for c, w in self.entries.items() if k})

    def total(self) -> int:
        return sum(self.entries.values())

    def weights(self) -> Counter:
        """Per-element weight; elements of weight 0 are absent."""
        out: Counter = Counter()
        for c, w in self.entries.items():
            for x in c:
                out[x] += w
        return out

    def weight_of(self, x) -> int:
        return sum(w for c, w in self.entries.items() if x in c)


def verify_weight_function(w: WeightFunction, t: int, kind: str = "one-mod-t") -> Report:
    """Scan every host element against ``t`` (exact) or ``1 mod t``.

    A key that is not a copy of the target raises :class:`PreconditionError`.
    """
    if kind not in KINDS:
        raise PreconditionError(f"kind must be one of {KINDS}")
    if t < 1:
        raise PreconditionError("t must be positive")
    for c in w.entries:
        if not is_copy(c, w.host, w.target):
            raise PreconditionError(f"weighted set {c!r} is not a copy of {w.target.name}")
    table = w.weights()
    rep = Report(tiles=len(w.entries))
    bad = 0
    for x in w.host.labels():
        v = table.get(x, 0)
        ok = v == t if kind == "exact-t" else v % t == 1 % t
        if not ok:
            bad += 1
            if bad <= 20:
                rep.fail("congruence", f"{x!r} has weight {v}")
    total = w.total()
    if sum(table.values()) != w.target.size * total:
        rep.fail("weight-sum", "element weights do not add up to |P| times the total weight")
    if kind == "exact-t" and t * w.host.size != w.target.size * total:
        rep.fail("weight-sum", f"t|Q| = {t * w.host.size} but |P| sum w = {w.target.size * total}")
    rep.checks.setdefault("congruence", True)
    rep.checks.setdefault("weight-sum", True)
    rep.stats.update(elements=w.host.size, bad=bad, total_weight=total)
    return rep


# --------------------------------------------------------------------------
# t-partitions on [2]^m


def _search_weights(rows: list[tuple[int, ...]], n_cols: int, t: int, budget: int) -> list[int] | None:
    """Exact search for ``w in {0..t}^rows`` with every column sum equal to ``t``."""
    by_col = [[] for _ in range(n_cols)]
    for r, cols in enumerate(rows):
        for c in cols:
            by_col[c].append(r)
    if any(not rs for rs in by_col):
        return None
    need = [t] * n_cols
    open_rows = [len(rs) for rs in by_col]
    w: list[int | None] = [None] * len(rows)
    nodes = [0]

    def assign(r: int, v: int) -> None:
        w[r] = v
        for c in rows[r]:
            need[c] -= v
            open_rows[c] -= 1

    def unassign(r: int) -> None:
        v = w[r]
        w[r] = None
        for c in rows[r]:
            need[c] += v
            open_rows[c] += 1

    def rec() -> bool:
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"t-partition search exceeded {budget} nodes")
        best, best_open = -1, None
        for c in range(n_cols):
            if need[c] < 0 or need[c] > t * open_rows[c]:
                return False
            if open_rows[c] and (best_open is None or open_rows[c] < best_open):
                best, best_open = c, open_rows[c]
        if best < 0:
            return all(v == 0 for v in need)
        r = next(r for r in by_col[best] if w[r] is None)
        cap = min(need[c] for c in rows[r])
        values = [need[best]] if best_open == 1 else range(cap, -1, -1)
        for v in values:
            if v > cap:
                continue
            assign(r, v)
            if rec():
                return True
            unassign(r)
        return False

    return [int(v) for v in w] if rec() else None


def find_t_partition(p: Poset, m: int, t: int, *, budget: int = SEARCH_BUDGET) -> WeightFunction:
    """A weighting of the copies of ``p`` in ``[2]^m`` giving every element weight ``t``.

    The search is exact over weights ``0..t``; failure raises
    :class:`Infeasible` with certificate ``exhausted``.
    """
    if m < 1 or t < 1:
        raise PreconditionError("m and t must be positive")
    host = GridPoset((2,) * m)
    copies = enumerate_copies(host, p, budget=budget)
    col = {x: i for i, x in enumerate(host.labels())}
    rows = [tuple(col[x] for x in c) for c in copies]
    sol = _search_weights(rows, host.size, t, budget)
    if sol is None:
        raise Infeasible("exhausted", f"no {t}-partition of [2]^{m} by {len(copies)} copies of {p.name}")
    w = WeightFunction(host, p)
    for c, v in zip(copies, sol):
        w.add(c, v)
    return w


def lift_to_blocks(w: WeightFunction, p: Poset, extra: int = 0) -> WeightFunction:
    """Copy ``w`` from ``[2]^m`` into every block of ``[2|P|]^m``.

    Block ``(i_1..i_m)`` holds the points ``2 i_k + e_k - 2``.  With
    ``extra > 0`` the result lives on ``[2|P|]^(m + extra)``, one copy of the
    lifted function for each value of the extra coordinates.
    """
    dims = w.host.dims if isinstance(w.host, GridPoset) else None
    if dims is None or any(s != 2 for s in dims):
        raise PreconditionError("lift_to_blocks expects a weight function on [2]^m")
    m, side = len(dims), 2 * p.size
    host = GridPoset((side,) * (m + extra))
    out = WeightFunction(host, w.target)
    for block in product(range(1, p.size + 1), repeat=m):
        for tail in product(range(1, side + 1), repeat=extra):
            for c, v in w.entries.items():
                out.add([tuple(2 * i + e - 2 for i, e in zip(block, x)) + tail for x in c], v)
    return out


# --------------------------------------------------------------------------
# realizability on Q = [2|P|]^(2d-1)


@dataclass
class RealizabilityContext:
    target: Poset
    t: int
    d: int
    m: int
    side: int
    host: GridPoset
    anchor: tuple[int, ...]
    witness: tuple[int, ...]  # masks of a copy of the target in 2^[d], target order
    top: int
    bottom: int


def realizability_context(p: Poset, t: int) -> RealizabilityContext:
    if t < 1:
        raise PreconditionError("t must be positive")
    if p.size < 2:
        raise PreconditionError("the realizability construction needs |P| >= 2")
    if not has_unique_max_min(p):
        raise PreconditionError(f"{p.name} needs a unique maximum and minimum")
    d, witness = minimal_cube_dim(p)
    m, side = 2 * d - 1, 2 * p.size
    if side**m > MAX_Q:
        raise BudgetExceeded(f"|Q| = {side}^{m} = {side**m} exceeds the materialization budget {MAX_Q}")
    return RealizabilityContext(
        target=p,
        t=t,
        d=d,
        m=m,
        side=side,
        host=GridPoset((side,) * m),
        anchor=(2,) * m,
        witness=witness,
        top=maximal_elements(p.matrix)[0],
        bottom=minimal_elements(p.matrix)[0],
    )


def _corner_copy(ctx: RealizabilityContext, J: list[int], low: int, high: int, rest: int) -> list[tuple]:
    """The witness copy placed in the subcube varying over ``J`` between ``low`` and ``high``."""
    out = []
    for mask in ctx.witness:
        coord = [rest] * ctx.m
        for bit, j in enumerate(J):
            coord[j] = high if mask >> (ctx.d - 1 - bit) & 1 else low
        out.append(tuple(coord))
    return out


def _le(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def realize_point_difference(x, ctx: RealizabilityContext) -> WeightFunction:
    """Weights congruent to ``I_x - I_anchor`` mod ``t``: one copy at weight 1, one at ``t - 1``."""
    x = tuple(x)
    if x not in ctx.host:
        raise PreconditionError(f"{x} is not in {ctx.host.name}")
    w = WeightFunction(ctx.host, ctx.target)
    if x == ctx.anchor:
        return w
    ones = [j for j, v in enumerate(x) if v == 1]
    if len(ones) <= ctx.d - 1:
        J = [j for j, v in enumerate(x) if v >= 2][: ctx.d]
        A = _corner_copy(ctx, J, 1, 2, 1)
        b = A[ctx.top]
        assert _le(b, x) and _le(b, ctx.anchor) and all(_le(y, b) for y in A)
        swap = ctx.top
    else:
        J = ones[: ctx.d]
        A = _corner_copy(ctx, J, ctx.side - 1, ctx.side, ctx.side)
        c = A[ctx.bottom]
        assert _le(x, c) and _le(ctx.anchor, c) and all(_le(c, y) for y in A)
        swap = ctx.bottom
    A1, A2 = list(A), list(A)
    A1[swap], A2[swap] = x, ctx.anchor
    w.add(A1, 1)
    w.add(A2, ctx.t - 1)
    return w


def realize_function(f: Mapping | Callable, ctx: RealizabilityContext) -> WeightFunction:
    """Weights congruent to ``f`` mod ``t``; requires ``sum f = 0 (mod t)``."""
    get = f if callable(f) else (lambda x: f.get(x, 0))
    values = {x: get(x) for x in ctx.host.labels()}
    if sum(values.values()) % ctx.t:
        raise PreconditionError(f"sum of f is {sum(values.values())}, not divisible by t={ctx.t}")
    w = WeightFunction(ctx.host, ctx.target)
    for x, v in values.items():
        k = v % ctx.t
        if k and x != ctx.anchor:
            for c, cw in realize_point_difference(x, ctx).entries.items():
                w.entries[c] = w.entries.get(c, 0) + k * cw
    return w


def one_mod_t_partition(p: Poset, t: int) -> tuple[int, WeightFunction]:
    """``(m, w)`` with every element of ``[2|P|]^m`` of weight ``1 mod t``."""
    if t < 1:
        raise PreconditionError("t must be positive")
    if p.size == 1:
        host = GridPoset((2,))
        w = WeightFunction(host, p)
        for x in host.labels():
            w.add([x], 1)
        return 1, w
    ctx = realizability_context(p, t)
    q = ctx.host.size
    # Subtracting s|P| = |Q| copies' worth of weight leaves a function summing to 0.
    if (t * q) % p.size:
        raise AssertionError("t|Q|/|P| should be an integer")
    s = q // p.size
    assert (s * p.size - q) % t == 0
    A = _corner_copy(ctx, list(range(ctx.d)), 1, 2, 1)
    assert is_copy(A, ctx.host, p)
    in_a = set(A)
    w = realize_function(lambda x: 1 - s if x in in_a else 1, ctx)
    w.add(A, s)
    return ctx.m, w


def assembly_constants(p: Poset, t: int) -> dict[str, int]:
    """``|Q|``, ``t|Q|/|P|`` and the balancing multiplier ``|Q|/|P|`` used above."""
    d, _ = minimal_cube_dim(p)
    m = max(2 * d - 1, 1)
    q = (2 * p.size) ** m
    return {"m": m, "Q": q, "t_Q_over_P": t * q // p.size, "s": q // p.size}
