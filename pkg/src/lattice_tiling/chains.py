"""Chain partitions of the Boolean lattice 2^[n].

Two objects live here:

* the symmetric chain decomposition (SCD) given by the parenthesis-matching
  rule, available both materialized and as an O(n) per-element query;
* :class:`ChainPartition`, a partition into chains ``C_1, ..., C_r`` with
  ``h <= |C_1| < 2h`` and every other chain of size exactly ``h``.

:func:`uniform_chain_partition` builds the latter.  Chains have ``r`` fixed by
``n`` and ``h``, so whenever ``r`` is smaller than the width ``C(n, n//2)`` of
the lattice no such partition exists and the middle level is returned as the
certificate.  Otherwise the construction sorts the elements by level, slices
them into ``h`` consecutive layers of ``r`` elements and links consecutive
layers by perfect bipartite matchings on the inclusion relation; composing the
matchings gives ``r`` chains of size ``h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import BudgetExceeded, Infeasible, PreconditionError
from .exact_cover import solve_exact_cover
from .verify import verify_chain_partition

#: Largest ground set for which a partition is materialized.
MAX_EXPLICIT_N = 24
#: Number of within-level orderings tried by the layered construction.
LAYER_STRATEGIES = 12
#: Swap rounds spent repairing deficient layer matchings.
REPAIR_ROUNDS = 200
#: Above this ground-set size, exact-size partitions are lifted from a smaller cube.
LIFT_ABOVE = 12


# --------------------------------------------------------------------------
# symmetric chain decomposition


def _bracket(mask: int, n: int) -> list[int]:
    """Unmatched positions of ``mask`` read as a bracket word.

    Position ``i`` (bit ``i``) is ``'('`` when clear and ``')'`` when set.
    """
    stack: list[int] = []
    unmatched_close: list[int] = []
    for i in range(n):
        if (mask >> i) & 1:
            if stack:
                stack.pop()
            else:
                unmatched_close.append(i)
        else:
            stack.append(i)
    return unmatched_close + stack


def scd_chain_of(mask: int, n: int) -> tuple[int, int]:
    """``(chain minimum, index in chain)`` of ``mask`` in the SCD of ``2^[n]``."""
    if not 0 <= mask < (1 << n):
        raise PreconditionError(f"{mask:#x} is not a subset of [{n}]")
    free = _bracket(mask, n)
    ones = sum(1 for i in free if (mask >> i) & 1)
    low = mask
    for i in free:
        low &= ~(1 << i)
    return low, ones


def scd_chain(mask: int, n: int) -> list[int]:
    """The whole symmetric chain through ``mask``, ascending."""
    low, _ = scd_chain_of(mask, n)
    out = [low]
    for i in _bracket(low, n):
        out.append(out[-1] | (1 << i))
    return out


def symmetric_chain_decomposition(n: int) -> list[list[int]]:
    """All symmetric chains of ``2^[n]`` sorted by their minimum mask."""
    if not 0 <= n <= MAX_EXPLICIT_N:
        raise PreconditionError(f"explicit SCD needs 0 <= n <= {MAX_EXPLICIT_N}, got {n}")
    chains = []
    for mask in range(1 << n):
        free = _bracket(mask, n)
        if all(not (mask >> i) & 1 for i in free):
            chains.append(scd_chain(mask, n))
    return chains


# --------------------------------------------------------------------------
# chain partitions


@dataclass
class ChainPartition:
    """Chains of ``2^[host_n]``; ``chains[0]`` is the exceptional ``C_1``."""

    host_n: int
    h: int
    chains: list[list[int]]
    _chain_id: np.ndarray | None = field(default=None, repr=False)
    _position: np.ndarray | None = field(default=None, repr=False)

    @property
    def r(self) -> int:
        return len(self.chains)

    def sizes(self) -> list[int]:
        return [len(c) for c in self.chains]

    def _build_index(self) -> None:
        size = 1 << self.host_n
        cid = np.full(size, -1, dtype=np.int64)
        pos = np.full(size, -1, dtype=np.int64)
        for i, c in enumerate(self.chains):
            arr = np.asarray(c, dtype=np.int64)
            cid[arr] = i
            pos[arr] = np.arange(len(c))
        self._chain_id, self._position = cid, pos

    def chain_of(self, x: int) -> tuple[int, int]:
        """``(chain_id, index_within_chain)`` via table lookup."""
        if not 0 <= x < (1 << self.host_n):
            raise PreconditionError(f"{x:#x} is not a subset of [{self.host_n}]")
        if self._chain_id is None:
            self._build_index()
        c = int(self._chain_id[x])
        if c < 0:
            raise PreconditionError(f"{x:#x} is not covered by the partition")
        return c, int(self._position[x])


def chain_of(x: int, partition: ChainPartition) -> tuple[int, int]:
    return partition.chain_of(x)


def chain_count(n: int, h: int) -> tuple[int, int]:
    """``(r, |C_1|)`` forced by the size contract."""
    e = (1 << n) % h
    first = h + e
    return 1 + ((1 << n) - first) // h, first


def width(n: int) -> int:
    return math.comb(n, n // 2)


def check_feasible(n: int, h: int) -> None:
    """Raise :class:`Infeasible` when a necessary condition already fails."""
    r, first = chain_count(n, h)
    if h > n + 1 or first > n + 1:
        raise Infeasible("size", f"a chain of size {max(h, first)} does not fit in 2^[{n}] (max {n + 1})")
    if r < width(n):
        raise Infeasible(
            "width",
            f"level {n // 2} of 2^[{n}] is an antichain of {width(n)} elements "
            f"but the size contract allows only r={r} chains",
        )


def uniform_chain_partition(n: int, h: int, *, seed: int = 0, use_search: bool = True) -> ChainPartition:
    """Partition ``2^[n]`` into chains with ``h <= |C_1| < 2h`` and the rest of size ``h``.

    Raises :class:`Infeasible` with a ``width``/``size`` certificate when a
    counting argument rules the partition out, ``exhausted`` when exact search
    refutes it, and ``heuristic`` when the construction simply failed.
    """
    if h < 1:
        raise PreconditionError("chain size h must be positive")
    if not 0 <= n <= MAX_EXPLICIT_N:
        raise PreconditionError(f"explicit chain partitions need 0 <= n <= {MAX_EXPLICIT_N}, got {n}")
    check_feasible(n, h)
    r, first = chain_count(n, h)
    if h == 1:
        chains = [[x] for x in range(1 << n)]
    elif first == h and n > LIFT_ABOVE and (base := _liftable_base(n, h)) is not None:
        chains = product_lift(uniform_chain_partition(base, h, seed=seed).chains, base, n)
    else:
        chains = _layered_partition(n, h, first - h, seed)
        if chains is None and use_search and n <= 6:
            chains = _search_partition(n, h, first)
        if chains is None:
            raise Infeasible("heuristic", f"layered matching found no partition for n={n}, h={h}")
    cp = ChainPartition(n, h, _canonical_order(chains, h))
    report = verify_chain_partition(cp)
    if not report.passed:  # pragma: no cover - construction bug guard
        raise AssertionError(f"constructed chain partition failed verification: {report.violations[:3]}")
    return cp


def _liftable_base(n: int, h: int) -> int | None:
    for base in range(1, n):
        if (1 << base) % h == 0 and chain_count(base, h)[0] >= width(base) and h <= base + 1:
            return base
    return None


def product_lift(chains: list[list[int]], base: int, n: int) -> list[list[int]]:
    """Lift chains of ``2^[base]`` to ``2^[n] = 2^[base] x 2^[n - base]``.

    Every chain ``C`` and every ``y`` in the upper factor give the chain
    ``C x {y}``; sizes are preserved, so exact-size partitions lift exactly.
    """
    return [[x | (y << base) for x in c] for y in range(1 << (n - base)) for c in chains]


def _canonical_order(chains: list[list[int]], h: int) -> list[list[int]]:
    chains = sorted((sorted(c) for c in chains), key=lambda c: c[0])
    off = [i for i, c in enumerate(chains) if len(c) != h]
    if off:
        chains.insert(0, chains.pop(off[0]))
    return chains


def _popcounts(n: int) -> np.ndarray:
    x = np.arange(1 << n, dtype=np.int64)
    c = np.zeros_like(x)
    for i in range(n):
        c += (x >> i) & 1
    return c


def _layer_edges(lower: np.ndarray, upper: np.ndarray, lv_lo: np.ndarray, lv_up: np.ndarray, window: int = 2):
    """Inclusion edges from ``lower`` to ``upper``.

    Only level pairs where one side is among the ``window`` nearest levels of
    the other are generated; far pairs add edges without adding flexibility.
    """
    lo_levels, up_levels = np.unique(lv_lo), np.unique(lv_up)
    pairs = set()
    for j in lo_levels:
        above = up_levels[up_levels > j][:window]
        pairs.update((int(j), int(t)) for t in above)
    for t in up_levels:
        below = lo_levels[lo_levels < t][-window:]
        pairs.update((int(j), int(t)) for j in below)
    rows, cols = [], []
    for j, t in sorted(pairs):
        xi = np.nonzero(lv_lo == j)[0]
        yi = np.nonzero(lv_up == t)[0]
        ys = upper[yi]
        for s in range(0, xi.size, 1024):
            chunk = xi[s : s + 1024]
            hit = (lower[chunk][:, None] & ~ys[None, :]) == 0
            a, b = np.nonzero(hit)
            rows.append(chunk[a])
            cols.append(yi[b])
    if not rows:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(rows), np.concatenate(cols)


def _layered_partition(n: int, h: int, extra: int, seed: int) -> list[list[int]] | None:
    full = (1 << n) - 1
    # the extra elements of C_1 sit on top of one layered chain whose top is `anchor`
    top = [full ^ ((1 << j) - 1) for j in range(extra)]
    anchor = full ^ ((1 << extra) - 1) if extra else None
    levels = _popcounts(n)
    keep = np.ones(1 << n, dtype=bool)
    keep[top] = False
    pool = np.nonzero(keep)[0]
    r = pool.size // h
    rng = np.random.default_rng(seed)

    for strategy in range(LAYER_STRATEGIES):
        if strategy == 0:
            tie = pool.copy()
        elif strategy == 1:
            tie = -pool
        else:
            tie = rng.permutation(pool.size)
        tie = tie.astype(np.int64)
        if anchor is not None:
            tie[pool == anchor] = np.iinfo(np.int64).max
        order = pool[np.lexsort((tie, levels[pool]))]
        layers = [order[k * r : (k + 1) * r].copy() for k in range(h)]
        if anchor is not None and anchor not in set(layers[-1].tolist()):
            return None
        links = _link_layers(layers, levels, anchor, rng)
        if links is None:
            continue
        chains = []
        for start in range(r):
            c = [int(layers[0][start])]
            j = start
            for k, match in enumerate(links):
                j = int(match[j])
                c.append(int(layers[k + 1][j]))
            chains.append(c)
        if anchor is not None:
            for c in chains:
                if c[-1] == anchor:
                    c.extend(reversed(top))
                    break
        return chains
    return None


def _match_layers(lo: np.ndarray, up: np.ndarray, levels: np.ndarray) -> np.ndarray:
    a, b = _layer_edges(lo, up, levels[lo], levels[up])
    graph = csr_matrix((np.ones(a.size, dtype=np.int8), (a, b)), shape=(lo.size, up.size))
    return maximum_bipartite_matching(graph, perm_type="column")


def _link_layers(layers, levels, anchor, rng, rounds: int = REPAIR_ROUNDS):
    """Perfect matchings between consecutive layers, repairing by swaps.

    When a matching is deficient, unmatched elements of the lower layer are
    exchanged with unmatched elements of the same level in the upper layer.
    """
    links: list = [None] * (len(layers) - 1)
    for _ in range(rounds):
        bad = None
        for k in range(len(links)):
            if links[k] is None:
                links[k] = _match_layers(layers[k], layers[k + 1], levels)
            if (links[k] < 0).any():
                bad = k
                break
        if bad is None:
            return links
        m = links[bad]
        lo, up = layers[bad], layers[bad + 1]
        free_lo = np.nonzero(m < 0)[0]
        taken = np.zeros(up.size, dtype=bool)
        taken[m[m >= 0]] = True
        free_up = np.nonzero(~taken)[0]
        swapped = False
        for lev in np.unique(levels[lo[free_lo]]):
            xs = free_lo[levels[lo[free_lo]] == lev]
            ys = free_up[levels[up[free_up]] == lev]
            ys = ys[up[ys] != anchor] if anchor is not None else ys
            if not ys.size:
                # fall back to any same-level element of the upper layer
                ys = np.nonzero((levels[up] == lev) & (up != (anchor if anchor is not None else -1)))[0]
                ys = rng.permutation(ys)
            for x, y in zip(xs, ys):
                lo[x], up[y] = up[y], lo[x]
                swapped = True
        if not swapped:
            return None
        for k in (bad - 1, bad, bad + 1):
            if 0 <= k < len(links):
                links[k] = None
    return None


def all_chains(n: int, size: int) -> list[tuple[int, ...]]:
    """Every chain of ``size`` elements in ``2^[n]`` (small ``n`` only)."""
    out: list[tuple[int, ...]] = []

    def grow(c):
        if len(c) == size:
            out.append(tuple(c))
            return
        last = c[-1]
        rest = ~last & ((1 << n) - 1)
        sub = rest
        while sub:
            grow(c + [last | sub])
            sub = (sub - 1) & rest

    for x in range(1 << n):
        grow([x])
    return out


def _search_partition(n: int, h: int, first: int) -> list[list[int]] | None:
    """Exact cover over all chains; the column ``"C1"`` forces one chain of size ``first``."""
    rows: dict = {}
    for c in all_chains(n, h):
        rows[(0,) + c] = list(c)
    if first != h:
        for c in all_chains(n, first):
            rows[(1,) + c] = list(c) + ["C1"]
    columns = list(range(1 << n)) + (["C1"] if first != h else [])
    if len(rows) > 2 * 10**5:
        raise BudgetExceeded(f"{len(rows)} candidate chains is too many for exact search")
    sol = solve_exact_cover(columns, rows)
    if sol is None:
        raise Infeasible("exhausted", f"exact cover over all chains of 2^[{n}] found no partition for h={h}")
    return [list(key[1:]) for key in sol[0]]


def search_chain_partition(n: int, h: int) -> ChainPartition:
    """Exact-cover construction, independent of the layered heuristic (tiny ``n``)."""
    r, first = chain_count(n, h)
    if h > n + 1 or first > n + 1:
        raise Infeasible("size", "chain longer than n + 1")
    chains = _search_partition(n, h, first)
    return ChainPartition(n, h, _canonical_order(chains, h))

