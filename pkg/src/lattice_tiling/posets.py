"""Finite posets: grids, Boolean lattices, chains, products and copy search.

Every poset exposes its elements as *labels* (coordinate tuples for grids,
bit masks for Boolean lattices, plain integers otherwise) together with a
fixed bijection ``label <-> index`` onto ``range(size)``.

Grid elements are 1-based coordinate tuples indexed row-major with the last
coordinate varying fastest.  A Boolean lattice element is a mask whose bit
``i - 1`` marks ``i in [n]``; its index is the mask itself, which makes
``boolean_lattice(n)`` agree elementwise with ``grid_poset((2,) * n)`` when
coordinate ``k`` is ``1 + bit (n - k)`` (see :func:`mask_to_coords`).
"""

from __future__ import annotations

import math
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError

#: Largest host whose elements may be enumerated explicitly.
MAX_ELEMENTS = 1 << 24
#: Largest host for which a dense relation matrix is built.
MAX_MATRIX = 1 << 13
#: Default node budget for embedding / copy searches.
SEARCH_BUDGET = 10**7


class Poset:
    """Base class.  Subclasses implement ``size``, ``label``, ``index``, ``le``."""

    name: str = "poset"
    size: int

    def label(self, i: int) -> Hashable:
        raise NotImplementedError

    def index(self, label: Hashable) -> int:
        raise NotImplementedError

    def le(self, x: Hashable, y: Hashable) -> bool:
        """``x <= y`` on labels."""
        raise NotImplementedError

    def labels(self) -> list:
        if self.size > MAX_ELEMENTS:
            raise BudgetExceeded(f"{self.name}: {self.size} elements exceeds {MAX_ELEMENTS}")
        return [self.label(i) for i in range(self.size)]

    def __len__(self) -> int:
        return self.size

    def __contains__(self, x) -> bool:
        try:
            self.index(x)
        except (PreconditionError, TypeError, ValueError):
            return False
        return True

    @cached_property
    def matrix(self) -> np.ndarray:
        """Dense ``leq`` matrix, ``matrix[i, j]`` iff ``label(i) <= label(j)``."""
        if self.size > MAX_MATRIX:
            raise BudgetExceeded(f"{self.name}: relation matrix of {self.size} elements is too large")
        return self.induced_matrix(self.labels())

    def induced_matrix(self, labels: Sequence) -> np.ndarray:
        k = len(labels)
        m = np.zeros((k, k), dtype=bool)
        for i, x in enumerate(labels):
            for j, y in enumerate(labels):
                m[i, j] = self.le(x, y)
        return m

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} |P|={self.size}>"


class FinitePoset(Poset):
    """A poset given by an explicit reflexive-transitive relation matrix."""

    def __init__(self, matrix, name: str = "poset", labels: Sequence | None = None):
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError("relation matrix must be square")
        self.size = m.shape[0]
        self.name = name
        self._labels = list(range(self.size)) if labels is None else list(labels)
        if len(self._labels) != self.size:
            raise PreconditionError("label count does not match matrix")
        self._index = {x: i for i, x in enumerate(self._labels)}
        m = m.copy()
        m.setflags(write=False)
        self.__dict__["matrix"] = m

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[tuple[int, int]], name: str = "poset") -> "FinitePoset":
        """Build from covering pairs ``(i, j)`` meaning ``i < j``; closes transitively."""
        m = np.eye(n, dtype=bool)
        for i, j in covers:
            if not (0 <= i < n and 0 <= j < n):
                raise PreconditionError(f"cover ({i}, {j}) out of range for n={n}")
            m[i, j] = True
        m = transitive_closure(m)
        p = cls(m, name)
        check_partial_order(p.matrix)
        return p

    def label(self, i: int):
        return self._labels[i]

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PreconditionError(f"{label!r} is not an element of {self.name}") from None

    def labels(self) -> list:
        return list(self._labels)

    def le(self, x, y) -> bool:
        return bool(self.matrix[self.index(x), self.index(y)])

    def induced_matrix(self, labels: Sequence) -> np.ndarray:
        idx = [self.index(x) for x in labels]
        return self.matrix[np.ix_(idx, idx)]

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs of the order, as index pairs."""
        m = self.matrix
        strict = m & ~np.eye(self.size, dtype=bool)
        two_step = (strict.astype(np.int32) @ strict.astype(np.int32)) > 0
        cov = strict & ~two_step
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cov))]


class GridPoset(Poset):
    """The grid ``[a_1] x ... x [a_d]`` with the componentwise order."""

    def __init__(self, dims: Sequence[int], name: str | None = None):
        dims = tuple(int(a) for a in dims)
        if not dims:
            raise PreconditionError("grid needs at least one side")
        if any(a < 1 for a in dims):
            raise PreconditionError(f"grid sides must be positive, got {dims}")
        self.dims = dims
        self.size = math.prod(dims)
        self.name = name or "grid:" + "x".join(map(str, dims))
        strides = []
        s = 1
        for a in reversed(dims):
            strides.append(s)
            s *= a
        self._strides = tuple(reversed(strides))

    @property
    def d(self) -> int:
        return len(self.dims)

    def label(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.size:
            raise PreconditionError(f"index {i} out of range")
        out = []
        for s, a in zip(self._strides, self.dims):
            q, i = divmod(i, s)
            out.append(q + 1)
        return tuple(out)

    def index(self, coord) -> int:
        if len(coord) != len(self.dims):
            raise PreconditionError(f"{coord!r} has wrong dimension for {self.name}")
        i = 0
        for x, a, s in zip(coord, self.dims, self._strides):
            if not 1 <= x <= a:
                raise PreconditionError(f"{coord!r} is outside {self.name}")
            i += (x - 1) * s
        return i

    def labels(self) -> list:
        if self.size > MAX_ELEMENTS:
            raise BudgetExceeded(f"{self.name}: too many elements")
        return list(product(*(range(1, a + 1) for a in self.dims)))

    def le(self, x, y) -> bool:
        return all(a <= b for a, b in zip(x, y))

    def induced_matrix(self, labels: Sequence) -> np.ndarray:
        c = np.asarray(labels, dtype=np.int64).reshape(len(labels), -1)
        return np.all(c[:, None, :] <= c[None, :, :], axis=2)


class BooleanLattice(Poset):
    """``2^[n]`` ordered by inclusion; elements are integer masks."""

    def __init__(self, n: int):
        if n < 0 or n > 128:
            raise PreconditionError(f"ground set size must be in [0, 128], got {n}")
        self.n = n
        self.size = 1 << n
        self.name = f"boolean:{n}"

    def label(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise PreconditionError(f"index {i} out of range")
        return i

    def index(self, mask) -> int:
        if not isinstance(mask, (int, np.integer)) or not 0 <= mask < self.size:
            raise PreconditionError(f"{mask!r} is not a subset of [{self.n}]")
        return int(mask)

    def labels(self) -> list:
        if self.size > MAX_ELEMENTS:
            raise BudgetExceeded(f"{self.name}: too many elements")
        return list(range(self.size))

    def le(self, x, y) -> bool:
        return x & ~y == 0

    def induced_matrix(self, labels: Sequence) -> np.ndarray:
        if self.n <= 63:
            a = np.asarray(labels, dtype=np.uint64)
            return (a[:, None] & ~a[None, :]) == 0
        return super().induced_matrix(labels)


def mask_to_coords(mask: int, n: int) -> tuple[int, ...]:
    """Grid coordinates of a mask under the index-preserving bijection."""
    return tuple(((mask >> (n - k)) & 1) + 1 for k in range(1, n + 1))


def coords_to_mask(coords: Sequence[int]) -> int:
    n = len(coords)
    return sum((x - 1) << (n - k) for k, x in enumerate(coords, start=1))


def popcount(x: int) -> int:
    return bin(x).count("1")


# --------------------------------------------------------------------------
# constructors


def grid_poset(dims: Sequence[int]) -> GridPoset:
    return GridPoset(dims)


def chain(k: int) -> GridPoset:
    if k < 1:
        raise PreconditionError("chain length must be positive")
    return GridPoset((k,), name=f"chain:{k}")


def antichain(k: int) -> FinitePoset:
    return FinitePoset(np.eye(k, dtype=bool), name=f"antichain:{k}")


def boolean_lattice(n: int) -> BooleanLattice:
    return BooleanLattice(n)


def diamond() -> FinitePoset:
    """Bottom, two incomparable middles, top: the lattice ``2^[2]``."""
    return FinitePoset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], name="diamond")


def s2k_poset(k: int) -> FinitePoset:
    """Two ``k``-element antichains with every bottom element below every top one."""
    if k < 1:
        raise PreconditionError("s2k needs k >= 1")
    m = np.eye(2 * k, dtype=bool)
    m[:k, k:] = True
    return FinitePoset(m, name=f"s2k:{k}")


def cartesian_product(p: Poset, q: Poset) -> FinitePoset:
    """``p x q`` with the product order; element ``(x, y)`` has index ``i * |q| + j``."""
    if p.size * q.size > MAX_MATRIX:
        raise BudgetExceeded(f"product of {p.size} and {q.size} elements exceeds the matrix budget")
    m = np.kron(p.matrix.astype(np.uint8), q.matrix.astype(np.uint8)).astype(bool)
    labels = [(x, y) for x in p.labels() for y in q.labels()]
    return FinitePoset(m, name=f"({p.name})x({q.name})", labels=labels)


# --------------------------------------------------------------------------
# order-theoretic helpers


def transitive_closure(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=bool) | np.eye(len(m), dtype=bool)
    # Warshall, vectorised over rows
    for k in range(len(m)):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return m


def check_partial_order(m: np.ndarray) -> None:
    """Raise :class:`PreconditionError` unless ``m`` is a partial order."""
    m = np.asarray(m, dtype=bool)
    if not m.diagonal().all():
        raise PreconditionError("relation is not reflexive")
    off = m & m.T & ~np.eye(len(m), dtype=bool)
    if off.any():
        raise PreconditionError("relation is not antisymmetric")
    mi = m.astype(np.int32)
    if ((mi @ mi > 0) & ~m).any():
        raise PreconditionError("relation is not transitive")


def is_partial_order(m: np.ndarray) -> bool:
    try:
        check_partial_order(m)
    except PreconditionError:
        return False
    return True


def minimal_elements(m: np.ndarray) -> list[int]:
    strict = m & ~np.eye(len(m), dtype=bool)
    return [int(i) for i in np.nonzero(~strict.any(axis=0))[0]]


def maximal_elements(m: np.ndarray) -> list[int]:
    strict = m & ~np.eye(len(m), dtype=bool)
    return [int(i) for i in np.nonzero(~strict.any(axis=1))[0]]


def has_unique_max_min(p: Poset) -> bool:
    m = p.matrix
    return len(minimal_elements(m)) == 1 and len(maximal_elements(m)) == 1


def heights(m: np.ndarray) -> np.ndarray:
    """Number of elements in a longest chain ending at each element."""
    n = len(m)
    strict = m & ~np.eye(n, dtype=bool)
    h = np.zeros(n, dtype=np.int64)
    # x < y implies down-degree(x) < down-degree(y): a linear extension
    for j in np.argsort(strict.sum(axis=0), kind="stable"):
        col = strict[:, j]
        h[j] = 1 + (h[col].max() if col.any() else 0)
    return h


def signatures(m: np.ndarray) -> np.ndarray:
    """Per-element isomorphism invariants: (down-degree, up-degree, height, depth)."""
    return np.stack([m.sum(axis=0), m.sum(axis=1), heights(m), heights(m.T)], axis=1)


# --------------------------------------------------------------------------
# embeddings and isomorphism


def iter_embeddings(
    pattern: np.ndarray,
    host: np.ndarray,
    *,
    exact: bool = False,
    budget: int = SEARCH_BUDGET,
    counter: list | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield injective maps ``f`` with ``pattern[i, j] == host[f(i), f(j)]``.

    Maps are produced in lexicographic order of ``(f(0), f(1), ...)``.  With
    ``exact`` the signatures must match exactly (use when sizes are equal).
    Exceeding ``budget`` search nodes raises :class:`BudgetExceeded`.
    """
    k, n = len(pattern), len(host)
    if k > n:
        return
    sp, sh = signatures(pattern), signatures(host)
    if exact:
        base = np.all(sh[None, :, :] == sp[:, None, :], axis=2)
    else:
        base = np.all(sh[None, :, :] >= sp[:, None, :], axis=2)
    f = [0] * k
    used = np.zeros(n, dtype=bool)
    nodes = counter if counter is not None else [0]

    def rec(i: int, allowed: np.ndarray):
        if i == k:
            yield tuple(f)
            return
        cand = allowed[i] & ~used
        for v in np.nonzero(cand)[0]:
            nodes[0] += 1
            if nodes[0] > budget:
                raise BudgetExceeded(f"embedding search exceeded {budget} nodes")
            v = int(v)
            f[i] = v
            used[v] = True
            nxt = allowed.copy()
            nxt[i + 1 :] &= host[v][None, :] == pattern[i, i + 1 :][:, None]
            nxt[i + 1 :] &= host[:, v][None, :] == pattern[i + 1 :, i][:, None]
            yield from rec(i + 1, nxt)
            used[v] = False

    yield from rec(0, base)


def find_isomorphism(a: np.ndarray, b: np.ndarray) -> tuple[int, ...] | None:
    """A permutation ``p`` with ``a[i, j] == b[p[i], p[j]]``, or ``None``."""
    a, b = np.asarray(a, dtype=bool), np.asarray(b, dtype=bool)
    if a.shape != b.shape or a.sum() != b.sum():
        return None
    return next(iter_embeddings(a, b, exact=True), None)


def is_isomorphic(p: Poset, q: Poset) -> bool:
    return p.size == q.size and find_isomorphism(p.matrix, q.matrix) is not None


_iso_cache: dict[tuple, bool] = {}


def _matrix_is_copy(sub: np.ndarray, target: np.ndarray) -> bool:
    key = (target.shape[0], target.tobytes(), sub.tobytes())
    hit = _iso_cache.get(key)
    if hit is None:
        hit = find_isomorphism(target, sub) is not None
        if len(_iso_cache) > 100_000:
            _iso_cache.clear()
        _iso_cache[key] = hit
    return hit


def is_copy(subset: Sequence, host: Poset, target: Poset) -> bool:
    """True iff the order induced by ``host`` on ``subset`` is isomorphic to ``target``."""
    subset = list(subset)
    idx = [host.index(x) for x in subset]  # raises on foreign labels
    if len(set(idx)) != len(idx) or len(subset) != target.size:
        return False
    order = sorted(range(len(subset)), key=idx.__getitem__)
    sub = host.induced_matrix([subset[i] for i in order])
    return _matrix_is_copy(sub, target.matrix)


def find_copy_map(subset: Sequence, host: Poset, target: Poset) -> tuple | None:
    """Labels of ``subset`` listed in ``target`` element order, or ``None``."""
    subset = list(subset)
    if len(subset) != target.size:
        return None
    sub = host.induced_matrix(subset)
    p = find_isomorphism(target.matrix, sub)
    return None if p is None else tuple(subset[j] for j in p)


def enumerate_copies(host: Poset, target: Poset, budget: int = SEARCH_BUDGET) -> list[tuple]:
    """All copies of ``target`` in ``host`` as label tuples sorted by host index.

    Raises :class:`BudgetExceeded` rather than returning a partial list.
    """
    labels = host.labels()
    seen = set()
    for emb in iter_embeddings(target.matrix, host.matrix, budget=budget):
        seen.add(tuple(sorted(emb)))
    return [tuple(labels[i] for i in c) for c in sorted(seen)]


def minimal_cube_dim(p: Poset) -> tuple[int, tuple[int, ...]]:
    """Smallest ``d`` with a copy of ``p`` in ``2^[d]``, plus the least embedding.

    The witness lists the mask assigned to each element of ``p`` in order.
    """
    if p.size < 1:
        raise PreconditionError("empty poset")
    d = max(0, (p.size - 1).bit_length())
    while True:
        host = BooleanLattice(d)
        emb = next(iter_embeddings(p.matrix, host.matrix), None)
        if emb is not None:
            return d, tuple(emb)
        d += 1


def maximal_chains(p: Poset) -> list[tuple[int, ...]]:
    """All maximal chains (as index tuples); brute force, small posets only."""
    m = p.matrix
    n = len(m)
    strict = m & ~np.eye(n, dtype=bool)
    two = (strict.astype(np.int32) @ strict.astype(np.int32)) > 0
    cov = strict & ~two
    out = []

    def walk(path):
        nxt = np.nonzero(cov[path[-1]])[0]
        if not nxt.size:
            out.append(tuple(path))
        for j in nxt:
            walk(path + [int(j)])

    for s in minimal_elements(m):
        walk([s])
    return out
