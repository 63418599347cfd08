"""Knuth's Algorithm X over dict-of-sets, with an optional leftover allowance."""

from __future__ import annotations

from typing import Hashable, Mapping, Sequence

from .errors import BudgetExceeded

EXACT_COVER_BUDGET = 5 * 10**6


def solve_exact_cover(
    columns: Sequence[Hashable],
    rows: Mapping[Hashable, Sequence[Hashable]],
    *,
    leftover: int = 0,
    budget: int = EXACT_COVER_BUDGET,
) -> tuple[list, list] | None:
    """Pick rows covering every column exactly once.

    Up to ``leftover`` columns may stay uncovered.  Columns are chosen
    most-constrained first, ties broken by position in ``columns``; rows are
    tried in sorted key order, so the first solution found is reproducible.

    Returns ``(chosen_row_keys, uncovered_columns)`` or ``None`` when the
    search is exhausted.  Raises :class:`BudgetExceeded` after ``budget`` nodes.
    """
    order = {c: i for i, c in enumerate(columns)}
    X: dict = {c: set() for c in columns}
    Y: dict = {}
    for key in sorted(rows):
        cols = list(rows[key])
        if any(c not in X for c in cols):
            continue
        Y[key] = cols
        for c in cols:
            X[c].add(key)

    solution: list = []
    skipped: list = []
    nodes = [0]

    def select(r):
        removed = []
        for j in Y[r]:
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].remove(i)
            removed.append(X.pop(j))
        return removed

    def deselect(r, removed):
        for j in reversed(Y[r]):
            X[j] = removed.pop()
            for i in X[j]:
                for k in Y[i]:
                    if k != j:
                        X[k].add(i)

    def skip(c):
        rows_c = X.pop(c)
        for i in rows_c:
            for k in Y[i]:
                if k != c:
                    X[k].discard(i)
        return rows_c

    def unskip(c, rows_c):
        X[c] = rows_c
        for i in rows_c:
            for k in Y[i]:
                if k != c:
                    X[k].add(i)

    def search() -> bool:
        if not X:
            return True
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"exact cover exceeded {budget} nodes")
        c = min(X, key=lambda col: (len(X[col]), order[col]))
        for r in sorted(X[c]):
            solution.append(r)
            removed = select(r)
            if search():
                return True
            deselect(r, removed)
            solution.pop()
        if len(skipped) < leftover:
            skipped.append(c)
            rows_c = skip(c)
            if search():
                return True
            unskip(c, rows_c)
            skipped.pop()
        return False

    if search():
        return list(solution), list(skipped)
    return None
