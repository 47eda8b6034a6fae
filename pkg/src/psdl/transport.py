"""Volume-weighted optimal transport between two layouts of one template.

Objects may only be matched within their own category (exact name
equality), so the global optimum decomposes into independent per-category
assignment problems, each solved exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import TemplateMismatchError
from .interp import Layout, ObjectState


@dataclass(frozen=True)
class Matching:
    """A category-preserving bijection between two layouts' objects.

    pairs maps object indices of the first layout to indices of the
    second; cost is the volume-weighted transport cost in m * m^3.
    """

    pairs: tuple[tuple[int, int], ...]
    cost: float


def _volume(o: ObjectState) -> float:
    return o.width * o.depth * o.height


def _categories(layout: Layout) -> dict[str, list[int]]:
    cats: dict[str, list[int]] = {}
    for i, o in enumerate(layout.objects):
        cats.setdefault(o.name, []).append(i)
    return cats


def _check_same_template(a: dict[str, list[int]], b: dict[str, list[int]]) -> None:
    if set(a) != set(b) or any(len(a[k]) != len(b[k]) for k in a):
        raise TemplateMismatchError("layouts do not share the same object multiset")


def _category_cost(l: Layout, l0: Layout, idx: list[int], idx0: list[int]) -> np.ndarray:
    """Cost matrix Vol(o) * ||center(o) - center(o0)||; Vol from the first layout."""
    ca = np.array([[l.objects[i].center.x, l.objects[i].center.y, l.objects[i].center.z]
                   for i in idx])
    cb = np.array([[l0.objects[i].center.x, l0.objects[i].center.y, l0.objects[i].center.z]
                   for i in idx0])
    vols = np.array([_volume(l.objects[i]) for i in idx])
    dists = np.sqrt(((ca[:, None, :] - cb[None, :, :]) ** 2).sum(axis=-1))
    return vols[:, None] * dists


def ot_distance(l: Layout, l0: Layout) -> float:
    """Minimum volume-weighted transport cost between the two layouts.

    Zero iff every object of l sits exactly where some same-category
    object of l0 sits. Raises TemplateMismatchError when the layouts do
    not contain the same objects.
    """
    cats, cats0 = _categories(l), _categories(l0)
    _check_same_template(cats, cats0)
    total = 0.0
    for name in sorted(cats):
        idx, idx0 = cats[name], cats0[name]
        if len(idx) == 1:
            total += float(_category_cost(l, l0, idx, idx0)[0, 0])
            continue
        cost = _category_cost(l, l0, idx, idx0)
        rows, cols = linear_sum_assignment(cost)
        total += float(cost[rows, cols].sum())
    return total


def ot_matching(l: Layout, l0: Layout) -> Matching:
    """Optimal matching with deterministic (lexicographically smallest) ties."""
    cats, cats0 = _categories(l), _categories(l0)
    _check_same_template(cats, cats0)
    pairs: list[tuple[int, int]] = []
    total = 0.0
    for name in sorted(cats):
        idx, idx0 = cats[name], cats0[name]
        cost = _category_cost(l, l0, idx, idx0)
        assignment, c = min_cost_matching(cost)
        total += c
        pairs.extend((idx[r], idx0[assignment[r]]) for r in range(len(idx)))
    pairs.sort()
    return Matching(tuple(pairs), total)


def _lsa_cost(cost: np.ndarray) -> float:
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].sum())


def min_cost_matching(cost) -> tuple[list[int], float]:
    """Exact minimum-cost perfect assignment on a square nonnegative matrix.

    Returns (assignment, cost) where assignment[row] = column. Among
    cost-equal optima the lexicographically smallest assignment wins, so
    the result is deterministic even for degenerate matrices.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {cost.shape}")
    if cost.size and (not np.isfinite(cost).all() or (cost < 0).any()):
        raise ValueError("cost matrix must be finite and nonnegative")
    n = cost.shape[0]
    if n == 0:
        return [], 0.0

    remaining_rows = list(range(n))
    remaining_cols = list(range(n))
    total = _lsa_cost(cost)
    assignment = [-1] * n
    for r in range(n):
        remaining_rows.remove(r)
        options = []
        best = float("inf")
        for c in remaining_cols:
            rest_cols = [x for x in remaining_cols if x != c]
            rest = _lsa_cost(cost[np.ix_(remaining_rows, rest_cols)]) if remaining_rows else 0.0
            val = cost[r, c] + rest
            options.append((c, val, rest))
            best = min(best, val)
        tol = 1e-12 * (1.0 + abs(best))
        for c, val, rest in options:
            if val <= best + tol:
                assignment[r] = c
                remaining_cols.remove(c)
                break
    return assignment, total
