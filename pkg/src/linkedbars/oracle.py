"""Exhaustive enumeration of layouts and the brute-force optimum."""
from __future__ import annotations

import itertools
import math
from typing import Iterator

import numpy as np

from .cost import ChartLayout, vertical_length
from .exceptions import BudgetExceeded
from .model import LEFT, RIGHT, LinkTable, SideSequences, WeightedGraph

DEFAULT_BUDGET = 10**7


def bar_merges(n_left: int, n_right: int) -> list[tuple[tuple[str, int], ...]]:
    """All merges of one bar, bottom to top, in lexicographic order (``L`` < ``R``)."""
    out = []
    for lpos in itertools.combinations(range(n_left + n_right), n_left):
        lset = set(lpos)
        li = ri = 0
        merge = []
        for slot in range(n_left + n_right):
            if slot in lset:
                merge.append((LEFT, li))
                li += 1
            else:
                merge.append((RIGHT, ri))
                ri += 1
        out.append(tuple(merge))
    return out


def count_layouts(seq: SideSequences) -> int:
    return math.prod(math.comb(seq.degree(j), len(seq.left[j])) for j in range(seq.n))


def _check_budget(seq: SideSequences, budget: int) -> int:
    count = count_layouts(seq)
    if count > budget:
        raise BudgetExceeded(f"{count} layouts exceed the budget of {budget}", count)
    return count


def _stacking(seq, bar, merge):
    return tuple(seq.left[bar][i] if s == LEFT else seq.right[bar][i] for s, i in merge)


def enumerate_layouts(g: WeightedGraph, seq: SideSequences, budget: int = DEFAULT_BUDGET) -> Iterator[ChartLayout]:
    """Yield every valid layout exactly once."""
    _check_budget(seq, budget)
    per_bar = [[_stacking(seq, j, mg) for mg in bar_merges(len(seq.left[j]), len(seq.right[j]))]
               for j in range(g.n)]
    for combo in itertools.product(*per_bar):
        yield ChartLayout(tuple(combo))


def brute_force(g: WeightedGraph, seq: SideSequences, table: LinkTable,
                budget: int = DEFAULT_BUDGET) -> tuple[ChartLayout, float]:
    """Exact minimum over all layouts.

    Every link is priced with the raw vertical-length formula on both placed
    endpoints, independently of its classification.  Ties resolve to the
    lexicographically smallest combination of per-bar merges.
    """
    _check_budget(seq, budget)
    merges = [bar_merges(len(seq.left[j]), len(seq.right[j])) for j in range(g.n)]
    # positions[j][e]: per-merge position of edge e's block at bar j
    positions = []
    for j in range(g.n):
        pos = {}
        for mi, mg in enumerate(merges[j]):
            below = {LEFT: 0, RIGHT: 0}
            for side, i in mg:
                e = seq.left[j][i] if side == LEFT else seq.right[j][i]
                pos.setdefault(e, []).append(below[RIGHT if side == LEFT else LEFT])
                below[side] += 1
        positions.append({e: np.array(p) for e, p in pos.items()})

    free = [j for j in range(g.n) if len(merges[j]) > 1]
    axis = {j: a for a, j in enumerate(free)}
    shape = [len(merges[j]) for j in free]
    constant = 0.0
    terms = []
    for rec in table:
        u, v = rec.u, rec.v
        ys_u = np.array([seq.center(u, RIGHT, seq.right_index[rec.edge], i)
                         for i in range(len(seq.left[u]) + 1)])
        ys_v = np.array([seq.center(v, LEFT, seq.left_index[rec.edge], k)
                         for k in range(len(seq.right[v]) + 1)])
        yu = ys_u[positions[u][rec.edge]]
        yv = ys_v[positions[v][rec.edge]]
        cost = np.array([[vertical_length(rec.H, a, b) for b in yv] for a in yu])
        dims = [j for j in (u, v) if j in axis]
        if not dims:
            constant += float(cost[0, 0])
            continue
        if u not in axis:
            cost = cost[0, :]
        elif v not in axis:
            cost = cost[:, 0]
        axes = [axis[j] for j in dims]
        if len(axes) == 2 and axes[0] > axes[1]:
            cost, axes = cost.T, axes[::-1]
        terms.append((cost, axes))

    def total_for(first):
        # Sum of all terms over the free axes, optionally with axis 0 fixed.
        dims = shape if first is None else shape[1:]
        offset = 0 if first is None else 1
        out = np.full(dims, constant)
        for cost, axes in terms:
            if first is not None and axes[0] == 0:
                cost = cost[first]
                axes = axes[1:]
            if not axes:
                out = out + float(cost)
                continue
            view = [1] * len(dims)
            for a, size in zip(axes, cost.shape):
                view[a - offset] = size
            out = out + cost.reshape(view)
        return out

    if not shape:
        best_idx = ()
        best = constant
    elif math.prod(shape) <= 10**6:
        arr = total_for(None)
        flat = int(np.argmin(arr))
        best_idx = np.unravel_index(flat, shape)
        best = float(arr.flat[flat])
    else:
        best = math.inf
        best_idx = None
        for first in range(shape[0]):
            arr = total_for(first)
            flat = int(np.argmin(arr))
            if arr.flat[flat] < best:
                best = float(arr.flat[flat])
                best_idx = (first,) + tuple(np.unravel_index(flat, shape[1:]))

    stackings = []
    for j in range(g.n):
        mi = int(best_idx[axis[j]]) if j in axis else 0
        stackings.append(_stacking(seq, j, merges[j][mi]))
    return ChartLayout(tuple(stackings), best, "brute"), best
