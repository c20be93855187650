"""Per-bar merge dynamic program and the solver for instances without dependent links."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .cost import ChartLayout, independent_costs
from .exceptions import PreconditionError
from .model import LEFT, RIGHT, LinkTable, SideSequences, WeightedGraph

TAKE_LEFT = 0
TAKE_RIGHT = 1


@dataclass
class MergeTable:
    """Minimal stacking costs ``D[p][q]`` of the first ``p`` left and ``q`` right blocks.

    ``choice[p][q]`` records which block sits on top in an optimal stacking.
    """

    D: list[list[float]]
    choice: list[list[int]]

    @property
    def cells(self) -> int:
        return len(self.D) * len(self.D[0])

    def backtrack(self, p: int, q: int) -> list[tuple[str, int]]:
        """Blocks of the optimal ``(p, q)`` stacking, bottom to top."""
        out = []
        choice = self.choice
        while p or q:
            if choice[p][q] == TAKE_LEFT:
                p -= 1
                out.append((LEFT, p))
            else:
                q -= 1
                out.append((RIGHT, q))
        out.reverse()
        return out


def merge_table(left_costs: Sequence[Sequence[float]], right_costs: Sequence[Sequence[float]]) -> MergeTable:
    """Fill the merge table.

    ``left_costs[i][k]`` is the cost of left block ``i`` with ``k`` right
    blocks below it, ``right_costs[j][k]`` that of right block ``j`` with
    ``k`` left blocks below.  Ties prefer the left block on top.
    """
    n_l = len(left_costs)
    n_r = len(right_costs)
    D = [[0.0] * (n_r + 1) for _ in range(n_l + 1)]
    choice = [[TAKE_LEFT] * (n_r + 1) for _ in range(n_l + 1)]
    row0 = D[0]
    ch0 = choice[0]
    for q in range(1, n_r + 1):
        row0[q] = row0[q - 1] + right_costs[q - 1][0]
        ch0[q] = TAKE_RIGHT
    for p in range(1, n_l + 1):
        lc = left_costs[p - 1]
        prev = D[p - 1]
        row = D[p]
        ch = choice[p]
        row[0] = prev[0] + lc[0]
        for q in range(1, n_r + 1):
            a = prev[q] + lc[q]
            b = row[q - 1] + right_costs[q - 1][p]
            if a <= b:
                row[q] = a
            else:
                row[q] = b
                ch[q] = TAKE_RIGHT
    return MergeTable(D, choice)


def solve_bar(left_costs, right_costs) -> tuple[list[tuple[str, int]], float]:
    """Optimal merge of one bar given per-block placement costs.

    Returns the stacking as ``(side, index)`` pairs, bottom to top, and its cost.
    """
    table = merge_table(left_costs, right_costs)
    p, q = len(left_costs), len(right_costs)
    return table.backtrack(p, q), table.D[p][q]


def bar_cost_vectors(seq: SideSequences, table: LinkTable, bar: int, overrides=None):
    """Placement-cost vectors for all blocks of ``bar``.

    Independent blocks cost ``|t - y|``; ``overrides`` maps edge index to a
    ready-made vector (used for dependent blocks).  Dependent blocks without an
    override raise :class:`PreconditionError`.
    """
    overrides = overrides or {}
    out = []
    for side in (seq.left[bar], seq.right[bar]):
        vecs = []
        for e in side:
            if e in overrides:
                vecs.append(overrides[e])
            elif table[e].dependent:
                raise PreconditionError(f"edge {e} at bar {bar} is a dependent link", [e])
            else:
                vecs.append(independent_costs(table[e], seq, bar))
        out.append(vecs)
    return out[0], out[1]


def to_stacking(seq: SideSequences, bar: int, order: Sequence[tuple[str, int]]) -> tuple[int, ...]:
    return tuple(seq.left[bar][i] if side == LEFT else seq.right[bar][i] for side, i in order)


def solve_independent(g: WeightedGraph, seq: SideSequences, table: LinkTable) -> ChartLayout:
    """Optimal layout for an instance whose links are all independent."""
    dependent = table.dependent_edges
    if dependent:
        raise PreconditionError(
            f"instance has {len(dependent)} dependent link(s); the per-bar solver needs none",
            dependent)
    stackings = []
    total = 0.0
    cells = 0
    for bar in range(g.n):
        left_costs, right_costs = bar_cost_vectors(seq, table, bar)
        mt = merge_table(left_costs, right_costs)
        p, q = len(left_costs), len(right_costs)
        stackings.append(to_stacking(seq, bar, mt.backtrack(p, q)))
        total += mt.D[p][q]
        cells += mt.cells
    return ChartLayout(tuple(stackings), total, "no-dl", {"cells": cells})


def constrained_costs(n_pos: int, fixed: int) -> list[float]:
    """Cost vector pinning a block to position ``fixed``."""
    vec = [math.inf] * n_pos
    vec[fixed] = 0.0
    return vec
