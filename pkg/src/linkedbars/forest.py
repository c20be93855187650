"""Optimal stacking when the dependent links form a forest.

Every tree is processed bottom-up.  For a non-root bar the parent link's block
splits the bar into a lower and an upper part whose merge tables are filled
independently; ``P[bar][k]`` is the cheapest cost of the bar's subtree when the
parent-link block has ``k`` opposite-side blocks below it.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cost import ChartLayout, link_cost_matrix
from .exceptions import PreconditionError
from .merge import MergeTable, bar_cost_vectors, merge_table
from .model import LEFT, RIGHT, LinkTable, SideSequences, WeightedGraph


@dataclass
class DependencyForest:
    """Rooted forest over all bars; bars without selected edges are singleton trees."""

    roots: list[int]
    parent: list[int]
    parent_edge: list[int]
    children: list[list[tuple[int, int]]]
    order: list[int]

    def tree_sizes(self) -> dict[int, int]:
        root_of = {}
        for b in reversed(self.order):
            root_of[b] = b if self.parent[b] < 0 else root_of[self.parent[b]]
        sizes = {}
        for r in root_of.values():
            sizes[r] = sizes.get(r, 0) + 1
        return sizes


def find_cycle(n: int, ends, edges) -> list[int] | None:
    """Edge indices of some cycle among ``edges``, or ``None`` if they form a forest."""
    parent = list(range(n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    adjacency = [[] for _ in range(n)]
    for e in edges:
        u, v = ends[e]
        ru, rv = root(u), root(v)
        if ru == rv:
            return _path_edges(adjacency, u, v) + [e]
        parent[ru] = rv
        adjacency[u].append((v, e))
        adjacency[v].append((u, e))
    return None


def _path_edges(adjacency, src, dst) -> list[int]:
    via = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            break
        for y, e in adjacency[x]:
            if y not in via:
                via[y] = (x, e)
                queue.append(y)
    path = []
    while via[dst] is not None:
        dst, e = via[dst]
        path.append(e)
    return path[::-1]


def rooted_forest(n: int, ends, edges) -> DependencyForest:
    """Root each tree of the acyclic edge set at its lowest-index bar."""
    adjacency = [[] for _ in range(n)]
    for e in edges:
        u, v = ends[e]
        adjacency[u].append((v, e))
        adjacency[v].append((u, e))
    parent = [-1] * n
    parent_edge = [-1] * n
    children = [[] for _ in range(n)]
    seen = [False] * n
    roots = []
    bfs = []
    for r in range(n):
        if seen[r]:
            continue
        roots.append(r)
        seen[r] = True
        queue = deque([r])
        while queue:
            x = queue.popleft()
            bfs.append(x)
            for y, e in sorted(adjacency[x]):
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    parent_edge[y] = e
                    children[x].append((e, y))
                    queue.append(y)
    return DependencyForest(roots, parent, parent_edge, children, bfs[::-1])


def dl_forest(g: WeightedGraph, table: LinkTable) -> DependencyForest:
    """The dependent-link forest; raises :class:`PreconditionError` with a cycle otherwise."""
    dl = table.dependent_edges
    cycle = find_cycle(g.n, g.edges, dl)
    if cycle is not None:
        raise PreconditionError("dependent links contain a cycle", cycle)
    return rooted_forest(g.n, g.edges, dl)


def _reversed_costs(vecs):
    return [v[::-1] for v in reversed(vecs)]


@dataclass
class BarTables:
    side: str | None  # side of the parent-link block, None at a root
    split: int  # index of the parent-link block in its side
    down: MergeTable
    up: MergeTable | None
    child_choice: dict  # edge -> best child position per own position


class ForestDP:
    """Bottom-up dynamic program over a :class:`DependencyForest`."""

    def __init__(self, g: WeightedGraph, seq: SideSequences, table: LinkTable, forest: DependencyForest):
        self.g = g
        self.seq = seq
        self.table = table
        self.forest = forest
        self.P: list[list[float]] = [[] for _ in range(g.n)]
        self.tables: list[BarTables | None] = [None] * g.n
        self.cells = 0

    def run(self) -> float:
        for bar in self.forest.order:
            self._process(bar)
        return sum(self.P[r][0] for r in self.forest.roots)

    def _child_vector(self, e: int, bar: int, child: int):
        matrix = link_cost_matrix(self.table[e], self.seq)
        P = self.P[child]
        if self.g.edges[e][0] == bar:
            rows = [[c + p for c, p in zip(row, P)] for row in matrix]
        else:
            rows = [[matrix[i][j] + P[i] for i in range(len(P))] for j in range(len(matrix[0]))]
        best = [min(range(len(r)), key=r.__getitem__) for r in rows]
        return [r[b] for r, b in zip(rows, best)], best

    def _process(self, bar: int) -> None:
        seq = self.seq
        overrides = {}
        choice = {}
        for e, child in self.forest.children[bar]:
            overrides[e], choice[e] = self._child_vector(e, bar, child)
        pe = self.forest.parent_edge[bar]
        if pe >= 0:
            overrides[pe] = [0.0] * seq.n_positions(pe, bar)
        left_costs, right_costs = bar_cost_vectors(seq, self.table, bar, overrides)
        n_l, n_r = len(left_costs), len(right_costs)
        if pe < 0:
            down = merge_table(left_costs, right_costs)
            self.P[bar] = [down.D[n_l][n_r]]
            self.tables[bar] = BarTables(None, 0, down, None, choice)
            self.cells += down.cells
            return
        side, s = seq.block_of(pe, bar)
        if side == LEFT:
            down = merge_table(left_costs[:s], right_costs)
            up = merge_table(_reversed_costs(left_costs[s + 1:]), _reversed_costs(right_costs))
            self.P[bar] = [down.D[s][k] + up.D[n_l - s - 1][n_r - k] for k in range(n_r + 1)]
        else:
            down = merge_table(left_costs, right_costs[:s])
            up = merge_table(_reversed_costs(left_costs), _reversed_costs(right_costs[s + 1:]))
            self.P[bar] = [down.D[k][s] + up.D[n_l - k][n_r - s - 1] for k in range(n_l + 1)]
        self.tables[bar] = BarTables(side, s, down, up, choice)
        self.cells += down.cells + up.cells

    def stacking_order(self, bar: int, k: int) -> list[tuple[str, int]]:
        """Optimal block order of ``bar`` (bottom to top) with its parent block at ``k``."""
        t = self.tables[bar]
        n_l, n_r = len(self.seq.left[bar]), len(self.seq.right[bar])
        if t.side is None:
            return t.down.backtrack(n_l, n_r)
        s = t.split
        if t.side == LEFT:
            lower = t.down.backtrack(s, k)
            upper = t.up.backtrack(n_l - s - 1, n_r - k)
        else:
            lower = t.down.backtrack(k, s)
            upper = t.up.backtrack(n_l - k, n_r - s - 1)
        upper = [(side, (n_l if side == LEFT else n_r) - 1 - i) for side, i in reversed(upper)]
        return lower + [(t.side, s)] + upper

    def layout(self) -> ChartLayout:
        seq = self.seq
        stackings = [()] * self.g.n
        stack = [(r, 0) for r in self.forest.roots]
        while stack:
            bar, k = stack.pop()
            order = self.stacking_order(bar, k)
            stacking = []
            below = {LEFT: 0, RIGHT: 0}
            pos = {}
            for side, i in order:
                e = seq.left[bar][i] if side == LEFT else seq.right[bar][i]
                stacking.append(e)
                pos[e] = below[RIGHT if side == LEFT else LEFT]
                below[side] += 1
            stackings[bar] = tuple(stacking)
            choice = self.tables[bar].child_choice
            for e, child in self.forest.children[bar]:
                stack.append((child, choice[e][pos[e]]))
        return ChartLayout(tuple(stackings))


def solve_forest(g: WeightedGraph, seq: SideSequences, table: LinkTable,
                 forest: DependencyForest | None = None) -> ChartLayout:
    """Optimal layout when the dependent links form a forest."""
    if forest is None:
        forest = dl_forest(g, table)
    else:
        in_forest = {e for e in forest.parent_edge if e >= 0}
        missing = [e for e in table.dependent_edges if e not in in_forest]
        if missing:
            raise PreconditionError("forest does not cover every dependent link", missing)
    dp = ForestDP(g, seq, table, forest)
    total = dp.run()
    layout = dp.layout()
    layout.total_cost = total
    layout.algorithm = "forest"
    layout.stats = {"cells": dp.cells}
    return layout
