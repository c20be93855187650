"""General solver: dynamic programming over a nice tree decomposition of the dependent links.

Each bar touched by a dependent link has a finite set of *states*, the joint
positions of its dependent blocks.  A node table holds, for every combination
of states of the bars in its bag, the cheapest cost of everything already
forgotten below it: independent blocks of those bars plus dependent links with
at least one forgotten endpoint.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .cost import ChartLayout, link_cost_matrix
from .exceptions import BudgetExceeded, LinkedBarsError
from .merge import bar_cost_vectors, constrained_costs, merge_table, solve_bar, to_stacking
from .model import LEFT, RIGHT, LinkTable, SideSequences, WeightedGraph, find_crossing

DEFAULT_STATE_BUDGET = 10**7

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class TDNode:
    kind: str
    bag: tuple[int, ...]  # sorted bar indices
    children: tuple[int, ...] = ()
    bar: int | None = None  # introduced or forgotten bar


@dataclass
class TreeDecomposition:
    """Rooted nice decomposition; ``nodes`` are stored children-first, the root last."""

    nodes: list[TDNode]
    n_bars: int

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def bars(self) -> set[int]:
        return {b for nd in self.nodes for b in nd.bag}


def _elimination(n: int, ends, edges):
    """Min-degree elimination order with the bag of each eliminated bar."""
    adj: dict[int, set[int]] = {}
    for e in edges:
        u, v = ends[e]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    heap = [(len(nb), b) for b, nb in adj.items()]
    heapq.heapify(heap)
    done = set()
    order, bags = [], {}
    while heap:
        deg, b = heapq.heappop(heap)
        if b in done or deg != len(adj[b]):
            continue
        nbrs = adj.pop(b)
        if len(nbrs) > 2:
            raise LinkedBarsError(f"dependent-link subgraph has width above 2 at bar {b}")
        done.add(b)
        order.append(b)
        bags[b] = nbrs
        for x in nbrs:
            adj[x].discard(b)
            adj[x].update(nbrs - {x})
            heapq.heappush(heap, (len(adj[x]), x))
    return order, bags


def build_tree_decomposition(n: int, ends, edges) -> TreeDecomposition:
    """Nice decomposition of width at most 2 for non-crossing ``edges``.

    Bars are eliminated in min-degree order; on a graph drawn without crossings
    above a line every step removes a bar of degree at most two.
    """
    edges = list(edges)
    crossing = find_crossing(ends, edges)
    if crossing is not None:
        raise LinkedBarsError(f"dependent links {crossing[0]} and {crossing[1]} cross")
    order, nbrs = _elimination(n, ends, edges)
    position = {b: i for i, b in enumerate(order)}
    kids: dict[int, list[int]] = {b: [] for b in order}
    tops = []
    for b in order:
        if nbrs[b]:
            kids[min(nbrs[b], key=position.__getitem__)].append(b)
        else:
            tops.append(b)

    nodes: list[TDNode] = []

    def add(kind, bag, children=(), bar=None) -> int:
        nodes.append(TDNode(kind, tuple(sorted(bag)), tuple(children), bar))
        return len(nodes) - 1

    def grow(node: int, target: set[int]) -> int:
        for x in sorted(target - set(nodes[node].bag)):
            node = add(INTRODUCE, set(nodes[node].bag) | {x}, (node,), x)
        return node

    def join_all(parts: list[int]) -> int:
        acc = parts[0]
        for other in parts[1:]:
            acc = add(JOIN, nodes[acc].bag, (acc, other))
        return acc

    top_of = {}
    for b in order:
        bag = {b} | nbrs[b]
        parts = []
        for c in kids[b]:
            f = add(FORGET, set(nodes[top_of[c]].bag) - {c}, (top_of[c],), c)
            parts.append(grow(f, bag))
        if not parts:
            parts.append(grow(add(LEAF, ()), bag))
        top_of[b] = join_all(parts)
    roots = [add(FORGET, (), (top_of[b],), b) for b in tops]
    if not roots:
        add(LEAF, ())
    elif len(roots) > 1:
        join_all(roots)
    return TreeDecomposition(nodes, n)


def check_decomposition(td: TreeDecomposition, ends, edges) -> list[str]:
    """Violations of the nice-decomposition contract (empty when valid)."""
    out = []
    nodes = td.nodes
    parent = [-1] * len(nodes)
    for i, nd in enumerate(nodes):
        for c in nd.children:
            if not 0 <= c < i:
                out.append(f"node {i}: child {c} is not listed before it")
            elif parent[c] >= 0:
                out.append(f"node {c} has two parents")
            else:
                parent[c] = i
    orphans = [i for i in range(len(nodes)) if parent[i] < 0 and i != td.root]
    if orphans:
        out.append(f"nodes {orphans} are not connected to the root")
    if nodes[td.root].bag:
        out.append("root bag is not empty")
    if td.width > 2:
        out.append(f"width {td.width} exceeds 2")
    for i, nd in enumerate(nodes):
        bag = set(nd.bag)
        kids = [set(nodes[c].bag) for c in nd.children]
        ok = {
            LEAF: not bag and not kids,
            INTRODUCE: len(kids) == 1 and nd.bar not in kids[0] and bag == kids[0] | {nd.bar},
            FORGET: len(kids) == 1 and nd.bar in kids[0] and bag == kids[0] - {nd.bar},
            JOIN: len(kids) == 2 and kids[0] == bag and kids[1] == bag,
        }.get(nd.kind, False)
        if not ok:
            out.append(f"node {i}: malformed {nd.kind} node")
    bags = [set(nd.bag) for nd in nodes]
    for e in edges:
        u, v = ends[e]
        if not any(u in b and v in b for b in bags):
            out.append(f"edge {e} ({u}, {v}) is in no bag")
    for bar in td.bars():
        tops = [i for i, b in enumerate(bags) if bar in b and (parent[i] < 0 or bar not in bags[parent[i]])]
        if len(tops) != 1:
            out.append(f"bags containing bar {bar} are not connected")
    return out


@dataclass
class BarStates:
    """Feasible joint positions of one bar's dependent blocks.

    ``edges`` lists the dependent blocks (left side in order, then right side);
    each state gives the opposite-side count of every such block.
    """

    bar: int
    edges: tuple[int, ...]
    sides: tuple[tuple[str, int], ...]
    states: list[tuple[int, ...]]
    il: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.states)

    def slots(self, state: tuple[int, ...]) -> tuple[int, ...]:
        """Indices of the blocks in the bar's total stacking order."""
        return tuple(i + k for (_, i), k in zip(self.sides, state))

    def column(self, e: int) -> np.ndarray:
        c = self.edges.index(e)
        return np.array([s[c] for s in self.states], dtype=np.intp)


def _step(side, i, k):
    """Start and end lattice points of a block step; coordinates are (left count, right count)."""
    if side == LEFT:
        return (i, k), (i + 1, k)
    return (k, i), (k, i + 1)


def enumerate_states(seq: SideSequences, table: LinkTable, bar: int) -> BarStates:
    """All order-consistent placements of the bar's dependent blocks."""
    n_l, n_r = len(seq.left[bar]), len(seq.right[bar])
    dl_l = [(i, e) for i, e in enumerate(seq.left[bar]) if table[e].dependent]
    dl_r = [(i, e) for i, e in enumerate(seq.right[bar]) if table[e].dependent]
    edges = tuple(e for _, e in dl_l) + tuple(e for _, e in dl_r)
    sides = tuple((LEFT, i) for i, _ in dl_l) + tuple((RIGHT, i) for i, _ in dl_r)
    found: list[dict[int, int]] = []

    # Blocks are placed in stacking order; a step may start only where the previous one ended or above.
    def walk(a, b, p, q, acc):
        if a == len(dl_l) and b == len(dl_r):
            found.append(dict(acc))
            return
        if a < len(dl_l):
            i, e = dl_l[a]
            if i >= p:
                for k in range(q, n_r + 1):
                    acc[e] = k
                    walk(a + 1, b, i + 1, k, acc)
                    del acc[e]
        if b < len(dl_r):
            i, e = dl_r[b]
            if i >= q:
                for k in range(p, n_l + 1):
                    acc[e] = k
                    walk(a, b + 1, k, i + 1, acc)
                    del acc[e]

    walk(0, 0, 0, 0, {})
    states = sorted(tuple(s[e] for e in edges) for s in found)
    return BarStates(bar, edges, sides, states)


class SegmentCosts:
    """Cheapest stackings of independent blocks between two lattice points of one bar."""

    def __init__(self, seq: SideSequences, table: LinkTable, bar: int):
        overrides = {e: [math.inf] * seq.n_positions(e, bar)
                     for e in seq.left[bar] + seq.right[bar] if table[e].dependent}
        self.left_costs, self.right_costs = bar_cost_vectors(seq, table, bar, overrides)
        self._tables = {}

    def table(self, start):
        if start not in self._tables:
            p0, q0 = start
            lc = [c[q0:] for c in self.left_costs[p0:]]
            rc = [c[p0:] for c in self.right_costs[q0:]]
            self._tables[start] = merge_table(lc, rc)
        return self._tables[start]

    def between(self, start, stop) -> float:
        """Cost of the blocks in ``[start, stop)``; ``stop`` must dominate ``start``."""
        return self.table(start).D[stop[0] - start[0]][stop[1] - start[1]]

    @property
    def cells(self) -> int:
        return sum(t.cells for t in self._tables.values())


def segment_costs(seq: SideSequences, table: LinkTable, bar: int) -> SegmentCosts:
    return SegmentCosts(seq, table, bar)


def state_steps(states: BarStates, state) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    return sorted(_step(side, i, k) for (side, i), k in zip(states.sides, state))


def independent_cost(states: BarStates, seg: SegmentCosts, state, corner) -> float:
    """Cost of the bar's independent blocks with the dependent ones fixed by ``state``."""
    total = 0.0
    at = (0, 0)
    for start, end in state_steps(states, state):
        total += seg.between(at, start)
        at = end
    return total + seg.between(at, corner)


@dataclass
class FptDP:
    """Table computation and reconstruction for :func:`solve_fpt`."""

    g: WeightedGraph
    seq: SideSequences
    table: LinkTable
    td: TreeDecomposition
    state_budget: int = DEFAULT_STATE_BUDGET
    states: dict[int, BarStates] = field(default_factory=dict)
    argmins: dict[int, np.ndarray] = field(default_factory=dict)
    neighbors: dict[int, dict[int, int]] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def prepare(self) -> None:
        seq, table = self.seq, self.table
        cells = 0
        for e in table.dependent_edges:
            u, v = self.g.edges[e]
            self.neighbors.setdefault(u, {})[v] = e
            self.neighbors.setdefault(v, {})[u] = e
        for bar in sorted(self.neighbors):
            st = enumerate_states(seq, table, bar)
            seg = SegmentCosts(seq, table, bar)
            corner = (len(seq.left[bar]), len(seq.right[bar]))
            st.il = np.array([independent_cost(st, seg, s, corner) for s in st.states])
            cells += seg.cells
            self.states[bar] = st
        self.stats.update(segment_cells=cells,
                          max_states=max((len(s) for s in self.states.values()), default=1))

    def _shape(self, bag):
        shape = tuple(len(self.states[b]) for b in bag)
        count = math.prod(shape)
        if count > self.state_budget:
            raise BudgetExceeded(f"a table of {count} state combinations exceeds the budget of "
                                 f"{self.state_budget}", count)
        self.stats["max_entries"] = max(self.stats.get("max_entries", 1), count)
        return shape

    def _lambda(self, f: int, other: int) -> np.ndarray:
        """Link cost indexed by (state of ``f``, state of ``other``)."""
        e = self.neighbors[f][other]
        lam = np.asarray(link_cost_matrix(self.table[e], self.seq), dtype=float)
        kf = self.states[f].column(e)
        ko = self.states[other].column(e)
        if self.g.edges[e][0] == f:
            return lam[np.ix_(kf, ko)]
        return lam[np.ix_(ko, kf)].T

    def process(self, i: int, tables: list) -> np.ndarray:
        nd = self.td.nodes[i]
        if nd.kind == LEAF:
            return np.zeros(())
        if nd.kind == JOIN:
            a, b = nd.children
            return tables[a] + tables[b]
        (c,) = nd.children
        child = tables[c]
        if nd.kind == INTRODUCE:
            shape = self._shape(nd.bag)
            axis = nd.bag.index(nd.bar)
            return np.broadcast_to(np.expand_dims(child, axis), shape)
        child_bag = self.td.nodes[c].bag
        f = nd.bar
        fa = child_bag.index(f)
        view = [1] * len(child_bag)
        view[fa] = -1
        term = child + self.states[f].il.reshape(view)
        for other in nd.bag:
            if other in self.neighbors[f]:
                oa = child_bag.index(other)
                m = self._lambda(f, other)
                if oa < fa:
                    m, axes = m.T, (oa, fa)
                else:
                    axes = (fa, oa)
                shape = [1] * len(child_bag)
                shape[axes[0]], shape[axes[1]] = m.shape
                term = term + m.reshape(shape)
        best = np.argmin(term, axis=fa)
        self.argmins[i] = best
        return np.take_along_axis(term, np.expand_dims(best, fa), axis=fa).squeeze(fa)

    def run(self) -> float:
        self.prepare()
        tables: list = [None] * len(self.td.nodes)
        for i, nd in enumerate(self.td.nodes):
            tables[i] = self.process(i, tables)
            for c in nd.children:
                tables[c] = None
        return float(tables[self.td.root])

    def chosen_states(self) -> dict[int, tuple[int, ...]]:
        chosen: dict[int, int] = {}
        stack = [self.td.root]
        while stack:
            i = stack.pop()
            nd = self.td.nodes[i]
            if nd.kind == FORGET:
                chosen[nd.bar] = int(self.argmins[i][tuple(chosen[b] for b in nd.bag)])
            stack.extend(nd.children)
        return {b: self.states[b].states[s] for b, s in chosen.items()}


def solve_fpt(g: WeightedGraph, seq: SideSequences, table: LinkTable,
              state_budget: int = DEFAULT_STATE_BUDGET,
              td: TreeDecomposition | None = None) -> ChartLayout:
    """Optimal layout for any instance; time grows with the number of bar states."""
    if td is None:
        td = build_tree_decomposition(g.n, g.edges, table.dependent_edges)
    dp = FptDP(g, seq, table, td, state_budget)
    total = dp.run()
    chosen = dp.chosen_states()
    stackings = []
    for bar in range(g.n):
        overrides = {}
        if bar in chosen:
            st = dp.states[bar]
            overrides = {e: constrained_costs(seq.n_positions(e, bar), k)
                         for e, k in zip(st.edges, chosen[bar])}
        left_costs, right_costs = bar_cost_vectors(seq, table, bar, overrides)
        order, cost = solve_bar(left_costs, right_costs)
        if bar not in chosen:
            total += cost
        stackings.append(to_stacking(seq, bar, order))
    stats = dict(dp.stats, nodes=len(td.nodes), width=td.width)
    return ChartLayout(tuple(stackings), total, "fpt", stats)
