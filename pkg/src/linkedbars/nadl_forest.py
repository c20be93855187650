"""Optimal stacking when the non-adjacent dependent links form a forest.

The NADL forest is extended with a maximal acyclic set of adjacent dependent
links (ADLs); the remaining ADLs are *residual*.  Each tree is processed
bottom-up as in :mod:`linkedbars.forest`, but a subtree's cost now depends on
up to three placements: its parent link and the residual ADLs leaving its
leftmost and rightmost bars.

Tables are :class:`Factor` objects: an array with one axis per *open* link
(one endpoint block inside the part, the other outside), indexed by the inside
block's position.  Merging two factors sums them and minimizes out every link
that becomes closed, adding its vertical length.  For subtrees the open links
are exactly the parent link and the boundary ADLs, so the axes are the
``(k, l, r)`` parameters; for the lower/upper parts of a bar they are the two
boundary ADLs ``(x, y)``.  A missing boundary ADL is simply a missing axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cost import ChartLayout, independent_costs, link_cost_matrix
from .exceptions import PreconditionError
from .forest import DependencyForest, find_cycle, rooted_forest
from .model import LEFT, RIGHT, LinkKind, LinkTable, SideSequences, WeightedGraph

Var = tuple  # (edge, bar): position of edge's block inside bar


class Factor:
    """Cost array over the positions of the open links' inside blocks."""

    __slots__ = ("vars", "arr")

    def __init__(self, vars_, arr):
        self.vars = tuple(vars_)
        self.arr = np.asarray(arr, dtype=float)
        assert self.arr.ndim == len(self.vars)

    @classmethod
    def scalar(cls, value=0.0):
        return cls((), np.array(value, dtype=float))

    def add(self, value: float) -> "Factor":
        return Factor(self.vars, self.arr + value)

    def fix(self, var: Var, pos: int) -> "Factor":
        i = self.vars.index(var)
        return Factor(self.vars[:i] + self.vars[i + 1:], np.take(self.arr, pos, axis=i))

    def at(self, assignment: dict) -> float:
        return float(self.arr[tuple(assignment[v] for v in self.vars)])

    def __repr__(self):
        return f"Factor({self.vars}, shape={self.arr.shape})"


@dataclass
class ExtendedForest:
    """All NADLs plus a maximal acyclic set of ADLs, rooted at leftmost bars."""

    forest: DependencyForest
    tree_edges: frozenset
    residual: tuple[int, ...]


def extend_forest(g: WeightedGraph, table: LinkTable) -> ExtendedForest:
    """Extend the NADL forest greedily with ADLs in order of left endpoint."""
    nadl = table.edges_of_kind(LinkKind.NADL)
    cycle = find_cycle(g.n, g.edges, nadl)
    if cycle is not None:
        raise PreconditionError("non-adjacent dependent links contain a cycle", cycle)
    parent = list(range(g.n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in nadl:
        u, v = g.edges[e]
        parent[root(u)] = root(v)
    chosen = list(nadl)
    residual = []
    for e in sorted(table.edges_of_kind(LinkKind.ADL), key=lambda f: g.edges[f]):
        ru, rv = root(g.edges[e][0]), root(g.edges[e][1])
        if ru == rv:
            residual.append(e)
        else:
            parent[ru] = rv
            chosen.append(e)
    forest = rooted_forest(g.n, g.edges, sorted(chosen))
    return ExtendedForest(forest, frozenset(chosen), tuple(residual))


class NadlForestDP:
    """Bottom-up DP over an :class:`ExtendedForest`."""

    def __init__(self, g: WeightedGraph, seq: SideSequences, table: LinkTable, ef: ExtendedForest):
        self.g = g
        self.seq = seq
        self.table = table
        self.ef = ef
        self.residual = frozenset(ef.residual)
        self.P: dict[int, Factor] = {}
        self.down: dict[int, dict] = {}
        self.up: dict[int, dict] = {}
        self.messages: dict[int, Factor] = {}
        self._lam: dict[int, np.ndarray] = {}
        self._il: dict[tuple[int, int], list[float]] = {}
        self.max_open_part = 0
        self.max_open_subtree = 0

    # -- factor algebra -------------------------------------------------
    def lam(self, e: int) -> np.ndarray:
        if e not in self._lam:
            self._lam[e] = np.array(link_cost_matrix(self.table[e], self.seq))
        return self._lam[e]

    def _join(self, f1: Factor, f2: Factor):
        """Broadcast sum over the union of variables plus closing link costs."""
        union = tuple(sorted(set(f1.vars) | set(f2.vars)))
        assert len(union) == len(f1.vars) + len(f2.vars), "a block appears in both factors"
        e1 = {v[0] for v in f1.vars}
        closing = sorted(e1 & {v[0] for v in f2.vars})
        total = self._expand(f1, union) + self._expand(f2, union)
        closed = []
        for e in closing:
            a, b = (e, self.g.edges[e][0]), (e, self.g.edges[e][1])
            shape = [1] * len(union)
            shape[union.index(a)] = self.lam(e).shape[0]
            shape[union.index(b)] = self.lam(e).shape[1]
            total = total + self.lam(e).reshape(shape)
            closed += [a, b]
        return union, total, closed

    @staticmethod
    def _expand(f: Factor, union):
        shape = [f.arr.shape[f.vars.index(v)] if v in f.vars else 1 for v in union]
        return f.arr.reshape(shape)

    def merge(self, f1: Factor, f2: Factor) -> Factor:
        union, total, closed = self._join(f1, f2)
        if not closed:
            return Factor(union, total)
        axes = tuple(union.index(v) for v in closed)
        return Factor([v for v in union if v not in closed], total.min(axis=axes))

    def merge_argmin(self, f1: Factor, f2: Factor, fixed: dict) -> tuple[dict, float]:
        """Minimize the joined sum of ``f1`` and ``f2`` over every variable not in ``fixed``.

        Returns the full assignment and the attained value.
        """
        union, total, _ = self._join(f1, f2)
        index = tuple(fixed[v] if v in fixed else slice(None) for v in union)
        sub = total[index]
        out = {v: fixed[v] for v in union if v in fixed}
        free = [v for v in union if v not in fixed]
        if not free:
            return out, float(sub)
        flat = int(np.argmin(sub))
        for v, val in zip(free, np.unravel_index(flat, sub.shape)):
            out[v] = int(val)
        return out, float(sub.flat[flat])

    # -- per-bar processing -------------------------------------------------
    def _edge(self, bar, side, i):
        return self.seq.left[bar][i] if side == LEFT else self.seq.right[bar][i]

    def _il_costs(self, e, bar):
        key = (e, bar)
        if key not in self._il:
            self._il[key] = independent_costs(self.table[e], self.seq, bar)
        return self._il[key]

    def _block_factor(self, bar, e, pos) -> Factor | float:
        """Contribution of ``e``'s block placed at ``pos``: a cost or a factor to merge."""
        if not self.table[e].dependent:
            return self._il_costs(e, bar)[pos]
        if e in self.residual:
            n_pos = self.seq.n_positions(e, bar)
            arr = np.full(n_pos, np.inf)
            arr[pos] = 0.0
            return Factor(((e, bar),), arr)
        return self.messages[e].fix((e, bar), pos)

    def add_block(self, f: Factor, bar, side, i, pos) -> Factor:
        part = self._block_factor(bar, self._edge(bar, side, i), pos)
        if isinstance(part, Factor):
            return self.merge(f, part)
        return f.add(part)

    def _message(self, e, bar, child) -> Factor:
        """Child subtree cost plus the link to it, keeping this bar's block position open."""
        keep = Factor(((e, bar),), np.zeros(self.seq.n_positions(e, bar)))
        union, total, _ = self._join(keep, self.P[child])
        drop = union.index((e, child))
        return Factor([v for v in union if v != (e, child)], total.min(axis=drop))

    @staticmethod
    def _best(a: Factor, b: Factor) -> Factor:
        assert a.vars == b.vars, (a.vars, b.vars)
        return Factor(a.vars, np.minimum(a.arr, b.arr))

    def _fill_down(self, bar, p_max, q_max):
        cells = {(0, 0): Factor.scalar()}
        for p in range(p_max + 1):
            for q in range(q_max + 1):
                if p == q == 0:
                    continue
                cand = None
                if p:
                    cand = self.add_block(cells[p - 1, q], bar, LEFT, p - 1, q)
                if q:
                    other = self.add_block(cells[p, q - 1], bar, RIGHT, q - 1, p)
                    cand = other if cand is None else self._best(cand, other)
                cells[p, q] = cand
                self.max_open_part = max(self.max_open_part, len(cand.vars))
        return cells

    def _fill_up(self, bar, p_min, q_min):
        n_l, n_r = len(self.seq.left[bar]), len(self.seq.right[bar])
        cells = {(n_l, n_r): Factor.scalar()}
        for p in range(n_l, p_min - 1, -1):
            for q in range(n_r, q_min - 1, -1):
                if (p, q) == (n_l, n_r):
                    continue
                cand = None
                if p < n_l:
                    cand = self.add_block(cells[p + 1, q], bar, LEFT, p, q)
                if q < n_r:
                    other = self.add_block(cells[p, q + 1], bar, RIGHT, q, p)
                    cand = other if cand is None else self._best(cand, other)
                cells[p, q] = cand
                self.max_open_part = max(self.max_open_part, len(cand.vars))
        return cells

    def _split(self, bar, side, s, k):
        """Cells of the lower and upper part with the parent block at position ``k``."""
        if side == LEFT:
            return (s, k), (s + 1, k)
        return (k, s), (k, s + 1)

    def process(self, bar) -> None:
        seq = self.seq
        forest = self.ef.forest
        for e, child in forest.children[bar]:
            self.messages[e] = self._message(e, bar, child)
        n_l, n_r = len(seq.left[bar]), len(seq.right[bar])
        pe = forest.parent_edge[bar]
        if pe < 0:
            down = self._fill_down(bar, n_l, n_r)
            self.down[bar] = down
            self.P[bar] = down[n_l, n_r]
            assert not self.P[bar].vars, f"tree root {bar} left links open: {self.P[bar].vars}"
            return
        side, s = seq.block_of(pe, bar)
        if side == LEFT:
            down = self._fill_down(bar, s, n_r)
            up = self._fill_up(bar, s + 1, 0)
            n_k = n_r + 1
        else:
            down = self._fill_down(bar, n_l, s)
            up = self._fill_up(bar, 0, s + 1)
            n_k = n_l + 1
        self.down[bar], self.up[bar] = down, up
        parts = []
        for k in range(n_k):
            lo, hi = self._split(bar, side, s, k)
            parts.append(self.merge(down[lo], up[hi]))
        rest = parts[0].vars
        assert all(f.vars == rest for f in parts)
        var = (pe, bar)
        all_vars = tuple(sorted(rest + (var,)))
        axis = all_vars.index(var)
        self.P[bar] = Factor(all_vars, np.stack([f.arr for f in parts], axis=axis))
        self.max_open_subtree = max(self.max_open_subtree, len(all_vars))

    def run(self) -> float:
        for bar in self.ef.forest.order:
            self.process(bar)
        return float(sum(self.P[r].arr for r in self.ef.forest.roots))

    # -- reconstruction -----------------------------------------------------
    def _walk(self, bar, cells, start, fixed, downward):
        """Trace an optimal stacking through a part's cells.

        Returns the blocks in the order they were added and the assignments
        of every child subtree that was merged in.
        """
        seq = self.seq
        n_l, n_r = len(seq.left[bar]), len(seq.right[bar])
        p, q = start
        assign = dict(fixed)
        blocks = []
        children = {}
        end = (0, 0) if downward else (n_l, n_r)
        while (p, q) != end:
            target = cells[p, q].at(assign)
            options = []
            if downward:
                if p:
                    options.append(((p - 1, q), LEFT, p - 1, q))
                if q:
                    options.append(((p, q - 1), RIGHT, q - 1, p))
            else:
                if p < n_l:
                    options.append(((p + 1, q), LEFT, p, q))
                if q < n_r:
                    options.append(((p, q + 1), RIGHT, q, p))
            for prev, side, i, pos in options:
                pred = cells[prev]
                e = self._edge(bar, side, i)
                part = self._block_factor(bar, e, pos)
                if isinstance(part, Factor):
                    full, value = self.merge_argmin(pred, part, assign)
                else:
                    full = assign
                    value = pred.at(assign) + part
                if value == target:
                    break
            else:
                raise AssertionError(f"no transition reproduces cell {(p, q)} of bar {bar}")
            blocks.append((side, i))
            if self.table[e].dependent and e not in self.residual:
                child = self.g.edges[e][0] + self.g.edges[e][1] - bar
                sub = {v: full[v] for v in self.P[child].vars if v in full}
                sub[(e, bar)] = pos
                keep = Factor(((e, bar),), np.zeros(self.seq.n_positions(e, bar)))
                child_assign, _ = self.merge_argmin(keep, self.P[child], sub)
                children[child] = {v: child_assign[v] for v in self.P[child].vars}
            assign = {v: full[v] for v in pred.vars}
            p, q = prev
        return blocks, children

    def layout(self) -> ChartLayout:
        seq = self.seq
        forest = self.ef.forest
        stackings = [()] * self.g.n
        todo = [(r, {}) for r in forest.roots]
        while todo:
            bar, fixed = todo.pop()
            n_l, n_r = len(seq.left[bar]), len(seq.right[bar])
            pe = forest.parent_edge[bar]
            if pe < 0:
                blocks, children = self._walk(bar, self.down[bar], (n_l, n_r), fixed, True)
                order = blocks[::-1]
            else:
                side, s = seq.block_of(pe, bar)
                k = fixed[(pe, bar)]
                lo, hi = self._split(bar, side, s, k)
                down, up = self.down[bar][lo], self.up[bar][hi]
                rest = {v: val for v, val in fixed.items() if v != (pe, bar)}
                full, _ = self.merge_argmin(down, up, rest)
                lower, ch1 = self._walk(bar, self.down[bar], lo, {v: full[v] for v in down.vars}, True)
                upper, ch2 = self._walk(bar, self.up[bar], hi, {v: full[v] for v in up.vars}, False)
                order = lower[::-1] + [(side, s)] + upper
                children = {**ch1, **ch2}
            stackings[bar] = tuple(self._edge(bar, side, i) for side, i in order)
            todo.extend(children.items())
        return ChartLayout(tuple(stackings))


def solve_nadl_forest(g: WeightedGraph, seq: SideSequences, table: LinkTable,
                      ef: ExtendedForest | None = None) -> ChartLayout:
    """Optimal layout when the non-adjacent dependent links form a forest."""
    if ef is None:
        ef = extend_forest(g, table)
    dp = NadlForestDP(g, seq, table, ef)
    total = dp.run()
    layout = dp.layout()
    layout.total_cost = total
    layout.algorithm = "nadl-forest"
    layout.stats = {"max_open_part": dp.max_open_part, "max_open_subtree": dp.max_open_subtree,
                    "residual_adls": len(ef.residual)}
    return layout
