"""Problem instances, per-bar block sequences and link classification.

Bars are indexed ``0..n-1`` in their fixed left-to-right order and edges by
their position in :attr:`WeightedGraph.edges`.  Every edge ``(u, v)`` is
stored with ``u < v``; its block at ``u`` belongs to the rightward sequence
``R_u`` and its block at ``v`` to the leftward sequence ``L_v``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InstanceError

LEFT = "L"
RIGHT = "R"


@dataclass(frozen=True)
class WeightedGraph:
    """A weighted graph with a fixed vertex (bar) order."""

    ids: tuple[str, ...]
    weights: tuple[float, ...]
    edges: tuple[tuple[int, int], ...]
    edge_weights: tuple[float, ...]
    edge_ids: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index_of(self, bar_id: str) -> int:
        return self.ids.index(bar_id)


def validate_instance(bars, edges, edge_ids=None) -> WeightedGraph:
    """Build a :class:`WeightedGraph` from raw bar and edge lists.

    ``bars`` holds either plain weights or ``(id, weight)`` pairs; ``edges``
    holds ``(u, v, weight)`` triples with 0-based bar indices in either
    orientation.  Raises :class:`InstanceError` naming the offending element.
    """
    ids = []
    weights = []
    for pos, bar in enumerate(bars):
        if isinstance(bar, (tuple, list)):
            if len(bar) != 2:
                raise InstanceError(f"bar {pos}: expected (id, weight), got {bar!r}", bar)
            bar_id, weight = bar
        else:
            bar_id, weight = str(pos), bar
        weight = _number(weight, f"bar {bar_id!r} weight")
        if weight < 0:
            raise InstanceError(f"bar {bar_id!r}: negative weight {weight}", bar)
        ids.append(str(bar_id))
        weights.append(weight)
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise InstanceError(f"duplicate bar id {dup!r}", dup)

    n = len(ids)
    seen = {}
    norm_edges = []
    norm_weights = []
    for pos, edge in enumerate(edges):
        if len(edge) != 3:
            raise InstanceError(f"edge {pos}: expected (u, v, weight), got {edge!r}", edge)
        u, v, w = edge
        for end in (u, v):
            if isinstance(end, bool) or not isinstance(end, (int, np.integer)) or not 0 <= end < n:
                raise InstanceError(f"edge {pos}: bar index {end!r} out of range 0..{n - 1}", edge)
        if u == v:
            raise InstanceError(f"edge {pos}: self-loop at bar {u}", edge)
        w = _number(w, f"edge {pos} weight")
        if w <= 0:
            raise InstanceError(f"edge {pos}: nonpositive weight {w}", edge)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InstanceError(f"edge {pos}: duplicate of edge {seen[key]} between bars {key}", edge)
        seen[key] = pos
        norm_edges.append((int(key[0]), int(key[1])))
        norm_weights.append(w)

    if edge_ids is None:
        edge_ids = [f"{ids[u]}-{ids[v]}" for u, v in norm_edges]
    edge_ids = tuple(str(e) for e in edge_ids)
    if len(edge_ids) != len(norm_edges):
        raise InstanceError("edge id count does not match edge count")
    if len(set(edge_ids)) != len(edge_ids):
        dup = next(e for e in edge_ids if edge_ids.count(e) > 1)
        raise InstanceError(f"duplicate edge id {dup!r}", dup)
    return WeightedGraph(tuple(ids), tuple(weights), tuple(norm_edges), tuple(norm_weights), edge_ids)


def _number(value, what) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise InstanceError(f"{what}: not a number ({value!r})", value)
    value = float(value)
    if not math.isfinite(value):
        raise InstanceError(f"{what}: not finite ({value})", value)
    return value


@dataclass(frozen=True)
class SideSequences:
    """Ordered leftward/rightward block sequences of every bar.

    ``left[j]`` lists edge indices of ``L_j`` (other endpoint decreasing),
    ``right[j]`` those of ``R_j`` (other endpoint increasing).  Prefix sums
    have one more entry than their sequence.
    """

    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    left_prefix: tuple[tuple[float, ...], ...]
    right_prefix: tuple[tuple[float, ...], ...]
    unlinked: tuple[float, ...]
    heights: tuple[float, ...]
    left_index: tuple[int, ...]
    right_index: tuple[int, ...]
    ends: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return len(self.left)

    def total(self, j: int) -> float:
        return self.unlinked[j] + self.left_prefix[j][-1] + self.right_prefix[j][-1]

    def totals(self) -> list[float]:
        return [self.total(j) for j in range(self.n)]

    def degree(self, j: int) -> int:
        return len(self.left[j]) + len(self.right[j])

    def max_degree(self) -> int:
        return max((self.degree(j) for j in range(self.n)), default=0)

    def center(self, bar: int, side: str, index: int, k: int) -> float:
        """Center of the ``index``-th block of ``side`` with ``k`` opposite blocks below."""
        if side == LEFT:
            e = self.left[bar][index]
            own, other = self.left_prefix[bar], self.right_prefix[bar]
        else:
            e = self.right[bar][index]
            own, other = self.right_prefix[bar], self.left_prefix[bar]
        if not 0 <= k < len(other):
            raise IndexError(f"position {k} out of range 0..{len(other) - 1} at bar {bar}")
        return 0.5 * self.heights[e] + self.unlinked[bar] + own[index] + other[k]

    def block_of(self, e: int, bar: int) -> tuple[str, int]:
        """Side and index of edge ``e``'s block inside ``bar``."""
        u, v = self.ends[e]
        if bar == u:
            return RIGHT, self.right_index[e]
        if bar == v:
            return LEFT, self.left_index[e]
        raise KeyError(f"edge {e} is not incident to bar {bar}")

    def n_positions(self, e: int, bar: int) -> int:
        """Number of feasible positions of edge ``e``'s block in ``bar``."""
        side, _ = self.block_of(e, bar)
        return len(self.left[bar]) + 1 if side == RIGHT else len(self.right[bar]) + 1


def build_sequences(g: WeightedGraph) -> SideSequences:
    """Compute ``L_j``/``R_j`` and their prefix sums in ``O(n + m)``."""
    n = g.n
    adjacency = [[] for _ in range(n)]
    for e, (u, v) in enumerate(g.edges):
        adjacency[u].append(e)
        adjacency[v].append(e)
    left = [[] for _ in range(n)]
    right = [[] for _ in range(n)]
    # Sweeping bars left to right appends to R_j in increasing order of the
    # far endpoint and to L_j in increasing order, reversed afterwards.
    for i in range(n):
        for e in adjacency[i]:
            u, v = g.edges[e]
            if v == i:
                right[u].append(e)
            else:
                left[v].append(e)
    for seq in left:
        seq.reverse()

    left_index = [0] * g.m
    right_index = [0] * g.m
    for j in range(n):
        for i, e in enumerate(left[j]):
            left_index[e] = i
        for i, e in enumerate(right[j]):
            right_index[e] = i

    def prefix(seq):
        out = [0.0]
        for e in seq:
            out.append(out[-1] + g.edge_weights[e])
        return tuple(out)

    return SideSequences(
        left=tuple(tuple(s) for s in left),
        right=tuple(tuple(s) for s in right),
        left_prefix=tuple(prefix(s) for s in left),
        right_prefix=tuple(prefix(s) for s in right),
        unlinked=g.weights,
        heights=g.edge_weights,
        left_index=tuple(left_index),
        right_index=tuple(right_index),
        ends=g.edges,
    )


class HeightIndex:
    """Range-maximum queries over total bar heights via a doubling table.

    Preprocessing is ``O(n log n)``; each query is ``O(1)``.
    """

    def __init__(self, heights: Sequence[float]):
        self.heights = np.asarray(heights, dtype=float)
        table = [self.heights]
        span = 1
        while 2 * span <= len(self.heights):
            prev = table[-1]
            table.append(np.maximum(prev[:-span], prev[span:]))
            span *= 2
        self._table = table

    @classmethod
    def from_sequences(cls, seq: SideSequences) -> "HeightIndex":
        return cls(seq.totals())

    def range_max(self, start: int, stop: int) -> float:
        """Maximum over ``heights[start:stop]``; 0 for an empty range."""
        if start >= stop:
            return 0.0
        level = (stop - start).bit_length() - 1
        row = self._table[level]
        return float(max(row[start], row[stop - (1 << level)]))


def max_intermediate_height(idx: HeightIndex, i: int, j: int) -> float:
    """Tallest bar strictly between bars ``i`` and ``j`` (0 when adjacent)."""
    if i >= j:
        raise ValueError(f"expected i < j, got ({i}, {j})")
    return idx.range_max(i + 1, j)


class LinkKind(enum.Enum):
    IL = "IL"
    ADL = "ADL"
    NADL = "NADL"

    @property
    def dependent(self) -> bool:
        return self is not LinkKind.IL


@dataclass(frozen=True)
class LinkRecord:
    """Classification of one edge.

    ``up_u``/``down_u`` bound the center of the block at the left endpoint
    ``u`` and ``up_v``/``down_v`` the one at ``v``; ``target`` is set for
    independent links only.
    """

    edge: int
    u: int
    v: int
    kind: LinkKind
    H: float
    up_u: float
    down_u: float
    up_v: float
    down_v: float
    target: float | None = None

    @property
    def dependent(self) -> bool:
        return self.kind.dependent


class LinkTable:
    """Per-edge link records with structural summaries."""

    def __init__(self, records: Iterable[LinkRecord], n: int):
        self.records = tuple(records)
        self.n = n

    def __getitem__(self, e: int) -> LinkRecord:
        return self.records[e]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def edges_of_kind(self, *kinds: LinkKind) -> list[int]:
        return [r.edge for r in self.records if r.kind in kinds]

    @property
    def dependent_edges(self) -> list[int]:
        return [r.edge for r in self.records if r.dependent]

    def dl_degrees(self) -> list[int]:
        deg = [0] * self.n
        for r in self.records:
            if r.dependent:
                deg[r.u] += 1
                deg[r.v] += 1
        return deg

    @property
    def delta(self) -> int:
        """Maximum number of dependent-link endpoints at one bar."""
        return max(self.dl_degrees(), default=0)


def classify_links(g: WeightedGraph, seq: SideSequences, idx: HeightIndex | None = None) -> LinkTable:
    """Label every edge IL, ADL or NADL; independent links get their target."""
    if idx is None:
        idx = HeightIndex.from_sequences(seq)
    records = []
    for e, (u, v) in enumerate(g.edges):
        ri = seq.right_index[e]
        li = seq.left_index[e]
        down_u = seq.center(u, RIGHT, ri, 0)
        up_u = seq.center(u, RIGHT, ri, len(seq.left[u]))
        down_v = seq.center(v, LEFT, li, 0)
        up_v = seq.center(v, LEFT, li, len(seq.right[v]))
        H = max_intermediate_height(idx, u, v)
        target = _independent_target(H, up_u, down_u, up_v, down_v)
        if target is not None:
            kind = LinkKind.IL
        elif v == u + 1:
            kind = LinkKind.ADL
        else:
            kind = LinkKind.NADL
        records.append(LinkRecord(e, u, v, kind, H, up_u, down_u, up_v, down_v, target))
    return LinkTable(records, g.n)


def _independent_target(H, up_u, down_u, up_v, down_v):
    if H >= up_u or H >= up_v:
        return H
    if down_u >= up_v:
        return down_u
    if up_u <= down_v:
        return down_v
    if up_u == down_u:
        return up_u
    if up_v == down_v:
        return up_v
    return None


def prepare(g: WeightedGraph) -> tuple[SideSequences, LinkTable]:
    """Sequences and classified links for ``g``."""
    seq = build_sequences(g)
    return seq, classify_links(g, seq, HeightIndex.from_sequences(seq))


def find_crossing(ends, edges) -> tuple[int, int] | None:
    """Two edges among ``edges`` whose spans cross (``u1 < u2 < v1 < v2``), else ``None``.

    Spans that are disjoint, nested or share an endpoint bar do not cross.
    """
    stack = []
    for e in sorted(edges, key=lambda e: (ends[e][0], -ends[e][1])):
        u, v = ends[e]
        while stack and ends[stack[-1]][1] <= u:
            stack.pop()
        if stack and v > ends[stack[-1]][1]:
            return stack[-1], e
        stack.append(e)
    return None
