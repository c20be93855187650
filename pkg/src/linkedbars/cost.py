"""Block geometry, link costs, layout evaluation and orthogonal link routing."""
from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import InvalidLayoutError
from .model import LEFT, RIGHT, LinkRecord, LinkTable, SideSequences, WeightedGraph


@dataclass(frozen=True)
class BlockRef:
    bar: int
    side: str
    index: int
    height: float


def block_ref(seq: SideSequences, e: int, bar: int) -> BlockRef:
    side, index = seq.block_of(e, bar)
    return BlockRef(bar, side, index, seq.heights[e])


def block_center(seq: SideSequences, b: BlockRef, k: int) -> float:
    """Center of block ``b`` when ``k`` blocks of the opposite side lie below it."""
    return seq.center(b.bar, b.side, b.index, k)


def vertical_length(H: float, y_u: float, y_v: float) -> float:
    """Vertical length of a link whose tallest intermediate bar has height ``H``."""
    if H > y_u and H > y_v:
        return (H - y_u) + (H - y_v)
    return abs(y_u - y_v)


def link_cost(rec: LinkRecord, seq: SideSequences, i: int, j: int) -> float:
    """Cost of ``rec``'s link with its left block at position ``i`` and right block at ``j``.

    ``i`` counts leftward blocks below the block in ``R_u``; ``j`` counts
    rightward blocks below the block in ``L_v``.
    """
    y_u = seq.center(rec.u, RIGHT, seq.right_index[rec.edge], i)
    y_v = seq.center(rec.v, LEFT, seq.left_index[rec.edge], j)
    return vertical_length(rec.H, y_u, y_v)


def link_cost_matrix(rec: LinkRecord, seq: SideSequences) -> list[list[float]]:
    """``link_cost`` for every position pair, indexed ``[i][j]``."""
    ri, li = seq.right_index[rec.edge], seq.left_index[rec.edge]
    ys_u = [seq.center(rec.u, RIGHT, ri, i) for i in range(len(seq.left[rec.u]) + 1)]
    ys_v = [seq.center(rec.v, LEFT, li, j) for j in range(len(seq.right[rec.v]) + 1)]
    return [[vertical_length(rec.H, yu, yv) for yv in ys_v] for yu in ys_u]


def independent_costs(rec: LinkRecord, seq: SideSequences, bar: int) -> list[float]:
    """Per-position cost ``|t - y|`` of an independent link's block in ``bar``."""
    side, index = seq.block_of(rec.edge, bar)
    n_pos = len(seq.left[bar]) + 1 if side == RIGHT else len(seq.right[bar]) + 1
    t = rec.target
    return [abs(t - seq.center(bar, side, index, k)) for k in range(n_pos)]


@dataclass
class ChartLayout:
    """Stacking order (edge indices, bottom to top) of every bar."""

    stackings: tuple[tuple[int, ...], ...]
    total_cost: float | None = None
    algorithm: str | None = None
    stats: dict = field(default_factory=dict, compare=False, repr=False)


def block_positions(seq: SideSequences, layout: ChartLayout) -> tuple[list[int], list[int]]:
    """Positions of each edge's two blocks under ``layout``.

    Returns ``(at_u, at_v)``: the number of leftward blocks below the block in
    ``R_u`` and of rightward blocks below the block in ``L_v``.
    """
    m = len(seq.heights)
    at_u = [-1] * m
    at_v = [-1] * m
    for bar, stacking in enumerate(layout.stackings):
        below_l = below_r = 0
        for e in stacking:
            if seq.ends[e][0] == bar:
                at_u[e] = below_l
                below_r += 1
            else:
                at_v[e] = below_r
                below_l += 1
    return at_u, at_v


def block_centers(seq: SideSequences, layout: ChartLayout) -> tuple[list[float], list[float]]:
    at_u, at_v = block_positions(seq, layout)
    ys_u = []
    ys_v = []
    for e, (u, v) in enumerate(seq.ends):
        ys_u.append(seq.center(u, RIGHT, seq.right_index[e], at_u[e]))
        ys_v.append(seq.center(v, LEFT, seq.left_index[e], at_v[e]))
    return ys_u, ys_v


def validate_layout(g: WeightedGraph, seq: SideSequences, layout: ChartLayout) -> list[str]:
    """Violations of the merge property; an empty list means the layout is valid."""
    problems = []
    if len(layout.stackings) != g.n:
        return [f"layout has {len(layout.stackings)} bars, instance has {g.n}"]
    for bar, stacking in enumerate(layout.stackings):
        expected = set(seq.left[bar]) | set(seq.right[bar])
        seen = set()
        for e in stacking:
            if e in seen:
                problems.append(f"bar {bar}: edge {e} stacked twice")
            elif e not in expected:
                problems.append(f"bar {bar}: edge {e} is not incident")
            seen.add(e)
        for e in sorted(expected - seen):
            problems.append(f"bar {bar}: edge {e} missing")
        for name, side in ((LEFT, seq.left[bar]), (RIGHT, seq.right[bar])):
            rank = {e: i for i, e in enumerate(side)}
            order = [e for e in stacking if e in rank]
            for a, b in zip(order, order[1:]):
                if rank[a] > rank[b]:
                    problems.append(f"bar {bar}: {name}-blocks of edges {a} and {b} out of order")
    return problems


def evaluate_layout(g: WeightedGraph, seq: SideSequences, table: LinkTable, layout: ChartLayout) -> float:
    """Total vertical link length of ``layout``; also stored in ``layout.total_cost``."""
    problems = validate_layout(g, seq, layout)
    if problems:
        raise InvalidLayoutError(problems)
    ys_u, ys_v = block_centers(seq, layout)
    total = 0.0
    for rec in table:
        total += vertical_length(rec.H, ys_u[rec.edge], ys_v[rec.edge])
    layout.total_cost = total
    return total


def link_costs(seq: SideSequences, table: LinkTable, layout: ChartLayout) -> list[float]:
    ys_u, ys_v = block_centers(seq, layout)
    return [vertical_length(rec.H, ys_u[rec.edge], ys_v[rec.edge]) for rec in table]


@dataclass(frozen=True)
class LinkRoute:
    """Orthogonal polyline of a link in chart units (y grows upwards)."""

    edge: int
    points: tuple[tuple[float, float], ...]

    @property
    def bends(self) -> int:
        return len(self.points) - 2

    @property
    def vertical_extent(self) -> float:
        return sum(abs(b[1] - a[1]) for a, b in zip(self.points, self.points[1:]))


def bar_left(bar: int) -> float:
    """x-coordinate of a bar's left side: unit-width bars with unit gaps."""
    return 2.0 * bar


def _gap_x(seq: SideSequences, bar: int, e: int) -> float:
    """x of ``e``'s vertical segment inside the gap right of ``bar``.

    The gap is split evenly among the links that may use it, ordered by span.
    """
    users = sorted(set(seq.right[bar]) | set(seq.left[bar + 1]),
                   key=lambda f: (seq.ends[f][1] - seq.ends[f][0], f))
    rank = users.index(e)
    return bar_left(bar) + 1.0 + (rank + 1) / (len(users) + 1)


def link_route(g: WeightedGraph, seq: SideSequences, table: LinkTable, layout: ChartLayout,
               edge: int, centers=None) -> LinkRoute:
    """Route one link: 4 bends below ``H``, 2 bends otherwise, 0 when level."""
    u, v = g.edges[edge]
    if centers is None:
        centers = block_centers(seq, layout)
    y_u = centers[0][edge]
    y_v = centers[1][edge]
    H = table[edge].H
    x_u = bar_left(u) + 0.5
    x_v = bar_left(v) + 0.5
    near_u = _gap_x(seq, u, edge)
    near_v = _gap_x(seq, v - 1, edge)
    if H > y_u and H > y_v:
        pts = [(x_u, y_u), (near_u, y_u), (near_u, H), (near_v, H), (near_v, y_v), (x_v, y_v)]
    elif y_u == y_v:
        pts = [(x_u, y_u), (x_v, y_v)]
    elif y_u < y_v:
        pts = [(x_u, y_u), (near_u, y_u), (near_u, y_v), (x_v, y_v)]
    else:
        pts = [(x_u, y_u), (near_v, y_u), (near_v, y_v), (x_v, y_v)]
    return LinkRoute(edge, tuple(pts))
