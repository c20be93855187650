"""Seeded random instances with optional height-profile guarantees."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .exceptions import LinkedBarsError
from .forest import find_cycle
from .model import WeightedGraph, prepare, validate_instance

SHAPES = ("arbitrary", "unimodal", "valley", "forest-dl")


@dataclass(frozen=True)
class GeneratorParams:
    n: int = 6
    edges: int = 6
    weight_min: int = 1
    weight_max: int = 8
    shape: str = "arbitrary"
    seed: int = 0
    max_degree: int | None = None
    max_span: int | None = None
    max_attempts: int = 1000
    bar_weight_min: int | None = None  # defaults to the edge-weight range
    bar_weight_max: int | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.n < 1 or self.edges < 0 or not 0 < self.weight_min <= self.weight_max:
            raise ValueError(f"invalid generator parameters {self}")
        lo, hi = self.bar_range
        if not 0 <= lo <= hi:
            raise ValueError(f"invalid bar weight range {lo}..{hi}")

    @property
    def bar_range(self) -> tuple[int, int]:
        lo = self.weight_min if self.bar_weight_min is None else self.bar_weight_min
        hi = self.weight_max if self.bar_weight_max is None else self.bar_weight_max
        return lo, hi


def _sample_edges(rng: random.Random, p: GeneratorParams):
    pairs = [(u, v) for u in range(p.n) for v in range(u + 1, p.n)
             if p.max_span is None or v - u <= p.max_span]
    rng.shuffle(pairs)
    degree = [0] * p.n
    chosen = []
    for u, v in pairs:
        if len(chosen) == p.edges:
            break
        if p.max_degree is not None and (degree[u] >= p.max_degree or degree[v] >= p.max_degree):
            continue
        degree[u] += 1
        degree[v] += 1
        chosen.append((u, v, rng.randint(p.weight_min, p.weight_max)))
    chosen.sort()
    return chosen


def _profile(rng, p: GeneratorParams, incident, shape):
    """Total bar heights realizing a single-peak or single-valley profile."""
    n = p.n
    slack = [incident[j] + rng.randint(*p.bar_range) for j in range(n)]
    h = [0] * n
    pivot = rng.randrange(n)
    if shape == "unimodal":
        for j in range(pivot):
            h[j] = max(slack[j], h[j - 1] + 1) if j else slack[j]
        for j in range(n - 1, pivot, -1):
            h[j] = max(slack[j], h[j + 1] + 1) if j < n - 1 else slack[j]
        h[pivot] = max([slack[pivot]] + [h[j] + 1 for j in (pivot - 1, pivot + 1) if 0 <= j < n])
    else:
        h[pivot] = slack[pivot]
        for j in range(pivot - 1, -1, -1):
            h[j] = max(slack[j], h[j + 1] + 1)
        for j in range(pivot + 1, n):
            h[j] = max(slack[j], h[j - 1] + 1)
    return h


def _one(rng, p: GeneratorParams, shape) -> WeightedGraph:
    edges = _sample_edges(rng, p)
    if shape in ("unimodal", "valley"):
        incident = [0] * p.n
        for u, v, w in edges:
            incident[u] += w
            incident[v] += w
        heights = _profile(rng, p, incident, shape)
        weights = [heights[j] - incident[j] for j in range(p.n)]
    else:
        weights = [rng.randint(*p.bar_range) for _ in range(p.n)]
    return validate_instance([(f"b{j}", weights[j]) for j in range(p.n)], edges)


def generate(params: GeneratorParams) -> WeightedGraph:
    """Instance for ``params``; the same parameters always give the same instance."""
    rng = random.Random(params.seed)
    if params.shape != "forest-dl":
        return _one(rng, params, params.shape)
    for _ in range(params.max_attempts):
        g = _one(rng, params, "arbitrary")
        _, table = prepare(g)
        if find_cycle(g.n, g.edges, table.dependent_edges) is None:
            return g
    raise LinkedBarsError(f"no instance with an acyclic dependent-link subgraph in "
                          f"{params.max_attempts} attempts")
