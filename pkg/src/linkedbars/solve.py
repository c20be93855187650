"""Structural diagnostics and solver dispatch."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .cost import ChartLayout
from .exceptions import LinkedBarsError
from .forest import dl_forest, find_cycle, solve_forest
from .fpt import DEFAULT_STATE_BUDGET, solve_fpt
from .merge import solve_independent
from .model import LinkKind, LinkTable, SideSequences, WeightedGraph, prepare
from .nadl_forest import extend_forest, solve_nadl_forest
from .oracle import DEFAULT_BUDGET, brute_force

ALGORITHMS = ("auto", "no-dl", "forest", "nadl-forest", "fpt", "brute")
AUTO_ORDER = ("no-dl", "forest", "nadl-forest", "fpt")


@dataclass(frozen=True)
class Diagnostics:
    dl_forest: bool
    nadl_forest: bool
    delta: int  # max dependent-link endpoints at one bar
    max_degree: int
    il: int
    adl: int
    nadl: int

    def applicable(self, algorithm: str) -> bool:
        return {
            "no-dl": self.adl + self.nadl == 0,
            "forest": self.dl_forest,
            "nadl-forest": self.nadl_forest,
        }.get(algorithm, True)

    def as_dict(self) -> dict:
        return asdict(self)


def diagnose(g: WeightedGraph, seq: SideSequences, table: LinkTable) -> Diagnostics:
    nadl = table.edges_of_kind(LinkKind.NADL)
    return Diagnostics(
        dl_forest=find_cycle(g.n, g.edges, table.dependent_edges) is None,
        nadl_forest=find_cycle(g.n, g.edges, nadl) is None,
        delta=table.delta,
        max_degree=seq.max_degree(),
        il=len(table.edges_of_kind(LinkKind.IL)),
        adl=len(table.edges_of_kind(LinkKind.ADL)),
        nadl=len(nadl),
    )


def resolve_algorithm(diag: Diagnostics, algorithm: str = "auto") -> str:
    if algorithm not in ALGORITHMS:
        raise LinkedBarsError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    if algorithm != "auto":
        return algorithm
    return next(a for a in AUTO_ORDER if diag.applicable(a))


def run_solver(g: WeightedGraph, seq: SideSequences, table: LinkTable, algorithm: str,
               oracle_budget: int = DEFAULT_BUDGET, state_budget: int = DEFAULT_STATE_BUDGET) -> ChartLayout:
    """Run one named solver; structural mismatches raise :class:`PreconditionError`."""
    if algorithm == "no-dl":
        return solve_independent(g, seq, table)
    if algorithm == "forest":
        return solve_forest(g, seq, table, dl_forest(g, table))
    if algorithm == "nadl-forest":
        return solve_nadl_forest(g, seq, table, extend_forest(g, table))
    if algorithm == "fpt":
        return solve_fpt(g, seq, table, state_budget)
    if algorithm == "brute":
        layout, _ = brute_force(g, seq, table, oracle_budget)
        return layout
    raise LinkedBarsError(f"unknown algorithm {algorithm!r}")


def solve(g: WeightedGraph, algorithm: str = "auto", oracle_budget: int = DEFAULT_BUDGET,
          state_budget: int = DEFAULT_STATE_BUDGET):
    """Classify, pick a solver and run it; returns ``(seq, table, diagnostics, layout)``."""
    seq, table = prepare(g)
    diag = diagnose(g, seq, table)
    name = resolve_algorithm(diag, algorithm)
    layout = run_solver(g, seq, table, name, oracle_budget, state_budget)
    return seq, table, diag, layout
