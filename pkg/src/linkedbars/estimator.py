"""Estimator-style front end: ``fit`` an instance, read the layout back."""
from __future__ import annotations

from collections.abc import Mapping

from sklearn.base import BaseEstimator

from .cost import ChartLayout
from .exceptions import InstanceError
from .formats import instance_from_dict, layout_report, parse_instance
from .fpt import DEFAULT_STATE_BUDGET
from .model import WeightedGraph
from .oracle import DEFAULT_BUDGET
from .solve import ALGORITHMS, solve


def check_instance(X) -> WeightedGraph:
    """Accept a :class:`WeightedGraph`, a decoded JSON mapping or JSON text."""
    if isinstance(X, WeightedGraph):
        return X
    if isinstance(X, Mapping):
        return instance_from_dict(X)
    if isinstance(X, (str, bytes)):
        return parse_instance(X.decode() if isinstance(X, bytes) else X)
    raise InstanceError(f"cannot interpret {type(X).__name__} as an instance")


class StackingOptimizer(BaseEstimator):
    """Find a stacking of every bar that minimizes the total vertical link length.

    Parameters
    ----------
    algorithm : {"auto", "no-dl", "forest", "nadl-forest", "fpt", "brute"}
        ``"auto"`` picks the cheapest solver whose structural precondition holds.
    oracle_budget : int
        Maximum number of layouts the brute-force solver may enumerate.
    state_budget : int
        Maximum table size of the tree-decomposition solver.

    Attributes
    ----------
    layout_ : ChartLayout
    cost_ : float
    algorithm_ : str
    diagnostics_ : Diagnostics
    """

    def __init__(self, algorithm: str = "auto", oracle_budget: int = DEFAULT_BUDGET,
                 state_budget: int = DEFAULT_STATE_BUDGET):
        self.algorithm = algorithm
        self.oracle_budget = oracle_budget
        self.state_budget = state_budget

    def _check_params(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        for name in ("oracle_budget", "state_budget"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def _solve(self, X):
        self._check_params()
        g = check_instance(X)
        return g, *solve(g, self.algorithm, self.oracle_budget, self.state_budget)

    def fit(self, X, y=None):
        g, seq, table, diag, layout = self._solve(X)
        self.instance_ = g
        self.sequences_ = seq
        self.links_ = table
        self.diagnostics_ = diag
        self.layout_ = layout
        self.cost_ = layout.total_cost
        self.algorithm_ = layout.algorithm
        return self

    def transform(self, X) -> ChartLayout:
        """Optimal layout of ``X`` under the fitted settings."""
        return self._solve(X)[-1]

    def fit_transform(self, X, y=None) -> ChartLayout:
        return self.fit(X).layout_

    def report(self, stats: bool = False) -> dict:
        """Layout report of the fitted instance."""
        return layout_report(self.instance_, self.sequences_, self.links_, self.layout_,
                             self.diagnostics_.as_dict(), stats)
