"""Optimal stacking orders for bar charts whose bars are connected by weighted links."""
from .cost import ChartLayout, evaluate_layout, link_route, validate_layout
from .estimator import StackingOptimizer, check_instance
from .exceptions import BudgetExceeded, InstanceError, InvalidLayoutError, LinkedBarsError, PreconditionError
from .formats import dump_instance, layout_report, parse_instance
from .generators import GeneratorParams, generate
from .model import LinkKind, WeightedGraph, prepare, validate_instance
from .oracle import brute_force, enumerate_layouts
from .solve import diagnose, solve
from .svg import render_svg

__all__ = [
    "BudgetExceeded", "ChartLayout", "GeneratorParams", "InstanceError", "InvalidLayoutError",
    "LinkKind", "LinkedBarsError", "PreconditionError", "StackingOptimizer", "WeightedGraph",
    "brute_force", "check_instance", "diagnose", "dump_instance", "enumerate_layouts",
    "evaluate_layout", "generate", "layout_report", "link_route", "parse_instance", "prepare",
    "render_svg", "solve", "validate_instance", "validate_layout",
]
__version__ = "0.1.0"
