"""Command-line interface: ``solve``, ``generate`` and ``check``."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .exceptions import BudgetExceeded, LinkedBarsError, PreconditionError
from .formats import dump_instance, dump_report, format_table, layout_report, parse_instance
from .fpt import DEFAULT_STATE_BUDGET
from .generators import SHAPES, GeneratorParams, generate
from .oracle import DEFAULT_BUDGET, brute_force
from .solve import ALGORITHMS, solve
from .svg import SvgStyle, render_svg

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkedbars", description="Optimal stacking of linked bars.")
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_args(p):
        p.add_argument("instance", help="instance JSON file, or - for standard input")
        p.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
        p.add_argument("--out", help="write the JSON layout report here")
        p.add_argument("--svg", help="write an SVG drawing here")
        p.add_argument("--scale", type=float, default=SvgStyle.scale, help="SVG pixels per chart unit")
        p.add_argument("--oracle-budget", type=_positive, default=DEFAULT_BUDGET)
        p.add_argument("--state-budget", type=_positive, default=DEFAULT_STATE_BUDGET)
        p.add_argument("--stats", action="store_true", help="include solver statistics")

    solver_args(sub.add_parser("solve", help="compute an optimal layout"))
    solver_args(sub.add_parser("check", help="solve and compare against exhaustive search"))

    gen = sub.add_parser("generate", help="write a random instance")
    gen.add_argument("--n", type=_positive, default=6)
    gen.add_argument("--edges", type=int, default=6)
    gen.add_argument("--shape", choices=SHAPES, default="arbitrary")
    gen.add_argument("--weight-min", type=int, default=1)
    gen.add_argument("--weight-max", type=int, default=8)
    gen.add_argument("--max-degree", type=_positive)
    gen.add_argument("--max-span", type=_positive)
    gen.add_argument("--seed", type=_seed, default=0)
    gen.add_argument("--out", help="output file (default: standard output)")
    return parser


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _solve(args) -> int:
    g = parse_instance(_read(args.instance))
    started = time.perf_counter()
    seq, table, diag, layout = solve(g, args.algorithm, args.oracle_budget, args.state_budget)
    elapsed = time.perf_counter() - started
    report = layout_report(g, seq, table, layout, diag.as_dict(), args.stats)
    sys.stdout.write(format_table(report))
    if args.stats:
        print(f"elapsed: {elapsed:.3f} s", file=sys.stderr)
    if args.out:
        _write(args.out, dump_report(report))
    if args.svg:
        _write(args.svg, render_svg(g, seq, table, layout, SvgStyle(scale=args.scale)))
    if args.command == "check":
        _, best = brute_force(g, seq, table, args.oracle_budget)
        if layout.total_cost != best:
            print(f"MISMATCH: {layout.algorithm} cost {layout.total_cost} != exhaustive optimum {best}",
                  file=sys.stderr)
            return EXIT_MISMATCH
        print(f"ok: {layout.algorithm} cost equals exhaustive optimum {best}")
    return EXIT_OK


def _generate(args) -> int:
    params = GeneratorParams(n=args.n, edges=args.edges, weight_min=args.weight_min,
                             weight_max=args.weight_max, shape=args.shape, seed=args.seed,
                             max_degree=args.max_degree, max_span=args.max_span)
    _write(args.out, dump_instance(generate(params)))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _generate(args) if args.command == "generate" else _solve(args)
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
    except (LinkedBarsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
