"""Acceptance gate: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import time
import xml.etree.ElementTree as ET

import pytest

from linkedbars import GeneratorParams, generate, render_svg, validate_instance
from linkedbars.cost import evaluate_layout, independent_costs, link_cost_matrix
from linkedbars.forest import find_cycle, solve_forest
from linkedbars.fpt import build_tree_decomposition, check_decomposition, solve_fpt
from linkedbars.merge import solve_independent
from linkedbars.model import LinkKind, prepare
from linkedbars.nadl_forest import solve_nadl_forest
from linkedbars.oracle import brute_force, count_layouts
from linkedbars.solve import solve

RESULTS: dict[int, str] = {}
TD_NODE_FACTOR = 10  # decomposition size bound: nodes <= TD_NODE_FACTOR * n
DL_RICH = dict(max_span=2, bar_weight_min=0, bar_weight_max=2)


def record(number: int, ok: bool, text: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
    RESULTS[number] = line
    print(line)
    assert ok, line


def _seeded(count, make, limit=10**5):
    """First ``count`` instances from ``make(seed)`` whose layout count is within ``limit``."""
    out = []
    for seed in itertools.count():
        g = make(seed)
        seq, table = prepare(g)
        if count_layouts(seq) <= limit:
            out.append((g, seq, table))
            if len(out) == count:
                return out


def _oracle_instance(seed):
    rng = random.Random(seed)
    return generate(GeneratorParams(
        n=rng.randint(3, 6), edges=rng.randint(3, 9), max_degree=4,
        shape=("arbitrary", "unimodal", "valley", "forest-dl")[seed % 4],
        max_span=rng.choice([None, 2, 3]), seed=seed, max_attempts=10**4))


def _dl_rich(seed, n=7, edges=9):
    return generate(GeneratorParams(n=n, edges=edges, max_degree=4, seed=seed, **DL_RICH))


def test_oracle_equivalence():
    start = time.perf_counter()
    instances = _seeded(600, _oracle_instance)
    checks = mismatches = 0
    for g, seq, table in instances:
        _, best = brute_force(g, seq, table)
        solvers = [solve_fpt]
        if not table.dependent_edges:
            solvers.append(solve_independent)
        if find_cycle(g.n, g.edges, table.dependent_edges) is None:
            solvers.append(solve_forest)
        if find_cycle(g.n, g.edges, table.edges_of_kind(LinkKind.NADL)) is None:
            solvers.append(solve_nadl_forest)
        for solver in solvers:
            layout = solver(g, seq, table)
            checks += 1
            if not (layout.total_cost == best == evaluate_layout(g, seq, table, layout)):
                mismatches += 1
    elapsed = time.perf_counter() - start
    dl = sum(bool(t.dependent_edges) for _, _, t in instances)
    record(1, mismatches == 0 and elapsed < 60,
           f"{len(instances)} instances ({dl} with dependent links), {checks} solver runs, "
           f"{mismatches} mismatches vs brute force, {elapsed:.1f} s (limit 60 s)")


def test_cross_solver_agreement():
    forest_cases = nadl_cases = bad = 0
    for seed in itertools.count():
        if forest_cases >= 200 and nadl_cases >= 200:
            break
        g = _dl_rich(seed)
        seq, table = prepare(g)
        if count_layouts(seq) > 10**5 or not table.dependent_edges:
            continue
        if find_cycle(g.n, g.edges, table.dependent_edges) is None:
            if forest_cases >= 200:
                continue
            costs = {solve_forest(g, seq, table).total_cost, solve_nadl_forest(g, seq, table).total_cost,
                     solve_fpt(g, seq, table).total_cost, brute_force(g, seq, table)[1]}
            forest_cases += 1
        elif find_cycle(g.n, g.edges, table.edges_of_kind(LinkKind.NADL)) is None:
            if nadl_cases >= 200:
                continue
            costs = {solve_nadl_forest(g, seq, table).total_cost, solve_fpt(g, seq, table).total_cost,
                     brute_force(g, seq, table)[1]}
            nadl_cases += 1
        else:
            continue
        bad += len(costs) != 1
    record(2, bad == 0,
           f"{forest_cases} dependent-forest and {nadl_cases} non-adjacent-forest instances "
           f"(the latter all with dependent cycles), {bad} disagreements")


def test_il_decomposition():
    instances = _seeded(250, lambda s: _dl_rich(s) if s % 2 else _oracle_instance(s), limit=10**12)
    pairs = bad = 0
    for g, seq, table in instances:
        for rec in table:
            if rec.kind is not LinkKind.IL:
                continue
            cu = independent_costs(rec, seq, rec.u)
            cv = independent_costs(rec, seq, rec.v)
            for i, row in enumerate(link_cost_matrix(rec, seq)):
                for j, c in enumerate(row):
                    pairs += 1
                    bad += c != cu[i] + cv[j]
    record(3, bad == 0 and pairs > 0,
           f"{len(instances)} instances, {pairs} placement pairs of independent links, {bad} violations")


def test_dependent_links_do_not_cross():
    instances = _seeded(250, lambda s: _dl_rich(s, n=12, edges=20) if s % 2 else _oracle_instance(s),
                        limit=10**30)
    pairs = bad = 0
    for g, _, table in instances:
        for e, f in itertools.combinations(table.dependent_edges, 2):
            (a, b), (c, d) = sorted([g.edges[e], g.edges[f]])
            pairs += 1
            bad += a < c < b < d
    record(4, bad == 0, f"{len(instances)} instances, {pairs} dependent-link pairs, {bad} crossings")


def test_height_profiles():
    bad_paths = bad_forest = 0
    for seed in range(100):
        g = generate(GeneratorParams(n=8, edges=12, shape="unimodal", seed=seed, bar_weight_min=0))
        _, table = prepare(g)
        bad_paths += max(table.dl_degrees()) > 2 or find_cycle(g.n, g.edges, table.dependent_edges) is not None
        g = generate(GeneratorParams(n=8, edges=12, shape="valley", seed=seed, bar_weight_min=0))
        _, table = prepare(g)
        bad_forest += find_cycle(g.n, g.edges, table.edges_of_kind(LinkKind.NADL)) is not None
    record(5, bad_paths == 0 and bad_forest == 0,
           f"100 single-peak instances: {bad_paths} non-path dependent subgraphs; "
           f"100 single-valley instances: {bad_forest} non-forest non-adjacent subgraphs")


def test_tree_decomposition_validity():
    bad = 0
    worst = 0.0
    width2 = 0
    count = 0
    for seed in range(250):
        n = 5 + seed % 40
        g = _dl_rich(seed, n=n, edges=int(1.6 * n))
        _, table = prepare(g)
        dl = table.dependent_edges
        td = build_tree_decomposition(g.n, g.edges, dl)
        problems = check_decomposition(td, g.edges, dl)
        ratio = len(td.nodes) / g.n
        worst = max(worst, ratio)
        width2 += td.width == 2
        bad += bool(problems) or ratio > TD_NODE_FACTOR
        count += 1
    record(6, bad == 0,
           f"{count} decompositions ({width2} of width 2), {bad} invalid, "
           f"max nodes/n = {worst:.2f} (bound {TD_NODE_FACTOR})")


def independent_only_instance(n, m, seed=0):
    """Every third bar is a tall empty separator, so every link passes over one."""
    rng = random.Random(seed)
    weights = [1000 if j % 3 == 0 else rng.randint(1, 8) for j in range(n)]
    others = [j for j in range(n) if j % 3]
    edges = set()
    while len(edges) < m:
        u = rng.choice(others)
        v = u + rng.randint(2, 8)
        if v < n and v % 3 and u // 3 != v // 3:
            edges.add((u, v))
    return validate_instance(weights, [(u, v, rng.randint(1, 8)) for u, v in sorted(edges)])


def _prune(g, too_many):
    """Drop offending edges and reclassify until ``too_many(g, table)`` is empty."""
    while True:
        seq, table = prepare(g)
        drop = too_many(g, table)
        if not drop:
            return g, seq, table
        keep = [e for e in range(g.m) if e not in drop]
        g = validate_instance(list(zip(g.ids, g.weights)),
                              [(*g.edges[e], g.edge_weights[e]) for e in keep])


def _cycle_closers(g, table):
    parent = list(range(g.n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    drop = set()
    for e in table.dependent_edges:
        a, b = root(g.edges[e][0]), root(g.edges[e][1])
        if a == b:
            drop.add(e)
        else:
            parent[a] = b
    return drop


def _crowded(g, table):
    deg = table.dl_degrees()
    return {e for e in table.dependent_edges if max(deg[g.edges[e][0]], deg[g.edges[e][1]]) > 2}


def test_complexity_smoke():
    g = independent_only_instance(10**4, 2 * 10**4)
    seq, table = prepare(g)
    t = time.perf_counter()
    solve_independent(g, seq, table)
    t_il = time.perf_counter() - t
    ok_il = not table.dependent_edges and t_il < 2

    g, seq, table = _prune(generate(GeneratorParams(n=5000, edges=8700, max_degree=8, seed=0, **DL_RICH)),
                           _cycle_closers)
    t = time.perf_counter()
    solve_forest(g, seq, table)
    t_forest = time.perf_counter() - t
    forest_m, forest_dl = g.m, len(table.dependent_edges)
    ok_forest = g.m >= 8000 and t_forest < 5

    g, seq, table = _prune(generate(GeneratorParams(n=1000, edges=3600, max_degree=8, max_span=4, seed=0,
                                                    bar_weight_min=0, bar_weight_max=3)), _crowded)
    t = time.perf_counter()
    layout = solve_fpt(g, seq, table)
    t_fpt = time.perf_counter() - t
    ok_fpt = table.delta <= 2 and seq.max_degree() <= 8 and t_fpt < 10
    record(7, ok_il and ok_forest and ok_fpt,
           f"independent n=10000 m=20000: {t_il:.2f} s (<2); "
           f"forest n=5000 m={forest_m} ({forest_dl} dependent): {t_forest:.2f} s (<5); "
           f"tree decomposition n=1000 delta={table.delta} Delta={seq.max_degree()} "
           f"width={layout.stats['width']}: {t_fpt:.2f} s (<10)")


def test_rendering_audit():
    ns = "{http://www.w3.org/2000/svg}"
    bad = links = 0
    worst = 0.0
    instances = _seeded(50, lambda s: _dl_rich(s) if s % 2 else _oracle_instance(s), limit=10**12)
    for g, _, _ in instances:
        seq, table, _, layout = solve(g)
        root = ET.fromstring(render_svg(g, seq, table, layout))
        scale = float(root.get("data-scale"))
        vertical = 0.0
        for pl in root.iter(ns + "polyline"):
            pts = [tuple(map(float, p.split(","))) for p in pl.get("points").split()]
            links += 1
            bad += (len(pts) - 2) not in (0, 2, 4)
            vertical += sum(abs(b[1] - a[1]) for a, b in zip(pts, pts[1:])) / scale
        diff = abs(vertical - layout.total_cost)
        worst = max(worst, diff)
        bad += diff > 1e-6
    record(8, bad == 0,
           f"{len(instances)} drawings, {links} links, {bad} violations, "
           f"max |vertical length - cost| = {worst:.2e} (tolerance 1e-6)")


_RUN = """
import sys
from linkedbars.cli import main
for seed in range(12):
    base = sys.argv[1] + f"/i{seed}"
    shape = ("arbitrary", "valley", "unimodal")[seed % 3]
    main(["generate", "--n", "7", "--edges", "9", "--max-span", "2", "--shape", shape,
          "--seed", str(seed), "--out", base + ".json"])
    main(["solve", base + ".json", "--out", base + ".report.json", "--svg", base + ".svg"])
"""


def _run_batch(directory, hash_seed):
    env = dict(os.environ, PYTHONHASHSEED=str(hash_seed))
    subprocess.run([sys.executable, "-c", _RUN, str(directory)], check=True, env=env,
                   stdout=subprocess.DEVNULL)
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir())}


def test_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    first = _run_batch(a, 1)
    second = _run_batch(b, 2)
    reports = [k for k in first if k.endswith(".report.json")]
    same = first == second and len(reports) == 12
    record(9, same,
           f"{len(reports)} reports, {len(first)} files from two separate runs, "
           f"{sum(first.get(k) != second.get(k) for k in first)} differing")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
