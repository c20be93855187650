import pytest

from linkedbars import GeneratorParams, PreconditionError, evaluate_layout, generate, validate_layout
from linkedbars.forest import ForestDP, dl_forest, find_cycle, solve_forest
from linkedbars.merge import solve_independent
from linkedbars.model import LinkKind, prepare
from linkedbars.nadl_forest import NadlForestDP, extend_forest, solve_nadl_forest
from linkedbars.oracle import brute_force

from conftest import small_instances


def test_extension_is_maximal():
    for g, seq, table in small_instances(120):
        try:
            ef = extend_forest(g, table)
        except PreconditionError:
            continue
        tree = set(ef.tree_edges)
        nadl = set(table.edges_of_kind(LinkKind.NADL))
        assert nadl <= tree
        assert find_cycle(g.n, g.edges, sorted(tree)) is None
        for e in ef.residual:
            assert table[e].kind is LinkKind.ADL
            assert find_cycle(g.n, g.edges, sorted(tree | {e})) is not None
        for b in range(g.n):
            r = b
            while ef.forest.parent[r] >= 0:
                r = ef.forest.parent[r]
            assert r <= b  # roots are the leftmost bars of their trees


def test_nadl_path_gets_no_adls():
    # Two NADLs in a row under tall separators; no adjacent links at all.
    g = None
    for seed in range(500):
        cand = generate(GeneratorParams(n=6, edges=5, seed=seed, bar_weight_min=0, bar_weight_max=1))
        _, table = prepare(cand)
        if table.edges_of_kind(LinkKind.NADL) and not table.edges_of_kind(LinkKind.ADL):
            g = cand
            break
    assert g is not None
    _, table = prepare(g)
    ef = extend_forest(g, table)
    assert sorted(ef.tree_edges) == table.edges_of_kind(LinkKind.NADL) and not ef.residual


def test_il_only_matches_independent(il3):
    seq, table = prepare(il3)
    assert solve_nadl_forest(il3, seq, table).total_cost == solve_independent(il3, seq, table).total_cost


def test_parameter_collapse():
    """Without residual ADLs the subtree tables equal those of the forest solver."""
    checked = 0
    for g, seq, table in small_instances(200):
        try:
            ef = extend_forest(g, table)
        except PreconditionError:
            continue
        if ef.residual:
            continue
        nd = NadlForestDP(g, seq, table, ef)
        nd.run()
        fd = ForestDP(g, seq, table, dl_forest(g, table))
        fd.run()
        for bar in range(g.n):
            assert list(nd.P[bar].arr.ravel()) == fd.P[bar]
        checked += 1
    assert checked >= 100


def test_equals_oracle_with_residual_adls():
    residual = 0
    for g, seq, table in small_instances(400):
        try:
            ef = extend_forest(g, table)
        except PreconditionError:
            continue
        residual += bool(ef.residual)
        layout = solve_nadl_forest(g, seq, table, ef)
        assert validate_layout(g, seq, layout) == []
        _, best = brute_force(g, seq, table)
        assert layout.total_cost == best == evaluate_layout(g, seq, table, layout)
    assert residual >= 30


def test_agrees_with_forest_solver():
    for g, seq, table in small_instances(150, limit=10**7):
        if find_cycle(g.n, g.edges, table.dependent_edges):
            continue
        assert solve_nadl_forest(g, seq, table).total_cost == solve_forest(g, seq, table).total_cost


def test_nadl_cycle_is_refused(nadl_cycle):
    seq, table = prepare(nadl_cycle)
    assert len(table.edges_of_kind(LinkKind.NADL)) == 3
    with pytest.raises(PreconditionError) as info:
        extend_forest(nadl_cycle, table)
    assert sorted(info.value.witness) == [0, 1, 2]
