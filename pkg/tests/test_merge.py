import random

import pytest

from linkedbars import PreconditionError, evaluate_layout, validate_instance
from linkedbars.merge import merge_table, solve_bar, solve_independent
from linkedbars.model import LEFT, RIGHT, prepare
from linkedbars.oracle import bar_merges, brute_force

from conftest import small_instances


def _merge_cost(merge, left_costs, right_costs):
    below = {LEFT: 0, RIGHT: 0}
    total = 0
    for side, i in merge:
        other = RIGHT if side == LEFT else LEFT
        total += (left_costs if side == LEFT else right_costs)[i][below[other]]
        below[side] += 1
    return total


def test_hand_example():
    # bar weight 1, L = [h=2 aiming at 10], R = [h=4 aiming at 0]
    left = [[abs(10 - 2), abs(10 - 6)]]
    right = [[abs(0 - 3), abs(0 - 5)]]
    order, cost = solve_bar(left, right)
    assert cost == 7
    assert order == [(RIGHT, 0), (LEFT, 0)]


def test_empty_left_side():
    order, cost = solve_bar([], [[1], [2], [3]])
    assert order == [(RIGHT, 0), (RIGHT, 1), (RIGHT, 2)] and cost == 6


def test_tie_prefers_left():
    order, _ = solve_bar([[0, 0]], [[0, 0]])
    assert order == [(RIGHT, 0), (LEFT, 0)]  # left taken last, so it ends on top


@pytest.mark.parametrize("seed", range(25))
def test_matches_exhaustive_merges(seed):
    rng = random.Random(seed)
    n_l, n_r = rng.randint(0, 4), rng.randint(0, 4)
    left = [[rng.randint(0, 9) for _ in range(n_r + 1)] for _ in range(n_l)]
    right = [[rng.randint(0, 9) for _ in range(n_l + 1)] for _ in range(n_r)]
    order, cost = solve_bar(left, right)
    best = min(_merge_cost(m, left, right) for m in bar_merges(n_l, n_r))
    assert cost == best == _merge_cost(order, left, right)
    table = merge_table(left, right)
    assert table.D[0][0] == 0 and all(x >= 0 for row in table.D for x in row)


def test_solve_independent_examples(il3):
    seq, table = prepare(il3)
    layout = solve_independent(il3, seq, table)
    assert layout.total_cost == 6 and layout.algorithm == "no-dl"
    g = validate_instance([1, 2], [])
    assert solve_independent(g, *prepare(g)).total_cost == 0


def test_solve_independent_refuses_dependent(chain4):
    with pytest.raises(PreconditionError) as info:
        solve_independent(chain4, *prepare(chain4))
    assert info.value.witness == [1]


def test_solve_independent_equals_oracle():
    checked = 0
    for g, seq, table in small_instances(300):
        if table.dependent_edges:
            continue
        layout = solve_independent(g, seq, table)
        _, best = brute_force(g, seq, table)
        assert layout.total_cost == best == evaluate_layout(g, seq, table, layout)
        assert layout.stats["cells"] == sum((len(seq.left[j]) + 1) * (len(seq.right[j]) + 1) for j in range(g.n))
        checked += 1
    assert checked >= 20
