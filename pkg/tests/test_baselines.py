import math
import random

import pytest

from abst.baselines import (
    WeightVector,
    balanced_static_cost,
    brute_force_static_cost,
    optimal_static_cost,
    stat_entropy_bounds,
    tree_cost,
)
from abst.trees import depth_map, format_tree, in_order


def test_weight_vector_validation():
    WeightVector((0, 0, 9))
    with pytest.raises(ValueError):
        WeightVector(())
    with pytest.raises(ValueError):
        WeightVector((1, -1))
    with pytest.raises(ValueError):
        WeightVector((0, 0, 0))


def test_optimal_single_key():
    cost, tree = optimal_static_cost(WeightVector((5,)))
    assert cost == 5
    assert format_tree(tree) == "(1 . .)"


def test_optimal_three_uniform():
    cost, tree = optimal_static_cost(WeightVector((1, 1, 1)))
    assert cost == 5
    assert tree.root.key == 2


def test_optimal_example_weights():
    cost, tree = optimal_static_cost(WeightVector((1, 2, 4, 2, 1)))
    assert cost == 18
    assert format_tree(tree) == "(3 (2 (1 . .) .) (4 . (5 . .)))"


def test_brute_force_values():
    assert brute_force_static_cost(WeightVector((1, 1, 1))) == 5
    assert brute_force_static_cost(WeightVector((1, 3))) == 5
    assert brute_force_static_cost(WeightVector((7,))) == 7
    assert brute_force_static_cost(WeightVector((1, 2, 4, 2, 1))) == 18


def test_brute_force_refuses_large_n():
    with pytest.raises(ValueError):
        brute_force_static_cost(WeightVector((1,) * 13))


def test_dp_matches_brute_force_random():
    rng = random.Random(31)
    for _ in range(60):
        n = rng.randint(1, 7)
        weights = WeightVector(
            tuple(rng.randint(0, 9) for _ in range(n - 1)) + (rng.randint(1, 9),)
        )
        cost, tree = optimal_static_cost(weights)
        assert cost == brute_force_static_cost(weights)
        assert tree_cost(tree, weights) == cost
        assert in_order(tree) == list(range(1, n + 1))


def test_zero_weight_keys_stay_in_tree():
    weights = WeightVector((0, 0, 9))
    cost, tree = optimal_static_cost(weights)
    assert sorted(depth_map(tree)) == [1, 2, 3]
    assert cost == 9  # key 3 can sit at the root


def test_balanced_cost_examples():
    assert balanced_static_cost(WeightVector((2, 2, 2, 2, 2))) == 22
    assert balanced_static_cost(WeightVector((4,))) == 4
    assert balanced_static_cost(WeightVector((0, 0, 9))) == 18


def test_optimal_never_exceeds_balanced():
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 30)
        weights = WeightVector(
            tuple(rng.randint(0, 50) for _ in range(n - 1)) + (rng.randint(1, 50),)
        )
        assert optimal_static_cost(weights)[0] <= balanced_static_cost(weights)


def test_entropy_annotation_band():
    lower, upper = stat_entropy_bounds(WeightVector((1, 1, 1, 1)))
    assert lower == pytest.approx(4 * 2.0 / math.log2(3))
    assert upper == pytest.approx(2.0 * 4 * 3.0)
    lower, upper = stat_entropy_bounds(WeightVector((6,)))
    assert lower == pytest.approx(6 / math.log2(3))
    assert upper == pytest.approx(12.0)
