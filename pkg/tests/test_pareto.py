from fractions import Fraction as F

import pytest

from goalpost import (
    Agent,
    CapacityModel,
    Instance,
    TargetSet,
    brute_force_max_min,
    brute_force_pareto,
    improvement_report,
    max_min_solution,
    max_total_improvement,
    pareto_frontier,
    simultaneity_factor,
)
from goalpost.errors import NonIntegralInstance
from helpers import random_integral_instance

TWO_GROUPS = Instance((Agent(0, 2, 0), Agent(1, 2, 1)), 2, CapacityModel.COMMON)


def test_two_group_frontier():
    frontier = pareto_frontier(TWO_GROUPS, 1)
    assert frontier.welfare_set() == {(F(0), F(2)), (F(2), F(1))}
    by_welfare = {p.welfare: p.targets for p in frontier.points}
    assert by_welfare[(F(2), F(1))] == TargetSet((2,))
    assert by_welfare[(F(0), F(2))] == TargetSet((3,))


def test_single_group_frontier_is_the_optimum():
    inst = Instance.common([0, 1, 5], 2)
    frontier = pareto_frontier(inst, 2)
    assert len(frontier.points) == 1
    assert frontier.points[0].welfare == (max_total_improvement(inst, 2).value,)


def test_zero_budget_frontier():
    frontier = pareto_frontier(TWO_GROUPS, 0)
    assert frontier.welfare_set() == {(F(0), F(0))}
    assert frontier.points[0].targets == TargetSet(())


def test_rejects_non_integral_instances():
    inst = Instance((Agent(F(1, 2), 1, 0),), 1)
    with pytest.raises(NonIntegralInstance):
        pareto_frontier(inst, 1)
    with pytest.raises(NonIntegralInstance):
        max_min_solution(inst, 1)


def test_frontier_matches_oracle(rng):
    for _ in range(80):
        inst = random_integral_instance(rng)
        k = rng.randint(0, 3)
        frontier = pareto_frontier(inst, k)
        oracle = brute_force_pareto(inst, k)
        assert frontier.welfare_set() == oracle.welfare_set()
        # points sorted, achievable, within budget
        assert [p.welfare for p in frontier.points] == sorted(
            p.welfare for p in frontier.points
        )
        for point in frontier.points:
            assert len(point.targets) <= k
            assert improvement_report(inst, point.targets).group_totals == \
                point.welfare


def test_every_achievable_tuple_is_dominated_by_the_frontier(rng):
    from goalpost import iter_candidate_sets

    for _ in range(15):
        inst = random_integral_instance(rng, max_agents=5)
        k = rng.randint(0, 2)
        frontier = pareto_frontier(inst, k).welfare_set()
        for targets in iter_candidate_sets(inst, k):
            welfare = improvement_report(inst, targets).group_totals
            assert any(
                all(f >= w for f, w in zip(front, welfare)) for front in frontier
            )


def test_max_min_two_groups():
    value, point = max_min_solution(TWO_GROUPS, 1)
    assert value == 1
    assert point.welfare == (F(2), F(1))


def test_max_min_single_group_equals_optimum():
    inst = Instance.common([0, 1, 5], 2)
    value, _ = max_min_solution(inst, 2)
    assert value == max_total_improvement(inst, 2).value


def test_max_min_matches_oracle_and_grows_with_budget(rng):
    for _ in range(40):
        inst = random_integral_instance(rng)
        last = None
        for k in range(4):
            value, point = max_min_solution(inst, k)
            assert value == brute_force_max_min(inst, k)
            assert min(point.welfare) == value
            if last is not None:
                assert value >= last
            last = value


def test_no_placement_serves_both_groups_beyond_the_wall():
    # one agent per group at 0 and 1, capacity 2: any level low enough to let
    # the second agent pass 1 also intercepts it, so min welfare caps at 1
    value, _ = max_min_solution(TWO_GROUPS, 4)
    assert value == 1
    assert brute_force_max_min(TWO_GROUPS, 4) == 1


def max_min_starves_group_b_family() -> Instance:
    """Two groups, capacity 3: group A spread at 3,6,...,18, group B bundled
    at 19 and 22 (three agents each).  Even-handed placements must sit low,
    which costs group B nearly all of its solo optimum."""
    positions = [3, 6, 9, 12, 15, 18] + [19] * 3 + [22] * 3
    groups = [0] * 6 + [1] * 6
    return Instance.common(positions, 3, groups=groups)


def test_max_min_is_not_simultaneously_near_optimal():
    inst = max_min_starves_group_b_family()
    k = 2
    value, point = max_min_solution(inst, k)
    assert value == 6
    maxmin_alpha = simultaneity_factor(inst, point.targets, k)
    frontier = pareto_frontier(inst, k)
    best_alpha = max(
        simultaneity_factor(inst, p.targets, k) for p in frontier.points
    )
    assert maxmin_alpha == F(1, 3)
    assert best_alpha == F(1, 2)
    assert maxmin_alpha < best_alpha
