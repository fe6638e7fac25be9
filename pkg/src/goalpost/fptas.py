"""Approximation scheme for maximizing the worst group's welfare.

Groups may have different capacities here (uniform within each group), and
positions may be arbitrary rationals.  Two branches:

* Fewer targets than groups: enumerate every subset of the candidate grid of
  size at most k and return the exact max-min optimum.
* Otherwise: run the frontier recursion on welfare tuples that are rounded
  down, coordinate by coordinate, to a per-group step of
  epsilon * capacity / (16 * k * groups^3).  Rounding merges nearby tuples so
  the per-state sets stay polynomial, while each stored coordinate
  undershoots the welfare its witness really achieves by at most k steps.
  The witness whose rounded worst coordinate is largest is re-evaluated
  exactly, and that true welfare is returned; it is at least (1 - epsilon)
  times the optimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

from .errors import EpsilonOutOfRange, GroupCapacityNonUniform
from .model import (
    EMPTY_TARGETS,
    Instance,
    RationalLike,
    TargetSet,
    improvement_report,
    rational,
    validate_instance,
)
from .oracle import iter_candidate_sets
from .pareto import prune_dominated
from .tables import ContributionTable


@dataclass(frozen=True)
class FptasParams:
    """Rounding grid: one step per group, proportional to its capacity."""

    epsilon: Fraction
    steps: tuple[Fraction, ...]

    @classmethod
    def for_instance(
        cls, instance: Instance, k: int, epsilon: RationalLike
    ) -> "FptasParams":
        eps = rational(epsilon)
        if not 0 < eps < 1:
            raise EpsilonOutOfRange(f"epsilon must be in (0, 1), got {eps}")
        caps = group_capacities(instance)
        g = instance.num_groups
        steps = tuple(eps * cap / (16 * k * g**3) for cap in caps)
        return cls(eps, steps)


def group_capacities(instance: Instance) -> tuple[Fraction, ...]:
    """Per-group capacity; raises unless capacities agree within each group.

    Empty groups get capacity 0 (their welfare is identically 0).
    """
    caps: list[Optional[Fraction]] = [None] * instance.num_groups
    for agent in instance.agents:
        seen = caps[agent.group]
        if seen is None:
            caps[agent.group] = agent.capacity
        elif seen != agent.capacity:
            raise GroupCapacityNonUniform(
                f"group {agent.group} mixes capacities {seen} and {agent.capacity}"
            )
    return tuple(c if c is not None else Fraction(0) for c in caps)


@dataclass(frozen=True)
class MaxMinApproximation:
    """Result of the scheme: exact welfare of the returned target set.

    ``rounded_welfare`` is the stored per-group tuple the witness was chosen
    by (equal to the exact tuple on the small-budget branch), and
    ``table_peak`` the largest per-state tuple set seen; both are diagnostics.
    """

    value: Fraction
    targets: TargetSet
    rounded_welfare: tuple[Fraction, ...]
    table_peak: int


def _round_down(value: Fraction, step: Fraction) -> Fraction:
    if step == 0:
        return value
    return floor(value / step) * step


def _exact_small_budget(
    instance: Instance, k: int, max_subsets: Optional[int]
) -> MaxMinApproximation:
    best_low = Fraction(0)
    best_targets = EMPTY_TARGETS
    for targets in iter_candidate_sets(instance, k, max_subsets):
        low = min(improvement_report(instance, targets).group_totals)
        if low > best_low:
            best_low = low
            best_targets = targets
    welfare = improvement_report(instance, best_targets).group_totals
    return MaxMinApproximation(best_low, best_targets, welfare, 0)


def fptas_max_min(
    instance: Instance,
    k: int,
    epsilon: RationalLike,
    *,
    max_subsets: Optional[int] = None,
) -> MaxMinApproximation:
    """A target set whose worst-group welfare is within (1 - epsilon) of the
    best achievable with at most ``k`` targets; exact when ``k`` is below the
    group count."""
    if k < 1:
        raise ValueError("k must be at least 1")
    validate_instance(instance)
    params = FptasParams.for_instance(instance, k, epsilon)
    g = instance.num_groups
    if k < g:
        return _exact_small_budget(instance, k, max_subsets)

    table = ContributionTable(instance, engine="python")
    m = table.grid_size
    if m <= 1:
        zeros = (Fraction(0),) * g
        return MaxMinApproximation(Fraction(0), EMPTY_TARGETS, zeros, 0)
    scale = table.scale
    zero = (Fraction(0),) * g
    base = {zero: ()}
    prev = [base] * m
    peak = 1
    for _ in range(k):
        cur: list[dict[tuple[Fraction, ...], tuple[int, ...]]] = [base] * m
        for i in range(m - 1):
            merged: dict[tuple[Fraction, ...], tuple[int, ...]] = {}
            for j in range(i + 1, m):
                gain = table.group_credit_scaled(i, j)
                for welfare, chain in prev[j].items():
                    candidate = tuple(
                        _round_down(w + Fraction(d, scale), step)
                        for w, d, step in zip(welfare, gain, params.steps)
                    )
                    if candidate not in merged:
                        merged[candidate] = (j,) + chain
            pruned = dict(prune_dominated(merged))
            peak = max(peak, len(pruned))
            cur[i] = pruned
        prev = cur

    best_key = None
    for welfare in sorted(prev[0]):
        if best_key is None or min(welfare) > min(best_key):
            best_key = welfare
    chain = prev[0][best_key]
    served = [
        idx
        for pos, idx in zip((0,) + chain, chain)
        if any(table.group_credit_scaled(pos, idx))
    ]
    targets = table.chain_targets(served)
    true_low = min(improvement_report(instance, targets).group_totals)
    return MaxMinApproximation(true_low, targets, best_key, peak)
