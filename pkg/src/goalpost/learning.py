"""Sample-size formulas and a seeded deviation experiment.

The closed-form bounds say how many positions drawn from an unknown
distribution suffice for the sample-average improvement of every candidate
target set (and, in the grouped variant, every group) to track its true
expectation.  The experiment harness checks them empirically on finite-
support distributions, where expectations are exact rationals and the
supremum over target sets reduces to subsets of the support-induced grid
(between grid points both the empirical and the expected term are constant
in the targets).

Sampling is exact as well: each draw is one uniform integer below the common
denominator of the support probabilities, so seeded runs reproduce bit for
bit.  Trial seeds derive from (master seed, trial index); trials are
independent and may run in any order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Optional, Sequence, Union

import numpy as np

from .errors import EmptySample, ParameterOutOfRange, SearchSpaceTooLarge
from .model import RationalLike, TargetSet, improvement_at, rational, rational_str
from .oracle import subset_cap


@dataclass(frozen=True)
class PositionDistribution:
    """Finite-support distribution over positions, with one shared capacity."""

    support: tuple[tuple[Fraction, Fraction], ...]  # (position, probability)
    capacity: Fraction

    def __post_init__(self) -> None:
        entries = tuple(
            (rational(p), rational(q)) for p, q in self.support
        )
        object.__setattr__(self, "support", entries)
        object.__setattr__(self, "capacity", rational(self.capacity))
        if not entries:
            raise ParameterOutOfRange("support must be nonempty")
        positions = [p for p, _ in entries]
        if len(set(positions)) != len(positions):
            raise ParameterOutOfRange("support positions must be distinct")
        if any(p < 0 for p in positions):
            raise ParameterOutOfRange("support positions must be non-negative")
        if self.capacity < 0:
            raise ParameterOutOfRange("capacity must be non-negative")
        if any(q <= 0 for _, q in entries):
            raise ParameterOutOfRange("probabilities must be positive")
        if sum(q for _, q in entries) != 1:
            raise ParameterOutOfRange("probabilities must sum to exactly 1")

    def grid(self) -> tuple[Fraction, ...]:
        levels = set()
        for p, _ in self.support:
            levels.add(p)
            levels.add(p + self.capacity)
        return tuple(sorted(levels))


@dataclass(frozen=True)
class GroupMixture:
    """Weighted mixture of per-group position distributions."""

    components: tuple[tuple[Fraction, PositionDistribution], ...]

    def __post_init__(self) -> None:
        entries = tuple((rational(w), d) for w, d in self.components)
        object.__setattr__(self, "components", entries)
        if not entries:
            raise ParameterOutOfRange("mixture must have at least one component")
        if any(w <= 0 for w, _ in entries):
            raise ParameterOutOfRange("mixture weights must be positive")
        if sum(w for w, _ in entries) != 1:
            raise ParameterOutOfRange("mixture weights must sum to exactly 1")

    @property
    def num_groups(self) -> int:
        return len(self.components)

    @property
    def alpha_min(self) -> Fraction:
        return min(w for w, _ in self.components)

    @property
    def delta_max(self) -> Fraction:
        return max(d.capacity for _, d in self.components)

    def grid(self) -> tuple[Fraction, ...]:
        levels: set[Fraction] = set()
        for _, dist in self.components:
            levels.update(dist.grid())
        return tuple(sorted(levels))


def _check_unit_open(name: str, value: Fraction) -> None:
    if not 0 < value < 1:
        raise ParameterOutOfRange(f"{name} must lie in (0, 1), got {value}")


def _check_positive(name: str, value: Fraction) -> None:
    if value <= 0:
        raise ParameterOutOfRange(f"{name} must be positive, got {value}")


def required_samples_single(
    epsilon: RationalLike,
    delta: RationalLike,
    k: int,
    delta_max: RationalLike,
) -> int:
    """Samples sufficient for every k-target set's empirical improvement to
    sit within O(epsilon) of its expectation, with probability 1 - delta."""
    eps, dlt, dmax = rational(epsilon), rational(delta), rational(delta_max)
    _check_positive("epsilon", eps)
    _check_unit_open("delta", dlt)
    if k < 1:
        raise ParameterOutOfRange(f"k must be at least 1, got {k}")
    if dmax < 0:
        raise ParameterOutOfRange("delta_max must be non-negative")
    bound = float(eps**-2 * dmax**2) * (k * math.log(k) + math.log(1 / dlt))
    return max(1, math.ceil(bound))


def required_samples_groups(
    epsilon: RationalLike,
    delta: RationalLike,
    k: int,
    delta_max: RationalLike,
    g: int,
    alpha_min: RationalLike,
) -> int:
    """Grouped variant: the guarantee holds per group, for samples drawn from
    the mixture without control over group membership."""
    eps, dlt, dmax = rational(epsilon), rational(delta), rational(delta_max)
    amin = rational(alpha_min)
    _check_positive("epsilon", eps)
    _check_unit_open("delta", dlt)
    if k < 1:
        raise ParameterOutOfRange(f"k must be at least 1, got {k}")
    if g < 1:
        raise ParameterOutOfRange(f"g must be at least 1, got {g}")
    if not 0 < amin <= 1:
        raise ParameterOutOfRange(f"alpha_min must lie in (0, 1], got {amin}")
    if dmax < 0:
        raise ParameterOutOfRange("delta_max must be non-negative")
    log_term = math.log(float(2 * g / dlt))
    inner = float(eps**-2 * dmax**2) * (k * math.log(k) + log_term) + 4 * log_term
    bound = float(2 / amin) * inner
    return max(1, math.ceil(bound))


def expected_improvement(dist: PositionDistribution, targets: TargetSet) -> Fraction:
    """Exact expectation of the improvement under the behavior rule."""
    return sum(
        (q * improvement_at(p, dist.capacity, targets) for p, q in dist.support),
        Fraction(0),
    )


def empirical_improvement(
    sample: Sequence[Fraction], capacity: Fraction, targets: TargetSet
) -> Fraction:
    """Mean improvement over a drawn sample of positions."""
    if not sample:
        raise EmptySample("cannot average an empty sample")
    total = sum(
        (improvement_at(rational(p), capacity, targets) for p in sample),
        Fraction(0),
    )
    return total / len(sample)


@dataclass(frozen=True)
class DeviationReport:
    seed: int
    n: int
    trials: int
    success_fraction: Fraction
    worst_deviation: Fraction

    def to_jsonable(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "trials": self.trials,
            "success_fraction": rational_str(self.success_fraction),
            "worst_deviation": rational_str(self.worst_deviation),
        }


def _candidate_sets(
    grid: Sequence[Fraction], k: int, max_subsets: Optional[int]
) -> list[TargetSet]:
    sizes = range(1, min(k, len(grid)) + 1)
    total = sum(comb(len(grid), size) for size in sizes)
    cap = subset_cap(max_subsets)
    if total > cap:
        raise SearchSpaceTooLarge(
            f"{total} candidate target sets exceed the cap of {cap}"
        )
    return [
        TargetSet(subset) for size in sizes for subset in combinations(grid, size)
    ]


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed, trial)))


def deviation_experiment(
    dist: Union[PositionDistribution, GroupMixture],
    k: int,
    epsilon: RationalLike,
    delta: RationalLike,
    trials: int,
    seed: int,
    *,
    tolerance_factor: RationalLike = 1,
    max_subsets: Optional[int] = None,
) -> DeviationReport:
    """Draw the formula-sized sample repeatedly and measure the worst
    empirical-vs-expected gap over all candidate target sets.

    A trial succeeds when that gap is at most ``tolerance_factor * epsilon``
    (the bound hides a constant; the default demands constant 1).  For
    mixtures the gap is additionally taken over groups, and a trial where
    some group drew no samples counts as a failure outright.
    """
    eps = rational(epsilon)
    tolerance = rational(tolerance_factor) * eps
    if trials < 1:
        raise ParameterOutOfRange("trials must be at least 1")
    if seed < 0:
        raise ParameterOutOfRange("seed must be non-negative")

    if isinstance(dist, GroupMixture):
        n = required_samples_groups(
            eps, delta, k, dist.delta_max, dist.num_groups, dist.alpha_min
        )
        num_groups = dist.num_groups
        positions = [p for _, d in dist.components for p, _ in d.support]
        capacities = [d.capacity for _, d in dist.components for _ in d.support]
        weights = [w * q for w, d in dist.components for _, q in d.support]
        groups = [gi for gi, (_, d) in enumerate(dist.components)
                  for _ in d.support]
        candidates = _candidate_sets(dist.grid(), k, max_subsets)
        per_set_expected = [
            tuple(expected_improvement(d, targets) for _, d in dist.components)
            for targets in candidates
        ]
    else:
        n = required_samples_single(eps, delta, k, dist.capacity)
        num_groups = 1
        positions = [p for p, _ in dist.support]
        capacities = [dist.capacity] * len(positions)
        weights = [q for _, q in dist.support]
        groups = [0] * len(positions)
        candidates = _candidate_sets(dist.grid(), k, max_subsets)
        per_set_expected = [
            (expected_improvement(dist, targets),) for targets in candidates
        ]

    num_outcomes = len(weights)
    per_set_gains = [
        [improvement_at(positions[oi], capacities[oi], targets)
         for oi in range(num_outcomes)]
        for targets in candidates
    ]
    group_outcomes = [
        [oi for oi in range(num_outcomes) if groups[oi] == gi]
        for gi in range(num_groups)
    ]
    denom = lcm(*(w.denominator for w in weights))
    if denom >= 2**62:
        raise ParameterOutOfRange(
            "probability denominators too large for exact sampling"
        )
    thresholds = []
    acc = 0
    for w in weights:
        acc += int(w * denom)
        thresholds.append(acc)

    successes = 0
    worst = Fraction(0)
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        draws = rng.integers(0, denom, size=n)
        outcome_idx = np.searchsorted(thresholds, draws, side="right")
        tallies = [0] * num_outcomes
        for u in outcome_idx:
            tallies[int(u)] += 1
        group_sizes = [
            sum(tallies[oi] for oi in members) for members in group_outcomes
        ]
        failed = any(size == 0 for size in group_sizes)
        trial_worst = Fraction(0)
        for gains, expected in zip(per_set_gains, per_set_expected):
            for gi, members in enumerate(group_outcomes):
                size = group_sizes[gi]
                if size == 0:
                    continue
                total = sum(
                    (gains[oi] * tallies[oi] for oi in members), Fraction(0)
                )
                gap = abs(total / size - expected[gi])
                if gap > trial_worst:
                    trial_worst = gap
        worst = max(worst, trial_worst)
        if not failed and trial_worst <= tolerance:
            successes += 1

    return DeviationReport(
        seed=seed,
        n=n,
        trials=trials,
        success_fraction=Fraction(successes, trials),
        worst_deviation=worst,
    )
