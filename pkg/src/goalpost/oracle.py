"""Brute-force ground truth on small instances.

Everything here enumerates subsets of the potential-target grid outright and
evaluates them with the behavior rule, so the results are correct by
definition.  The enumeration size is checked up front against a hard cap
(default 2e6 subsets, overridable via the GOALPOST_MAX_SUBSETS environment
variable) and refused loudly rather than silently truncated: a lying oracle
is worse than none.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterator, Optional

from .errors import SearchSpaceTooLarge
from .model import (
    EMPTY_TARGETS,
    Instance,
    TargetSet,
    improvement_report,
    potential_targets,
    validate_instance,
)
from .pareto import FrontierPoint, ParetoFrontier, prune_dominated
from .welfare import DpSolution

DEFAULT_MAX_SUBSETS = 2_000_000
MAX_SUBSETS_ENV = "GOALPOST_MAX_SUBSETS"


def subset_cap(override: Optional[int] = None) -> int:
    if override is not None:
        return override
    env = os.environ.get(MAX_SUBSETS_ENV)
    return int(env) if env else DEFAULT_MAX_SUBSETS


def iter_candidate_sets(
    instance: Instance, k: int, max_subsets: Optional[int] = None
) -> Iterator[TargetSet]:
    """All subsets of the potential-target grid of size 0..k, smallest first."""
    validate_instance(instance)
    grid = potential_targets(instance).levels
    sizes = range(min(k, len(grid)) + 1)
    total = sum(comb(len(grid), size) for size in sizes)
    cap = subset_cap(max_subsets)
    if total > cap:
        raise SearchSpaceTooLarge(
            f"{total} candidate subsets exceed the cap of {cap}"
        )
    for size in sizes:
        for subset in combinations(grid, size):
            yield TargetSet(subset)


def brute_force_optimum(
    instance: Instance, k: int, max_subsets: Optional[int] = None
) -> DpSolution:
    """Exhaustive maximum total improvement over target sets of size <= k."""
    best_value = Fraction(0)
    best_targets = EMPTY_TARGETS
    for targets in iter_candidate_sets(instance, k, max_subsets):
        value = improvement_report(instance, targets).total
        if value > best_value:
            best_value = value
            best_targets = targets
    return DpSolution(best_value, best_targets)


def brute_force_pareto(
    instance: Instance, k: int, max_subsets: Optional[int] = None
) -> ParetoFrontier:
    """Exhaustive non-dominated group-welfare tuples, each with a witness set."""
    achieved: dict[tuple[Fraction, ...], TargetSet] = {}
    for targets in iter_candidate_sets(instance, k, max_subsets):
        welfare = improvement_report(instance, targets).group_totals
        achieved.setdefault(welfare, targets)
    points = prune_dominated(achieved)
    return ParetoFrontier(
        tuple(FrontierPoint(w, t) for w, t in points), instance.num_groups
    )


def brute_force_max_min(
    instance: Instance, k: int, max_subsets: Optional[int] = None
) -> Fraction:
    """Exhaustive maximum over target sets of the minimum group welfare."""
    best = Fraction(0)
    for targets in iter_candidate_sets(instance, k, max_subsets):
        welfare = improvement_report(instance, targets).group_totals
        low = min(welfare) if welfare else Fraction(0)
        if low > best:
            best = low
    return best
