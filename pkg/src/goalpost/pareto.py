"""Exact Pareto frontier of per-group welfare, and max-min extraction.

Same left-to-right recursion as the single-objective solver, except each
state holds the set of all non-dominated per-group welfare tuples achievable
for agents at or above that grid level, each paired with one witness chain of
targets.  Dominated tuples are discarded at every state, not just at the
root: tuples compose additively along transitions, so dominance is preserved
and the per-state sets stay within their pseudo-polynomial bound.

The exact DP requires integral positions and capacities; rational instances
should be rescaled by the caller or routed to the max-min approximation
scheme instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import NonIntegralInstance
from .model import Instance, TargetSet, validate_instance
from .tables import ContributionTable

WelfareTuple = tuple[Fraction, ...]


@dataclass(frozen=True)
class FrontierPoint:
    welfare: WelfareTuple
    targets: TargetSet

    @property
    def min_welfare(self) -> Fraction:
        return min(self.welfare)


@dataclass(frozen=True)
class ParetoFrontier:
    """Non-dominated welfare tuples, sorted lexicographically."""

    points: tuple[FrontierPoint, ...]
    num_groups: int

    def welfare_set(self) -> frozenset[WelfareTuple]:
        return frozenset(p.welfare for p in self.points)


def _dominates(a: tuple, b: tuple) -> bool:
    """True when a is componentwise >= b and differs somewhere."""
    return a != b and all(x >= y for x, y in zip(a, b))


def prune_dominated(candidates: Mapping[tuple, object]) -> list[tuple[tuple, object]]:
    """Keep the non-dominated keys (with payloads), sorted lexicographically.

    Scanning in descending lexicographic order means any dominator of a tuple
    is seen before the tuple itself, so one pass against the kept list works.
    """
    kept: list[tuple[tuple, object]] = []
    for key in sorted(candidates, reverse=True):
        if not any(_dominates(prev, key) for prev, _ in kept):
            kept.append((key, candidates[key]))
    kept.reverse()
    return kept


def _require_integral(instance: Instance) -> None:
    if not instance.is_integral:
        raise NonIntegralInstance(
            "the exact frontier DP needs integer positions and capacities; "
            "rescale the instance or use the max-min approximation scheme"
        )


def pareto_frontier(
    instance: Instance, k: int, *, table: Optional[ContributionTable] = None
) -> ParetoFrontier:
    """All non-dominated per-group welfare tuples over target sets of size <= k,
    each with one witnessing TargetSet (first found in scan order)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    validate_instance(instance)
    _require_integral(instance)
    if table is None:
        table = ContributionTable(instance, engine="python")
    m = table.grid_size
    g = instance.num_groups
    zero = (0,) * g
    if m <= 1 or k == 0:
        return ParetoFrontier(
            (FrontierPoint((Fraction(0),) * g, TargetSet(())),), g
        )

    # States hold scaled-integer tuples mapped to witness index chains.
    base = {zero: ()}
    prev = [base] * m
    for _ in range(k):
        cur: list[dict[tuple[int, ...], tuple[int, ...]]] = [base] * m
        for i in range(m - 1):
            merged: dict[tuple[int, ...], tuple[int, ...]] = {}
            for j in range(i + 1, m):
                gain = table.group_credit_scaled(i, j)
                for welfare, chain in prev[j].items():
                    candidate = tuple(w + d for w, d in zip(welfare, gain))
                    if candidate not in merged:
                        merged[candidate] = (j,) + chain
            cur[i] = dict(prune_dominated(merged))
        prev = cur

    points = []
    for welfare, chain in sorted(prev[0].items()):
        exact = tuple(table.to_fraction(w) for w in welfare)
        served = [
            idx
            for pos, idx in zip((0,) + chain, chain)
            if any(table.group_credit_scaled(pos, idx))
        ]
        points.append(FrontierPoint(exact, table.chain_targets(served)))
    return ParetoFrontier(tuple(points), g)


def max_min_solution(
    instance: Instance, k: int, *, table: Optional[ContributionTable] = None
) -> tuple[Fraction, FrontierPoint]:
    """The frontier point maximizing the worst group's welfare.

    Ties resolve to the lexicographically smallest welfare tuple.
    """
    frontier = pareto_frontier(instance, k, table=table)
    best = frontier.points[0]
    for point in frontier.points[1:]:
        if point.min_welfare > best.min_welfare:
            best = point
    return best.min_welfare, best
