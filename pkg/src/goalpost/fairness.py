"""A target placement that is approximately optimal for every group at once.

Natural candidates fail here: the max-min point can starve a group relative
to what it could earn alone, and the plain union of per-group optima lets one
group's targets intercept another's agents just short of their real goal.
The pipeline below sidesteps both, in four passes over a common-capacity
instance (capacity ``D``, ``g`` groups, budget ``k >= g``):

1. Solve each group alone with budget ceil(k/g), then drop middles of any
   target triple packed tighter than ``D`` (welfare-safe for that group).
2. Keep only the best residue class mod 4 of each group's targets: spacing
   grows to at least ``2 D`` per group at the cost of at most 3/4 of the
   group's welfare.
3. Within each target's catchment window ``[t - D, t)``, re-place the target
   optimally for the window's agents (it lands in ``[t, t + D]``), after
   discarding agents no target serves.
4. Merge all groups' targets and relocate clustered ones so that every
   original window keeps a target in its right part and none lands in its
   leftmost ``D/g`` sliver, which caps the welfare lost to interference.

The result uses at most ``k`` levels and every group retains at least
``1/(16 g^2)`` of its solo optimum at budget ceil(k/g), hence ``1/(16 g^3)``
of its solo optimum at budget ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BudgetBelowGroupCount,
    EmptyGroup,
    IndividualizedCapacityUnsupported,
    SpacingPreconditionViolated,
)
from .model import (
    Agent,
    CapacityModel,
    EMPTY_TARGETS,
    ImprovementReport,
    Instance,
    TargetSet,
    eligible_target,
    group_welfare,
    improvement_report,
    validate_instance,
)
from .pareto import FrontierPoint, pareto_frontier
from .welfare import DpSolution, max_total_improvement


@dataclass(frozen=True)
class GroupOptima:
    """Each group's solo optimum (value and witness) at one stated budget."""

    budget: int
    per_group: tuple[DpSolution, ...]


def group_optima(instance: Instance, budget: int) -> GroupOptima:
    solos = tuple(
        max_total_improvement(instance.isolate_group(g), budget)
        for g in range(instance.num_groups)
    )
    return GroupOptima(budget, solos)


def prune_every_other(targets: TargetSet, delta: Fraction) -> TargetSet:
    """Drop the middle of every target triple spanning less than ``delta``.

    Afterwards every other level is at least ``delta`` apart.  For a single
    group served in isolation this never lowers welfare: agents aimed at the
    dropped level climb to the next one instead.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    levels = list(targets.levels)
    i = 0
    while i + 2 < len(levels):
        if levels[i + 2] < levels[i] + delta:
            del levels[i + 1]
        else:
            i += 1
    return TargetSet(tuple(levels))


def distant_targets(
    targets: TargetSet, group_agents: Sequence[Agent], delta: Fraction
) -> TargetSet:
    """Keep the residue class mod 4 of the levels that serves the agents best.

    Input levels must already have every other level ``delta`` apart; kept
    levels are then at least ``2 * delta`` apart, and the kept class earns at
    least a quarter of the input welfare on these agents.
    """
    levels = targets.levels
    for i in range(len(levels) - 2):
        if levels[i + 2] - levels[i] < delta:
            raise SpacingPreconditionViolated(
                f"levels {levels[i]}, {levels[i + 2]} are closer than {delta}"
            )
    if len(levels) <= 1:
        return targets
    parts = [TargetSet(levels[r::4]) for r in range(4)]
    best = parts[0]
    best_value = group_welfare(group_agents, best)
    for part in parts[1:]:
        value = group_welfare(group_agents, part)
        if value > best_value:
            best = part
            best_value = value
    return best


def local_reopt(
    tau: Fraction, window_agents: Sequence[Agent], delta: Fraction
) -> Fraction:
    """Optimal single target for the agents able to reach ``tau``.

    All agents must sit in ``[tau - delta, tau)``; the optimum then lies in
    ``[tau, tau + delta]``.  An empty window returns ``tau`` unchanged.
    """
    if not window_agents:
        return tau
    for agent in window_agents:
        if not tau - delta <= agent.position < tau:
            raise ValueError(
                f"agent at {agent.position} is outside [{tau - delta}, {tau})"
            )
    sub = Instance(
        tuple(Agent(a.position, delta, 0) for a in window_agents),
        1,
        CapacityModel.COMMON,
    )
    solution = max_total_improvement(sub, 1)
    if not solution.targets:
        return tau
    (level,) = solution.targets.levels
    return level


@dataclass(frozen=True)
class MergePart:
    """One maximal run of window left-endpoints packed tighter than delta/g."""

    points: tuple[Fraction, ...]
    placed: Fraction


def resolve_interference(
    union_targets: TargetSet, delta: Fraction, g: int
) -> TargetSet:
    """Relocate clustered targets so no catchment window is undercut.

    Windows' left endpoints are grouped into maximal runs with consecutive
    gaps under ``delta / g``; each run emits one target: the first member's
    original target, capped at the next run's start.  Every original target
    ``t`` then has a final target inside ``[t - delta + delta/g, t]`` and
    none inside ``(t - delta, t - delta + delta/g)``.
    """
    parts = merge_parts(union_targets, delta, g)
    return TargetSet(tuple(part.placed for part in parts))


def merge_parts(
    union_targets: TargetSet, delta: Fraction, g: int
) -> tuple[MergePart, ...]:
    """The endpoint partition behind :func:`resolve_interference`, kept for
    tracing and invariant checks."""
    if not union_targets:
        raise ValueError("union_targets must be nonempty")
    if delta <= 0:
        raise ValueError("delta must be positive")
    gap = delta / g
    starts = [level - delta for level in union_targets.levels]
    runs: list[list[int]] = [[0]]
    for idx in range(1, len(starts)):
        if starts[idx] - starts[idx - 1] < gap:
            runs[-1].append(idx)
        else:
            runs.append([idx])
    parts = []
    for run_no, run in enumerate(runs):
        first = run[0]
        original = union_targets.levels[first]
        if run_no + 1 < len(runs):
            next_start = starts[runs[run_no + 1][0]]
            placed = min(original, next_start)
        else:
            placed = original
        parts.append(
            MergePart(tuple(starts[idx] for idx in run), placed)
        )
    return tuple(parts)


@dataclass(frozen=True)
class ApproxTrace:
    """Everything the pipeline produced, step by step, plus the final report.

    ``alpha_k`` compares each group's final welfare to its solo optimum at
    budget k; ``alpha_ceil`` compares to the solo optimum at budget
    ceil(k / g) that step 1 actually used.
    """

    instance: Instance
    k: int
    split_budget: int
    step1_isolated: tuple[TargetSet, ...]
    step1_spaced: tuple[TargetSet, ...]
    step2_sparse: tuple[TargetSet, ...]
    step3_localized: tuple[TargetSet, ...]
    survivors: tuple[tuple[Agent, ...], ...]
    step4_parts: tuple[MergePart, ...]
    targets: TargetSet
    report: ImprovementReport
    alpha_k: Fraction
    alpha_ceil: Fraction


def approx_solution(instance: Instance, k: int) -> ApproxTrace:
    """Run the four-step pipeline; requires the common capacity model,
    ``k >= num_groups``, and no empty groups."""
    validate_instance(instance)
    if instance.capacity_model is not CapacityModel.COMMON:
        raise IndividualizedCapacityUnsupported(
            "per-group guarantees need the common capacity model"
        )
    g = instance.num_groups
    if k < g:
        raise BudgetBelowGroupCount(f"budget {k} is below the group count {g}")
    members = [instance.group_members(gi) for gi in range(g)]
    for gi, agents in enumerate(members):
        if not agents:
            raise EmptyGroup(f"group {gi} has no agents")
    delta = instance.common_capacity
    split_budget = -(-k // g)

    step1, spaced, sparse, localized, survivors = [], [], [], [], []
    for gi, agents in enumerate(members):
        solo = max_total_improvement(
            instance.isolate_group(gi), split_budget
        ).targets
        step1.append(solo)
        if delta > 0:
            spread = prune_every_other(solo, delta)
            sparse_set = distant_targets(spread, agents, delta)
        else:
            spread = solo
            sparse_set = solo
        spaced.append(spread)
        sparse.append(sparse_set)
        alive = tuple(
            a for a in agents if eligible_target(a, sparse_set) is not None
        )
        survivors.append(alive)
        relocated = []
        for level in sparse_set.levels:
            window = [a for a in alive if level - delta <= a.position < level]
            relocated.append(local_reopt(level, window, delta))
        localized.append(TargetSet(tuple(relocated)))

    union = TargetSet(tuple(v for ts in localized for v in ts.levels))
    if union:
        parts = merge_parts(union, delta, g)
        final = TargetSet(tuple(p.placed for p in parts))
    else:
        parts = ()
        final = EMPTY_TARGETS
    assert len(final) <= k

    report = improvement_report(instance, final)
    alpha_k = simultaneity_factor(instance, final, k)
    alpha_ceil = simultaneity_factor(instance, final, split_budget)
    return ApproxTrace(
        instance,
        k,
        split_budget,
        tuple(step1),
        tuple(spaced),
        tuple(sparse),
        tuple(localized),
        tuple(survivors),
        parts,
        final,
        report,
        alpha_k,
        alpha_ceil,
    )


def simultaneity_factor(
    instance: Instance, targets: TargetSet, budget: int
) -> Fraction:
    """Worst over groups of (welfare under ``targets``) / (solo optimum at
    ``budget``); groups whose solo optimum is 0 count as fully served."""
    validate_instance(instance)
    report = improvement_report(instance, targets)
    optima = group_optima(instance, budget)
    factor: Optional[Fraction] = None
    for earned, solo in zip(report.group_totals, optima.per_group):
        ratio = Fraction(1) if solo.value == 0 else earned / solo.value
        if factor is None or ratio < factor:
            factor = ratio
    return factor if factor is not None else Fraction(1)


def best_simultaneous_on_frontier(
    instance: Instance, k: int
) -> tuple[Fraction, FrontierPoint]:
    """Scan the exact frontier for the point with the best simultaneity
    factor at budget ``k``; beats or matches the pipeline's output."""
    frontier = pareto_frontier(instance, k)
    optima = group_optima(instance, k)
    best: Optional[tuple[Fraction, FrontierPoint]] = None
    for point in frontier.points:
        ratios = [
            Fraction(1) if solo.value == 0 else earned / solo.value
            for earned, solo in zip(point.welfare, optima.per_group)
        ]
        alpha = min(ratios) if ratios else Fraction(1)
        if best is None or alpha > best[0]:
            best = (alpha, point)
    assert best is not None
    return best
