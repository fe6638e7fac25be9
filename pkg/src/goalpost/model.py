"""Core data model: agents, instances, target sets, and the improvement rule.

All numeric quantities are exact rationals (``fractions.Fraction``), so the
behavior rule's strict/non-strict boundaries and every solver comparison are
decided exactly.  Every type here is immutable; every function is pure.

The behavior rule: given a set of target levels, an agent moves to the lowest
level that is strictly above its position and within its capacity, or stays
put if no such level exists.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import (
    CommonCapacityViolated,
    GroupIndexOutOfRange,
    NegativeCapacity,
    NegativePosition,
)

RationalLike = Union[Fraction, int, str]


def rational(value: RationalLike) -> Fraction:
    """Coerce ints, "a/b" strings, and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def rational_str(value: Fraction) -> str:
    """Canonical text form: bare integer or "num/den" in lowest terms."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class CapacityModel(Enum):
    COMMON = "common"
    INDIVIDUALIZED = "individualized"


@dataclass(frozen=True)
class Agent:
    """One participant: skill position, improvement capacity, group label."""

    position: Fraction
    capacity: Fraction
    group: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "position", rational(self.position))
        object.__setattr__(self, "capacity", rational(self.capacity))

    @property
    def reach(self) -> Fraction:
        """Highest level this agent can move to."""
        return self.position + self.capacity


@dataclass(frozen=True)
class Instance:
    """A collection of agents split into ``num_groups`` groups.

    Construction only coerces field types; call :func:`validate_instance`
    to enforce the full invariants (it is cheap and solvers do it on entry).
    """

    agents: tuple[Agent, ...]
    num_groups: int = 1
    capacity_model: CapacityModel = CapacityModel.INDIVIDUALIZED

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))

    @classmethod
    def common(
        cls,
        positions: Iterable[RationalLike],
        capacity: RationalLike,
        groups: Optional[Iterable[int]] = None,
        num_groups: Optional[int] = None,
    ) -> "Instance":
        """Build a common-capacity instance from bare positions."""
        cap = rational(capacity)
        pos = [rational(p) for p in positions]
        grp = list(groups) if groups is not None else [0] * len(pos)
        if len(grp) != len(pos):
            raise ValueError("groups and positions must have equal length")
        g = num_groups if num_groups is not None else (max(grp) + 1 if grp else 1)
        agents = tuple(Agent(p, cap, gi) for p, gi in zip(pos, grp))
        return cls(agents, g, CapacityModel.COMMON)

    @property
    def size(self) -> int:
        return len(self.agents)

    @property
    def delta_max(self) -> Fraction:
        return max((a.capacity for a in self.agents), default=Fraction(0))

    @property
    def common_capacity(self) -> Fraction:
        """Shared capacity under the common model (0 for an empty instance)."""
        if self.capacity_model is not CapacityModel.COMMON:
            raise ValueError("instance does not use the common capacity model")
        return self.agents[0].capacity if self.agents else Fraction(0)

    @property
    def is_integral(self) -> bool:
        return all(
            a.position.denominator == 1 and a.capacity.denominator == 1
            for a in self.agents
        )

    def group_members(self, group: int) -> tuple[Agent, ...]:
        return tuple(a for a in self.agents if a.group == group)

    def isolate_group(self, group: int) -> "Instance":
        """Sub-instance containing one group's agents, relabeled to group 0."""
        members = tuple(
            Agent(a.position, a.capacity, 0) for a in self.agents if a.group == group
        )
        return Instance(members, 1, self.capacity_model)


def validate_instance(instance: Instance) -> Instance:
    """Check all field invariants and return the instance unchanged.

    Raises NegativePosition, NegativeCapacity, GroupIndexOutOfRange, or
    CommonCapacityViolated.  Empty groups are legal (reported as 0 welfare).
    """
    if instance.num_groups < 1:
        raise GroupIndexOutOfRange("num_groups must be at least 1")
    for idx, agent in enumerate(instance.agents):
        if agent.position < 0:
            raise NegativePosition(f"agent {idx} has position {agent.position}")
        if agent.capacity < 0:
            raise NegativeCapacity(f"agent {idx} has capacity {agent.capacity}")
        if not 0 <= agent.group < instance.num_groups:
            raise GroupIndexOutOfRange(
                f"agent {idx} has group {agent.group}, expected [0, {instance.num_groups})"
            )
    if instance.capacity_model is CapacityModel.COMMON and instance.agents:
        shared = instance.agents[0].capacity
        for idx, agent in enumerate(instance.agents):
            if agent.capacity != shared:
                raise CommonCapacityViolated(
                    f"agent {idx} has capacity {agent.capacity}, expected {shared}"
                )
    return instance


@dataclass(frozen=True)
class TargetSet:
    """A strictly increasing set of target levels; duplicates merge silently."""

    levels: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        normalized = tuple(sorted({rational(v) for v in self.levels}))
        object.__setattr__(self, "levels", normalized)

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    def __contains__(self, value: object) -> bool:
        return value in self.levels

    def __bool__(self) -> bool:
        return bool(self.levels)

    def union(self, other: "TargetSet") -> "TargetSet":
        return TargetSet(self.levels + other.levels)

    def as_strings(self) -> list[str]:
        return [rational_str(v) for v in self.levels]


EMPTY_TARGETS = TargetSet(())


def improvement_at(position: Fraction, capacity: Fraction, targets: TargetSet) -> Fraction:
    """Improvement of a lone position/capacity pair under the behavior rule."""
    chosen = _least_eligible(position, capacity, targets.levels)
    return chosen - position if chosen is not None else Fraction(0)


def _least_eligible(
    position: Fraction, capacity: Fraction, levels: Sequence[Fraction]
) -> Optional[Fraction]:
    i = bisect_right(levels, position)
    if i < len(levels) and levels[i] <= position + capacity:
        return levels[i]
    return None


def eligible_target(agent: Agent, targets: TargetSet) -> Optional[Fraction]:
    """The level the agent aims for: least one strictly above its position and
    within reach, or None."""
    return _least_eligible(agent.position, agent.capacity, targets.levels)


class AgentOutcome(NamedTuple):
    chosen_target: Optional[Fraction]
    improvement: Fraction


@dataclass(frozen=True)
class ImprovementReport:
    """Per-agent assignments plus per-group and overall welfare totals."""

    per_agent: tuple[AgentOutcome, ...]
    group_totals: tuple[Fraction, ...]
    group_averages: tuple[Fraction, ...]
    total: Fraction


def improvement_report(instance: Instance, targets: TargetSet) -> ImprovementReport:
    """Apply the behavior rule to every agent and aggregate welfare."""
    outcomes = []
    group_totals = [Fraction(0)] * instance.num_groups
    group_sizes = [0] * instance.num_groups
    total = Fraction(0)
    for agent in instance.agents:
        chosen = eligible_target(agent, targets)
        gain = chosen - agent.position if chosen is not None else Fraction(0)
        outcomes.append(AgentOutcome(chosen, gain))
        group_totals[agent.group] += gain
        group_sizes[agent.group] += 1
        total += gain
    averages = tuple(
        tot / size if size else Fraction(0)
        for tot, size in zip(group_totals, group_sizes)
    )
    return ImprovementReport(tuple(outcomes), tuple(group_totals), averages, total)


def group_welfare(agents: Sequence[Agent], targets: TargetSet) -> Fraction:
    """Total improvement of an ad-hoc agent collection (no instance needed)."""
    return sum(
        (improvement_at(a.position, a.capacity, targets) for a in agents),
        Fraction(0),
    )


def potential_targets(instance: Instance) -> TargetSet:
    """Every agent position and position-plus-capacity, sorted and deduplicated.

    Optimizing over subsets of this set loses nothing: shifting any target up
    to the next such breakpoint preserves who reaches it and only lengthens
    the moves.
    """
    levels: set[Fraction] = set()
    for agent in instance.agents:
        levels.add(agent.position)
        levels.add(agent.reach)
    return TargetSet(tuple(levels))
