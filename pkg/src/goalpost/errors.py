"""Domain error hierarchy.

Every error carries a stable ``code`` (the class name) that the CLI emits in
its JSON error envelope, so scripts can match on it without parsing prose.
"""

from __future__ import annotations


class GoalpostError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class NegativePosition(GoalpostError):
    pass


class NegativeCapacity(GoalpostError):
    pass


class GroupIndexOutOfRange(GoalpostError):
    pass


class CommonCapacityViolated(GoalpostError):
    pass


class NonIntegralInstance(GoalpostError):
    pass


class GroupCapacityNonUniform(GoalpostError):
    pass


class EpsilonOutOfRange(GoalpostError):
    pass


class SpacingPreconditionViolated(GoalpostError):
    pass


class IndividualizedCapacityUnsupported(GoalpostError):
    pass


class BudgetBelowGroupCount(GoalpostError):
    pass


class EmptyGroup(GoalpostError):
    pass


class SearchSpaceTooLarge(GoalpostError):
    pass


class ParameterOutOfRange(GoalpostError):
    pass


class EmptySample(GoalpostError):
    pass


class InstanceParseError(GoalpostError):
    """Raised when an instance / distribution file is malformed.

    The message always names the offending JSON path (e.g. ``agents[2].position``).
    """
