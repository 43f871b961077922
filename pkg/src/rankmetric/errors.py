"""Exception hierarchy shared by the rankmetric modules."""

from __future__ import annotations

from typing import Optional


class RankMetricError(Exception):
    """Base class for errors raised by rankmetric."""


class ParameterError(RankMetricError, ValueError):
    """A construction was asked for with parameters that violate its preconditions."""


class NormConditionError(ParameterError):
    """The family parameter η fails the norm condition of its code family."""

    def __init__(self, message: str, *, norm: Optional[int] = None) -> None:
        super().__init__(message)
        self.norm = norm


class EnumerationGuardError(RankMetricError, RuntimeError):
    """An exhaustive loop would visit more states than the guard allows."""

    def __init__(self, what: str, requested: int, allowed: int) -> None:
        super().__init__(
            f"refusing to enumerate {requested} {what}; guard allows {allowed} "
            "(raise it with --guard or RANKMETRIC_GUARD)"
        )
        self.what = what
        self.requested = requested
        self.allowed = allowed


class MRDViolation(RankMetricError, ArithmeticError):
    """An exhaustive scan found a minimum distance other than n - k + 1."""


class ConstructionError(RankMetricError, ArithmeticError):
    """A built family lacks the kernel structure its construction guarantees."""
