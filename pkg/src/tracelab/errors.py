"""Shared exception types."""

from __future__ import annotations


class FieldMismatchError(ValueError):
    """Arithmetic attempted between elements of distinct quadratic fields."""


class PreconditionError(ValueError):
    """A documented precondition of an operation was violated.

    The message names the violated precondition.
    """


class UnsupportedRingError(PreconditionError):
    """Coprimality/division requested in a ring without Euclidean division."""


class BudgetExceededError(RuntimeError):
    """Enumeration hit its element budget.

    Carries the partial result truncated to the last fully completed radius.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial

    @property
    def completed_radius(self) -> int:
        return self.partial.radius if self.partial is not None else 0
