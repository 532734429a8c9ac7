"""Exceptions module."""

from __future__ import annotations

from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from .dsl.lexer import SourceSpan


class TimedNetsError(Exception):
    """Base class for every error raised by the toolkit."""


class UnderflowError(TimedNetsError):
    """Raised when a multiset subtraction would produce a negative count."""


class CountOverflowError(TimedNetsError):
    """Raised when a multiplicity exceeds the supported maximum."""


class ModelValidationError(TimedNetsError):
    """Raised when a model violates a structural constraint."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        """Store the message and the optional source location."""
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        """Prefix the message with its source location when known."""
        if self.span is None:
            return self.message
        return f"{self.span.line}:{self.span.column}: {self.message}"


class NoSuchChild(ModelValidationError):
    """Raised when an ``in`` target names a membrane that is not a child."""


class NotApplicable(TimedNetsError):
    """Raised when a step choice asks for more objects than available."""


class NotMaximal(TimedNetsError):
    """Raised when a step choice could still be extended."""


class NotEnabled(TimedNetsError):
    """Raised when a firing choice asks for more tokens than available."""


class StateBudgetExceeded(TimedNetsError):
    """Raised when exploration exceeds its node budget (inconclusive)."""

    def __init__(self, budget: int, depth: int):
        """Record the budget and the depth being expanded."""
        super().__init__(
            f"state budget of {budget} nodes exceeded at depth {depth}"
        )
        self.budget = budget
        self.depth = depth


class CapacityExceeded(TimedNetsError):
    """Raised when a brute-force oracle is asked for a too large instance."""


class ParseError(TimedNetsError):
    """Raised by the DSL lexer and parser."""

    def __init__(
        self,
        span: SourceSpan,
        expected: Iterable[str],
        found: str,
        message: str | None = None,
    ):
        """Build a parse error naming what was expected and what was found."""
        self.span = span
        self.expected = tuple(sorted(set(expected)))
        self.found = found
        if message is None:
            wanted = ", ".join(self.expected) or "end of input"
            message = f"expected {wanted}, found {found}"
        self.message = message
        super().__init__(f"{span.line}:{span.column}: {message}")
