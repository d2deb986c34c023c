"""Shared exception types.

Every failure the library signals deliberately goes through one of these, so
the command line layer can map error classes to stable exit codes without
inspecting messages.
"""

from __future__ import annotations


class GermkitError(Exception):
    """Base class for all library errors."""


class StructuralError(GermkitError):
    """Ill-shaped input: arity mismatch, wrong dimensions, misuse of an op."""


class ParseError(GermkitError):
    """Source text rejected, with 1-based position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class GermConditionError(GermkitError):
    """A map that is required to vanish at the origin does not."""


class UndefinedInvariantError(GermkitError):
    """The requested invariant does not exist for this input (e.g. the order
    of the zero map)."""


class ResourceLimitError(GermkitError):
    """A configured resource cap was exceeded; carries the step at which."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class NonConvergenceError(GermkitError):
    """A numeric iteration failed to reach its tolerance, or a numeric probe
    had no usable data."""
