"""Exception hierarchy shared by all oberforge modules."""

from __future__ import annotations


class OberforgeError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(OberforgeError, ValueError):
    """An argument violates a documented parameter constraint."""


class PreconditionError(OberforgeError, ValueError):
    """Input is well formed but does not meet a construction's hypotheses."""


class NotATwoFactor(PreconditionError):
    """A 2-regular spanning factor was required."""

    def __init__(self, message: str, bad_degrees: dict | None = None):
        super().__init__(message)
        self.bad_degrees = dict(bad_degrees or {})


class InvariantViolation(OberforgeError, RuntimeError):
    """An internal consistency check failed. This indicates a bug."""
