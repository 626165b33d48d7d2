"""Shared exception types."""


class DegenerateProblemError(ValueError):
    """Raised when the linear equation has a = 0 and no unique solution."""


class SupportTooLargeError(ValueError):
    """Raised when a requested support enumeration would be too large."""
