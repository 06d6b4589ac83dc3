"""Semantic exception hierarchy shared across the package.

The CLI maps these onto process exit statuses: usage errors exit 1,
data errors exit 2, numeric failures exit 3.
"""


class WindfisError(Exception):
    """Base class for all package errors."""


class InvalidInputError(WindfisError, ValueError):
    """An argument violates a documented precondition or invariant."""


class UsageError(WindfisError):
    """Bad command line or unresolvable configuration."""


class DataError(WindfisError):
    """Input data cannot be used (malformed file, insufficient length ...)."""


class NumericError(WindfisError):
    """A numeric routine failed (non-finite values, solver breakdown)."""
