"""Exception hierarchy.

The CLI maps ``UsageError`` to exit code 2 and ``ResourceError`` (and
its ``WindowError`` subclass) to exit code 3.
"""


class ApkitError(Exception):
    """Base class for all toolkit errors."""


class UsageError(ApkitError, ValueError):
    """Invalid arguments: mixed groups, bad radii, unknown gauges."""


class ResourceError(ApkitError):
    """An enumeration or evaluation would exceed a configured budget."""


class WindowError(ResourceError):
    """Data needed for an evaluation lies outside the known window of a point.

    Callers may shrink the analysis window and retry.
    """

    flag = "WINDOWED"

    def __init__(self, message, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


class DataError(ApkitError):
    """Input data violates a structural requirement (e.g. not a pseudometric)."""
