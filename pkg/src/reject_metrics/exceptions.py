"""Exception types shared across the package."""

__all__ = [
    "RejectMetricsError",
    "InputError",
    "DataFormatError",
    "UsageError",
    "NotApplicableError",
    "NotRepresentableError",
    "InfeasibleTripletError",
    "InconsistentCountError",
]


class RejectMetricsError(Exception):
    """Base class for every error raised by this package."""


class InputError(RejectMetricsError, ValueError):
    """A value or combination of values violates an operation's contract."""


class DataFormatError(InputError):
    """An input file is malformed; the message carries the offending location."""


class UsageError(RejectMetricsError):
    """Command invocation is inconsistent (conflicting or missing options)."""


class NotApplicableError(RejectMetricsError):
    """The requested quantity is undefined for these inputs."""


class NotRepresentableError(RejectMetricsError):
    """The requested summary cannot represent this partition."""


class InfeasibleTripletError(RejectMetricsError):
    """No valid partition of n samples realizes the given measure values."""


class InconsistentCountError(RejectMetricsError):
    """Reconstructed counts are not integers within tolerance at this n."""
