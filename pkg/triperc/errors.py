"""
Error types for triperc.

Every error raised by the library derives from TripercError and carries the
process exit status the command-line driver reports for it.
"""


class TripercError(Exception):
    """Base class for all triperc errors."""

    exit_code = 1


class DomainError(TripercError):
    """A site or a piece of geometry lies outside the domain it was used with."""


class ArgumentError(TripercError, ValueError):
    """Invalid arguments (bad ranges, mismatched partitions, wrong domain kind)."""

    exit_code = 2


class ConfigError(TripercError):
    """Unreadable configuration file or unknown configuration key."""

    exit_code = 2


class RangeError(TripercError, ValueError):
    """A series argument lies beyond the supported range."""

    exit_code = 3


class NumericError(TripercError, ArithmeticError):
    """Rank-deficient fits and series that fail to converge."""

    exit_code = 3


class RecordError(TripercError):
    """Run records that cannot be read or merged."""
