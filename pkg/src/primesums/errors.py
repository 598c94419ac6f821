"""Shared exception types."""


class ZeroTableError(ValueError):
    """A zero-ordinate file failed parsing or validation."""


class AccuracyError(RuntimeError):
    """A numerical routine could not reach its accuracy target."""


class SieveRangeError(ValueError):
    """A sieve table is too small for the requested computation."""
