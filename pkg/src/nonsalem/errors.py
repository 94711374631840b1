"""Exception types raised across the toolkit."""

from __future__ import annotations


class NonSalemError(Exception):
    """Base class for all toolkit errors."""


class MeasureError(NonSalemError, ValueError):
    """Invalid measure construction or an undefined operation on a measure."""


class DimensionMismatch(NonSalemError, ValueError):
    pass


class AliasError(NonSalemError, ValueError):
    """Requested frequencies beyond what a grid measure represents faithfully."""


class CoverageError(NonSalemError, KeyError):
    """A Fourier table was asked for a frequency it does not hold."""

    def __init__(self, freq, message: str | None = None):
        self.freq = tuple(int(v) for v in freq)
        super().__init__(message or f"frequency {self.freq} is not covered by the table")

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return self.args[0]


class FitError(NonSalemError, ValueError):
    pass


class TruncationError(NonSalemError, ValueError):
    """A truncated frequency series has not converged to the requested accuracy."""
