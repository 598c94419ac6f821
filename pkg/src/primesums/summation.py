"""Deterministic compensated accumulation.

Residuals downstream are small differences of large sums, so totals are
formed with exact (error-free-transformation) accumulation: math.fsum
rounds the true sum once, which makes results reproducible to the last
ulp independent of platform and chunking.
"""

import math

import numpy as np


def fsum(values) -> float:
    """Exactly rounded sum of a real sequence (ascending order preserved)."""
    return math.fsum(np.asarray(values, dtype=float))


def fsum_complex(values) -> complex:
    """Exactly rounded sum of a complex sequence, real and imaginary parts
    accumulated independently."""
    a = np.asarray(values, dtype=complex)
    return complex(math.fsum(a.real), math.fsum(a.imag))


class KahanAccumulator:
    """Incremental Kahan-Neumaier running sum for streaming loops."""

    def __init__(self):
        self.total = 0.0
        self._comp = 0.0

    def add(self, value: float):
        t = self.total + value
        if abs(self.total) >= abs(value):
            self._comp += (self.total - t) + value
        else:
            self._comp += (value - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self._comp
