"""Zeta-zero ordinate tables and symmetric sums over zeros.

Only ordinates gamma > 0 are stored; the conjugate zero at -gamma is
synthesized by the summation helpers.  The real part is fixed at 1/2 for
every stored zero (all known zeros lie on the critical line, and every
formula evaluated here assumes as much).

File format: ASCII text, one positive decimal ordinate per line in
ascending order, ``#`` starts a comment line.  This is compatible with the
widely distributed zero tables.
"""

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AccuracyError, ZeroTableError
from .summation import fsum, fsum_complex

BETA = 0.5

_COUNT_CHECK_HEIGHTS = (100.0, 1000.0, 10000.0)
_COUNT_TOLERANCE = 2.0


def zero_count_estimate(T: float) -> float:
    """Riemann-von Mangoldt main term for the number of zeros with 0 < gamma <= T."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e)) + 7.0 / 8.0


@dataclass
class ZeroTable:
    """Ordinates of nontrivial zeros, ascending, with gamma > 14."""

    gammas: np.ndarray
    source: str = ""
    beta: float = BETA

    def __len__(self):
        return self.gammas.size

    @property
    def height(self) -> float:
        return float(self.gammas[-1]) if self.gammas.size else 0.0

    def rhos(self) -> np.ndarray:
        """Zeros beta + i*gamma as a complex array (upper half-plane only)."""
        return self.beta + 1j * self.gammas


def _validate(gammas: np.ndarray, source: str) -> ZeroTable:
    if gammas.size == 0:
        raise ZeroTableError(f"{source}: no ordinates found")
    if not np.all(gammas > 0.0):
        raise ZeroTableError(f"{source}: nonpositive ordinate present")
    if not np.all(np.diff(gammas) > 0.0):
        i = int(np.nonzero(np.diff(gammas) <= 0.0)[0][0])
        raise ZeroTableError(
            f"{source}: ordinates not strictly ascending near entry {i + 1} "
            f"({gammas[i]} followed by {gammas[i + 1]})"
        )
    if not 14.0 < gammas[0] < 14.3:
        raise ZeroTableError(
            f"{source}: first ordinate {gammas[0]} outside (14.0, 14.3); "
            "table must start at the first zero"
        )
    for T in _COUNT_CHECK_HEIGHTS:
        if T > gammas[-1]:
            continue
        count = int(np.searchsorted(gammas, T, side="right"))
        expect = zero_count_estimate(T)
        if abs(count - expect) > _COUNT_TOLERANCE:
            raise ZeroTableError(
                f"{source}: zero count {count} up to T={T} disagrees with "
                f"counting estimate {expect:.2f} by more than {_COUNT_TOLERANCE}"
            )
    return ZeroTable(gammas=gammas, source=source)


def load_zeros(path) -> ZeroTable:
    """Load and validate a zero-ordinate file.

    Raises ZeroTableError with a line number on parse failure, or with a
    description of the violated invariant on validation failure.
    """
    path = Path(path)
    values = []
    long_tokens = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tok = line.split("#", 1)[0].strip()
            if not tok:
                continue
            try:
                values.append(float(tok))
            except ValueError:
                raise ZeroTableError(
                    f"{path}: line {lineno}: cannot parse ordinate {tok!r}"
                ) from None
            if len(tok.replace(".", "").replace("-", "").lstrip("0")) > 17:
                long_tokens += 1
    if long_tokens:
        warnings.warn(
            f"{path}: {long_tokens} ordinates carry more digits than double "
            "precision retains; values were truncated to double",
            stacklevel=2,
        )
    return _validate(np.asarray(values, dtype=float), str(path))


def default_zeros_path() -> Path:
    """Path of the packaged table of the first ~10^4 zero ordinates."""
    return Path(__file__).parent / "data" / "zeros10k.txt"


def truncate(table: ZeroTable, T: float) -> ZeroTable:
    """View of all ordinates gamma <= T (possibly empty), order preserved."""
    if T <= 0:
        raise ValueError(f"truncation height must be positive, got {T}")
    n = int(np.searchsorted(table.gammas, T, side="right"))
    return ZeroTable(gammas=table.gammas[:n], source=table.source, beta=table.beta)


def conjugate_pair_sum(table: ZeroTable, term, partner=None) -> complex:
    """Sum term(gamma) plus its conjugate-zero partner over the stored zeros.

    ``term`` maps an ascending array of ordinates to complex summands for
    rho = beta + i*gamma.  When the summand at the conjugate zero equals the
    complex conjugate of ``term`` (every formula with real parameters), the
    partner defaults to that conjugate and the pair contributes
    2*Re(term(gamma)).  For evaluations at complex arguments, pass
    ``partner`` computing the summand at rho-bar explicitly.

    Accumulation is compensated, in ascending-gamma order.
    """
    g = table.gammas
    if g.size == 0:
        return 0j
    vals = np.asarray(term(g), dtype=complex)
    _check_finite(vals, g)
    if partner is None:
        return complex(fsum(2.0 * vals.real), 0.0)
    pvals = np.asarray(partner(g), dtype=complex)
    _check_finite(pvals, g)
    return fsum_complex(vals) + fsum_complex(pvals)


def _check_finite(vals: np.ndarray, gammas: np.ndarray):
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.nonzero(bad)[0][0])
        raise AccuracyError(
            f"non-finite zero-sum summand at gamma={gammas[i]!r}"
        )
