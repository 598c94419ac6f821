"""Generating functions on the circle and their explicit-formula approximations.

Every analytic object here is evaluated at z = 1/N - 2*pi*i*alpha (segment
form) or z = 1/N + i*y (vertical form); Re(z) = 1/N > 0 keeps all complex
powers on the principal branch, the unique continuous choice on the right
half-plane.

Infinite sums carry the smooth weight exp(-n^ell/N) and are truncated once
the weight drops below ``tail_epsilon`` (default 1e-18, under the double
resolution of the partial sums).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .arith import SieveTable
from .errors import SieveRangeError
from .summation import fsum_complex
from .zeros import ZeroTable, conjugate_pair_sum

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ExpSumConfig:
    """Power ell and tail threshold for the weighted sums."""

    ell: int = 1
    tail_epsilon: float = 1e-18

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError(f"ell must be a positive integer, got {self.ell}")
        if not 0.0 < self.tail_epsilon < 1.0:
            raise ValueError(f"tail_epsilon must lie in (0,1), got {self.tail_epsilon}")

    def cutoff(self, N: int) -> float:
        """Largest n^ell kept: exp(-n^ell/N) >= tail_epsilon."""
        return N * math.log(1.0 / self.tail_epsilon)

    def n_max(self, N: int) -> int:
        c = self.cutoff(N)
        n = int(c ** (1.0 / self.ell))
        while (n + 1) ** self.ell <= c:
            n += 1
        while n > 1 and n**self.ell > c:
            n -= 1
        return n


def _reduce_alpha(alpha: float) -> float:
    """Reduce to [-1/2, 1/2]; integer shifts leave every sum here invariant."""
    return float(alpha) - round(float(alpha))


@dataclass(frozen=True)
class ComplexParam:
    """Evaluation point z with Re(z) = 1/N."""

    N: int
    z: complex
    alpha: float | None = None
    y: float | None = None

    @classmethod
    def from_alpha(cls, N: int, alpha: float) -> "ComplexParam":
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        a = _reduce_alpha(alpha)
        return cls(N=int(N), z=complex(1.0 / N, -TWO_PI * a), alpha=a)

    @classmethod
    def from_y(cls, N: int, y: float) -> "ComplexParam":
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        return cls(N=int(N), z=complex(1.0 / N, float(y)), y=float(y))


def _require_alpha(p: ComplexParam) -> float:
    if p.alpha is None:
        raise ValueError("this sum needs the segment form z = 1/N - 2*pi*i*alpha")
    return p.alpha


def s_tilde(cfg: ExpSumConfig, p: ComplexParam, sieve: SieveTable) -> complex:
    """Weighted prime-power sum: Lambda(n) exp(-n^ell z) over n >= 1, truncated."""
    n_max = cfg.n_max(p.N)
    if n_max > sieve.limit:
        raise SieveRangeError(
            f"s_tilde at N={p.N}, ell={cfg.ell} needs sieve limit >= {n_max}, "
            f"table has {sieve.limit}"
        )
    q, w = sieve.prime_powers
    cut = np.searchsorted(q, n_max, side="right")
    q = q[:cut].astype(float)
    terms = w[:cut] * np.exp(-(q**cfg.ell) * p.z)
    return fsum_complex(terms)


def s_classical(cfg: ExpSumConfig, p: ComplexParam, sieve: SieveTable) -> complex:
    """Sharp-cutoff sum: Lambda(n) e(n^ell alpha) over 1 <= n <= N."""
    alpha = _require_alpha(p)
    if p.N > sieve.limit:
        raise SieveRangeError(
            f"s_classical needs sieve limit >= {p.N}, table has {sieve.limit}"
        )
    q, w = sieve.prime_powers
    cut = np.searchsorted(q, p.N, side="right")
    q = q[:cut].astype(float)
    return fsum_complex(w[:cut] * np.exp(TWO_PI * 1j * alpha * q**cfg.ell))


def t_sum(cfg: ExpSumConfig, p: ComplexParam) -> complex:
    """Unweighted phase sum: e(n^ell alpha) over 1 <= n <= N."""
    alpha = _require_alpha(p)
    n = np.arange(1, p.N + 1, dtype=float)
    return fsum_complex(np.exp(TWO_PI * 1j * alpha * n**cfg.ell))


def omega(cfg: ExpSumConfig, p: ComplexParam) -> complex:
    """Smooth power sum: exp(-m^ell z) over m >= 1, truncated."""
    m = np.arange(1, cfg.n_max(p.N) + 1, dtype=float)
    return fsum_complex(np.exp(-(m**cfg.ell) * p.z))


def u_sum(alpha: float, H: int) -> complex:
    """Geometric kernel: e(m alpha) over 1 <= m <= H, in closed form."""
    H = int(H)
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")
    a = _reduce_alpha(alpha)
    if a == 0.0:
        return complex(H)
    return cmath.exp(TWO_PI * 1j * a * (H + 1) / 2.0) \
        * math.sin(math.pi * H * a) / math.sin(math.pi * a)


def f2(N: int, alpha: float) -> complex:
    """Square-root weighted model sum: (1/2) m^{-1/2} e(m alpha), m <= N."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    a = _reduce_alpha(alpha)
    m = np.arange(1, N + 1, dtype=float)
    return 0.5 * fsum_complex(np.exp(TWO_PI * 1j * a * m) / np.sqrt(m))


def _zero_sum_at_z(ell: int, z: complex, zeros: ZeroTable) -> complex:
    """Sum over all zeros (both half-planes) of z^{-rho/ell} Gamma(rho/ell).

    Each summand is one fused exponential, exp(loggamma(rho/ell) -
    (rho/ell) log z): the Gamma value and the power separately leave double
    range near |gamma| ~ 1e4 while their product stays moderate.
    """
    lz = cmath.log(z)

    def term(g):
        ratio = (0.5 + 1j * g) / ell
        return np.exp(loggamma(ratio) - ratio * lz)

    def partner(g):
        ratio = (0.5 - 1j * g) / ell
        return np.exp(loggamma(ratio) - ratio * lz)

    return conjugate_pair_sum(zeros, term, partner)


def linnik_approx(cfg: ExpSumConfig, p: ComplexParam, zeros: ZeroTable) -> complex:
    """Explicit-formula approximation to the weighted sum s_tilde.

    Main term Gamma(1/ell)/(ell z^{1/ell}) minus (1/ell) times the zero sum
    z^{-rho/ell} Gamma(rho/ell); the remainder is bounded (ell fixed), so
    callers compare against s_tilde directly.
    """
    ell = cfg.ell
    lz = cmath.log(p.z)
    main = math.gamma(1.0 / ell) * cmath.exp(-lz / ell) / ell
    return main - _zero_sum_at_z(ell, p.z, zeros) / ell


def linnik_vertical(N: int, y: float, zeros: ZeroTable, sieve: SieveTable) -> complex:
    """Remainder of the vertical-line explicit formula at z = 1/N + iy.

    Returns E(N, y) = s_tilde(z) - 1/z + sum over rho of z^{-rho} Gamma(rho)
    for ell = 1; compare its modulus against vertical_bound_shape.
    """
    p = ComplexParam.from_y(N, y)
    cfg = ExpSumConfig(ell=1)
    return s_tilde(cfg, p, sieve) - 1.0 / p.z + _zero_sum_at_z(1, p.z, zeros)


def vertical_bound_shape(N: int, y: float) -> float:
    """Shape of the corrected bound on E(N, y): 1 + |z|^(1/2) * log factor."""
    z = complex(1.0 / N, y)
    if abs(y) <= 1.0 / N:
        return 1.0 + math.sqrt(abs(z))
    return 1.0 + math.sqrt(abs(z)) * (1.0 + math.log(N * abs(y)) ** 2)
