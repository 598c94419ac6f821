"""Integral identities and truncated mean-square experiments.

The Laplace-transform identities are verified by direct quadrature of the
defining line integrals; the mean-square experiments integrate the squared
distance between a generating function and its expected main term over a
truncated window, then report the ratio against the corresponding
asymptotic bound shape.  None of the bounds carries an explicit constant
in the source material, so ratios are reported rather than asserted here;
acceptance thresholds are pilot-calibrated.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .arith import SieveTable
from .errors import AccuracyError, SieveRangeError
from .expsum import TWO_PI, ExpSumConfig
from .quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_panels, trapezoid_periodic
from .summation import fsum

RH_BOUND = "RH"
UNCONDITIONAL_BOUND = "UNCONDITIONAL"


@dataclass
class MeanSquareReport:
    """One truncated mean-square measurement against a reference bound."""

    N: int
    ell: int
    xi: float
    integral_value: float
    reference_bound: float
    ratio: float
    bound_kind: str
    range_warning: bool = False
    refined_bound: Optional[float] = None
    companion_integral: Optional[float] = None
    companion_bound: Optional[float] = None
    parseval_value: Optional[float] = None


def phase_profile(freqs: np.ndarray, weights: np.ndarray):
    """Vectorized alpha |-> sum_j w_j e(freqs_j * alpha) with real weights.

    Blocked so the cos/sin work stays in cache-sized matrix-vector products.
    """
    freqs = np.asarray(freqs, dtype=float)
    weights = np.asarray(weights, dtype=float)

    def profile(alphas):
        alphas = np.asarray(alphas, dtype=float)
        out = np.empty(alphas.size, dtype=complex)
        block = max(1, int(4_000_000 / max(freqs.size, 1)))
        for i in range(0, alphas.size, block):
            th = TWO_PI * alphas[i : i + block, None] * freqs[None, :]
            out[i : i + block] = np.cos(th) @ weights + 1j * (np.sin(th) @ weights)
        return out

    return profile


def _tilde_profile(cfg: ExpSumConfig, N: int, sieve: SieveTable):
    """Phase profile of s_tilde plus its panel-budget frequency.

    The sum keeps every term down to weight tail_epsilon, but panels only
    need to resolve frequencies whose amplitude exceeds ~1e-9: components
    below that alias with error under the quadrature tolerance.
    """
    n_max = cfg.n_max(N)
    if n_max > sieve.limit:
        raise SieveRangeError(
            f"mean square at N={N}, ell={cfg.ell} needs sieve limit >= {n_max}"
        )
    q, w = sieve.prime_powers
    cut = np.searchsorted(q, n_max, side="right")
    qf = q[:cut].astype(float) ** cfg.ell
    freq = min(cfg.cutoff(N), N * math.log(1e9))
    return phase_profile(qf, w[:cut] * np.exp(-qf / N)), freq


def _even_integral(integrand, xi: float, freq: float, spec: QuadratureSpec) -> float:
    """Integral over [-xi, xi] of an even integrand (all profiles here have
    real coefficients, so their moduli are even in alpha)."""
    return 2.0 * float(gauss_panels(integrand, 0.0, xi, freq, spec).real)


def _unconditional_bound(ell: int, N: int, c1: float) -> float:
    L = math.log(N)
    return N ** (2.0 / ell - 1.0) * math.exp(-c1 * (L / math.log(L)) ** (1.0 / 3.0))


def _report(N, ell, xi, integral, bound, kind, **extra) -> MeanSquareReport:
    ratio = integral / bound if bound > 0 else 0.0
    return MeanSquareReport(
        N=N, ell=ell, xi=xi, integral_value=integral,
        reference_bound=bound, ratio=ratio, bound_kind=kind, **extra,
    )


def mean_square_tilde(cfg: ExpSumConfig, N: int, xi: float, sieve: SieveTable,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      bound_kind: str = RH_BOUND, c1: float = 1.0) -> MeanSquareReport:
    """Mean square of s_tilde minus its main term over [-xi, xi].

    Reference bound: N^{1/ell} * xi * log^2 N under RH, or the
    exp(-c1 (L/log L)^{1/3}) unconditional shape with caller-supplied c1
    (reported only; the constant is unspecified in the source).
    """
    xi = float(xi)
    if xi < 0.0 or xi > 0.5:
        raise ValueError(f"xi must lie in [0, 1/2], got {xi}")
    L = math.log(N)
    if bound_kind == RH_BOUND:
        bound = N ** (1.0 / cfg.ell) * xi * L * L
    elif bound_kind == UNCONDITIONAL_BOUND:
        bound = _unconditional_bound(cfg.ell, N, c1)
    else:
        raise ValueError(f"unknown bound kind {bound_kind!r}")
    if xi == 0.0:
        return _report(N, cfg.ell, xi, 0.0, bound, bound_kind)
    s_prof, freq = _tilde_profile(cfg, N, sieve)
    g1e = math.gamma(1.0 / cfg.ell) / cfg.ell

    def integrand(alphas):
        z = 1.0 / N - TWO_PI * 1j * alphas
        main = g1e * np.exp(-np.log(z) / cfg.ell)
        return np.abs(s_prof(alphas) - main) ** 2

    integral = _even_integral(integrand, xi, freq, spec)
    return _report(N, cfg.ell, xi, integral, bound, bound_kind)


def mean_square_classical(cfg: ExpSumConfig, N: int, xi: float, sieve: SieveTable,
                          spec: QuadratureSpec = DEFAULT_SPEC,
                          bound_kind: str = RH_BOUND, c1: float = 1.0) -> MeanSquareReport:
    """Mean square of the sharp-cutoff sum minus its phase-sum main term.

    Both sums run over n with n^ell <= N, the normalization under which the
    reference bounds hold.  Valid for xi >= 1/(2N); xi beyond
    N^{1/ell - 1}/2 sets range_warning but is still computed.
    """
    xi = float(xi)
    if xi < 1.0 / (2.0 * N):
        raise ValueError(f"xi must be >= 1/(2N) = {1.0/(2.0*N)}, got {xi}")
    if xi > 0.5:
        raise ValueError(f"xi must be <= 1/2, got {xi}")
    m_cut = int(N ** (1.0 / cfg.ell) + 1e-9)
    if m_cut > sieve.limit:
        raise SieveRangeError(f"needs sieve limit >= {m_cut}")
    n = np.arange(1, m_cut + 1, dtype=float)
    diff_prof = phase_profile(n**cfg.ell, sieve.lam[1 : m_cut + 1] - 1.0)

    def integrand(alphas):
        return np.abs(diff_prof(alphas)) ** 2

    integral = _even_integral(integrand, xi, float(N), spec)
    L = math.log(N)
    refined = None
    if bound_kind == RH_BOUND:
        bound = N ** (1.0 / cfg.ell) * xi * L * L + N ** (2.0 / cfg.ell - 2.0) * L * L / xi
        if cfg.ell == 1:
            lg = math.log(3.0 * xi)
            alt = L * L / (xi * lg * lg) if lg != 0.0 else math.inf
            refined = N * xi * L * L + min(alt, N * xi * L**4)
    elif bound_kind == UNCONDITIONAL_BOUND:
        bound = N ** (2.0 / cfg.ell - 1.0) * (
            math.exp(-c1 * (L / math.log(L)) ** (1.0 / 3.0)) + L * L / (xi * N)
        )
    else:
        raise ValueError(f"unknown bound kind {bound_kind!r}")
    warn = xi > N ** (1.0 / cfg.ell - 1.0) / 2.0
    return _report(N, cfg.ell, xi, integral, bound, bound_kind,
                   range_warning=warn, refined_bound=refined)


def omega_mean_square(cfg: ExpSumConfig, N: int, xi: float,
                      spec: QuadratureSpec = DEFAULT_SPEC,
                      sieve: Optional[SieveTable] = None) -> MeanSquareReport:
    """Mean square of the smooth power sum omega_ell over [-xi, xi].

    For ell >= 2 only.  When a sieve is supplied, the matching s_tilde mean
    square is reported in the companion fields.  At xi = 1/2 the integrands
    are trigonometric polynomials over a full period, where the equispaced
    rule is exact; the bounds are unconditional.
    """
    if cfg.ell < 2:
        raise ValueError(f"omega mean square needs ell >= 2, got {cfg.ell}")
    xi = float(xi)
    if not 0.0 < xi <= 0.5:
        raise ValueError(f"xi must lie in (0, 1/2], got {xi}")
    m = np.arange(1, cfg.n_max(N) + 1, dtype=float)
    mf = m**cfg.ell
    om_prof = phase_profile(mf, np.exp(-mf / N))
    freq = min(cfg.cutoff(N), N * math.log(1e9))

    def om_sq(alphas):
        return np.abs(om_prof(alphas)) ** 2

    if xi == 0.5:
        integral = float(trapezoid_periodic(om_sq, int(cfg.cutoff(N)) + 1).real)
    else:
        integral = _even_integral(om_sq, xi, freq, spec)
    L = math.log(N)
    bound = xi * N ** (1.0 / cfg.ell) + (L if cfg.ell == 2 else 1.0)
    extra = {}
    if sieve is not None:
        s_prof, _ = _tilde_profile(cfg, N, sieve)

        def s_sq(alphas):
            return np.abs(s_prof(alphas)) ** 2

        if xi == 0.5:
            comp = float(trapezoid_periodic(s_sq, int(cfg.cutoff(N)) + 1).real)
        else:
            comp = _even_integral(s_sq, xi, freq, spec)
        extra = {
            "companion_integral": comp,
            "companion_bound": xi * N ** (1.0 / cfg.ell) * L + (L * L if cfg.ell == 2 else 1.0),
        }
    return _report(N, cfg.ell, xi, integral, bound, UNCONDITIONAL_BOUND, **extra)


def fourth_moment(N: int, sieve: SieveTable,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> MeanSquareReport:
    """Fourth moment of s_tilde at ell = 2 over the full period.

    The integrand is a trigonometric polynomial of bandwidth twice the tail
    cutoff, so the equispaced rule is exact.  Reference bound N log^2 N.
    For N <= 500 the exact quadruple-sum form (solutions of
    q1^2 + q2^2 = q3^2 + q4^2 with Lambda and exponential weights) is
    attached as ``parseval_value``.
    """
    if N < 100:
        raise ValueError(f"fourth moment needs N >= 100, got {N}")
    cfg = ExpSumConfig(ell=2)
    s_prof, freq = _tilde_profile(cfg, N, sieve)

    def fourth(alphas):
        return np.abs(s_prof(alphas)) ** 4

    integral = float(trapezoid_periodic(fourth, 2 * int(freq) + 2).real)
    parseval = _fourth_moment_parseval(cfg, N, sieve) if N <= 500 else None
    L = math.log(N)
    bound = N * L * L
    return _report(N, 2, 0.5, integral, bound, RH_BOUND, parseval_value=parseval)


def _fourth_moment_parseval(cfg: ExpSumConfig, N: int, sieve: SieveTable) -> float:
    """Sum of |c_s|^2 over the Fourier coefficients c_s of s_tilde(ell=2)^2."""
    q, w = sieve.prime_powers
    cut = np.searchsorted(q, cfg.n_max(N), side="right")
    q = q[:cut].astype(np.int64)
    w = w[:cut] * np.exp(-(q.astype(float) ** 2) / N)
    s = (q[:, None] ** 2 + q[None, :] ** 2).ravel()
    ww = (w[:, None] * w[None, :]).ravel()
    _, inverse = np.unique(s, return_inverse=True)
    coeffs = np.bincount(inverse, weights=ww)
    return fsum(coeffs * coeffs)


def _laplace_g_derivs(u, s: complex, a: float):
    """(a+iu)^{-s} and its first two u-derivatives."""
    base = a + 1j * u
    g = np.exp(-s * np.log(base))
    gp = -1j * s * g / base
    gpp = -s * (s + 1.0) * g / (base * base)
    return g, gp, gpp


def _laplace_truncated(s: complex, a: float, D: float, T: float,
                       spec: QuadratureSpec) -> complex:
    freq = (abs(D) + abs(s) / a + 1.0) / TWO_PI

    def f(u):
        return np.exp(-s * np.log(a + 1j * u) + 1j * D * u)

    core = gauss_panels(f, -T, T, freq, spec)
    if D == 0.0:
        if s == 1.0:
            tails = (1j * math.pi
                     - (cmath.log(a + 1j * T) - cmath.log(a - 1j * T))) / 1j
        else:
            F_hi = (a + 1j * T) ** (1.0 - s) / (1j * (1.0 - s))
            F_lo = (a - 1j * T) ** (1.0 - s) / (1j * (1.0 - s))
            tails = -F_hi + F_lo
        return core + tails
    iD = 1j * D
    g, gp, gpp = _laplace_g_derivs(T, s, a)
    tail_plus = cmath.exp(iD * T) * (-g / iD + gp / iD**2 - gpp / iD**3)
    g, gp, gpp = _laplace_g_derivs(-T, s, a)
    tail_minus = cmath.exp(-iD * T) * (g / iD - gp / iD**2 + gpp / iD**3)
    return core + tail_plus + tail_minus


def line_integral_laplace(s, a: float, D: float,
                          spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """(1/2 pi) integral over the real line of e^{iDu} (a+iu)^{-s} du.

    Numerical value only; callers compare with the closed form
    D^{s-1} e^{-aD} / Gamma(s) for D > 0, zero for D < 0, and the D = 0
    values (0 for Re s > 1, 1/2 at s = 1, principal value).
    """
    s = complex(s)
    a, D = float(a), float(D)
    if a <= 0.0:
        raise ValueError(f"need a > 0, got {a}")
    if s.real <= 0.0:
        raise ValueError(f"need Re(s) > 0, got s={s}")
    if D == 0.0 and s != 1.0 and s.real <= 1.0:
        raise ValueError(
            f"integrand decays too slowly for D=0 at s={s}; need Re(s) > 1 or s = 1"
        )
    T = max(64.0, 8.0 * (1.0 + abs(s)) / a)
    if D != 0.0:
        T = max(T, 8.0 / abs(D))
    prev = _laplace_truncated(s, a, D, T, spec)
    for _ in range(14):
        T *= 2.0
        cur = _laplace_truncated(s, a, D, T, spec)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur / TWO_PI
        prev = cur
    raise AccuracyError(
        f"Laplace line integral did not stabilize for s={s}, a={a}, D={D}; "
        f"achieved estimate {prev / TWO_PI!r}"
    )


def laplace_segment_check(mu: float, n: int, N: int,
                          spec: QuadratureSpec = DEFAULT_SPEC):
    """Segment integral of z^{-mu} e(-n alpha) and its closed-form limit.

    Returns (numeric, closed_form) with closed_form =
    exp(-n/N) n^{mu-1} / Gamma(mu); their difference is O(1/n) uniformly.
    """
    mu = float(mu)
    if mu <= 0.0:
        raise ValueError(f"need mu > 0, got {mu}")
    n, N = int(n), int(N)

    def f(alphas):
        z = 1.0 / N - TWO_PI * 1j * alphas
        return np.exp(-mu * np.log(z) - TWO_PI * 1j * n * alphas)

    numeric = gauss_panels(f, -0.5, 0.5, n + mu * N, spec)
    closed = math.exp(-n / N) * float(n) ** (mu - 1.0) / math.gamma(mu)
    return numeric, closed
