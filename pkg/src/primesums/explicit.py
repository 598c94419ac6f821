"""Term-by-term evaluation of the explicit formulas and their residuals.

Each evaluator computes the brute-force left side from the sieve, every
named term of the corresponding right side (zero sums truncated at the
height of the supplied table), and the residual lhs - sum(terms).  Terms
are stored SIGNED, exactly as they appear on the right side, so the
residual is always one compensated subtraction.

Zero sums pair each stored ordinate with its conjugate zero, which makes
every stored term exactly real; magnitudes like N^{rho+1} times Gamma
ratios are fused into a single exponential so no intermediate leaves
double range.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import jv, loggamma

from .arith import (ProblemKind, SieveTable, cesaro_sum, cumulative_sum,
                    exp_weighted_short_sum, representation_count,
                    short_interval_sum)
from .errors import AccuracyError
from .expsum import TWO_PI, ComplexParam, ExpSumConfig
from .quadrature import DEFAULT_SPEC, QuadratureSpec, gauss_panels, trapezoid_periodic
from .special import bessel_j_saddle
from .summation import fsum, fsum_complex
from .zeros import ZeroTable, conjugate_pair_sum, truncate

_SHORT_INTERVAL_KINDS = (ProblemKind.HUA, ProblemKind.P1P2SQ,
                         ProblemKind.TWO_PSQ, ProblemKind.PSQ_SQ)


@dataclass
class FormulaReport:
    """Left side, signed right-side terms, and residual of one formula."""

    problem: ProblemKind
    N: int
    lhs: float
    terms: dict
    reference_bound: float
    T: float = 0.0
    k: Optional[float] = None
    H: Optional[int] = None
    residual: float = field(default=0.0)
    ratio: float = field(default=0.0)
    validity_warning: bool = False
    bessel_tail: Optional[float] = None

    def __post_init__(self):
        self.residual = fsum([self.lhs] + [-v for v in self.terms.values()])
        self.ratio = (self.residual / self.reference_bound
                      if self.reference_bound > 0 else 0.0)


def _real_pair_sum(zeros: ZeroTable, term) -> float:
    """Real value of a conjugate-symmetric zero sum (imaginary part is 0
    by construction; the two-sided structure is exercised in the tests)."""
    return conjugate_pair_sum(zeros, term).real


def goldbach_average(N: int, zeros: ZeroTable, sieve: SieveTable) -> FormulaReport:
    """Long average of Goldbach counts against N^2/2 minus its zero sum."""
    N = int(N)
    lhs = cumulative_sum(ProblemKind.GOLDBACH, N, sieve)
    log_n = math.log(N)

    def term(g):
        rho = 0.5 + 1j * g
        return np.exp((rho + 1.0) * log_n) / (rho * (rho + 1.0))

    terms = {
        "main": N * N / 2.0,
        "zero_sum_1": -2.0 * _real_pair_sum(zeros, term),
    }
    return FormulaReport(
        problem=ProblemKind.GOLDBACH, N=N, lhs=lhs, terms=terms,
        reference_bound=N * log_n**3, T=zeros.height,
    )


def _cesaro_validity(k: float) -> bool:
    """Shared k-range policy: k > 1 proven, (1/2, 1] flagged, below rejected."""
    k = float(k)
    if k <= 0.5:
        raise ValueError(
            f"Cesaro formulas need k > 1/2 (double zero sum diverges), got k={k}"
        )
    return k <= 1.0


def goldbach_cesaro(N: int, k: float, zeros: ZeroTable, sieve: SieveTable,
                    pair_height: float) -> FormulaReport:
    """Cesaro-averaged Goldbach formula with single and double zero sums.

    The double sum runs over zero pairs with both ordinates at most
    ``pair_height`` (it converges much slower than the single sum, so its
    height is an independent knob).  Proven for k > 1; k in (1/2, 1] is
    evaluated with ``validity_warning`` set.
    """
    N, k = int(N), float(k)
    warn = _cesaro_validity(k)
    lhs = cesaro_sum(ProblemKind.GOLDBACH, N, k, sieve)
    log_n = math.log(N)

    def term(g):
        rho = 0.5 + 1j * g
        return np.exp(loggamma(rho) - loggamma(rho + k + 2.0) + (rho + 1.0) * log_n)

    terms = {
        "main": N * N / math.gamma(k + 3.0),
        "zero_sum_1": -2.0 * _real_pair_sum(zeros, term),
        "double_zero_sum": _double_zero_sum(N, k, truncate(zeros, pair_height)),
    }
    return FormulaReport(
        problem=ProblemKind.GOLDBACH, N=N, k=k, lhs=lhs, terms=terms,
        reference_bound=float(N), T=zeros.height, validity_warning=warn,
    )


def _double_zero_sum(N: int, k: float, pairs: ZeroTable) -> float:
    """Sum over all zero pairs of Gamma(rho1)Gamma(rho2)/Gamma(rho1+rho2+k+1)
    times N^{rho1+rho2}, organized over the four conjugate-sign combinations.

    With ordinates gamma > 0 stored, the (-,-) grid conjugates (+,+) and
    (-,+) conjugates (+,-), so the total is 2 Re of the two stored grids.
    Each pair is one fused exponential; accumulation is row-major in
    ascending (gamma1, gamma2).
    """
    g = pairs.gammas
    if g.size == 0:
        return 0.0
    log_n = math.log(N)
    rho = 0.5 + 1j * g
    lg = loggamma(rho)
    both = rho[:, None] + rho[None, :]
    s_pp = np.exp(lg[:, None] + lg[None, :] - loggamma(both + k + 1.0)
                  + both * log_n)
    mixed = rho[:, None] + np.conj(rho)[None, :]
    s_pm = np.exp(lg[:, None] + np.conj(lg)[None, :] - loggamma(mixed + k + 1.0)
                  + mixed * log_n)
    total = fsum_complex(s_pp.ravel()) + fsum_complex(s_pm.ravel())
    return 2.0 * total.real


def goldston_yang(N: int, zeros: ZeroTable, sieve: SieveTable) -> FormulaReport:
    """Linear-weight Goldbach average, the k = 1 endpoint formula.

    The left side is accumulated per-n from representation counts (the
    direct route); the Cesaro pair enumeration at k = 1 must reproduce it
    exactly, which the acceptance suite checks.
    """
    N = int(N)
    lam = sieve.lam
    per_n = [np.dot(lam[1:n], lam[n - 1 : 0 : -1]) * (1.0 - n / N)
             for n in range(2, N + 1)]
    lhs = fsum(per_n)
    log_n = math.log(N)

    def term(g):
        rho = 0.5 + 1j * g
        return np.exp((rho + 1.0) * log_n) / (rho * (rho + 1.0) * (rho + 2.0))

    terms = {
        "main": N * N / 6.0,
        "zero_sum_1": -2.0 * _real_pair_sum(zeros, term),
    }
    return FormulaReport(
        problem=ProblemKind.GOLDBACH, N=N, k=1.0, lhs=lhs, terms=terms,
        reference_bound=float(N), T=zeros.height,
    )


def hl_cesaro(N: int, k: float, zeros: ZeroTable, sieve: SieveTable,
              bessel_ell_max: int = 50) -> FormulaReport:
    """Cesaro-averaged prime-plus-square formula, all six terms.

    The Bessel block sums J of real order k+3/2 over arguments
    2*pi*l*sqrt(N) (scipy), and the zero-order block J of complex order
    k+1/2+rho fused with Gamma(rho) and the power prefactors through the
    saddle-point evaluator.  Summation order is rho outer, l inner; a
    crude tail estimate for the truncated l sum (|J| <= 1 and the
    l^{-(k+3/2)} decay) is reported as ``bessel_tail``.
    """
    N, k = int(N), float(k)
    L = int(bessel_ell_max)
    if L < 1:
        raise ValueError(f"bessel_ell_max must be >= 1, got {L}")
    warn = _cesaro_validity(k)
    lhs = cesaro_sum(ProblemKind.HL, N, k, sieve)
    log_n = math.log(N)
    sqrt_pi = math.sqrt(math.pi)
    root_n = math.sqrt(N)

    def term_half(g):
        rho = 0.5 + 1j * g
        return np.exp(loggamma(rho) - loggamma(k + 1.5 + rho) + (0.5 + rho) * log_n)

    def term_zero(g):
        rho = 0.5 + 1j * g
        return np.exp(loggamma(rho) - loggamma(k + 1.0 + rho) + rho * log_n)

    ells = np.arange(1, L + 1, dtype=float)
    bessel_real = fsum(jv(k + 1.5, TWO_PI * ells * root_n) / ells ** (k + 1.5))
    bessel_pref = N ** (0.75 - k / 2.0) / math.pi ** (k + 1.0)
    tail = bessel_pref * L ** (-(k + 0.5)) / (k + 0.5)

    terms = {
        "main": (sqrt_pi / 2.0) * N**1.5 / math.gamma(k + 2.5),
        "secondary_main": -0.5 * N / math.gamma(k + 2.0),
        "zero_sum_1": -(sqrt_pi / 2.0) * _real_pair_sum(zeros, term_half),
        "zero_sum_2": 0.5 * _real_pair_sum(zeros, term_zero),
        "bessel_sum": bessel_pref * bessel_real,
        "bessel_zero_sum": _bessel_zero_sum(N, k, zeros, L),
    }
    return FormulaReport(
        problem=ProblemKind.HL, N=N, k=k, lhs=lhs, terms=terms,
        reference_bound=math.sqrt(N), T=zeros.height,
        validity_warning=warn, bessel_tail=tail,
    )


def _bessel_zero_sum(N: int, k: float, zeros: ZeroTable, ell_max: int) -> float:
    """The complex-order Bessel double sum of the prime-plus-square formula.

    Cell (rho, l) evaluates Gamma(rho) (sqrt(N)/pi)^rho J_{k+1/2+rho}
    (2 pi l sqrt(N)) / l^{k+1/2+rho} as one saddle-point quadrature with
    the whole prefactor carried in the exponent.  Conjugate zeros double
    the real part; the leading minus sign and N, pi powers sit outside.
    """
    g = zeros.gammas
    if g.size == 0:
        return 0.0
    rho = 0.5 + 1j * g
    nu = k + 0.5 + rho
    base_log = loggamma(rho) + rho * math.log(math.sqrt(N) / math.pi)
    root_n = math.sqrt(N)
    cells = np.empty((g.size, ell_max), dtype=complex)
    for ell in range(1, ell_max + 1):
        lf = base_log - nu * math.log(ell)
        try:
            cells[:, ell - 1] = bessel_j_saddle(nu, TWO_PI * ell * root_n,
                                                log_factor=lf)
        except (AccuracyError, ValueError) as exc:
            raise AccuracyError(
                f"Bessel cell failure at ell={ell}, N={N}, k={k}: {exc}"
            ) from exc
    inner = [fsum_complex(cells[i]) for i in range(g.size)]  # rho outer, l inner
    total = 2.0 * fsum([v.real for v in inner])
    return -(N ** (0.25 - k / 2.0) / math.pi**k) * total


_SHORT_MAIN = {
    ProblemKind.HUA: lambda N, H: (math.pi / 4.0) * H * N,
    ProblemKind.P1P2SQ: lambda N, H: H * math.sqrt(N),
    ProblemKind.TWO_PSQ: lambda N, H: (math.pi / 4.0) * H,
    ProblemKind.PSQ_SQ: lambda N, H: (math.pi / 4.0) * H,
}


def _short_bound(kind: ProblemKind, N: int, H: int) -> float:
    L = math.log(N)
    if kind is ProblemKind.HUA:
        return math.sqrt(H) * N * L**2 + H * N**0.75 * L**3 + H * H * L**1.5
    if kind is ProblemKind.P1P2SQ:
        return H * H / math.sqrt(N) + N**0.75 * L**3 + H * N ** (1.0 / 3.0) * L**2
    if kind is ProblemKind.TWO_PSQ:
        return H * H / N + math.sqrt(H) * N**0.25 * L**1.5
    if kind is ProblemKind.PSQ_SQ:
        return H * H / N + H * math.log(L) / math.sqrt(L)
    raise ValueError(f"no short-interval theorem for {kind}")


def short_interval_report(kind: ProblemKind, N: int, H: int,
                          sieve: SieveTable) -> FormulaReport:
    """Short-interval count against its theorem main term and error shape."""
    if kind not in _SHORT_INTERVAL_KINDS:
        raise ValueError(f"no short-interval theorem for {kind}")
    N, H = int(N), int(H)
    lhs = short_interval_sum(kind, N, H, sieve)
    terms = {"main": _SHORT_MAIN[kind](N, H)}
    return FormulaReport(
        problem=kind, N=N, H=H, lhs=lhs, terms=terms,
        reference_bound=_short_bound(kind, N, H),
    )


def circle_decomposition_diag(N: int, H: int, sieve: SieveTable,
                              spec: QuadratureSpec = DEFAULT_SPEC,
                              compute_split: bool = True) -> dict:
    """Diagnostics for the circle-method decomposition of the weighted window.

    Integrates the squared weighted sum and its main-term square against
    the window kernel K(alpha) = sum_{m<=H} e(-(N+m) alpha), checks that
    the two pieces reassemble the arithmetic window sum, and evaluates the
    two nonnegative pieces of the split mean-square bound.

    The kernel carries the e(-N alpha) recentering factor explicitly, which
    the schematic form of the decomposition suppresses; without it the
    identity is not exact.
    """
    N, H = int(N), int(H)
    if not 1 <= H < N:
        raise ValueError(f"need 1 <= H < N, got N={N}, H={H}")
    cfg = ExpSumConfig(ell=1)
    n_max = cfg.n_max(N)
    q, w = sieve.prime_powers
    cut = np.searchsorted(q, n_max, side="right")
    qf = q[:cut].astype(float)
    weights = w[:cut] * np.exp(-qf / N)
    cutoff = cfg.cutoff(N)

    from .analysis import phase_profile

    s_prof = phase_profile(qf, weights)

    def kernel(alphas):
        m = np.arange(1, H + 1, dtype=float)
        th = -TWO_PI * alphas[:, None] * (N + m)[None, :]
        return np.cos(th).sum(axis=1) + 1j * np.sin(th).sum(axis=1)

    def m1(alphas):
        return 1.0 / (1.0 / N - TWO_PI * 1j * alphas)

    main_integral = complex(gauss_panels(
        lambda a: m1(a) ** 2 * kernel(a), -0.5, 0.5, 2.0 * N + H, spec))

    def corr(alphas):
        return (s_prof(alphas) ** 2 - m1(alphas) ** 2) * kernel(alphas)

    total_sq = complex(trapezoid_periodic(
        lambda a: s_prof(a) ** 2 * kernel(a), 2 * int(cutoff) + N + H))
    correction_integral = total_sq - main_integral
    window = exp_weighted_short_sum(N, H, sieve)
    out = {
        "main_integral": main_integral.real,
        "correction_integral": correction_integral.real,
        "window_sum": window,
        "identity_residual": abs((main_integral + correction_integral) - window),
    }
    if compute_split:
        def dist_sq(alphas):
            return np.abs(s_prof(alphas) - m1(alphas)) ** 2

        budget = min(cutoff, N * math.log(1e9))
        inner = 2.0 * gauss_panels(dist_sq, 0.0, 1.0 / H, budget, spec).real
        outer = gauss_panels(lambda a: dist_sq(a) / a, 1.0 / H, 0.5, budget, spec).real
        out["split_inner"] = H * inner
        out["split_outer"] = outer
    return out
