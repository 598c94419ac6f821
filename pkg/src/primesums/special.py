"""Complex special functions for the explicit-formula evaluators.

Gamma quotients are always formed in the log domain: Gamma(1/2 + i*gamma)
alone underflows past |gamma| ~ 150 while the quotients stay moderate, so
every downstream formula routes through ``gamma_ratio`` or fuses log-Gamma
values into a single exponent.

Bessel J of complex order is provided by two independent routes that
cross-validate each other: the defining power series (small argument) and
Sonine's contour integral evaluated as a vertical-line quadrature.  A
third, saddle-point form of the same contour integral covers the large
argument regime with large imaginary order, where it admits an arbitrary
log-domain prefactor so order-Gamma products never leave double range.
"""

import cmath
import math

import numpy as np
from scipy.special import loggamma as _loggamma

from .errors import AccuracyError
from .quadrature import DEFAULT_SPEC, QuadratureSpec, _gl_rule, gauss_panels
from .summation import fsum_complex

_SERIES_EPS = 1e-18
_SERIES_MAX_TERMS = 500
_TAIL_LOG = math.log(1e18)  # exp(-m^2 Re z) truncation threshold 1e-18


def _is_pole(s: complex) -> bool:
    return s.imag == 0.0 and s.real <= 0.0 and s.real == round(s.real)


def log_gamma(s) -> complex:
    """Principal branch of log Gamma(s) on the complex plane."""
    s = complex(s)
    if _is_pole(s):
        raise ValueError(f"log_gamma pole at s={s}")
    return complex(_loggamma(s))


def gamma_ratio(num, den) -> complex:
    """Gamma(num)/Gamma(den) without ever forming either Gamma value."""
    return cmath.exp(log_gamma(num) - log_gamma(den))


def bessel_j_series(nu, u: float) -> complex:
    """Bessel J of complex order by the defining power series.

    Valid for Re(nu) > -1 and 0 <= u <= 50 (beyond that the series loses
    too many digits to cancellation in double precision).  Terms are summed
    until they fall below 1e-18 of the running sum.
    """
    nu = complex(nu)
    u = float(u)
    if nu.real <= -1.0:
        raise ValueError(f"order must satisfy Re(nu) > -1, got {nu}")
    if not 0.0 <= u <= 50.0:
        raise ValueError(f"series regime needs 0 <= u <= 50, got u={u}")
    if u == 0.0:
        return 1.0 + 0j if nu == 0 else 0.0 + 0j
    term = cmath.exp(nu * cmath.log(u / 2.0) - log_gamma(nu + 1.0))
    total = term
    quarter_u2 = 0.25 * u * u
    for m in range(1, _SERIES_MAX_TERMS + 1):
        term *= -quarter_u2 / (m * (nu + m))
        total += term
        if abs(term) < _SERIES_EPS * abs(total):
            return total
    raise AccuracyError(
        f"Bessel series did not converge within {_SERIES_MAX_TERMS} terms "
        f"for nu={nu}, u={u}"
    )


def _sonine_g(t, nu, u: float, a: float):
    """Non-oscillatory factor g(t) with J = (1/2pi) integral g(t) e^{it} dt."""
    s = a + 1j * t
    return np.exp(nu * math.log(u / 2.0) + a - (nu + 1.0) * np.log(s)
                  - u * u / (4.0 * s))


def _sonine_g_derivs(t, nu, u: float, a: float):
    """g, g', g'' (derivatives in t) for the integration-by-parts tails."""
    s = a + 1j * t
    g = np.exp(nu * math.log(u / 2.0) + a - (nu + 1.0) * np.log(s)
               - u * u / (4.0 * s))
    h1 = -(nu + 1.0) / s + u * u / (4.0 * s * s)
    h1p = 1j * ((nu + 1.0) / (s * s) - u * u / (2.0 * s ** 3))
    gp = 1j * g * h1
    gpp = -g * (h1 * h1) + 1j * g * h1p
    return g, gp, gpp


def _sonine_local_freq(t_near: float, nu, u: float, a: float) -> float:
    """Upper bound on the integrand frequency (cycles) on a zone at |t| >= t_near."""
    r2 = a * a + t_near * t_near
    return (1.0 + abs(nu + 1.0) / math.sqrt(r2) + u * u / (4.0 * r2)) / (2.0 * math.pi)


def _sonine_core(nu, u: float, a: float, T: float, points: int):
    """[-T, T] integral of g e^{it} on dyadically graded oscillation zones.

    The u^2/(4s) phase spins fastest near t = 0 and dies off like 1/t^2,
    so panel density follows the local frequency zone by zone.
    """
    edges = [0.0]
    step = a
    while edges[-1] < T:
        edges.append(min(edges[-1] + step, T))
        step *= 2.0
    x, w = _gl_rule(points)
    nodes, weights = [], []
    for t1, t2 in zip(edges[:-1], edges[1:]):
        n_panels = max(1, int(math.ceil((t2 - t1) * 4.0 * _sonine_local_freq(t1, nu, u, a))))
        sub = np.linspace(t1, t2, n_panels + 1)
        mid = 0.5 * (sub[:-1] + sub[1:])
        half = 0.5 * (sub[1] - sub[0])
        nodes.append((mid[:, None] + half * x[None, :]).ravel())
        weights.append(np.broadcast_to(half * w[None, :], (n_panels, points)).ravel())
    t_pos = np.concatenate(nodes)
    w_pos = np.concatenate(weights)
    t_all = np.concatenate((-t_pos[::-1], t_pos))
    w_all = np.concatenate((w_pos[::-1], w_pos))
    vals = _sonine_g(t_all, nu, u, a) * np.exp(1j * t_all)
    return fsum_complex(vals * w_all)


def _sonine_truncated(nu, u: float, a: float, T: float, spec: QuadratureSpec):
    """[-T, T] graded-panel integral of g e^{it} plus three-term IBP tails."""
    core = _sonine_core(nu, u, a, T, spec.points_per_panel)
    refined = _sonine_core(nu, u, a, T, spec.points_per_panel + 4)
    if abs(refined - core) > max(spec.abs_tol, spec.rel_tol * abs(refined)):
        raise AccuracyError(
            f"Sonine panel refinement stalled for nu={nu}, u={u}, a={a}"
        )
    g, gp, gpp = _sonine_g_derivs(T, nu, u, a)
    tail_plus = cmath.exp(1j * T) * (1j * g - gp - 1j * gpp)
    g, gp, gpp = _sonine_g_derivs(-T, nu, u, a)
    tail_minus = cmath.exp(-1j * T) * (-1j * g + gp + 1j * gpp)
    return (refined + tail_plus + tail_minus) / (2.0 * math.pi)


def bessel_j_sonine(nu, u: float, a: float = 1.0,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Bessel J of complex order via the Sonine contour integral.

    Quadrature runs along the vertical line Re(s) = a; the window is
    widened (with analytic integration-by-parts tail corrections, since the
    integrand decays only algebraically along the line) until the value
    stabilizes.  Valid for Re(nu) > -1, u > 0, a > 0.
    """
    nu = complex(nu)
    u, a = float(u), float(a)
    if nu.real <= -1.0:
        raise ValueError(f"order must satisfy Re(nu) > -1, got {nu}")
    if u <= 0.0 or a <= 0.0:
        raise ValueError(f"need u > 0 and a > 0, got u={u}, a={a}")
    T = max(32.0, 2.0 * u, 2.0 * abs(nu))
    prev = _sonine_truncated(nu, u, a, T, spec)
    for _ in range(12):
        T *= 2.0
        cur = _sonine_truncated(nu, u, a, T, spec)
        if abs(cur - prev) <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise AccuracyError(
        f"Sonine quadrature did not stabilize for nu={nu}, u={u}, a={a}; "
        f"achieved estimate {prev!r}"
    )


_SADDLE_DEPTH = 45.0      # integrate until Re(phi - phi0) < -45  (~3e-20)
_SADDLE_MIN_IM = 10.0     # below this Im(nu) the subdominant saddle matters
_SADDLE_MIN_DEPTH = 19.0  # required Re(phi0): other saddle weighs e^(-2*19)


def _saddle_exponent(nu, u: float):
    """Saddle point t0 of u*sinh(t) - nu*t and the exponent value there."""
    zeta = nu / u
    t0 = np.log(zeta + np.sqrt(zeta - 1.0) * np.sqrt(zeta + 1.0))
    phi0 = u * np.sinh(t0) - nu * t0
    return t0, phi0


def bessel_j_saddle(nu, u: float, log_factor=0.0):
    """exp(log_factor) * J_nu(u) by saddle-point quadrature, vectorized.

    Evaluates the Sonine/Schlaefli integral (1/2 pi i) int exp(u sinh t -
    nu t) dt on a straight descent segment through the saddle
    t0 = arccosh(nu/u), entirely in the log domain so huge prefactors
    (Gamma values, powers) can ride along in ``log_factor``.

    Only valid where the neglected second saddle is suppressed: requires
    Im(nu) >= 10 and a saddle exponent with Re >= 19 (relative weight of
    the other saddle below ~1e-16).  Both hold for every order k+1/2+rho
    paired with arguments 2*pi*l*sqrt(N) at N >= 1000; small orders or
    small arguments go through the series or Sonine routes instead.
    """
    nu = np.atleast_1d(np.asarray(nu, dtype=complex))
    lf = np.broadcast_to(np.asarray(log_factor, dtype=complex), nu.shape).copy()
    u = float(u)
    if u <= 0.0:
        raise ValueError(f"need u > 0, got u={u}")
    if np.any(nu.imag < _SADDLE_MIN_IM):
        raise ValueError(
            f"saddle evaluation needs Im(nu) >= {_SADDLE_MIN_IM}; "
            "use the series or Sonine route for small orders"
        )
    t0, phi0 = _saddle_exponent(nu, u)
    if np.any(phi0.real < _SADDLE_MIN_DEPTH):
        i = int(np.nonzero(phi0.real < _SADDLE_MIN_DEPTH)[0][0])
        raise ValueError(
            f"single-saddle evaluation invalid for nu={nu[i]}, u={u}: "
            f"saddle exponent Re={phi0.real[i]:.2f} < {_SADDLE_MIN_DEPTH}"
        )
    if np.any((phi0 + lf).real > 690.0):
        raise AccuracyError("saddle exponent overflows double range")
    d2 = u * np.sinh(t0)  # phi''(t0)
    direction = np.exp(0.5j * (math.pi - np.angle(d2)))
    flip = direction.imag < 0
    direction[flip] = -direction[flip]

    tau_scale = np.sqrt(2.0 * _SADDLE_DEPTH / np.abs(d2))
    half = _march_halfwidths(nu, u, t0, phi0, direction, tau_scale)
    theta = np.abs(d2) * half**2 / 2.0 + np.abs(nu) * half**3 / 6.0
    n_nodes = int(np.clip(64 + 0.9 * theta.max(), 64, 4096))
    x, w = _gl_rule(n_nodes)
    taus = half[:, None] * x[None, :]
    t = t0[:, None] + direction[:, None] * taus
    expo = u * np.sinh(t) - nu[:, None] * t - phi0[:, None]
    vals = np.exp(expo) @ w
    out = np.exp(phi0 + lf) * direction * half * vals / (2j * math.pi)
    return out if out.size > 1 else complex(out[0])


def _march_halfwidths(nu, u, t0, phi0, direction, tau_scale):
    """Half-width per cell at which Re(phi - phi0) has dropped below target.

    The straight descent line only tracks the true path near the saddle, so
    the width is found by marching outward on the actual exponent; an
    exponent that stops falling before reaching usable depth aborts.
    """
    factors = 1.0 + 0.25 * np.arange(29)  # up to 8x the Gaussian estimate
    half = np.full(nu.shape, np.nan)
    depth = np.zeros(nu.shape)
    for fac in factors:
        pending = np.isnan(half)
        if not np.any(pending):
            break
        tau = tau_scale[pending] * fac
        worst = np.full(tau.shape, -np.inf)
        for sgn in (1.0, -1.0):
            t = t0[pending] + sgn * direction[pending] * tau
            r = (u * np.sinh(t) - nu[pending] * t - phi0[pending]).real
            worst = np.maximum(worst, r)
        sel = np.nonzero(pending)[0]
        done = worst < -(_SADDLE_DEPTH - 3.0)
        half[sel[done]] = tau[done]
        depth[sel] = np.maximum(depth[sel], -worst)
    bad = np.isnan(half)
    if np.any(bad):
        if np.any(depth[bad] < 30.0):
            i = int(np.nonzero(bad)[0][0])
            raise AccuracyError(
                f"saddle descent line loses depth for nu={nu[i]}, u={u}"
            )
        half[bad] = tau_scale[bad] * factors[-1]
    return half


def theta(z) -> complex:
    """Complex theta function: sum over all integers m of exp(-m^2 z).

    Requires Re(z) > 0; the series is truncated once exp(-m^2 Re z) drops
    below 1e-18.
    """
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError(f"theta needs Re(z) > 0, got z={z}")
    m_max = int(math.sqrt(_TAIL_LOG / z.real)) + 1
    m = np.arange(1, m_max + 1)
    return 1.0 + 2.0 * fsum_complex(np.exp(-(m * m) * z))


def theta_modular_residual(z) -> float:
    """|theta(z) - sqrt(pi/z) theta(pi^2/z)| with the principal square root."""
    z = complex(z)
    lhs = theta(z)
    rhs = cmath.sqrt(math.pi / z) * theta(math.pi * math.pi / z)
    return abs(lhs - rhs)
