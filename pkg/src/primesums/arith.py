"""Sieve arithmetic and weighted representation counting.

Implements the von Mangoldt sieve plus the six additive counting
functions used throughout the package:

* ``GOLDBACH``: sum of Lambda(m1)*Lambda(m2) over ordered pairs m1+m2=n
* ``HL``: sum of Lambda(m1) over m1 + m2^2 = n (m2 >= 1)
* ``HUA``: sum of log(p1)log(p2)log(p3) over p1 + p2^2 + p3^2 = n
* ``P1P2SQ``: sum of log(p1)log(p2) over p1 + p2^2 = n
* ``TWO_PSQ``: sum of log(p1)log(p2) over p1^2 + p2^2 = n
* ``PSQ_SQ``: sum of log(p) over p^2 + m^2 = n (m >= 1)

All tuples are ordered.  GOLDBACH and HL carry Lambda weights (all prime
powers); the remaining problems weight primes only by log p, matching the
two weight conventions deliberately mixed in the source material.

Aggregates (cumulative, short-interval, Cesaro-weighted) are evaluated by
enumerating summand tuples directly -- never by per-n recomputation -- and
accumulate with exact compensated summation for reproducibility.
"""

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import SieveRangeError
from .summation import fsum

_CHEBYSHEV_CHECKPOINTS = (100, 1000, 10**4, 10**5, 10**6, 10**7)


class ProblemKind(enum.Enum):
    GOLDBACH = "goldbach"
    HL = "hl"
    HUA = "hua"
    P1P2SQ = "p1p2sq"
    TWO_PSQ = "two_psq"
    PSQ_SQ = "psq_sq"


@dataclass
class SieveTable:
    """Immutable arithmetic ground truth up to ``limit``.

    Attributes
    ----------
    limit : int
        Largest integer covered.
    lam : numpy.ndarray
        ``lam[n]`` is the von Mangoldt function Lambda(n) for 0 <= n <= limit
        (entries 0 and 1 are zero).  For prime powers p^k the stored value is
        exactly ``log(p)`` computed once per prime.
    is_prime : numpy.ndarray
        Boolean primality flags, same indexing.
    """

    limit: int
    lam: np.ndarray
    is_prime: np.ndarray

    @cached_property
    def primes(self) -> np.ndarray:
        return np.nonzero(self.is_prime)[0]

    @cached_property
    def prime_powers(self):
        """Ascending prime powers q <= limit and their weights Lambda(q)."""
        q = np.nonzero(self.lam > 0.0)[0]
        return q, self.lam[q]

    @cached_property
    def psi_prefix(self) -> np.ndarray:
        """psi_prefix[n] = sum of Lambda(m) for m <= n (Chebyshev psi)."""
        return np.cumsum(self.lam)

    @cached_property
    def prime_log_prefix(self) -> np.ndarray:
        """prime_log_prefix[n] = sum of log p over primes p <= n."""
        w = np.where(self.is_prime, self.lam, 0.0)
        return np.cumsum(w)

    def psi(self, x: int) -> float:
        return float(self.psi_prefix[min(int(x), self.limit)])


def build_sieve(limit: int) -> SieveTable:
    """Sieve Lambda(n) and primality flags for 1 <= n <= limit.

    Runs in O(limit log log limit).  Raises ValueError for limit < 2.
    The Chebyshev sanity bound |psi(x) - x| <= 3 sqrt(x) log^2 x is checked
    at decade checkpoints inside [100, limit].
    """
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    lam = np.zeros(limit + 1)
    primes = np.nonzero(is_prime)[0]
    logs = np.log(primes.astype(float))
    lam[primes] = logs
    for p, logp in zip(primes, logs):
        if p * p > limit:
            break
        q = p * p
        while q <= limit:
            lam[q] = logp
            q *= p
    table = SieveTable(limit=limit, lam=lam, is_prime=is_prime)
    for x in _CHEBYSHEV_CHECKPOINTS:
        if x > limit:
            break
        err = abs(fsum(lam[: x + 1]) - x)
        tol = 3.0 * math.sqrt(x) * math.log(x) ** 2
        if err > tol:
            raise AssertionError(
                f"Chebyshev psi check failed at x={x}: |psi-x|={err:.3g} > {tol:.3g}"
            )
    return table


def _required_limit(kind: ProblemKind, n_max: int) -> int:
    """Largest sieve index a window reaching n_max needs."""
    if kind in (ProblemKind.TWO_PSQ, ProblemKind.PSQ_SQ):
        return math.isqrt(n_max)
    return n_max


def _check_range(kind: ProblemKind, n_max: int, sieve: SieveTable):
    need = _required_limit(kind, n_max)
    if need > sieve.limit:
        raise SieveRangeError(
            f"{kind.name} up to n={n_max} needs sieve limit >= {need}, "
            f"table has {sieve.limit}"
        )


def representation_count(kind: ProblemKind, n: int, sieve: SieveTable) -> float:
    """Weighted count of ordered representations of n for one problem.

    Direct per-n evaluation, kept independent of the aggregate routines so
    it can serve as a spot check against them.  Returns 0.0 when n has no
    representation.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _check_range(kind, n, sieve)
    lam = sieve.lam
    if kind is ProblemKind.GOLDBACH:
        if n < 2:
            return 0.0
        return fsum(lam[1:n] * lam[n - 1 : 0 : -1])
    if kind is ProblemKind.HL:
        m2 = np.arange(1, math.isqrt(n - 1) + 1) if n > 1 else np.arange(0)
        return fsum(lam[n - m2 * m2])
    if kind is ProblemKind.P1P2SQ:
        p2 = sieve.primes[sieve.primes * sieve.primes < n]
        m1 = n - p2 * p2
        w = np.where(sieve.is_prime[m1], lam[m1], 0.0)
        return fsum(np.log(p2.astype(float)) * w)
    if kind is ProblemKind.HUA:
        ps = sieve.primes[sieve.primes * sieve.primes < n]
        logs = np.log(ps.astype(float))
        total = []
        for p2, lg2 in zip(ps, logs):
            rem = n - p2 * p2
            p3 = ps[ps * ps < rem]
            m1 = rem - p3 * p3
            w = np.where(sieve.is_prime[m1], lam[m1], 0.0)
            total.append(fsum(lg2 * np.log(p3.astype(float)) * w))
        return fsum(total)
    if kind is ProblemKind.TWO_PSQ:
        ps = sieve.primes[sieve.primes * sieve.primes < n]
        total = []
        sq = set((int(p) * int(p) for p in ps))
        for p1 in ps:
            r = n - int(p1) * int(p1)
            if r in sq:
                total.append(math.log(p1) * math.log(math.isqrt(r)))
        return fsum(total)
    if kind is ProblemKind.PSQ_SQ:
        total = []
        for m in range(1, math.isqrt(n - 1) + 1 if n > 1 else 1):
            r = n - m * m
            p = math.isqrt(r)
            if p * p == r and p <= sieve.limit and sieve.is_prime[p]:
                total.append(math.log(p))
        return fsum(total)
    raise ValueError(f"unknown problem kind {kind!r}")


def _prefix_window(prefix: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Vector of prefix[hi] - prefix[lo] with arguments clipped at 0."""
    lo = np.clip(lo, 0, None)
    hi = np.clip(hi, 0, None)
    return prefix[hi] - prefix[lo]


def _window_sum(kind: ProblemKind, lo: int, hi: int, sieve: SieveTable) -> float:
    """Sum of representation counts over lo < n <= hi by tuple enumeration."""
    if hi <= lo:
        return 0.0
    _check_range(kind, hi, sieve)
    if kind is ProblemKind.GOLDBACH:
        q, w = sieve.prime_powers
        q = q[q < hi]
        w = w[: q.size]
        inner = _prefix_window(sieve.psi_prefix, lo - q, hi - q)
        return fsum(w * inner)
    if kind is ProblemKind.HL:
        m2 = np.arange(1, math.isqrt(hi - 1) + 1, dtype=np.int64)
        sq = m2 * m2
        return fsum(_prefix_window(sieve.psi_prefix, lo - sq, hi - sq))
    if kind is ProblemKind.P1P2SQ:
        p2 = sieve.primes[sieve.primes.astype(np.int64) ** 2 < hi].astype(np.int64)
        sq = p2 * p2
        inner = _prefix_window(sieve.prime_log_prefix, lo - sq, hi - sq)
        return fsum(np.log(p2.astype(float)) * inner)
    if kind is ProblemKind.HUA:
        ps = sieve.primes[sieve.primes.astype(np.int64) ** 2 < hi].astype(np.int64)
        logs = np.log(ps.astype(float))
        total = []
        for p2, lg2 in zip(ps, logs):
            s = p2 * p2 + ps * ps
            keep = s < hi
            inner = _prefix_window(sieve.prime_log_prefix, lo - s[keep], hi - s[keep])
            total.append(fsum(lg2 * logs[keep] * inner))
        return fsum(total)
    if kind is ProblemKind.TWO_PSQ:
        root = math.isqrt(hi - 1)
        ps = sieve.primes[sieve.primes <= root].astype(np.int64)
        logs = np.log(ps.astype(float))
        plog_sq_prefix = np.concatenate(([0.0], np.cumsum(logs)))
        sq = ps * ps
        total = []
        for p1, lg1 in zip(ps, logs):
            s1 = p1 * p1
            # count primes p2 with lo - s1 < p2^2 <= hi - s1
            i_hi = np.searchsorted(sq, hi - s1, side="right")
            i_lo = np.searchsorted(sq, max(lo - s1, 0), side="right")
            if i_hi > i_lo:
                total.append(lg1 * (plog_sq_prefix[i_hi] - plog_sq_prefix[i_lo]))
        return fsum(total)
    if kind is ProblemKind.PSQ_SQ:
        root = math.isqrt(hi - 1)
        ps = sieve.primes[sieve.primes <= math.isqrt(hi)].astype(np.int64)
        logs = np.log(ps.astype(float))
        plog_sq_prefix = np.concatenate(([0.0], np.cumsum(logs)))
        sq = ps * ps
        m = np.arange(1, root + 1, dtype=np.int64)
        i_hi = np.searchsorted(sq, hi - m * m, side="right")
        i_lo = np.searchsorted(sq, np.clip(lo - m * m, 0, None), side="right")
        return fsum(plog_sq_prefix[i_hi] - plog_sq_prefix[i_lo])
    raise ValueError(f"unknown problem kind {kind!r}")


def cumulative_sum(kind: ProblemKind, N: int, sieve: SieveTable) -> float:
    """Sum of representation counts over 1 <= n <= N (n = N included)."""
    N = int(N)
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    return _window_sum(kind, 0, N, sieve)


def short_interval_sum(kind: ProblemKind, N: int, H: int, sieve: SieveTable) -> float:
    """Sum of representation counts over the window N < n <= N + H."""
    N, H = int(N), int(H)
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")
    if N < 0:
        raise ValueError(f"N must be nonnegative, got {N}")
    return _window_sum(kind, N, N + H, sieve)


def _weighted_pairs(kind: ProblemKind, N: int, sieve: SieveTable, weight) -> float:
    """Sum of r_kind(n) * weight(n) for n <= N by tuple enumeration.

    ``weight`` must accept a numpy array of n values.
    """
    _check_range(kind, N, sieve)
    if kind is ProblemKind.GOLDBACH:
        q, w = sieve.prime_powers
        q = q[q < N]
        w = w[: q.size]
        total = []
        for q1, w1 in zip(q, w):
            j = np.searchsorted(q, N - q1, side="right")
            if j == 0:
                continue
            n = q1 + q[:j]
            total.append(fsum(w1 * w[:j] * weight(n)))
        return fsum(total)
    if kind is ProblemKind.HL:
        q, w = sieve.prime_powers
        total = []
        for m2 in range(1, math.isqrt(N - 1) + 1 if N > 1 else 1):
            s = m2 * m2
            j = np.searchsorted(q, N - s, side="right")
            if j == 0:
                continue
            total.append(fsum(w[:j] * weight(q[:j] + s)))
        return fsum(total)
    if kind is ProblemKind.P1P2SQ:
        ps = sieve.primes.astype(np.int64)
        logs = np.log(ps.astype(float))
        total = []
        for p2 in ps[ps * ps < N]:
            s = int(p2) * int(p2)
            j = np.searchsorted(ps, N - s, side="right")
            if j:
                total.append(
                    math.log(p2) * fsum(logs[:j] * weight(ps[:j] + s))
                )
        return fsum(total)
    if kind is ProblemKind.HUA:
        ps = sieve.primes.astype(np.int64)
        logs = np.log(ps.astype(float))
        small = ps[ps * ps < N]
        total = []
        for p2 in small:
            for p3 in small:
                s = int(p2) ** 2 + int(p3) ** 2
                if s >= N:
                    break
                j = np.searchsorted(ps, N - s, side="right")
                if j:
                    total.append(
                        math.log(p2) * math.log(p3)
                        * fsum(logs[:j] * weight(ps[:j] + s))
                    )
        return fsum(total)
    if kind is ProblemKind.TWO_PSQ:
        ps = sieve.primes[sieve.primes <= math.isqrt(N)].astype(np.int64)
        logs = np.log(ps.astype(float))
        sq = ps * ps
        total = []
        for p1, lg1 in zip(ps, logs):
            j = np.searchsorted(sq, N - p1 * p1, side="right")
            if j:
                total.append(fsum(lg1 * logs[:j] * weight(p1 * p1 + sq[:j])))
        return fsum(total)
    if kind is ProblemKind.PSQ_SQ:
        ps = sieve.primes[sieve.primes <= math.isqrt(N)].astype(np.int64)
        logs = np.log(ps.astype(float))
        sq = ps * ps
        total = []
        for m in range(1, math.isqrt(N - 1) + 1 if N > 1 else 1):
            j = np.searchsorted(sq, N - m * m, side="right")
            if j:
                total.append(fsum(logs[:j] * weight(sq[:j] + m * m)))
        return fsum(total)
    raise ValueError(f"unknown problem kind {kind!r}")


def cesaro_sum(kind: ProblemKind, N: int, k: float, sieve: SieveTable) -> float:
    """Cesaro (Riesz) weighted sum over n <= N.

    Each count enters with weight (1 - n/N)^k / Gamma(k+1); the n = N term
    carries weight zero.  Requires k > 0.
    """
    N = int(N)
    k = float(k)
    if k <= 0.0:
        raise ValueError(f"Cesaro order k must be positive, got {k}")
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    norm = math.gamma(k + 1.0)

    def weight(n):
        return (1.0 - n / N) ** k / norm

    return _weighted_pairs(kind, N, sieve, weight)


def exp_weighted_short_sum(N: int, H: int, sieve: SieveTable) -> float:
    """Sum of exp(-n/N) * R_G(n) over the Goldbach window N < n <= N + H."""
    N, H = int(N), int(H)
    if H < 1:
        raise ValueError(f"H must be >= 1, got {H}")
    hi = N + H
    _check_range(ProblemKind.GOLDBACH, hi, sieve)
    q, w = sieve.prime_powers
    q = q[q < hi]
    w = w[: q.size]
    total = []
    for q1, w1 in zip(q, w):
        i = np.searchsorted(q, N - q1, side="right")
        j = np.searchsorted(q, hi - q1, side="right")
        if j > i:
            n = q1 + q[i:j]
            total.append(fsum(w1 * w[i:j] * np.exp(-n / N)))
    return fsum(total)
