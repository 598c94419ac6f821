"""Independent brute-force oracles, written without the sieve.

Everything here is trial division and literal tuple loops; it must stay
independent of the package internals it checks.
"""

import math
from functools import lru_cache


@lru_cache(maxsize=None)
def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def mangoldt(m: int) -> float:
    """Lambda(m) by trial division: log p when m is a power of a prime p."""
    if m < 2:
        return 0.0
    p = 2
    while p * p <= m:
        if m % p == 0:
            q = m
            while q % p == 0:
                q //= p
            return math.log(p) if q == 1 else 0.0
        p += 1
    return math.log(m)  # m itself is prime


def count(kind: str, n: int) -> float:
    """Weighted ordered-representation count by exhaustive enumeration."""
    total = 0.0
    if kind == "goldbach":
        for m1 in range(1, n):
            total += mangoldt(m1) * mangoldt(n - m1)
    elif kind == "hl":
        m2 = 1
        while m2 * m2 < n:
            total += mangoldt(n - m2 * m2)
            m2 += 1
    elif kind == "hua":
        p2 = 2
        while p2 * p2 < n:
            if is_prime(p2):
                p3 = 2
                while p2 * p2 + p3 * p3 < n:
                    if is_prime(p3):
                        m1 = n - p2 * p2 - p3 * p3
                        if is_prime(m1):
                            total += math.log(m1) * math.log(p2) * math.log(p3)
                    p3 += 1
            p2 += 1
    elif kind == "p1p2sq":
        p2 = 2
        while p2 * p2 < n:
            if is_prime(p2) and is_prime(n - p2 * p2):
                total += math.log(n - p2 * p2) * math.log(p2)
            p2 += 1
    elif kind == "two_psq":
        p1 = 2
        while p1 * p1 < n:
            if is_prime(p1):
                r = n - p1 * p1
                s = math.isqrt(r)
                if s * s == r and is_prime(s):
                    total += math.log(p1) * math.log(s)
            p1 += 1
    elif kind == "psq_sq":
        m = 1
        while m * m < n:
            r = n - m * m
            s = math.isqrt(r)
            if s * s == r and is_prime(s):
                total += math.log(s)
            m += 1
    else:
        raise ValueError(kind)
    return total
