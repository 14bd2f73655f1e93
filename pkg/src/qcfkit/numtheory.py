"""Small exact number-theory helpers: factorization, totient, divisors, Legendre symbol."""

from __future__ import annotations

import math
from functools import lru_cache


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, multiplicity), ...), by trial division."""
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def euler_phi(n: int) -> int:
    phi = 1
    for p, k in factorize(n):
        phi *= (p - 1) * p ** (k - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, k in factorize(n):
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    mu = 1
    for _, k in factorize(n):
        if k > 1:
            return 0
        mu = -mu
    return mu


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p: 1, -1, or 0 when p divides a."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"legendre_symbol needs an odd prime modulus, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    if r == p - 1:
        return -1
    return r


def is_coprime(a: int, b: int) -> bool:
    return math.gcd(a, b) == 1
