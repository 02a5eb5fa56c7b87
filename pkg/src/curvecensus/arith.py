"""Integer substrate: Kronecker symbols, primality, factorization, sieves.

Everything here is pure and deterministic: primality uses a fixed
Miller-Rabin witness set valid for all 64-bit integers, and factorization
uses trial division followed by Brent's cycle method with a fixed seed
sequence.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

# Deterministic for all n < 3.3 * 10^24, in particular all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1, completely multiplicative in n."""
    if n < 1:
        raise ValueError(f"kronecker: modulus must be >= 1, got {n}")
    if n == 1:
        return 1
    sign = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    # Jacobi symbol (a/n) with n odd, via quadratic reciprocity.
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid for all 64-bit n)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: value == prod(p**e), primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization of {self.value}")
            last = p
            prod *= p**e
        if prod != self.value:
            raise ValueError(f"factorization does not multiply back to {self.value}")


def _brent_rho(n: int) -> int:
    """Find a nontrivial factor of composite odd n, deterministic seeds."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += m
                g = math.gcd(q, n)
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to factor {n}")  # unreachable for n < 2**63


def factorize(n: int) -> Factorization:
    """Complete factorization of n >= 1, deterministic."""
    if n < 1:
        raise ValueError(f"factorize: n must be >= 1, got {n}")
    value = n
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # 2,3,5-wheel trial division up to min(sqrt(n), 10^6).
    p = 7
    increments = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += increments[i]
        i = (i + 1) % 8
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _brent_rho(m)
            stack.append(d)
            stack.append(m // d)
    return Factorization(value, tuple(sorted(out.items())))


def euler_phi(n: int) -> int:
    """Euler totient."""
    if n < 1:
        raise ValueError(f"euler_phi: n must be >= 1, got {n}")
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    """Mobius function: 0 on non-squarefree n, else (-1)^(number of primes)."""
    if n < 1:
        raise ValueError(f"mobius: n must be >= 1, got {n}")
    fac = factorize(n).factors
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def valuation(ell: int, n: int) -> int:
    """Exponent of the prime ell in n >= 1."""
    if n < 1:
        raise ValueError(f"valuation: n must be >= 1, got {n}")
    if ell < 2:
        raise ValueError(f"valuation: base must be >= 2, got {ell}")
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**j for d in out for j in range(e + 1)]
    return sorted(out)


def square_divisors(n: int) -> list[int]:
    """All f >= 1 with f**2 | n, ascending."""
    out = [1]
    for p, e in factorize(n).factors:
        out = [d * p**j for d in out for j in range(e // 2 + 1)]
    return sorted(out)


@functools.lru_cache(maxsize=16)
def _primes_tuple(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            start = p * p
            sieve[start: n + 1: p] = bytearray(len(range(start, n + 1, p)))
    return tuple(i for i in range(2, n + 1) if sieve[i])


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by sieve of Eratosthenes (memoized for repeated cutoffs)."""
    return list(_primes_tuple(n))


def primes_in_ap(lo: int, hi: int, m: int, a: int) -> list[int]:
    """Primes p with lo < p < hi and p == a (mod m), ascending.

    Bounds are strict on both sides; the empty list is a normal result.
    """
    if m < 1:
        raise ValueError(f"primes_in_ap: modulus must be >= 1, got {m}")
    if lo > hi:
        raise ValueError(f"primes_in_ap: lo={lo} exceeds hi={hi}")
    a %= m
    start = lo + 1 + (a - (lo + 1)) % m
    out = []
    for p in range(start, hi, m):
        if p >= 2 and is_prime(p):
            out.append(p)
    return out
