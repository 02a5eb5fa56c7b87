"""Local Euler factors and explicit constants for the census main terms.

The conjectural density constant for a group shape (m, k) of order N is an
Euler product: a generic factor 1 - ((N-1/l)^2 l + 1)/((l-1)^2 (l+1)) at
primes l not dividing N, 1 - 1/l^2 at l | m, and 1 - 1/(l(l-1)) at l | k,
l not dividing m.  The order-only constant replaces the last two by
1 - 1/(l^v (l-1)) with v the l-adic valuation.  Truncated products carry a
rigorous tail bound.

T(n), P(l) and the 2-adic quantities J_r(v), script J are the local sums
the main-term analysis rests on; each has an enumeration route (the
definition) and a closed form, and the pair is kept side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import euler_phi, factorize, kronecker, primes_up_to, valuation
from .errors import ConsistencyError

DEFAULT_CUTOFF = 100_000

# Each omitted generic factor beyond the cutoff satisfies |log factor| <=
# 4/l^2, and sum of 1/l^2 over l > z is below 1/z, so the full product
# differs from the truncation by a factor within exp(+-4/cutoff).
_TAIL_LOG_CONSTANT = 4.0


@dataclass
class LocalFactorTable:
    """Exact per-prime factors plus the truncated float product."""

    context: dict
    factors: list[tuple[int, Fraction]]
    truncated_value: float
    cutoff: int
    tail_bound: float


def aut_order(m: int, k: int) -> int:
    """Order of the automorphism group of Z/m x Z/mk.

    #Aut / #G = m phi(m) (phi(k)/k) prod over l | m, l not | k of (1 - 1/l^2);
    the rational expression always clears to an integer.
    """
    if m < 1 or k < 1:
        raise ValueError(f"invalid shape ({m}, {k})")
    out = Fraction(m**3 * euler_phi(m) * euler_phi(k))
    for ell, _ in factorize(m).factors:
        if k % ell:
            out *= 1 - Fraction(1, ell * ell)
    if out.denominator != 1:
        raise ConsistencyError(f"automorphism count for ({m}, {k}) is not integral: {out}")
    return out.numerator


def generic_factor(n: int, ell: int) -> Fraction:
    """Factor at a prime ell not dividing n: 1 - ((n-1/l)^2 l + 1)/((l-1)^2 (l+1))."""
    chi2 = kronecker(n - 1, ell) ** 2
    return 1 - Fraction(chi2 * ell + 1, (ell - 1) ** 2 * (ell + 1))


def group_factor(m: int, k: int, ell: int) -> Fraction:
    """The ell-factor of the shape constant K for (m, k)."""
    if m % ell == 0:
        return 1 - Fraction(1, ell * ell)
    if k % ell == 0:
        return 1 - Fraction(1, ell * (ell - 1))
    return generic_factor(m * m * k, ell)


def order_factor(n: int, ell: int) -> Fraction:
    """The ell-factor of the order constant K for n."""
    v = valuation(ell, n)
    if v:
        return 1 - Fraction(1, ell**v * (ell - 1))
    return generic_factor(n, ell)


def _assemble(factor_at, dividing: list[int], cutoff: int, context: dict) -> LocalFactorTable:
    if cutoff < 100:
        raise ValueError(f"cutoff must be >= 100, got {cutoff}")
    seen = set(dividing)
    ells = sorted(seen | set(primes_up_to(cutoff)))
    factors = [(ell, factor_at(ell)) for ell in ells]
    value = 1.0
    for _, f in factors:
        value *= f.numerator / f.denominator
    tail = abs(value) * (math.exp(_TAIL_LOG_CONSTANT / cutoff) - 1.0)
    return LocalFactorTable(context, factors, value, cutoff, tail)


def k_of_group(m: int, k: int, cutoff: int = DEFAULT_CUTOFF) -> LocalFactorTable:
    """Truncated shape constant with exact factors and a tail bound."""
    if m < 1 or k < 1:
        raise ValueError(f"invalid shape ({m}, {k})")
    n = m * m * k
    dividing = [ell for ell, _ in factorize(n).factors]
    return _assemble(
        lambda ell: group_factor(m, k, ell), dividing, cutoff, {"m": m, "k": k, "n": n}
    )


def k_of_order(n: int, cutoff: int = DEFAULT_CUTOFF) -> LocalFactorTable:
    """Truncated order constant with exact factors and a tail bound."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    dividing = [ell for ell, _ in factorize(n).factors]
    return _assemble(lambda ell: order_factor(n, ell), dividing, cutoff, {"n": n})


def conjectural_main_term(m: int, k: int, cutoff: int = DEFAULT_CUTOFF) -> tuple[float, float]:
    """K(m, k) * N^2 / (#Aut * log N), truncated; returns (value, tail bound)."""
    n = m * m * k
    if n < 2:
        raise ValueError("main term undefined for the trivial group (log 1 = 0)")
    table = k_of_group(m, k, cutoff)
    scale = n * n / (aut_order(m, k) * math.log(n))
    return table.truncated_value * scale, table.tail_bound * scale


# --- the local sums T, P ----------------------------------------------------


def t_of_n(n: int, m: int, k: int) -> int:
    """T(n) by enumeration: over squares d = j^2 mod n, the Kronecker symbol
    (d - 4k / n) counted at each j with N + 1 + jm coprime to n."""
    if n < 1:
        raise ValueError(f"modulus must be >= 1, got {n}")
    big_n = m * m * k
    total = 0
    for j in range(n):
        if math.gcd(big_n + 1 + j * m, n) != 1:
            continue
        d = j * j % n
        total += kronecker(d - 4 * k, n)
    return total


def t_closed_form(ell: int, w: int, m: int, k: int) -> int:
    """T(ell^w) in closed form, valid for primes ell not dividing 2k."""
    if (2 * k) % ell == 0:
        raise ValueError(f"closed form requires ell = {ell} coprime to 2k = {2 * k}")
    if w < 1:
        raise ValueError(f"exponent must be >= 1, got {w}")
    big_n = m * m * k
    head = -(kronecker(m * (big_n - 1), ell) ** 2)
    if w % 2 == 0:
        head += ell - 1 - kronecker(k, ell)
    else:
        head += -1
    return ell ** (w - 1) * head


def p_of_ell(ell: int, m: int, k: int) -> Fraction:
    """The local average P(ell) = 1 + sum of T(ell^w)/(ell^(2w-1)(ell - (m/l)^2)).

    Closed rational form; the truncated series agrees within a geometric tail.
    """
    if (2 * k) % ell == 0:
        raise ValueError(f"P(ell) requires ell = {ell} coprime to 2k = {2 * k}")
    big_n = m * m * k
    sm = kronecker(m, ell) ** 2
    sn1 = kronecker(big_n - 1, ell) ** 2
    sk = kronecker(k, ell)
    num = ell**3 - sm * ell**2 - (1 + sm * sn1) * ell - 1 - sn1 * sk
    den = (ell**2 - 1) * (ell - sm)
    return Fraction(num, den)


def p_of_ell_series(ell: int, m: int, k: int, terms: int = 12) -> Fraction:
    """Partial sum of the P(ell) series through T(ell^terms), exact."""
    if (2 * k) % ell == 0:
        raise ValueError(f"P(ell) requires ell = {ell} coprime to 2k = {2 * k}")
    sm = kronecker(m, ell) ** 2
    total = Fraction(1)
    for w in range(1, terms + 1):
        total += Fraction(t_closed_form(ell, w, m, k), ell ** (2 * w - 1) * (ell - sm))
    return total


# --- 2-adic counts ----------------------------------------------------------


def j_r_v(r: int, v: int, m: int, k: int) -> int:
    """Count of 1 <= j <= 2^(2v+3) with (j - mk)^2 = 4k + 4^v r mod 2^(2v+3)
    and jm even."""
    if r not in (0, 1, 4, 5):
        raise ValueError(f"residue class r must be in {{0, 1, 4, 5}}, got {r}")
    if v < 0:
        raise ValueError(f"level v must be >= 0, got {v}")
    modulus = 2 ** (2 * v + 3)
    target = (4 * k + 4**v * r) % modulus
    count = 0
    for j in range(1, modulus + 1):
        if (j * m) % 2 == 0 and (j - m * k) ** 2 % modulus == target:
            count += 1
    return count


def _script_j_level(v: int, m: int, k: int) -> Fraction:
    """The level-v aggregate: weighted sum of |J_r(v)| over r in {0,1,4,5}."""
    v0 = 3 if m % 2 == 0 else 2
    total = Fraction(0)
    for r in (0, 1, 4, 5):
        total += Fraction(j_r_v(r, v, m, k), 2 - kronecker(r, 2))
    return total / 2 ** (v0 - 1)


def script_j(m: int, k: int) -> Fraction:
    """The 2-adic constant: sum over admissible v of level aggregates / 8^v.

    Computed both from the three-branch closed form and by enumeration (the
    v >= 3 tail is geometric with constant level value, summed exactly);
    the routes must agree.
    """
    if m < 1 or k < 1:
        raise ValueError(f"invalid shape ({m}, {k})")
    if m % 2 == 1 and k % 2 == 1:
        closed = Fraction(2, 3)
    elif m % 2 == 0 and k % 2 == 0:
        closed = Fraction(3, 2)
    else:
        closed = Fraction(1)

    if k % 2 == 0:
        enumerated = _script_j_level(0, m, k)  # (2^v, k) = 1 forces v = 0
    else:
        enumerated = sum(
            (_script_j_level(v, m, k) / 8**v for v in range(3)), Fraction(0)
        )
        # levels v >= 3 all take the v = 3 value; geometric tail in 1/8
        enumerated += _script_j_level(3, m, k) * Fraction(1, 8**3) / (1 - Fraction(1, 8))

    if closed != enumerated:
        raise ConsistencyError(
            f"2-adic constant for ({m}, {k}): closed form {closed} != enumeration {enumerated}"
        )
    return closed
