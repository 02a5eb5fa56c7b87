"""Curve census: counts of elliptic curves over prime fields by group or order.

Every group of points is of the shape (m, k), meaning Z/m x Z/mk of order
N = m^2 k.  A prime p can carry curves of order N only inside the Hasse
window (p - 1 - N)^2 < 4N; there the weighted count of classes with group
(m, k) is the restricted weighted class number H_k(d(p)) of the trace
discriminant d(p) = ((p-1)/m - mk)^2 - 4k, and the count by order alone is
H((p-1-N)^2 - 4N).  Weighted means each isomorphism class counts 1/#Aut.

brute_force_tally is the independent oracle: it enumerates Weierstrass
equations over F_p, counts points directly, reads off the group shape from
the exponent, and applies the mass formula (each class corresponds to
(p-1)/#Aut short-Weierstrass pairs for p > 3, and to (p-1)p^3/#Aut general
quintuples for p in {2, 3}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .arith import euler_phi, factorize, is_prime, mobius, primes_in_ap, square_divisors
from .errors import ConsistencyError
from .quadforms import kronecker_class_number, kronecker_class_number_restricted

ORDER_BOUND = 2**40
ORACLE_PRIME_CAP = 61


class GroupShape(NamedTuple):
    m: int
    k: int

    @property
    def order(self) -> int:
        return self.m * self.m * self.k


class HasseWindow(NamedTuple):
    n: int
    primes: tuple[int, ...]


@dataclass
class CurveTally:
    """Oracle output for one prime: weighted counts per group shape."""

    p: int
    entries: dict[GroupShape, Fraction]
    total: Fraction


def in_hasse_window(n: int, p: int) -> bool:
    """Integer test (p - 1 - n)^2 < 4n; no floating point at the boundary."""
    return (p - 1 - n) ** 2 < 4 * n


def hasse_window(n: int) -> HasseWindow:
    """All primes p with (p - 1 - n)^2 < 4n, ascending."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    lo = max(2, n + 1 - 2 * math.isqrt(n) - 1)
    hi = n + 2 + 2 * math.isqrt(n) + 1
    primes = tuple(
        p for p in range(lo, hi) if in_hasse_window(n, p) and is_prime(p)
    )
    return HasseWindow(n, primes)


def trace_discriminant(m: int, k: int, p: int) -> int:
    """d(p) = ((p-1)/m - mk)^2 - 4k; requires p = 1 (mod m) inside the window."""
    n = m * m * k
    if p % m != 1 % m:
        raise ValueError(f"p = {p} is not 1 mod m = {m}")
    if not in_hasse_window(n, p):
        raise ValueError(f"p = {p} is outside the Hasse window of N = {n}")
    return ((p - 1) // m - m * k) ** 2 - 4 * k


def m_p_of_group(m: int, k: int, p: int) -> Fraction:
    """Weighted count of classes over F_p with group Z/m x Z/mk."""
    n = m * m * k
    if p % m != 1 % m or not in_hasse_window(n, p):
        return Fraction(0)
    return kronecker_class_number_restricted(trace_discriminant(m, k, p), k)


def m_of_group(m: int, k: int, bound: int = ORDER_BOUND) -> Fraction:
    """Weighted count over all primes: sum of m_p_of_group over the window."""
    n = m * m * k
    if n > bound:
        raise OverflowError(f"group order {n} exceeds the configured bound {bound}")
    total = Fraction(0)
    for p in window_primes_in_class(n, m):
        total += kronecker_class_number_restricted(trace_discriminant(m, k, p), k)
    return total


def window_primes_in_class(n: int, m: int) -> list[int]:
    """Window primes of n that are 1 mod m (the only ones carrying (m, .))."""
    lo = n - 2 * math.isqrt(n) - 1  # strictly below every window integer
    hi = n + 2 + 2 * math.isqrt(n) + 1
    return [p for p in primes_in_ap(lo, hi, m, 1) if in_hasse_window(n, p)]


def m_p_of_order(n: int, nt: int, p: int) -> Fraction:
    """Weighted count of curves over F_p with order n and full nt-torsion."""
    if nt < 1 or n % (nt * nt) != 0:
        raise ValueError(f"torsion level {nt} must satisfy nt^2 | {n}")
    if p % nt != 1 % nt or not in_hasse_window(n, p):
        return Fraction(0)
    d = (p - 1 - n) ** 2 - 4 * n
    return kronecker_class_number(d // (nt * nt))


def m_of_order_routes(n: int, bound: int = ORDER_BOUND) -> tuple[Fraction, Fraction]:
    """M(n) two ways: summed over window primes, and over group shapes."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n > bound:
        raise OverflowError(f"order {n} exceeds the configured bound {bound}")
    by_primes = Fraction(0)
    for p in hasse_window(n).primes:
        by_primes += kronecker_class_number((p - 1 - n) ** 2 - 4 * n)
    by_shapes = Fraction(0)
    for m, _ in order_decomposition(n, bound):
        by_shapes += m_of_group(m, n // (m * m), bound)
    return by_primes, by_shapes


def order_decomposition(n: int, bound: int = ORDER_BOUND) -> list[tuple[int, int]]:
    """All shapes (m, k) with m^2 k = n, ascending in m."""
    return [(m, n // (m * m)) for m in square_divisors(n)]


def m_of_order(n: int, bound: int = ORDER_BOUND) -> Fraction:
    """M(n) = sum over shapes of M(Z/m x Z/mk); both routes must agree."""
    by_primes, by_shapes = m_of_order_routes(n, bound)
    if by_primes != by_shapes:
        raise ConsistencyError(
            f"M({n}) routes disagree: {by_primes} by primes, {by_shapes} by shapes"
        )
    return by_primes


def inclusion_exclusion_check(m: int, k: int, p: int) -> Fraction:
    """Right side of M_p(G) = sum over r^2 | k of mu(r) M_p(N; rm)."""
    n = m * m * k
    total = Fraction(0)
    for r in square_divisors(k):
        mu = mobius(r)
        if mu:
            total += mu * m_p_of_order(n, r * m, p)
    return total


def delta_statistic(m: int, k: int) -> float:
    """Normalized prime sum over the window for shape (m, k).

    (phi(m) log(2N) / N) * sum of sqrt(4N - (p-1-N)^2) over window primes
    p = 1 (mod m); the radicand equals (p - N^-)(N^+ - p) exactly.
    """
    n = m * m * k
    s = sum(
        math.sqrt(4 * n - (p - 1 - n) ** 2) for p in window_primes_in_class(n, m)
    )
    return euler_phi(m) * math.log(2 * n) / n * s


def eta_statistic(n: int) -> float:
    """Same normalized sum with every window prime counted (order version)."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    s = sum(math.sqrt(4 * n - (p - 1 - n) ** 2) for p in hasse_window(n).primes)
    return math.log(2 * n) / n * s


# --- brute-force oracle ----------------------------------------------------


def _group_shape(points: list[tuple[int, int]], n: int, add) -> GroupShape:
    """Shape (m, k) from the exponent, via orders of the affine points.

    add(P, Q) is the curve's group law; None encodes the point at infinity.
    n is the full group order, n = m^2 k with exponent mk.
    """
    fac = factorize(n).factors

    def mult(t: int, pt):
        acc = None
        while t:
            if t & 1:
                acc = add(acc, pt)
            pt = add(pt, pt)
            t >>= 1
        return acc

    def order(pt) -> int:
        o = n
        for q, e in fac:
            o //= q**e
            r = mult(o, pt)
            while r is not None:
                r = mult(q, r)
                o *= q
        return o

    lam = 1
    for pt in points:
        if mult(lam, pt) is not None:
            lam = math.lcm(lam, order(pt))
            if lam == n:
                break
    m = n // lam
    if lam % m:
        raise ConsistencyError(f"exponent {lam} incompatible with order {n}")
    return GroupShape(m, lam // m)


def _tally_large(p: int) -> CurveTally:
    """Short Weierstrass scan for p > 3: y^2 = x^3 + ax + b, weight 1/(p-1)."""
    sqrt_of = [[] for _ in range(p)]
    for y in range(p):
        sqrt_of[y * y % p].append(y)
    inv = [0] * p
    for v in range(1, p):
        inv[v] = pow(v, p - 2, p)

    def add_for(a):
        def add(pt1, pt2):
            if pt1 is None:
                return pt2
            if pt2 is None:
                return pt1
            x1, y1 = pt1
            x2, y2 = pt2
            if x1 == x2 and (y1 + y2) % p == 0:
                return None
            if pt1 == pt2:
                lam = (3 * x1 * x1 + a) * inv[2 * y1 % p] % p
            else:
                lam = (y2 - y1) * inv[(x2 - x1) % p] % p
            x3 = (lam * lam - x1 - x2) % p
            return (x3, (lam * (x1 - x3) - y1) % p)

        return add

    counts: dict[GroupShape, int] = {}
    singular = 0
    cubes = [x * x * x % p for x in range(p)]
    for a in range(p):
        add = add_for(a)
        for b in range(p):
            if (4 * a * a * a + 27 * b * b) % p == 0:
                singular += 1
                continue
            points = []
            for x in range(p):
                t = (cubes[x] + a * x + b) % p
                for y in sqrt_of[t]:
                    points.append((x, y))
            shape = _group_shape(points, len(points) + 1, add)
            counts[shape] = counts.get(shape, 0) + 1

    weight = Fraction(1, p - 1)
    entries = {s: c * weight for s, c in sorted(counts.items())}
    total = sum(entries.values(), Fraction(0))
    expected = Fraction(p * p - singular, p - 1)
    if total != expected:
        raise ConsistencyError(
            f"oracle mass {total} != ({p}^2 - {singular})/({p} - 1) = {expected}"
        )
    return CurveTally(p, entries, total)


def _tally_small(p: int) -> CurveTally:
    """Full Weierstrass scan for p in {2, 3}, weight 1/((p-1) p^3)."""

    def add_for(a1, a2, a3, a4, a6):
        def add(pt1, pt2):
            if pt1 is None:
                return pt2
            if pt2 is None:
                return pt1
            x1, y1 = pt1
            x2, y2 = pt2
            if x1 == x2 and (y1 + y2 + a1 * x2 + a3) % p == 0:
                return None
            if x1 == x2:
                den = (2 * y1 + a1 * x1 + a3) % p
                lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(den, p - 2, p) % p
                nu = (-(x1**3) + a4 * x1 + 2 * a6 - a3 * y1) * pow(den, p - 2, p) % p
            else:
                den = pow((x2 - x1) % p, p - 2, p)
                lam = (y2 - y1) * den % p
                nu = (y1 * x2 - y2 * x1) * den % p
            x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
            y3 = (-(lam + a1) * x3 - nu - a3) % p
            return (x3, y3)

        return add

    counts: dict[GroupShape, int] = {}
    nonsingular = 0
    for a1 in range(p):
        for a2 in range(p):
            for a3 in range(p):
                for a4 in range(p):
                    for a6 in range(p):
                        b2 = a1 * a1 + 4 * a2
                        b4 = 2 * a4 + a1 * a3
                        b6 = a3 * a3 + 4 * a6
                        b8 = (
                            a1 * a1 * a6
                            + 4 * a2 * a6
                            - a1 * a3 * a4
                            + a2 * a3 * a3
                            - a4 * a4
                        )
                        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
                        if disc % p == 0:
                            continue
                        nonsingular += 1
                        points = [
                            (x, y)
                            for x in range(p)
                            for y in range(p)
                            if (y * y + a1 * x * y + a3 * y
                                - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0
                        ]
                        add = add_for(a1, a2, a3, a4, a6)
                        shape = _group_shape(points, len(points) + 1, add)
                        counts[shape] = counts.get(shape, 0) + 1

    weight = Fraction(1, (p - 1) * p**3)
    entries = {s: c * weight for s, c in sorted(counts.items())}
    total = sum(entries.values(), Fraction(0))
    if total != nonsingular * weight:
        raise ConsistencyError(f"oracle mass mismatch at p = {p}")
    return CurveTally(p, entries, total)


def brute_force_tally(p: int, cap: int = ORACLE_PRIME_CAP) -> CurveTally:
    """Exhaustive weighted census of elliptic curves over F_p (oracle)."""
    if p > cap:
        raise ValueError(f"oracle prime {p} exceeds the cap {cap}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _tally_small(p) if p <= 3 else _tally_large(p)


def admissible_shapes(p: int) -> list[GroupShape]:
    """All shapes (m, k) a curve over F_p could realize, sorted."""
    out = []
    for n in range(max(1, p - 2 * math.isqrt(p)), p + 2 + 2 * math.isqrt(p) + 1):
        if not in_hasse_window(n, p):
            continue
        for m, k in order_decomposition(n):
            if p % m == 1 % m:
                out.append(GroupShape(m, k))
    return sorted(out)
