"""Binary quadratic forms: class numbers, weighted class numbers, L-values.

A negative discriminant d (d < 0, d = 0 or 1 mod 4) has class number h(d) =
number of primitive reduced forms (a, b, c) with b^2 - 4ac = d, and unit
count w(d) = 6, 4, 2 for d = -3, -4, anything else.  The weighted class
number H(D) sums h(D/f^2)/w(D/f^2) over all f with f^2 | D and D/f^2 still a
discriminant; H_k(D) additionally requires gcd(f, k) = 1.  H_k(D) is also
computable in a single pass over all reduced forms of discriminant D
(imprimitive ones included), weighting a form of content f by 1/4 when it is
f*(x^2 + y^2), by 1/6 when it is f*(x^2 + xy + y^2), and by 1/2 otherwise;
both routes are exposed and must agree.

L(1, (d/.)) is available three ways: exactly through the class number
formula, as a truncated Dirichlet series with a rigorous tail bound, and as
a truncated Euler product (diagnostic only, slow convergence).
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
import threading
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .arith import kronecker, primes_up_to, square_divisors


class ClassData(NamedTuple):
    h: int  # class number: primitive reduced forms
    w: int  # units of the order: 6 at -3, 4 at -4, else 2


class LSeriesValue(NamedTuple):
    value: float
    tail_bound: float


# Memoized class data.  _h_table[|d|] covers every discriminant up to the
# precomputed limit in one array; _cache holds individually computed or
# file-loaded entries.  Reads are lock-free; writes are serialized.
_lock = threading.Lock()
_cache: dict[int, ClassData] = {}
_h_table: np.ndarray | None = None
_h_table_limit = 0


def _require_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a negative discriminant (need d < 0, d = 0,1 mod 4)")


def _unit_count(d: int) -> int:
    if d == -3:
        return 6
    if d == -4:
        return 4
    return 2


def reduced_forms(d: int) -> Iterator[tuple[int, int, int]]:
    """All reduced forms (a, b, c) of discriminant d, imprimitive included.

    Reduced means -a < b <= a <= c with b >= 0 when a == c.
    """
    _require_discriminant(d)
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1 + (a + 1 + d) % 2, a + 1, 2):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            yield (a, b, c)
        a += 1


def class_data(d: int) -> ClassData:
    """Class number and unit count of the order of discriminant d."""
    _require_discriminant(d)
    if _h_table is not None and -d <= _h_table_limit:
        return ClassData(int(_h_table[-d]), _unit_count(d))
    hit = _cache.get(d)
    if hit is not None:
        return hit
    h = sum(1 for a, b, c in reduced_forms(d) if math.gcd(math.gcd(a, b), c) == 1)
    out = ClassData(h, _unit_count(d))
    with _lock:
        _cache[d] = out
    return out


def precompute_class_numbers(limit: int) -> None:
    """Tabulate h(d) for all discriminants with |d| <= limit in one sweep.

    Enumerates every reduced form with |disc| <= limit ordered by (a, b) and
    scatters counts of the primitive ones; O(limit^1.5) work, vectorized.
    """
    global _h_table, _h_table_limit
    if limit <= _h_table_limit:
        return
    table = np.zeros(limit + 1, dtype=np.int64)
    a = 1
    while 3 * a * a <= limit:
        four_a = 4 * a
        for b in range(a + 1):
            cmax = (limit + b * b) // four_a
            if cmax < a:
                continue
            c = np.arange(a, cmax + 1, dtype=np.int64)
            absd = four_a * c - b * b
            g = math.gcd(a, b)
            if g == 1:
                primitive = np.ones(len(c), dtype=bool)
            else:
                primitive = np.gcd(c, g) == 1
            if b == 0 or b == a:
                # (a, -b, c) is not reduced (or coincides): weight 1 each.
                np.add.at(table, absd[primitive], 1)
            else:
                # c == a (first entry) gives one class; c > a gives (a, +-b, c).
                weights = np.full(len(c), 2, dtype=np.int64)
                weights[0] = 1
                np.add.at(table, absd[primitive], weights[primitive])
        a += 1
    with _lock:
        _h_table = table
        _h_table_limit = limit


def kronecker_class_number(d: int) -> Fraction:
    """Weighted class number H(d): sum of h(d/f^2)/w(d/f^2) over f^2 | d."""
    return kronecker_class_number_restricted(d, 1)


def kronecker_class_number_restricted(d: int, k: int) -> Fraction:
    """H_k(d): the H(d) sum restricted to levels f with gcd(f, k) = 1."""
    _require_discriminant(d)
    if k < 1:
        raise ValueError(f"restriction parameter must be >= 1, got {k}")
    total = Fraction(0)
    for f in square_divisors(-d):
        if math.gcd(f, k) != 1:
            continue
        d0 = d // (f * f)
        if d0 % 4 not in (0, 1):
            continue
        h, w = class_data(d0)
        total += Fraction(h, w)
    return total


def kronecker_class_number_weighted(d: int, k: int) -> Fraction:
    """H_k(d) by direct weighted enumeration of reduced forms.

    Independent of the f-sum route: walks every reduced form of discriminant
    d once, skips contents sharing a factor with k, and weights by the shape
    of the underlying primitive form.
    """
    _require_discriminant(d)
    if k < 1:
        raise ValueError(f"restriction parameter must be >= 1, got {k}")
    total = Fraction(0)
    for a, b, c in reduced_forms(d):
        f = math.gcd(math.gcd(a, b), c)
        if math.gcd(f, k) != 1:
            continue
        if b == 0 and a == c:
            w = 4  # f * (x^2 + y^2)
        elif a == b == c:
            w = 6  # f * (x^2 + xy + y^2)
        else:
            w = 2
        total += Fraction(1, w)
    return total


def l_value_exact(d: int) -> float:
    """L(1, (d/.)) via the class number formula: 2*pi*h / (w*sqrt(|d|))."""
    h, w = class_data(d)
    return 2.0 * math.pi * h / (w * math.sqrt(-d))


def _character_period(d: int) -> np.ndarray:
    """(d/n) for n = 0 .. |d|-1; the symbol is periodic mod |d|."""
    q = -d
    vals = np.zeros(q, dtype=np.int8)
    for n in range(1, q):
        vals[n] = kronecker(d, n)
    return vals


# Partial-summation constant: tail of sum (d/n)/n beyond X is at most
# 2*max_t |sum_{n<=t} (d/n)| / X, and Polya-Vinogradov bounds every partial
# character sum (induced characters included) by sqrt(|d|)*log|d|.
_PV_CONSTANT = 2.0


def l_value_series(d: int, x: int) -> LSeriesValue:
    """Partial sum of L(1, (d/.)) up to x, with a rigorous tail bound.

    tail_bound = 2 * sqrt(|d|) * log|d| / x.
    """
    _require_discriminant(d)
    if x < -d:
        raise ValueError(f"series cutoff {x} is below |d| = {-d}")
    period = _character_period(d)
    n = np.arange(1, x + 1, dtype=np.int64)
    value = float(np.sum(period[n % (-d)] / n))
    tail = _PV_CONSTANT * math.sqrt(-d) * math.log(-d) / x
    return LSeriesValue(value, tail)


def l_value_truncated(d: int, z: int) -> float:
    """Euler product of L(1, (d/.)) truncated at primes <= z (diagnostic)."""
    _require_discriminant(d)
    if z < 2:
        raise ValueError(f"product cutoff must be >= 2, got {z}")
    out = 1.0
    for ell in primes_up_to(z):
        out /= 1.0 - kronecker(d, ell) / ell
    return out


def load_class_cache(path: str) -> int:
    """Load a discriminant,h,w CSV into the memo cache; returns rows read."""
    count = 0
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = {}
        for row in reader:
            d = int(row["discriminant"])
            _require_discriminant(d)
            rows[d] = ClassData(int(row["h"]), int(row["w"]))
            count += 1
    with _lock:
        _cache.update(rows)
    return count


def save_class_cache(path: str) -> int:
    """Atomically rewrite the cache CSV, sorted ascending by |discriminant|."""
    with _lock:
        items = sorted(_cache.items(), key=lambda kv: -kv[0])
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["discriminant", "h", "w"])
            for d, (h, w) in items:
                writer.writerow([d, h, w])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return len(items)
