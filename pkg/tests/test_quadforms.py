import csv
import math
from fractions import Fraction

import pytest

from curvecensus import quadforms
from curvecensus.quadforms import (
    class_data,
    kronecker_class_number,
    kronecker_class_number_restricted,
    kronecker_class_number_weighted,
    l_value_exact,
    l_value_series,
    l_value_truncated,
)


def _reduce_form(a, b, c, d):
    """Gauss reduction to the canonical reduced representative."""
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            # translate b into (-a, a]
            t = (b + a) // (2 * a) if b > 0 else -((-b + a) // (2 * a))
            b2 = b - 2 * a * t
            c = (b2 * b2 - d) // (4 * a)
            b = b2
            continue
        if a == c and b < 0:
            b = -b
            continue
        return (a, b, c)


def _class_number_oracle(d):
    """Count SL2(Z)-classes of primitive forms by reducing every candidate."""
    reps = set()
    bound = math.isqrt(-d // 3) + 2
    for a in range(1, bound + 1):
        for b in range(-a, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            reps.add(_reduce_form(a, b, c, d))
    return len(reps)


def test_class_data_examples():
    assert class_data(-3) == (1, 6)
    assert class_data(-4) == (1, 4)
    assert class_data(-23) == (3, 2)


def test_class_data_rejects_non_discriminants():
    for bad in (0, 5, -1, -2, -5, -6, -10):
        with pytest.raises(ValueError):
            class_data(bad)


def test_class_number_against_reduction_oracle():
    for d in range(-200, 0):
        if d % 4 in (0, 1):
            assert class_data(d).h == _class_number_oracle(d), d


def test_precomputed_table_matches_per_discriminant():
    quadforms.precompute_class_numbers(2000)
    for d in range(-2000, 0):
        if d % 4 not in (0, 1):
            continue
        h = sum(
            1
            for a, b, c in quadforms.reduced_forms(d)
            if math.gcd(math.gcd(a, b), c) == 1
        )
        assert class_data(d).h == h, d


def test_kronecker_class_number_examples():
    assert kronecker_class_number(-4) == Fraction(1, 4)
    assert kronecker_class_number(-12) == Fraction(2, 3)
    assert kronecker_class_number(-16) == Fraction(3, 4)
    assert kronecker_class_number(-7) == Fraction(1, 2)
    assert kronecker_class_number(-20) == 1


def test_restricted_examples():
    assert kronecker_class_number_restricted(-16, 2) == Fraction(1, 2)
    assert kronecker_class_number_restricted(-12, 3) == Fraction(2, 3)


def test_restriction_at_one_is_unrestricted():
    quadforms.precompute_class_numbers(10**4)
    for d in range(-(10**4), 0):
        if d % 4 in (0, 1):
            assert kronecker_class_number_restricted(d, 1) == kronecker_class_number(d)


def test_weighted_enumeration_agrees_with_level_sum():
    quadforms.precompute_class_numbers(5000)
    for d in range(-5000, 0):
        if d % 4 not in (0, 1):
            continue
        for k in range(1, 13):
            assert kronecker_class_number_weighted(d, k) == kronecker_class_number_restricted(d, k), (d, k)


def test_values_are_nonnegative_with_denominator_dividing_12():
    for d in range(-600, 0):
        if d % 4 not in (0, 1):
            continue
        for k in (1, 2, 3, 5, 12):
            v = kronecker_class_number_restricted(d, k)
            assert v >= 0
            assert 12 % v.denominator == 0


def test_l_value_exact_examples():
    assert abs(l_value_exact(-4) - math.pi / 4) < 1e-15
    assert abs(l_value_exact(-3) - math.pi / (3 * math.sqrt(3))) < 1e-15
    assert abs(l_value_exact(-23) - 2 * math.pi * 3 / (2 * math.sqrt(23))) < 1e-12


def test_l_value_series_close_to_exact():
    for d in (-4, -3, -23, -163, -48):
        value, tail = l_value_series(d, 10**6)
        assert abs(value - l_value_exact(d)) <= tail, d
    # the Leibniz partial sum tail at 10^6 is tiny
    value, tail = l_value_series(-4, 10**6)
    assert abs(value - math.pi / 4) < 5e-6
    assert tail < 1e-5


def test_l_value_series_rejects_small_cutoff():
    with pytest.raises(ValueError):
        l_value_series(-23, 10)


def test_l_value_series_consistency_small_range():
    for d in range(-200, 0):
        if d % 4 not in (0, 1):
            continue
        value, tail = l_value_series(d, 10**5)
        assert abs(value - l_value_exact(d)) <= tail, d


def test_l_value_truncated():
    assert l_value_truncated(-4, 2) == 1.0
    assert abs(l_value_truncated(-3, 3) - 2 / 3) < 1e-15
    assert abs(l_value_truncated(-4, 10**5) - math.pi / 4) < 0.05
    with pytest.raises(ValueError):
        l_value_truncated(-4, 1)


def test_class_cache_round_trip(tmp_path, monkeypatch):
    # sidestep any bulk table another test installed, so the lookup lands
    # in the spillable per-discriminant cache
    monkeypatch.setattr(quadforms, "_h_table", None)
    monkeypatch.setattr(quadforms, "_h_table_limit", 0)
    d0 = -100003  # = 1 mod 4
    expected = class_data(d0)
    path = tmp_path / "classdata.csv"
    assert quadforms.save_class_cache(str(path)) >= 1
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["discriminant", "h", "w"]
    discs = [int(r[0]) for r in rows[1:]]
    assert discs == sorted(discs, key=lambda d: -d)
    assert [str(d0), str(expected.h), str(expected.w)] in rows[1:]

    with quadforms._lock:
        quadforms._cache.pop(d0, None)
    assert quadforms.load_class_cache(str(path)) == len(rows) - 1
    assert class_data(d0) == expected
