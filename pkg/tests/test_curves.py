import math
from fractions import Fraction

import pytest

from curvecensus import curves, quadforms
from curvecensus.curves import (
    GroupShape,
    admissible_shapes,
    brute_force_tally,
    delta_statistic,
    eta_statistic,
    hasse_window,
    inclusion_exclusion_check,
    m_of_group,
    m_of_order,
    m_of_order_routes,
    m_p_of_group,
    m_p_of_order,
    trace_discriminant,
)


def setup_module():
    quadforms.precompute_class_numbers(4 * 1200)


def test_hasse_window_examples():
    assert hasse_window(1).primes == (2, 3)
    assert hasse_window(4).primes == (2, 3, 5, 7)
    assert hasse_window(121).primes == (101, 103, 107, 109, 113, 127, 131, 137, 139)


def test_hasse_window_membership_is_strict():
    for n in range(1, 400):
        primes = hasse_window(n).primes
        assert list(primes) == sorted(primes)
        for p in primes:
            assert (p - 1 - n) ** 2 < 4 * n
        # no window prime escapes the scan
        for p in range(2, n + 2 * math.isqrt(n) + 4):
            if (p - 1 - n) ** 2 < 4 * n and curves.is_prime(p):
                assert p in primes, (n, p)


def test_trace_discriminant_examples():
    assert trace_discriminant(1, 1, 2) == -4
    assert trace_discriminant(2, 1, 5) == -4
    assert trace_discriminant(1, 4, 3) == -12


def test_trace_discriminant_rejects():
    with pytest.raises(ValueError):
        trace_discriminant(2, 1, 2)  # 2 != 1 mod 2
    with pytest.raises(ValueError):
        trace_discriminant(1, 1, 11)  # outside the window of N=1


def test_trace_discriminant_is_discriminant():
    for m in range(1, 5):
        for k in range(1, 30):
            n = m * m * k
            for p in curves.window_primes_in_class(n, m):
                d = trace_discriminant(m, k, p)
                assert d < 0 and d % 4 in (0, 1), (m, k, p, d)


def test_m_p_of_group_examples():
    assert m_p_of_group(1, 1, 2) == Fraction(1, 4)
    assert m_p_of_group(1, 1, 3) == Fraction(1, 6)
    assert m_p_of_group(2, 1, 3) == Fraction(1, 6)
    assert m_p_of_group(1, 1, 11) == 0  # outside window
    assert m_p_of_group(3, 1, 7) == Fraction(1, 6)  # full 3-torsion over F_7
    assert m_p_of_group(3, 1, 19) == 0  # 19 = 1 mod 3 but outside window of 9
    assert m_p_of_group(2, 1, 2) == 0  # 2 != 1 mod 2


def test_m_of_group_examples():
    assert m_of_group(1, 1) == Fraction(5, 12)
    assert m_of_group(2, 1) == Fraction(7, 12)
    assert m_of_group(11, 1) == 0


def test_m_of_group_bound_guard():
    with pytest.raises(OverflowError):
        m_of_group(1, 2**41)


def test_m_p_of_order_examples():
    assert m_p_of_order(4, 1, 3) == Fraction(2, 3)
    assert m_p_of_order(4, 2, 3) == Fraction(1, 6)
    assert m_p_of_order(4, 1, 11) == 0
    with pytest.raises(ValueError):
        m_p_of_order(4, 3, 5)  # 9 does not divide 4


def test_m_of_order_examples():
    assert m_of_order(4) == Fraction(31, 12)
    assert m_of_order(1) == Fraction(5, 12)
    assert m_of_order(2) == Fraction(5, 4)


def test_m_of_order_routes_agree_small():
    for n in range(1, 301):
        a, b = m_of_order_routes(n)
        assert a == b, n


def test_inclusion_exclusion_examples():
    assert inclusion_exclusion_check(1, 4, 3) == Fraction(1, 2)
    assert m_p_of_group(1, 4, 3) == Fraction(1, 2)
    assert inclusion_exclusion_check(2, 1, 5) == Fraction(1, 4)
    assert inclusion_exclusion_check(1, 1, 2) == Fraction(1, 4)


def test_inclusion_exclusion_matches_group_count():
    quadforms.precompute_class_numbers(4 * 2000 + 16)
    for n in range(1, 2001):
        for m, k in curves.order_decomposition(n):
            for p in curves.window_primes_in_class(n, m):
                assert inclusion_exclusion_check(m, k, p) == m_p_of_group(m, k, p), (m, k, p)


def test_lower_bound_from_level_one():
    # the f=1 level alone already contributes h/w
    for m, k, p in [(1, 5, 5), (2, 3, 13), (1, 12, 11), (3, 2, 19)]:
        d = trace_discriminant(m, k, p)
        h, w = quadforms.class_data(d)
        assert m_p_of_group(m, k, p) >= Fraction(h, w)


def test_delta_examples():
    assert abs(delta_statistic(1, 1) - math.log(2) * (2 + math.sqrt(3))) < 1e-12
    assert delta_statistic(11, 1) == 0
    want = math.log(8) / 4 * (math.sqrt(12) + 4 + math.sqrt(12))
    assert abs(delta_statistic(2, 1) - want) < 1e-12


def test_eta_examples():
    assert abs(eta_statistic(1) - math.log(2) * (2 + math.sqrt(3))) < 1e-12
    want = math.log(8) / 4 * (math.sqrt(7) + math.sqrt(12) + 4 + math.sqrt(12))
    assert abs(eta_statistic(4) - want) < 1e-12


def test_eta_empty_window(monkeypatch):
    # no desk-scale order has a prime-free Hasse window; force one
    monkeypatch.setattr(curves, "hasse_window", lambda n: curves.HasseWindow(n, ()))
    assert eta_statistic(10) == 0.0


def test_oracle_spot_values():
    t2 = brute_force_tally(2)
    assert t2.entries[GroupShape(1, 1)] == Fraction(1, 4)
    t5 = brute_force_tally(5)
    assert t5.entries[GroupShape(1, 6)] == 1
    t7 = brute_force_tally(7)
    assert t7.entries[GroupShape(2, 1)] == Fraction(1, 6)


def test_oracle_rejects_large_prime_and_composite():
    with pytest.raises(ValueError):
        brute_force_tally(67)
    with pytest.raises(ValueError):
        brute_force_tally(15)


def test_oracle_tally_invariants():
    for p in (2, 3, 5, 7, 11, 13):
        tally = brute_force_tally(p)
        assert tally.total == sum(tally.entries.values(), Fraction(0))
        # every curve over F_p has mass contribution; total equals the
        # direct equation count divided by the transformation-group order
        assert tally.total == p
        for (m, k), v in tally.entries.items():
            assert v > 0
            assert (p - 1) % m == 0
            assert (p - 1 - m * m * k) ** 2 < 4 * m * m * k


def test_oracle_matches_formula_small_primes():
    for p in (2, 3, 5, 7, 11, 13):
        tally = brute_force_tally(p)
        shapes = set(tally.entries) | set(admissible_shapes(p))
        for s in sorted(shapes):
            assert tally.entries.get(s, Fraction(0)) == m_p_of_group(s.m, s.k, p), (p, s)
