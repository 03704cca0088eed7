import json
import random
from fractions import Fraction

import mpmath
import pytest

from oracles import pascal_qbinom
from szlab import certify as c
from szlab.certify import Pow2


def test_qbinom_examples():
    assert c.qbinom(2, 1, 2) == 3
    assert c.qbinom(4, 2, 2) == 35
    assert all(c.qbinom(m, 0, q) == 1 for m in range(6) for q in (2, 3, 8))
    with pytest.raises(ValueError):
        c.qbinom(3, 4, 2)


def test_qbinom_both_pascal_recurrences():
    for q in (2, 4, 8):
        for m in range(1, 21):
            for k in range(1, m):
                left = c.qbinom(m - 1, k - 1, q) + q**k * c.qbinom(m - 1, k, q)
                right = q ** (m - k) * c.qbinom(m - 1, k - 1, q) + c.qbinom(m - 1, k, q)
                assert c.qbinom(m, k, q) == left == right
                assert c.qbinom(m, k, q) == pascal_qbinom(m, k, q)


def test_dbound_example():
    cert = c.dbound_certificate(4, 2, 2)
    assert cert.holds
    assert c.dbound_certificate(5, 0, 8).holds


def test_dbound_random():
    rng = random.Random(7)
    for _ in range(200):
        m = rng.randrange(0, 65)
        assert c.dbound_certificate(m, rng.randrange(0, m + 1), rng.choice((2, 4, 8))).holds


def test_divisor_functions():
    assert c.divisor_count(7) == 2
    assert c.omega(12) == 2
    assert c.divisor_count(8 - 1) == 2
    assert c.divisors(511) == [1, 7, 73, 511]
    assert c.divisor_count(511) == 4


def test_divisor_table_matches_direct():
    table = c.divisor_count_table(500)
    assert all(table[n] == c.divisor_count(n) for n in range(1, 501))


def test_dsqrt_sweep():
    assert c.dsqrt_certificate(12).holds
    assert c.dsqrt_sweep_certificate(10**6).holds


def test_multiplicative_order():
    assert c.multiplicative_order_of_two(1) == 1
    assert c.multiplicative_order_of_two(7) == 3
    assert c.multiplicative_order_of_two(73) == 9
    assert c.multiplicative_order_of_two(31) == 5


def test_f_value():
    for m in (3, 9, 21):
        assert c.f_value(0, 0, 3, m) == m
    assert c.f_value(1, 0, 3, 9) == 15
    for i in range(4):
        for j in range(4):
            diff = c.f_value(i, j, 3, 9) - c.f_value(j, i, 3, 9)
            assert diff == 3 * (j - i)


def test_f_max_m9():
    cert = c.f_max_certificate(9)
    assert cert.holds
    best, _ = c.f_lattice_max(9)
    assert Fraction(best) <= Fraction(81, 6) + 18 + Fraction(3, 8)


def test_f_max_closed_forms():
    for m in range(9, 100, 2):
        assert c.f_bar(Fraction(0), Fraction(m + 3, 6), m) == Fraction(m * m, 12) + Fraction(3 * m, 2) + Fraction(3, 4)
        assert c.f_bar(Fraction(m, 6), Fraction(0), m) == Fraction(m * m, 12) + m
        assert Fraction(m, 6) + Fraction(m, 6) + Fraction(1, 2) > m // 3
        assert c.f_max_certificate(m).holds


def test_f_max_small_m_reports_lattice_only():
    cert = c.f_max_certificate(5)
    assert cert.holds
    assert any("outside" in str(n) or "m < 9" in str(n) for n in cert.notes)


def test_ip_bound_m9_and_range():
    assert c.ip_bound_certificate(9).holds
    assert all(c.ip_bound_certificate(m).holds for m in range(3, 60, 2))
    for m in range(2, 200):
        assert Fraction(m + 3, 3) ** 2 <= m * m


def test_sp_bounds():
    cert = c.sp_bounds_certificate(3, brute_force_sp=101)
    assert cert.holds
    assert c.qbinom(3, 1, 2) == 7
    assert not c.sp_bounds_certificate(3, brute_force_sp=300).holds
    for m in range(5, 12, 2):
        assert c.sp_bounds_certificate(m).holds


def test_induction():
    cert = c.induction_certificate(199, survey_total=17295)
    assert cert.holds
    assert 17295**5 < 2**99
    assert c.induction_constant_holds(5)
    assert not c.induction_constant_holds(4)


def test_comeback_bound():
    assert c.comeback_bound(10, 10, 65) == Fraction(1, 65)
    assert c.comeback_bound(0, 10, 65) >= 1
    b = c.comeback_bound(6500, 17295, 65)
    assert 0 < b <= 1
    with pytest.raises(ValueError):
        c.comeback_bound(11, 10, 3)


def test_maximal_family_bounds():
    for m in range(3, 40, 2):
        assert c.maximal_family_bounds_certificate(m).holds
    names = [n["name"] for n in c.maximal_family_bounds_certificate(9).notes]
    assert "family.plus.below_q2" in names


def _float_log2(x):
    return mpmath.log(mpmath.mpf(x.coeff.numerator) / x.coeff.denominator, 2) + mpmath.mpf(
        x.exponent.numerator) / x.exponent.denominator


def test_pow2_compare_agrees_with_high_precision():
    rng = random.Random(2024)
    mpmath.mp.dps = 80
    checked = 0
    for _ in range(1000):
        x = Pow2(Fraction(rng.randrange(1, 10**6), rng.randrange(1, 10**6)),
                 Fraction(rng.randrange(-400, 400), rng.randrange(1, 12)))
        y = Pow2(Fraction(rng.randrange(1, 10**6), rng.randrange(1, 10**6)),
                 Fraction(rng.randrange(-400, 400), rng.randrange(1, 12)))
        diff = _float_log2(x) - _float_log2(y)
        if abs(diff) < mpmath.mpf(10) ** -40:
            continue
        assert c.compare(x, y) == (1 if diff > 0 else -1)
        checked += 1
    assert checked > 990


def test_pow2_exact_equalities():
    assert c.compare(Pow2(1, Fraction(1, 2)) * Pow2(1, Fraction(1, 2)), 2) == 0
    assert c.compare(Pow2(3, -1), Fraction(3, 2)) == 0
    assert c.compare(Pow2(1, Fraction(99, 5)), 17295) > 0
    with pytest.raises(ValueError):
        Pow2(0, 1)


def test_certificates_serialize():
    certs = c.certify_all(15)
    assert all(x.holds for x in certs)
    text = json.dumps([x.to_json() for x in certs])
    assert json.loads(text)
    big = c.check("big", {}, 3**60, Pow2(1, 100), "<")
    assert isinstance(big.to_json()["lhs"], str)
