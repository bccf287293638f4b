"""Exact generating-function algebra and coefficient growth."""

from fractions import Fraction

import pytest

from spikelab.dyck import count_with_returns, narayana
from spikelab.genfun import (
    coeffs_a,
    corrected_tail,
    growth_rate,
    series_F,
    series_G,
    series_G_tilde,
    series_K,
)

from test_dyck import all_dyck_paths
from spikelab.dyck import path_stats


def assert_zero_series(series, order):
    for i in range(order + 1):
        assert series.coefficient(i) == 0


# ---------------------------------------------------------------------------
# functional equations
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("gamma", [1, 2, 4])
def test_functional_equation_residuals(gamma):
    order = 120
    g = series_G(gamma, order)
    gt = series_G_tilde(gamma, order)
    f = series_F(3, gamma, order)
    one = g.constant_like(1)

    assert_zero_series(gt - one - (g * gt).times_z(), order)
    assert_zero_series(
        g - one - (gt * g).times_z().scale(Fraction(1, gamma)), order
    )
    assert_zero_series(f - f.constant_like(3) - (g * f).times_z().scale(3), order)


@pytest.mark.parametrize("gamma", [1, 2, 4])
def test_u_algebraic_relation(gamma):
    # U = zG satisfies z(1 - cU) = U - U^2 with c = 1 - 1/gamma.
    order = 30
    u = series_G(gamma, order).times_z()
    one = u.constant_like(1)
    c = Fraction(1) - Fraction(1, gamma)
    residual = (one - u.scale(c)).times_z() - u + u * u
    assert_zero_series(residual, order)


def test_series_g_catalan_at_gamma_one():
    g = series_G(1, 8)
    assert [g.coefficient(i) for i in range(6)] == [1, 1, 2, 5, 14, 42]


def test_series_g_gamma_two_quadratic_coefficient():
    # UUDD contributes 1/gamma, UDUD contributes 1/gamma^2.
    assert series_G(2, 4).coefficient(2) == Fraction(3, 4)


def test_series_g_counts_odd_marked_instants():
    for gamma in (2, 3):
        g = series_G(gamma, 9)
        for n in range(10):
            total = sum(
                Fraction(1, gamma) ** path_stats(p).odd_marked
                for p in all_dyck_paths(n)
            )
            assert g.coefficient(n) == total


def test_series_f_constant_term():
    assert series_F(5, 2, 6).coefficient(0) == 5
    assert series_F(Fraction(3, 2), 1, 6).coefficient(0) == Fraction(3, 2)


def test_series_k_is_z_derivative_of_z_g():
    for gamma in (1, 2):
        g = series_G(gamma, 10)
        expected = g.times_z().differentiate().times_z()
        k = series_K(gamma, 10)
        # differentiation of the truncation loses the top coefficient
        for i in range(10):
            assert k.coefficient(i) == expected.coefficient(i)


def test_series_arithmetic_round_trip():
    g = series_G(2, 12)
    one = g.constant_like(1)
    # divide_by_unit inverts multiplication by a unit-constant series
    assert_zero_series((g * g.constant_like(1)).divide_by_unit(g) - one, 12)


# ---------------------------------------------------------------------------
# weighted coefficients a_n
# ---------------------------------------------------------------------------


def direct_weighted_sum(n, pi1, gamma):
    """Quadruple sum over first-return time and marked counts."""
    pi1 = Fraction(pi1)
    gamma = Fraction(gamma)
    total = Fraction(0)
    for s1 in range(1, n + 1):
        j = n - s1
        for k1 in range(1, max(s1, 2)):
            head = s1 if s1 == 1 else s1 * narayana(s1 - 1, s1 - k1)
            if j == 0:
                total += head * pi1 * gamma ** (k1 - n)
                continue
            for s in range(2, j + 2):
                for o in range(1, j + 1):
                    count = count_with_returns(j, o, s - 1)
                    if count:
                        total += head * count * pi1**s * gamma ** (k1 + o - n)
    return total


@pytest.mark.parametrize("pi1,gamma", [(2, 1), (3, 2), (Fraction(3, 2), 4)])
def test_coeffs_a_match_direct_sum(pi1, gamma):
    coeffs = coeffs_a(pi1, gamma, 1.0, 6)
    for n in range(7):
        assert coeffs.a[n] == direct_weighted_sum(n, pi1, gamma)


def test_coeffs_a_white_specialization():
    coeffs = coeffs_a(1, 2, 1.0, 6)
    for n in range(7):
        assert coeffs.a[n] == direct_weighted_sum(n, 1, 2)


def test_coeffs_a_positive():
    coeffs = coeffs_a(3, 1, 1.0, 40)
    assert coeffs.a[0] == 0
    assert all(a > 0 for a in coeffs.a[1:])


def test_a_prime_scales_with_sigma():
    plain = coeffs_a(3, 1, 1.0, 10)
    scaled = coeffs_a(3, 1, 0.5, 10)
    for n in range(11):
        assert scaled.a[n] == plain.a[n]
        assert scaled.a_prime[n] == pytest.approx(
            0.25**n * plain.a_prime[n], rel=1e-12
        )


def test_growth_rate_supercritical():
    coeffs = coeffs_a(3, 1, 1.0, 150)
    assert growth_rate(coeffs, 1) == pytest.approx(4.5, rel=1e-4)


def test_growth_rate_critical():
    coeffs = coeffs_a(2, 1, 1.0, 150)
    assert growth_rate(coeffs, 1) == pytest.approx(4.0, rel=0.05)


def test_corrected_tail_is_positive_and_stable():
    coeffs = coeffs_a(Fraction(3, 2), 1, 1.0, 150)
    tail = corrected_tail(coeffs, 4.0, 41)
    assert all(t > 0 for t in tail)
    spread = (max(tail) - min(tail)) / tail[-1]
    assert spread < 0.15
