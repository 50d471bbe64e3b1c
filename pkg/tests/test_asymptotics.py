import math
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import assume, given, strategies as st

from feynkit.asymptotics import (AsymptoticsError, borel_sum, borel_transform, error_order_slope,
                                 euler_borel_transform, euler_series_closed_form, laplace_integral, pade,
                                 quadrature, quartic_borel_transform, quartic_borel_transform_coeff,
                                 quartic_coefficient, quartic_integral, sin_power_integral,
                                 stationary_phase_coeffs, steepest_descent_coeffs, stirling_from_bernoulli,
                                 stirling_from_laplace)
from feynkit.series import Series, double_factorial


def test_stirling_two_routes():
    lap = stirling_from_laplace(6)
    assert lap[:3] == [1, Fraction(1, 12), Fraction(1, 288)]
    assert lap == stirling_from_bernoulli(6)


def test_stirling_against_gamma():
    a = stirling_from_laplace(4)
    for s in (10.0, 25.0):
        lead = s ** (s + 1) * math.exp(-s) * math.sqrt(2 * math.pi / s)
        approx = lead * sum(float(c) / s ** n for n, c in enumerate(a))
        assert approx == pytest.approx(math.gamma(s + 1), rel=1e-7)


def test_gaussian_monomials():
    # int x^{2k} exp(-x^2/2 hbar) = sqrt(2 pi) (2k-1)!! hbar^{k+1/2}
    o = 14
    t = Series.monomial(1, o)
    for k in range(4):
        c = steepest_descent_coeffs(t * t * Fraction(1, 2), t ** (2 * k), 5).coeffs
        assert c == [double_factorial(2 * k - 1) if n == k else 0 for n in range(6)]


def test_quartic_coefficients():
    o = 24
    t = Series.monomial(1, o)
    c = steepest_descent_coeffs((t * t + t ** 4) * Fraction(1, 2), Series.one(o), 5).coeffs
    for n in range(6):
        assert c[n] == Fraction((-1) ** n * double_factorial(4 * n - 1), 2 ** n * factorial(n)) == quartic_coefficient(n)


def test_requires_critical_point():
    t = Series.monomial(1, 10)
    with pytest.raises(AsymptoticsError):
        steepest_descent_coeffs(t + t * t, Series.one(10), 2)
    with pytest.raises(AsymptoticsError):
        steepest_descent_coeffs(-t * t, Series.one(10), 2)


@given(st.fractions(min_value=Fraction(1, 2), max_value=3, max_denominator=4),
       st.fractions(min_value=-1, max_value=1, max_denominator=4),
       st.fractions(min_value=Fraction(1, 4), max_value=1, max_denominator=4))
def test_expansion_against_quadrature(a, b, c):
    """f = a t^2/2 + b t^3/6 + c t^4/24: the truncation error is about the first omitted term."""
    o = 12
    t = Series.monomial(1, o)
    f = t * t * (a / 2) + t ** 3 * (b / 6) + t ** 4 * (c / 24)
    assume(b * b < 3 * a * c)        # t = 0 is the global minimum
    le = steepest_descent_coeffs(f, Series.one(o), 3)
    ff = lambda x: float(a) * x * x / 2 + float(b) * x ** 3 / 6 + float(c) * x ** 4 / 24
    h = 0.01
    exact = laplace_integral(ff, lambda x: 1.0, h, 0.0)
    approx = le.evaluate(h, 3)
    assert abs(exact - approx) < 2 * abs(float(le.coeffs[3])) * h ** 3 * le.prefactor() + 1e-12


def test_stationary_phase_fresnel():
    # int exp(i x^2 / 2 hbar) (1 + x^2) dx = sqrt(2 pi hbar) e^{i pi/4} (1 + i hbar)
    o = 10
    t = Series.monomial(1, o)
    le = stationary_phase_coeffs(t * t * Fraction(1, 2), Series.one(o) + t * t, 3)
    assert le.coeffs[0] == (1, 0)
    assert le.coeffs[1] == (0, 1)
    assert le.phase_eighths == 1


@pytest.mark.parametrize("n", range(7))
def test_sin_powers(n):
    r, has_pi = sin_power_integral(n)
    num = quadrature(lambda x: math.sin(x) ** n, (0, math.pi))
    assert float(r) * (math.pi if has_pi else 1) == pytest.approx(num, rel=1e-13)


def test_euler_series_borel_sum():
    coeffs = [(-1) ** n * factorial(n) for n in range(20)]
    for h in (0.1, 0.25, 0.5, 1.0):
        ref = euler_series_closed_form(h)
        assert borel_sum(None, h, transform=euler_borel_transform) == pytest.approx(ref, abs=1e-12)
        assert borel_sum(coeffs, h) == pytest.approx(ref, abs=1e-12)


def test_quartic_borel_sum():
    assert all(quartic_borel_transform_coeff(n) == quartic_coefficient(n) / factorial(n) for n in range(15))
    for h in (0.05, 0.3, 1.0):
        val = math.sqrt(2 * math.pi) * borel_sum(None, h, transform=quartic_borel_transform)
        assert val == pytest.approx(quartic_integral(h), abs=1e-10)


@given(st.fractions(min_value=-2, max_value=2, max_denominator=4),
       st.floats(min_value=0.05, max_value=1.0),
       st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_borel_sum_of_convergent_series(r, h, poly):
    """Polynomial-times-geometric coefficients: the Borel sum is the ordinary sum."""
    x = float(r) * h
    assume(abs(x) <= 0.25)
    P = lambda n: sum(c * n ** k for k, c in enumerate(poly))
    assume(any(P(n) for n in range(4)))
    coeffs = [P(n) * r ** n for n in range(24)]
    exact = sum(P(n) * x ** n for n in range(400))
    assert borel_sum(coeffs, h) == pytest.approx(exact, abs=1e-10)


def test_pade_reproduces_rational():
    # 1/(1 - u - u^2): Fibonacci numbers
    fib = [1, 1]
    while len(fib) < 8:
        fib.append(fib[-1] + fib[-2])
    p, q = pade(fib, 2, 2)
    assert q == [1, -1, -1] and p == [1, 0, 0]


def test_error_slope_tracks_truncation_order():
    def ratio(h):
        z = 1 / h
        lead = (z + 1) * math.log(z) - z + 0.5 * math.log(2 * math.pi / z)
        return math.exp(math.lgamma(z + 1) - lead) * math.sqrt(2 * math.pi)

    a = stirling_from_laplace(4)
    for N in (1, 2, 3):
        slope = error_order_slope(ratio, a, math.sqrt(2 * math.pi), [0.2, 0.1, 0.05], N)
        assert abs(slope - N) < 0.2 * N
