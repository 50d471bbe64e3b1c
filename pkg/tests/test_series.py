from fractions import Fraction
from math import factorial

from hypothesis import given, strategies as st

from feynkit.series import (Series, bernoulli, bernoulli_number, catalan, double_factorial, exp_series,
                            log1p_series, partitions)

ORDER = 8
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)
series = st.lists(rationals, min_size=ORDER, max_size=ORDER).map(lambda cs: Series(cs, ORDER))
unit_series = series.filter(lambda s: s[0] != 0)
nil_series = series.map(lambda s: s - Series([s[0]], ORDER))


def test_classical_sequences():
    assert [double_factorial(n) for n in (-1, 0, 1, 5, 7)] == [1, 1, 1, 15, 105]
    assert [catalan(n) for n in range(7)] == [1, 1, 2, 5, 14, 42, 132]
    assert bernoulli(4) == [1, Fraction(1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]
    assert bernoulli_number(12) == Fraction(-691, 2730)
    assert partitions(10) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_exp_log_inverse_pair():
    x = Series.monomial(1, ORDER)
    assert x.exp() == exp_series(ORDER)
    assert (Series.one(ORDER) + x).log() == log1p_series(ORDER)


@given(series, series, series)
def test_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(unit_series)
def test_inverse(a):
    assert a * a.inverse() == Series.one(ORDER)


@given(nil_series)
def test_exp_log_roundtrip(a):
    assert a.exp().log() == a


@given(nil_series.filter(lambda s: s[1] != 0))
def test_reversion(a):
    r = a.reversion()
    assert a.compose(r).agrees(Series.monomial(1, ORDER))


@given(nil_series, st.integers(1, 4))
def test_power_matches_repeated_product(a, k):
    b = a + Series.one(ORDER)
    assert b.power(Fraction(k)) == b ** k


@given(series)
def test_derivative_of_integral(a):
    assert a.integral().deriv().agrees(a)


def test_json_roundtrip():
    s = Series([Fraction(1, 3), 0, -2], 5)
    assert Series.from_json(s.to_json()) == s


def test_bernoulli_from_exponential_sums():
    # sum_{k<n} k^p = (1/(p+1)) sum_j C(p+1, j) B_j^- n^{p+1-j}; check p = 3 with B_1 = +1/2 convention
    B = bernoulli(3)
    for n in range(1, 8):
        rhs = sum(Fraction(factorial(4), factorial(j) * factorial(4 - j)) * B[j] * n ** (4 - j) for j in range(4)) / 4
        assert rhs == sum(k ** 3 for k in range(1, n + 1))
