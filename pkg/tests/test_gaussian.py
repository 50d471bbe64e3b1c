import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from feynkit.gaussian import (GaussianError, berezinian, fermionic_wick, fermionic_wick_oracle, matching_sum,
                              moment_1d, operator_integral, operator_integral_formula, pfaffian,
                              random_supermatrix, super_exp, supertrace, wick_moment)
from feynkit.series import double_factorial

small = st.integers(-3, 3)


def test_moments_are_double_factorials():
    assert [moment_1d(2 * k) for k in range(7)] == [double_factorial(2 * k - 1) for k in range(7)]
    assert all(moment_1d(2 * k + 1) == 0 for k in range(7))
    assert moment_1d(4, Fraction(1, 2)) == 12


@pytest.mark.parametrize("k", [0, 2, 4, 6])
def test_moment_against_quadrature(k):
    num = integrate.quad(lambda x: x ** k * math.exp(-x * x / 2), -math.inf, math.inf)[0]
    assert num / math.sqrt(2 * math.pi) == pytest.approx(float(moment_1d(k)), rel=1e-12)


def test_matching_count():
    for k in range(1, 8):
        assert matching_sum(2 * k, lambda i, j: 1) == double_factorial(2 * k - 1)


def test_two_dim_wick_against_quadrature():
    B = [[2, 1], [1, 3]]
    Bf = np.array(B, dtype=float)
    covs = [[1, 0], [1, 1], [0, 1], [2, -1]]
    exact = wick_moment(B, covs)

    def f(y, x):
        v = np.array([x, y])
        prod = 1.0
        for c in covs:
            prod *= c[0] * x + c[1] * y
        return prod * math.exp(-v @ Bf @ v / 2)

    num = integrate.dblquad(f, -12, 12, -12, 12, epsabs=1e-12)[0]
    norm = 2 * math.pi / math.sqrt(np.linalg.det(Bf))
    assert num / norm == pytest.approx(float(exact), rel=1e-9)


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5))
def test_odd_products_vanish(covs):
    B = [[3, 1, 0], [1, 2, 0], [0, 0, 1]]
    if len(covs) % 2:
        assert wick_moment(B, covs) == 0


@given(st.lists(small, min_size=15, max_size=15))
def test_pfaffian_squares_to_determinant(entries):
    n = 6
    A = [[Fraction(0)] * n for _ in range(n)]
    it = iter(entries)
    for i in range(n):
        for j in range(i + 1, n):
            A[i][j] = Fraction(next(it))
            A[j][i] = -A[i][j]
    pf = pfaffian(A)
    assert pf == pfaffian(A, "elimination")
    from feynkit import linalg
    assert pf * pf == linalg.det(A)


def test_pfaffian_odd_dimension():
    with pytest.raises(GaussianError):
        pfaffian([[0]])


def test_fermionic_wick_against_exterior_algebra():
    B = [[0, 2, 1, 0], [-2, 0, 1, 3], [-1, -1, 0, 1], [0, -3, -1, 0]]
    for covs in ([[1, 0, 0, 0], [0, 1, 1, 0]], [[1, 1, 0, 0], [0, 0, 1, 2], [1, 0, 1, 0], [0, 1, 0, 1]]):
        assert fermionic_wick(B, covs) == fermionic_wick_oracle(B, covs)
    assert fermionic_wick(B, [[1, 0, 0, 0]]) == 0


@given(st.lists(small, min_size=4, max_size=4))
def test_operator_integral_is_determinant(a):
    A = [a[:2], a[2:]]
    assert operator_integral(A) == operator_integral_formula(A)


@pytest.mark.parametrize("seed", range(4))
def test_berezinian_of_exponential(seed):
    rng = np.random.default_rng(seed)
    C = random_supermatrix(rng, 2, 2, 4, exact=False, scale=0.3)
    diff = berezinian(super_exp(C)) - supertrace(C).exp()
    assert all(abs(v) < 1e-10 for v in diff.c.values())
