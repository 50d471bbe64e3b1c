from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from feynkit.matrixmodels import (MatrixModelError, all_crossing_count, all_crossing_formula, bipz,
                                  census_polynomial, connected_gluing_census, epsilon_from_mu, format_poly,
                                  genus_expansion, gue_moment, harer_zagier_coefficients, harer_zagier_poly,
                                  hermite, hermite_identities, hermite_three_term, lambda_from_mu,
                                  matrix_wick_oracle, moduli_euler_char, mu_from_epsilon, mu_from_lambda,
                                  planar_quartic_census, polygon_gluing_census, twisted_gluing_sum,
                                  wigner_moment, wigner_moment_numeric)
from feynkit.series import bernoulli_number, catalan, double_factorial


@pytest.mark.parametrize("m", range(1, 7))
def test_census_matches_harer_zagier(m):
    census = polygon_gluing_census(m)
    assert census[0] == catalan(m)
    assert sum(census.values()) == double_factorial(2 * m - 1)
    assert census == harer_zagier_coefficients(m)
    assert census_polynomial(m) == harer_zagier_poly(m)


def test_compiled_and_python_census_agree():
    for m in (4, 5, 6):
        for cond in ("none", "A", "AB"):
            assert (polygon_gluing_census(m, conditions=cond, engine="python")
                    == polygon_gluing_census(m, conditions=cond, engine="compiled"))


def test_polynomial_text():
    assert format_poly(harer_zagier_poly(1)) == "x^2"
    assert format_poly(harer_zagier_poly(2)) == "2x^3+x"
    assert format_poly(harer_zagier_poly(3)) == "5x^4+10x^2"


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_wick_oracles(N, m):
    assert matrix_wick_oracle(N, m, "hermitian") == harer_zagier_poly(m).evaluate({"x": N})
    assert matrix_wick_oracle(N, m, "real_symmetric") == twisted_gluing_sum(m, N)


def test_twisted_census_totals():
    for m in (1, 2, 3):
        census = polygon_gluing_census(m, mode="twisted")
        assert sum(census.values()) == double_factorial(2 * m - 1) * 2 ** m
        # orientable gluings appear once per twist pattern that keeps the surface orientable
        assert census[0] == catalan(m)


def test_maximal_genus():
    for g in (1, 2):
        assert all_crossing_count(g) == all_crossing_formula(g)
    assert all_crossing_formula(1) == 1 and all_crossing_formula(2) == 21


def test_euler_characteristic_genus_one():
    ec = moduli_euler_char(1)
    assert ec.value == Fraction(-1, 12) == ec.expected()


def test_euler_characteristic_genus_two():
    ec = moduli_euler_char(2)
    assert ec.value == Fraction(1, 120) == -bernoulli_number(4) / 4


@given(st.dictionaries(st.integers(1, 6), st.integers(-50, 50), min_size=1))
def test_binomial_recursions_invert(values):
    eps = {n: values.get(n, 0) for n in range(1, 7)}
    mu = mu_from_epsilon(eps, 6)
    assert all(epsilon_from_mu(mu, n) == eps[n] for n in range(1, 7))
    lam = lambda_from_mu(mu, 6)
    assert all(mu_from_lambda(lam, n) == mu[n] for n in range(1, 7))


def test_planar_quartic_counts():
    assert planar_quartic_census(1) == 2
    assert planar_quartic_census(2) == 36
    for n in (1, 2, 3):
        assert bipz(n) == planar_quartic_census(n)
    with pytest.raises(MatrixModelError):
        planar_quartic_census(4)


def test_genus_expansion_two_routes():
    census = genus_expansion({"g": 4}, 2)
    classes = genus_expansion({"g": 4}, 2, "classes")
    assert census == classes
    assert connected_gluing_census([4]) == {0: 2, 1: 1}
    # planar part: bipz(n) / (4^n n!)
    for n in (1, 2):
        assert census[0].terms[((("g", n),), Fraction(n))] == bipz(n) / (4 ** n * factorial(n))


def test_cubic_genus_expansion_two_routes():
    assert genus_expansion({"a": 3}, 4) == genus_expansion({"a": 3}, 4, "classes")


def test_wigner_moments():
    for m in range(7):
        assert wigner_moment(m) == catalan(m)
        assert wigner_moment_numeric(m) == pytest.approx(catalan(m), rel=1e-11)


def test_gue_sample_is_seeded():
    a = gue_moment(1, 40, 3, seed=5)
    assert a == gue_moment(1, 40, 3, seed=5)
    assert gue_moment(1, 200, 10, seed=0) == pytest.approx(1, rel=0.05)
    assert gue_moment(2, 200, 10, seed=0) == pytest.approx(2, rel=0.05)


@pytest.mark.parametrize("n", range(9))
def test_hermite_two_recurrences(n):
    h = hermite(n).coeffs
    assert list(h) == list(hermite_three_term(n))


@given(st.integers(0, 6), st.integers(0, 4), st.integers(0, 5))
def test_hermite_identities(r, k, m):
    res = hermite_identities(r, k, m)
    assert all(v == 0 for v in res.values())
