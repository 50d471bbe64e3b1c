import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from feynkit import linalg
from feynkit.expsum import ExpSum, ExpSumError
from feynkit.poly import Poly, det_expand

small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
rates = st.fractions(min_value=-2, max_value=2, max_denominator=3)


@given(st.integers(0, 4), rates, st.floats(0.1, 2.0))
def test_expsum_definite_integral(r, a, x):
    f = ExpSum.term(1, {"t": r}, {"t": a})
    F = f.integrate("t", 0, "x")
    exact = quad(lambda t: t ** r * math.exp(float(a) * t), 0, x, epsabs=1e-13)[0]
    assert F.evaluate({"x": x}) == pytest.approx(exact, rel=1e-9, abs=1e-12)


@given(st.integers(0, 4), st.fractions(min_value=Fraction(1, 3), max_value=3, max_denominator=3))
def test_expsum_half_line(r, a):
    F = ExpSum.term(1, {"t": r}, {"t": -a}).integrate("t", 0, math.inf)
    assert F == ExpSum.const(Fraction(math.factorial(r)) / a ** (r + 1))


def test_expsum_divergent_bound():
    with pytest.raises(ExpSumError):
        ExpSum.term(1, {}, {"t": 1}).integrate("t", 0, math.inf)


@given(small, small, st.floats(-1, 1), st.floats(-1, 1))
def test_expsum_substitution(a, b, x, y):
    f = ExpSum.term(2, {"t": 2}, {"t": a}) + ExpSum.term(1, {"t": 1, "u": 1}, {"u": b})
    g = f.substitute("t", {"x": 1, "y": -2})
    t = x - 2 * y
    assert g.evaluate({"x": x, "y": y, "u": 0.5}) == pytest.approx(f.evaluate({"t": t, "u": 0.5}), rel=1e-12, abs=1e-12)
    assert f.substitute("t", 0).evaluate({"u": 0.5}) == pytest.approx(f.evaluate({"t": 0, "u": 0.5}))


def test_expsum_ordered_cell():
    # int_0^L dt2 int_0^t2 dt1 e^{-(t2 - t1)} = L - 1 + e^{-L}
    f = ExpSum.term(1, {}, {"t2": -1, "t1": 1})
    F = f.integrate("t1", 0, "t2").integrate("t2", 0, "L")
    for L in (0.3, 1.0, 4.0):
        assert F.evaluate({"L": L}) == pytest.approx(L - 1 + math.exp(-L), rel=1e-12)


def test_expsum_formal_symbol():
    f = ExpSum.term(3, dpow=2)
    assert f.evaluate({}, D=0.5) == 0.75
    with pytest.raises(ExpSumError):
        f.evaluate({})


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4), small)
def test_poly_ring(p, q, x):
    X = Poly.var("x")
    P = sum((X ** k * c for k, c in enumerate(p)), Poly())
    Q = sum((X ** k * c for k, c in enumerate(q)), Poly())
    v = {"x": x}
    assert (P * Q).evaluate(v) == P.evaluate(v) * Q.evaluate(v)
    assert (P - Q).evaluate(v) == P.evaluate(v) - Q.evaluate(v)
    assert P * Q == Q * P


def test_poly_determinant():
    a, b, c, d = (Poly.var(s) for s in "abcd")
    assert det_expand([[a, b], [c, d]]) == a * d - b * c
    m = [[Fraction(i * j + 1 + (i == j)) for j in range(4)] for i in range(4)]
    assert det_expand(m) == linalg.det(m)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_exact_det_and_inverse(rows):
    d = linalg.det(rows)
    assert float(d) == pytest.approx(np.linalg.det(np.array(rows, dtype=float)), abs=1e-9)
    if d != 0:
        inv = linalg.inverse(rows)
        assert linalg.matmul(rows, inv) == linalg.identity(4)


def test_float_det_with_pivoting():
    a = [[1e-14, 1.0], [1.0, 1.0]]
    assert linalg.det(a, tol=1e-300) == pytest.approx(-1.0)
