from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, strategies as st

from feynkit.feynman import Action, tree_level
from feynkit.series import Series, double_factorial
from feynkit.trees import (TreeError, cayley, colored_tree_enumerate, colored_tree_generating,
                           colored_tree_polynomial, count_by_valency, enumerate_labeled_trees, exp_h,
                           kirchhoff_polynomial, kirchhoff_value, labeled_trees, oriented_tree_count,
                           oriented_tree_count_fixed, oriented_tree_enumerate, spanning_tree_count,
                           spanning_tree_count_dc, spanning_tree_count_eigen, trivalent_count_formula,
                           trivalent_h, tree_sum_closed_form)


def complete(m):
    return [[int(i != j) for j in range(m)] for i in range(m)]


def test_cayley():
    for n in range(1, 9):
        assert enumerate_labeled_trees(n) == cayley(n) == (n ** (n - 2) if n > 1 else 1)


def test_every_pruefer_tree_is_a_tree():
    for edges in labeled_trees(5):
        assert len(edges) == 4 and len({v for e in edges for v in e}) == 5


def test_trivalent_counts():
    assert count_by_valency(4, {1, 3}) == 4 == trivalent_count_formula(2)
    assert count_by_valency(6, {1, 3}) == 90 == trivalent_count_formula(3)
    assert count_by_valency(8, {1, 3}) == trivalent_count_formula(4)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(1, 6) for q in range(1, 8 - p)])
def test_oriented_trees(p, q):
    assert oriented_tree_enumerate(p, q) == oriented_tree_count(p, q)
    assert oriented_tree_enumerate(p, q, fixed=True) == oriented_tree_count_fixed(p, q)
    assert oriented_tree_count(p, q) == comb(p + q, p) * oriented_tree_count_fixed(p, q)


def test_matrix_tree_on_complete_graphs():
    assert spanning_tree_count(complete(4)) == 16
    for m in range(1, 8):
        assert spanning_tree_count(complete(m)) == cayley(m)


def test_kirchhoff_polynomial_independent_of_deleted_row():
    for m in (3, 4):
        K = kirchhoff_polynomial(m)
        assert all(kirchhoff_polynomial(m, j) == K for j in range(m))
    # every monomial of K_m is a spanning tree with coefficient 1, and there are m^{m-2} of them
    K4 = kirchhoff_polynomial(4)
    assert len(K4.terms) == 16 and set(K4.terms.values()) == {1}
    assert kirchhoff_value(lambda i, k: 1, 5) == 125


def random_graph(rnd_bits, m):
    adj = [[0] * m for _ in range(m)]
    it = iter(rnd_bits)
    for i in range(m):
        for j in range(i + 1, m):
            adj[i][j] = adj[j][i] = next(it)
    return adj


@given(st.integers(2, 7).flatmap(lambda m: st.tuples(st.just(m), st.lists(st.integers(0, 2), min_size=m * (m - 1) // 2,
                                                                           max_size=m * (m - 1) // 2))))
def test_deletion_contraction_and_eigenvalues(case):
    m, bits = case
    adj = random_graph(bits, m)
    n = spanning_tree_count(adj)
    assert n == spanning_tree_count_dc(adj)
    assert spanning_tree_count_eigen(adj) == pytest.approx(n, abs=1e-6)


@pytest.mark.parametrize("p", [[3], [2, 1], [1, 1, 1], [2, 2], [3, 2, 1], [2, 2, 2], [4, 2], [1, 1, 1, 1, 1, 1]])
def test_colored_trees(p):
    e, c = colored_tree_polynomial(p)
    assert e == c


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=6, max_size=6))
def test_colored_trees_numeric(vals):
    p = [2, 1, 2]
    z = [[None] * 3 for _ in range(3)]
    it = iter(vals)
    for i in range(3):
        for j in range(i, 3):
            z[i][j] = z[j][i] = next(it)
    assert colored_tree_enumerate(p, z) == colored_tree_generating(p, z)


def test_colored_trees_reject_empty_colour():
    with pytest.raises(TreeError):
        colored_tree_generating([1, 0], [[1, 1], [1, 1]])


def test_tree_sum_worked_potentials():
    F = tree_sum_closed_form(exp_h(10), 8)
    assert [F[n] for n in range(1, 9)] == [Fraction(n ** (n - 2) if n > 1 else 1, factorial(n)) for n in range(1, 9)]
    F = tree_sum_closed_form(trivalent_h(14), 12)
    for k in range(1, 7):
        assert F[2 * k] == Fraction(double_factorial(2 * k - 3), factorial(k + 1))
        assert F[2 * k - 1] == 0


@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4), st.integers(1, 3))
def test_tree_sum_equals_tree_level(hs, h1):
    """For S = x^2/2 - g h(x) the closed form agrees with the tree diagrams."""
    coeffs = [0, h1] + hs
    D = 5
    h = Series([Fraction(c, factorial(i)) for i, c in enumerate(coeffs)], D + 2)
    F = tree_sum_closed_form(h, D)
    T = tree_level(Action.one_dim([("g", i, c) for i, c in enumerate(coeffs) if c]), D)
    for n in range(1, D + 1):
        assert F[n] == T.terms.get(((("g", n),), Fraction(0)), Fraction(0))
