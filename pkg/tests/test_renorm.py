from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from feynkit import renorm
from feynkit.renorm import CRITICAL, NON, SUPER, Monomial


def test_parse_terms():
    assert renorm.parse_term("phi^4") == Monomial(4, 0, 0)
    assert renorm.parse_term("(dphi)^2 phi") == Monomial(3, 0, 2)
    assert renorm.parse_term("phi psi^2") == Monomial(1, 2, 0)
    assert renorm.parse_term("psi dpsi") == Monomial(0, 2, 1)
    assert renorm.parse_term("phi*phi") == Monomial(2, 0, 0)
    with pytest.raises(renorm.RenormError):
        renorm.parse_term("chi^2")


@pytest.mark.parametrize("text", ["phi^4", "(dphi)^2", "phi psi^2", "psi^4", "phi^2 psi^2"])
def test_print_parse_roundtrip(text):
    m = renorm.parse_term(text)
    assert renorm.parse_term(str(m)) == m


def test_scalar_table():
    assert renorm.scalar_table(range(2, 9)) == {2: "g(phi)(dphi)^2 + U(phi)", 3: "P_6(phi)", 4: "P_4(phi)",
                                                5: "P_3(phi)", 6: "P_3(phi)", 7: "none", 8: "none"}
    assert [renorm.max_scalar_power(d) for d in (2, 3, 4, 5, 6, 7)] == [None, 6, 4, 3, 3, 2]


def test_fermion_table():
    t = renorm.fermion_table(range(2, 7))
    assert "psi^4" in t[2] and "psi^4" not in t[3]
    assert [d for d in t if "phi psi^2" in t[d]] == [2, 3, 4]
    assert [d for d in t if "phi^2 psi^2" in t[d]] == [2, 3]
    assert t[5] == [] and t[6] == []


@pytest.mark.parametrize("term,d,cls", [("phi^2", 4, SUPER), ("phi^3", 6, CRITICAL), ("phi^4", 4, CRITICAL),
                                        ("phi^6", 3, CRITICAL), ("phi^5", 4, NON), ("psi^4", 2, CRITICAL),
                                        ("psi^4", 4, NON), ("phi psi^2", 4, CRITICAL), ("phi^3", 4, SUPER)])
def test_classification(term, d, cls):
    assert renorm.classify_term(term, d) == cls


def test_lagrangian_verdict():
    assert renorm.classify(["(dphi)^2", "phi^2", "phi^4"], 4)[1] == CRITICAL
    assert renorm.classify(["(dphi)^2", "phi^2", "phi^3"], 4)[1] == SUPER
    assert renorm.classify(["(dphi)^2", "phi^6"], 4)[1] == NON


@given(st.integers(0, 8), st.integers(0, 4), st.integers(0, 3), st.integers(2, 8))
def test_dimension_is_additive(b, f, dd, d):
    m = Monomial(b, f, dd)
    n = Monomial(1, 0, 0)
    assert (m * n).dimension(d) == m.dimension(d) + n.dimension(d)


@pytest.mark.parametrize("valency,d", [(3, 4), (4, 4), (3, 6), (4, 3)])
def test_power_counting_two_routes(valency, d):
    census = renorm.divergent_census(valency, d, 4, 4)
    for (v, k), (D, count) in census.items():
        assert D == d - k * Fraction(d - 2, 2) + v * renorm.Monomial(valency).degree(d)
        assert count > 0


def test_phi4_in_four_dimensions_has_divergences_at_every_order():
    census = renorm.divergent_census(4, 4, 4, 4)
    assert {v for v, _ in census} == {1, 2, 3, 4}
    assert all(D == 4 - k for (v, k), (D, _) in census.items())


def test_phi3_in_four_dimensions_is_finite_at_high_order():
    census = renorm.divergent_census(3, 4, 6, 4)
    assert max(v for v, _ in census) <= 4


def test_polygon_degrees():
    assert [renorm.one_loop_polygon_degree(k, 4) for k in (1, 2, 3)] == [2, 0, -2]
    assert renorm.one_loop_polygon_degree(3, 6) == 0


@pytest.mark.parametrize("a", [(1.0, 1.0), (1.0, 2.0, 3.0), (2.0, 0.5, 1.5), (0.5, 1.0, 2.0, 3.0)])
def test_feynman_parameter_lemma(a):
    assert renorm.feynman_parameter_check(list(a)) < 1e-10
    assert renorm.feynman_parameter_symmetry(list(a)) < 1e-10


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("p,m", [(0.0, 1.0), (1.0, 1.0), (2.5, 1.0), (0.3, 0.7)])
def test_bubble_three_routes(d, p, m):
    closed = renorm.bubble_closed_form(p, m, d)
    assert renorm.bubble_feynman_parameter(p, m, d) == pytest.approx(closed, rel=1e-9)
    assert renorm.bubble_momentum_quadrature(p, m, d) == pytest.approx(closed, rel=1e-9)


def test_bubble_small_momentum_limit():
    assert renorm.bubble_closed_form(1e-4, 1.0, 2) == pytest.approx(renorm.bubble_closed_form(0, 1.0, 2), rel=1e-7)
    assert renorm.bubble_closed_form(1e-4, 1.0, 3) == pytest.approx(renorm.bubble_closed_form(0, 1.0, 3), rel=1e-7)


@pytest.mark.parametrize("p", [0.5, 1.0, 3.0])
def test_subtracted_bubble_in_four_dimensions(p):
    assert renorm.renormalized_bubble_d4(p, 1.0) == pytest.approx(renorm.renormalized_bubble_d4_parametric(p, 1.0), rel=1e-11)
    seq = renorm.cutoff_sequence(p, 1.0)
    assert seq.monotone()
    sc = seq.scaled()
    assert all(sc[i + 1] <= sc[i] for i in range(len(sc) - 1))
    assert seq.errors[-1] < 0.01


def test_divergent_bubble_rejected():
    with pytest.raises(renorm.RenormError):
        renorm.bubble_feynman_parameter(1.0, 1.0, 4)
