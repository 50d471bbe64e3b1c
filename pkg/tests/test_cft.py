import cmath
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from feynkit import cft

HALF = Fraction(1, 2)


@lru_cache(maxsize=None)
def partitions_bounded(n, k):
    if n == 0:
        return 1
    if k == 0:
        return 0
    return partitions_bounded(n, k - 1) + (partitions_bounded(n - k, k) if k <= n else 0)


@pytest.mark.parametrize("sector", ["boson", "fermion"])
def test_virasoro_relations_small(sector):
    fails, checked = cft.virasoro_check(3, 5, sector)
    assert checked == 49
    assert fails == 0


def test_virasoro_relations_with_momentum():
    assert cft.virasoro_check(2, 4, "boson", mu=Fraction(3, 2))[0] == 0


@pytest.mark.parametrize("sector,c", [("boson", 1), ("fermion", HALF)])
def test_central_charge(sector, c):
    vals = cft.central_values(6, sector)
    assert vals == {n: c * Fraction(n ** 3 - n, 12) for n in range(1, 7)}


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_virasoro_adjoint(n):
    assert cft.hermitian_residual(n, 5) == 0
    assert cft.hermitian_residual(n, 4, mu=Fraction(1, 3)) == 0


def test_mode_algebras():
    assert cft.heisenberg_residual(4) == 0
    assert cft.clifford_residual(3) == 0


def test_boson_norms():
    # <a_{-1}^2 Omega, a_{-1}^2 Omega> = 2, <a_{-2} Omega, a_{-2} Omega> = 2
    assert cft.boson_norm((2,)) == 2
    assert cft.boson_norm((0, 1)) == 2
    assert cft.boson_norm((1, 1)) == 2


def test_ope_tables():
    assert cft.ope_extract("T", "T") == {4: {"1": HALF}, 2: {"T": 2}, 1: {"T'": 1}}
    assert cft.ope_extract("T", "a") == {2: {"a": 1}, 1: {"a'": 1}}
    assert cft.ope_extract("a", "a") == {2: {"1": 1}}


@pytest.mark.parametrize("pair", [("a", "a"), ("T", "a"), ("T", "T")])
def test_ope_reproduces_commutators(pair):
    assert cft.ope_commutator_residual(*pair, N=3, degree_cap=4) == 0


def test_characters_count_partitions():
    assert cft.boson_character(25).coeffs == [partitions_bounded(n, n) for n in range(26)]
    assert cft.fermion_character(10).coeffs == [cft.distinct_odd_partitions(n) for n in range(21)]
    assert cft.boson_character(5).prefactor == Fraction(-1, 24)
    assert cft.fermion_character(5).prefactor == Fraction(-1, 48)


def test_distinct_odd_partitions_small():
    # 8 = 7+1 = 5+3; 9 = 9 = 5+3+1
    assert [cft.distinct_odd_partitions(n) for n in range(10)] == [1, 1, 0, 1, 1, 1, 1, 1, 2, 2]


@pytest.mark.parametrize("sector", ["boson", "fermion"])
def test_graded_dimensions_match_characters(sector):
    dims = cft.fock_dimensions(sector, 6)
    if sector == "boson":
        assert [dims[k] for k in range(7)] == cft.boson_character(6).coeffs
    else:
        coeffs = cft.fermion_character(6).coeffs
        assert [dims.get(Fraction(k, 2), 0) for k in range(13)] == coeffs


def test_zeta_values():
    assert cft.zeta_minus_one() == Fraction(-1, 12)
    assert [cft.zeta_negative_odd(g) for g in (1, 2, 3)] == [Fraction(-1, 12), Fraction(1, 120), Fraction(-1, 252)]


taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.4, 2.5))


@given(taus)
def test_eta_modular(tau):
    assert cft.eta_modular_residual(tau) < 1e-12
    assert cft.eta_abs_residual(tau) < 1e-12


def test_eta_translation():
    tau = 0.2 + 0.8j
    assert abs(cft.eta(tau + 1) - cmath.exp(1j * cmath.pi / 12) * cft.eta(tau)) < 1e-13


def test_eta_rejects_lower_half_plane():
    with pytest.raises(cft.CFTError):
        cft.eta(0.3 - 0.1j)


@given(taus)
def test_boson_partition_function_modular(tau):
    for t in (tau, tau + 1):
        assert cft.boson_partition_function(-1 / t) == pytest.approx(cft.boson_partition_function(t), rel=1e-11)


@pytest.mark.parametrize("r2", [Fraction(1), Fraction(2), Fraction(3, 7), Fraction(5, 2)])
def test_t_duality(r2):
    assert cft.t_duality_exact(r2, 6)
    tau = 0.3 + 0.9j
    assert cft.circle_partition_function(r2, tau) == pytest.approx(cft.circle_partition_function(1 / r2, tau), rel=1e-12)


@given(st.sampled_from([0.5, 1.0, 2.0, 3.3]), taus)
def test_circle_theta_modular(r2, tau):
    assert cft.circle_theta_modular_residual(r2, tau) < 1e-11


def test_two_point_function_from_modes():
    assert all(cft.two_point_check(6))


def test_vertex_correlator_charge_conservation():
    val, ok = cft.vertex_correlator([1.0, -1.0], 0.0, [2.0, 0.5], target=0.5)
    assert val == 0.0 and not ok
    val, ok = cft.vertex_correlator([1.0, -1.0], 0.0, [2.0, 0.5], target=0.0)
    assert ok and abs(val - 1 / 1.5) < 1e-14


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_braiding(lam, nu):
    assert cft.braiding_check(lam, nu, 1.3 + 0.2j, 0.4 - 0.5j) < 1e-12


@pytest.mark.parametrize("lam", [Fraction(0), Fraction(1), Fraction(3, 2), Fraction(-2)])
def test_vertex_spin(lam):
    assert cft.vertex_spin(lam) == lam ** 2 / 2
