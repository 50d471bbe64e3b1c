import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from feynkit.graphs import Multigraph
from feynkit import qm1d
from feynkit.series import Series


# ---------------------------------------------------------------- propagators

@pytest.mark.parametrize("t", [0.0, 0.4, 1.7, -2.2])
def test_fourier_pair(t):
    assert qm1d.fourier_propagator(t, 1.3) == pytest.approx(qm1d.green("line", 1.3, None, t), abs=1e-8)


@given(st.floats(0.2, 3.0), st.floats(0.3, 5.0), st.floats(-4.0, 4.0))
def test_circle_green_is_image_sum(m, L, t):
    terms = int(40 / (m * L)) + 5
    assert qm1d.green("circle", m, L, t) == pytest.approx(qm1d.green_circle_images(m, L, t, terms), rel=1e-10)


def test_massless_line_is_rejected():
    with pytest.raises(qm1d.InfraredDivergence):
        qm1d.Propagator("massless-line")


def test_massless_circle_has_no_zero_mode():
    L = 2.5
    from scipy.integrate import quad
    assert quad(lambda t: qm1d.green("massless-circle", 0, L, t), 0, L)[0] == pytest.approx(0, abs=1e-13)


# ---------------------------------------------------------------- position space

@pytest.mark.parametrize("m", [Fraction(1), Fraction(3, 2), Fraction(1, 3)])
def test_tadpole_exact(m):
    g = qm1d.tadpole_graph()
    F = qm1d.position_amplitude(g, m) * qm1d.correlator_weight(g)
    assert (F - qm1d.tadpole_closed_form(m)).is_zero()


@pytest.mark.parametrize("times", [(0.3, 1.2), (2.0, -0.5), (0.0, 0.0)])
def test_tadpole_quadrature(times):
    g = qm1d.tadpole_graph()
    w = float(qm1d.correlator_weight(g))
    t = abs(times[0] - times[1])
    closed = (1 + t) * math.exp(-t) / 16
    assert w * qm1d.amplitude_quadrature(g, times, 1.0) == pytest.approx(closed, abs=1e-8)
    assert w * qm1d.amplitude_at(g, times, 1) == pytest.approx(closed, abs=1e-14)


def test_cross_graph_against_quadrature():
    g = qm1d.cross_graph()
    times = (1.1, 0.4, -0.3, 0.0)
    assert qm1d.amplitude_at(g, times, 1) == pytest.approx(qm1d.amplitude_quadrature(g, times, 1.0), rel=1e-8)


@given(st.permutations([0.9, 0.1, -0.6, 0.35]))
def test_amplitude_symmetric_in_legs(times):
    g = qm1d.cross_graph()
    assert qm1d.amplitude_at(g, times, 1) == pytest.approx(qm1d.amplitude_at(g, [0.9, 0.1, -0.6, 0.35], 1), rel=1e-13)


def test_clustering():
    # two separated pairs joined by a quartic vertex decay like the product of free propagators
    g = Multigraph([(4, "g"), (4, "g")], 4, [(0, 4), (1, 4), (2, 5), (3, 5), (4, 5), (4, 5)])
    base = [0.0, 0.3]
    vals = []
    for z in (40.0, 50.0):
        vals.append(qm1d.amplitude_at(g, base + [z, z + 0.3], 1))
    # rate m per unit separation on each of the two lines between the pairs
    assert math.log(vals[0] / vals[1]) / 10.0 == pytest.approx(2.0, rel=0.03)


# ---------------------------------------------------------------- momentum space

@pytest.mark.parametrize("E", [0.0, 0.7, 2.3])
@pytest.mark.parametrize("m", [1.0, 1.3])
def test_bubble(E, m):
    closed = qm1d.bubble_closed_form(E, m)
    assert closed == pytest.approx(2 * math.pi / (m * (E * E + 4 * m * m)), rel=1e-15)
    assert qm1d.bubble_residue(E, m) == pytest.approx(closed, rel=1e-10)
    assert qm1d.bubble_quadrature(E, m) == pytest.approx(closed, rel=1e-10)


def test_tree_momentum_amplitude_is_a_product():
    g = qm1d.cross_graph()
    val = qm1d.momentum_amplitude(g, [0.5, -0.2, 1.0, -1.3], 1.0)
    expected = 1.0
    for E in (0.5, -0.2, 1.0, -1.3):
        expected /= E * E + 1
    assert val == pytest.approx(expected, rel=1e-14)


def test_momentum_conservation_is_enforced():
    with pytest.raises(qm1d.QMError):
        qm1d.momentum_amplitude(qm1d.cross_graph(), [0.5, 0.2, 1.0, -1.3], 1.0)


# ---------------------------------------------------------------- partition functions

@pytest.mark.parametrize("L", [0.3, 1.0, 2.5, 7.0])
def test_oscillator_trace(L):
    assert qm1d.oscillator_trace(L) == pytest.approx(qm1d.partition_circle(1.0, L), rel=1e-12)
    assert qm1d.partition_circle(1.0, L) == pytest.approx(1 / (2 * math.sinh(L / 2)), rel=1e-15)


@pytest.mark.parametrize("m0", [Fraction(1), Fraction(3, 2)])
def test_det_ratio_equals_polygon_sum(m0):
    assert all(qm1d.det_ratio_check(m0, 4))


def test_det_ratio_euler_product():
    for a, L in ((0.3, 1.0), (1.5, 2.0)):
        assert qm1d.det_ratio_euler_product(1.0, a, L) == pytest.approx(qm1d.det_ratio_numeric(1.0, a, L), rel=1e-12)


# ---------------------------------------------------------------- Feynman-Kac

@pytest.mark.parametrize("times", [(1.2,), (1.5, 0.3), (1.9, 1.2, 0.5, 0.1), (1.0, 1.0, 0.2, 0.2)])
def test_feynman_kac(times):
    r = qm1d.feynman_kac_check(list(times), 2.0, 1.0, 40)
    assert r["residual"] < 1e-10


def test_two_point_on_circle():
    r = qm1d.feynman_kac_check([1.5, 0.3], 2.0, 1.0, 40)
    assert r["wick"] == pytest.approx(qm1d.green("circle", 1.0, 2.0, 1.2), rel=1e-14)


# ---------------------------------------------------------------- theta and circle-valued fields

@given(st.floats(-2, 2), st.floats(0.2, 5.0))
def test_theta_modularity(u, T):
    assert qm1d.theta_modular_residual(u, T) < 1e-10


@pytest.mark.parametrize("p,t", [((1, -1), (1.3, 0.4)), ((2, -1, -1), (1.8, 1.0, 0.2)), ((1, 1, -2), (2.5, 0.9, 0.1))])
def test_circle_valued_routes_agree(p, t):
    a = qm1d.circle_valued_correlator(0.7, 1.0, 3.0, p, t)
    b = qm1d.circle_valued_correlator_theta(0.7, 1.0, 3.0, p, t)
    assert a == pytest.approx(b, rel=1e-12)


def test_circle_valued_limits():
    assert qm1d.circle_valued_correlator(0.7, 1.0, 3.0, (1, -1), (1.0, 1.0)) == pytest.approx(1.0, rel=1e-13)
    assert qm1d.circle_valued_correlator(0.7, 1.0, 3.0, (1, 1), (1.0, 0.5)) == 0.0
    p, t = (1, -1), (1.3, 0.4)
    far = qm1d.circle_valued_correlator(0.7, 1.0, 300.0, p, t)
    assert far == pytest.approx(qm1d.line_valued_limit(0.7, 1.0, p, t), rel=1e-2)


def test_free_fermion_signs():
    pf, n = qm1d.free_fermion_correlator([3.0, 2.0, 1.0, 0.0])
    assert (pf, n) == (1, 2)
    pf, n = qm1d.free_fermion_correlator([2.0, 3.0, 1.0, 0.0])
    assert pf == -1
    assert qm1d.free_fermion_correlator([1.0, 0.0, 2.0])[0] == 0


@given(st.permutations(range(6)))
def test_free_fermion_sign_is_ordering_sign(perm):
    times = [float(k) for k in perm]
    inversions = sum(times[i] < times[j] for i in range(6) for j in range(i + 1, 6))
    assert qm1d.free_fermion_correlator(times) == ((-1) ** inversions, 3)


# ---------------------------------------------------------------- spectrum

def test_transfer_matrices_are_unimodular():
    for E in (-0.1, 0.2, 3.0):
        dA, dB = qm1d.transfer_matrices(E, 1.0, 0.3, 1.0).dets()
        assert dA == pytest.approx(1, abs=1e-12) and dB == pytest.approx(1, abs=1e-12)


def test_free_limit():
    free = qm1d.free_spectrum(1.0, 9)
    for M in (1e-3, 1e-5):
        spec = qm1d.piecewise_spectrum(1.0, M, 1.0, 9)
        assert max(abs(x - y) for x, y in zip(spec, free)) < 20 * M


def test_spectrum_consistency():
    spec = qm1d.piecewise_spectrum(1.0, 0.1, 1.0, 5)
    assert spec[0] < 0 < spec[1]
    lo, hi = qm1d.pair_near(1, 1.0, 0.1, 1.0)
    assert (lo, hi) == pytest.approx((spec[1], spec[2]), abs=1e-10)
    assert all(abs(qm1d.half_trace(E, 1.0, 0.1, 1.0) - 1) < 1e-9 for E in spec)
    assert qm1d.eigenvalue_count(spec[4] + 1e-6, 1.0, 0.1, 1.0) == 5


def test_bifurcation_corrected_form():
    errs = qm1d.bifurcation_errors(1.0, 0.1, 10.0, range(20, 41), "perturbative")
    assert max(errs.values()) < 0.1


@pytest.mark.xfail(strict=True, reason="the stated corrections are half the size of the measured ones")
def test_bifurcation_stated_form():
    errs = qm1d.bifurcation_errors(1.0, 0.1, 10.0, range(20, 41), "halved")
    assert max(errs.values()) < 0.1


@pytest.mark.parametrize("M", [0.1, 1.0])
def test_weyl_law(M):
    a, hbar = 1.0, 0.01
    E = 2 * M * (2 * math.pi - a)
    assert 0.95 <= qm1d.weyl_ratio(E, a, M, hbar) <= 1.05
    assert abs(qm1d.eigenvalue_count(E, a, M, hbar) - qm1d.quantization_count(E, a, M, hbar)) <= 1


# ---------------------------------------------------------------- WKB

def _riccati_residuals(U, E, order):
    """Per hbar-order, real and imaginary parts of y^2 + hbar y' + q for the '+' WKB solution."""
    B = qm1d.wkb_basis(U, E, order)
    q = B.q
    p = q.power(Fraction(1, 2))
    n = q.order - order - 1

    def y(k):
        # (real, imag)
        if k % 2 == 0:
            return Series.zero(n), (p * B.S[k]).truncate(n)
        return B.R[k].truncate(n), Series.zero(n)

    out = []
    for k in range(1, order + 1):
        re = Series.zero(n)
        im = Series.zero(n)
        for j in range(k + 1):
            a, b = y(j), y(k - j)
            re = re + (a[0] * b[0] - a[1] * b[1]).truncate(n)
            im = im + (a[0] * b[1] + a[1] * b[0]).truncate(n)
        d = y(k - 1)
        re = re + d[0].deriv().truncate(n - 1)
        im = im + d[1].deriv().truncate(n - 1)
        out.append((re.truncate(n - 1), im.truncate(n - 1)))
    return out


def test_wkb_formal_solution():
    U = Series([0, Fraction(1, 3), Fraction(1, 5), 0, Fraction(-1, 7)], 12)
    for re, im in _riccati_residuals(U, Fraction(1, 2), 4):
        assert re.is_zero() and im.is_zero()


def test_wkb_leading_terms():
    B = qm1d.wkb_basis(Series.zero(8), 2, 3)
    # constant potential: only the leading term survives
    assert all(s.is_zero() for k, s in B.S.items() if k)
    assert all(r.is_zero() for r in B.R.values())


def test_wkb_turning_point_rejected():
    with pytest.raises(qm1d.QMError):
        qm1d.wkb_basis(Series([3], 6), 1, 2)


def test_wkb_error_is_first_order():
    U = lambda x: 0.3 * math.cos(x)
    dU = lambda x: -0.3 * math.sin(x)
    e1 = qm1d.wkb_ode_error(U, dU, 2.0, 0.1, 0.0, 2.0)
    e2 = qm1d.wkb_ode_error(U, dU, 2.0, 0.05, 0.0, 2.0)
    slope = math.log(e1 / e2) / math.log(2)
    assert slope == pytest.approx(1.0, abs=0.2)
