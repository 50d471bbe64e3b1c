"""The twenty acceptance criteria as runnable checks.

Each criterion function returns a list of Check records.  A criterion passes
when every counted check passes; informational checks are reported alongside
but do not decide the outcome.  Used by `feynkit verify-all` and the test suite.
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from . import asymptotics as asym
from . import cft, gaussian, graphs, matrixmodels as mm, qm1d, renorm, trees
from .feynman import (Action, Coupling, SymTensor, connected_expansion, effective_action,
                      effective_tree_level, legendre_numeric, log_partition_numeric,
                      partition_expansion, tree_level)
from .series import Series, catalan, double_factorial


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    residual: object = 0
    passed: bool = True
    counted: bool = True


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0
    error: str = None

    @property
    def passed(self):
        return self.error is None and all(c.passed for c in self.checks if c.counted)

    def failures(self):
        return [c for c in self.checks if c.counted and not c.passed]


@dataclass
class Settings:
    jobs: int = 1
    seed: int = 0
    tol_scale: float = 1.0


def exact(name, expected, actual, counted=True):
    ok = expected == actual
    try:
        res = abs(Fraction(expected) - Fraction(actual))
    except (TypeError, ValueError):
        res = 0 if ok else 1
    return Check(name, expected, actual, res, ok, counted)


def close(name, expected, actual, tol, relative=False, counted=True):
    res = abs(expected - actual)
    if relative:
        res = res / abs(expected)
    return Check(name, expected, actual, res, res <= tol, counted)


def within(name, value, lo, hi, counted=True):
    return Check(name, "[%s, %s]" % (lo, hi), value, 0 if lo <= value <= hi else min(abs(value - lo), abs(value - hi)),
                 lo <= value <= hi, counted)


# ---------------------------------------------------------------- 1-5 Gaussian and Feynman expansions

def c1(s):
    out = []
    for k in range(0, 7):
        out.append(exact("<x^%d>" % (2 * k), double_factorial(2 * k - 1), gaussian.moment_1d(2 * k)))
    for k in range(0, 6):
        out.append(exact("<x^%d>" % (2 * k + 1), 0, gaussian.moment_1d(2 * k + 1)))
    B = [[2, 1, 0], [1, 3, 1], [0, 1, 2]]
    covs = [[1, 0, 0], [0, 1, 1], [1, -1, 2], [0, 0, 1], [2, 1, 0]]
    for n in (1, 3, 5):
        out.append(exact("3-dim odd product n=%d" % n, 0, gaussian.wick_moment(B, covs[:n])))
    return out


def c2(s):
    out = []
    for n in range(1, 4):
        for k in range(0, 5):
            expected = Fraction(n ** (2 * k), 2 ** k * factorial(k) * factorial(n))
            out.append(exact("G(%d,%d)" % (n, k), expected, graphs.weighted_graph_count(n, k)))
    return out


def _two_dim_action():
    c3 = Coupling("g3", 3, SymTensor.from_function(3, 2, lambda i: [1, 2, -1, 3][sum(i)]))
    c4 = Coupling("g4", 4, SymTensor.from_function(4, 2, lambda i: [1, 0, 2, -1, 1][sum(i)]))
    return Action([[2, 1], [1, 3]], [c3, c4])


def _one_dim_action():
    return Action.one_dim([("g3", 3, 1), ("g4", 4, 1)])


def c3(s):
    out = []
    for label, a in (("d=1", _one_dim_action()), ("d=2", _two_dim_action())):
        for D in range(1, 5):
            g = partition_expansion(a, D, "graph")
            m = partition_expansion(a, D, "matching")
            out.append(Check("%s degree %d graph = matching" % (label, D), "equal", g == m, 0 if g == m else 1, g == m))
    return out


def c4(s):
    out = []
    for label, a in (("d=1", _one_dim_action()), ("d=2", _two_dim_action())):
        Z = partition_expansion(a, 4, "graph")
        C = connected_expansion(a, 4)
        ok = C.exp(4) == Z
        out.append(Check("%s exp(connected) = Z through degree 4" % label, "equal", ok, 0 if ok else 1, ok))
    return out


def c5(s):
    out = []
    a = _one_dim_action()
    T = tree_level(a, 4)
    C = connected_expansion(a, 4)
    ok = C.hbar_slice(-1) == T
    out.append(Check("tree_level = hbar^-1 slice (cubic+quartic, degree 4)", "equal", ok, 0 if ok else 1, ok))
    n = 8
    T = tree_level(Action.one_dim([("g", i, 1) for i in range(n + 1)]), n)
    F = trees.tree_sum_closed_form(trees.exp_h(n + 2), n)
    for k in range(1, n + 1):
        expected = Fraction(k ** (k - 2) if k >= 2 else 1, factorial(k))
        out.append(exact("h=e^x: g^%d" % k, expected, T.terms.get(((("g", k),), Fraction(0)), Fraction(0))))
        out.append(exact("h=e^x closed form: g^%d" % k, expected, F[k]))
    T = tree_level(Action.one_dim([("g", 1, 1), ("g", 3, 1)]), 12)
    F = trees.tree_sum_closed_form(trees.trivalent_h(14), 12)
    for k in range(1, 7):
        expected = Fraction(double_factorial(2 * k - 3), factorial(k + 1))
        out.append(exact("trivalent: g^%d" % (2 * k), expected, T.terms.get(((("g", 2 * k),), Fraction(0)), Fraction(0))))
        out.append(exact("trivalent closed form: g^%d" % (2 * k), expected, F[2 * k]))
    return out


def c6(s):
    out = []
    a = Action.one_dim([("g", 3, 1)])
    eff = effective_action(a, 3)
    ok = effective_tree_level(eff, 3) == connected_expansion(a, 3)
    out.append(Check("tree level of S_eff = connected sum (cubic, degree 3)", "equal", ok, 0 if ok else 1, ok))
    q = Action.one_dim([("g", 4, -1)])
    eff = effective_action(q, 3)
    hbar, g = 0.05, 0.1
    coeffs = eff.numeric_1d({"g": g}, hbar)
    f = lambda x: sum(v * x ** k for k, v in coeffs.items())
    df = lambda x: sum(k * v * x ** (k - 1) for k, v in coeffs.items() if k)
    d2f = lambda x: sum(k * (k - 1) * v * x ** (k - 2) for k, v in coeffs.items() if k > 1)
    for p in (0.0, 0.1, 0.3):
        L = legendre_numeric(f, df, p, 0.0, d2f)
        W = log_partition_numeric(q, {"g": g}, hbar, p)
        out.append(close("Legendre(S_eff)(p=%s) = hbar log Z(p)/Z0, quartic g=0.1 hbar=0.05" % p, W, L, 1e-8 * s.tol_scale))
    return out


def c7(s):
    out = []
    for n in range(1, 9):
        out.append(exact("Cayley n=%d" % n, n ** (n - 2) if n >= 2 else 1, trees.enumerate_labeled_trees(n)))
    out.append(exact("N_2 trivalent", 4, trees.count_by_valency(4, {1, 3})))
    out.append(exact("N_3 trivalent", 90, trees.count_by_valency(6, {1, 3})))
    for p in range(1, 7):
        for q in range(1, 8 - p):
            out.append(exact("oriented (%d,%d)" % (p, q), trees.oriented_tree_count(p, q), trees.oriented_tree_enumerate(p, q)))
    complete = lambda m: [[int(i != j) for j in range(m)] for i in range(m)]
    out.append(exact("matrix-tree K_4", 16, trees.spanning_tree_count(complete(4))))
    for m in range(1, 8):
        out.append(exact("matrix-tree K_%d" % m, m ** (m - 2) if m >= 2 else 1, trees.spanning_tree_count(complete(m))))
    for p in ([3], [2, 1], [1, 1, 1], [2, 2], [3, 2, 1], [2, 2, 2], [4, 2], [3, 3], [1, 1, 1, 1, 1, 1]):
        e, c = trees.colored_tree_polynomial(p)
        out.append(Check("Q_%s closed form = enumeration" % p, "equal", e == c, 0 if e == c else 1, e == c))
    return out


# ---------------------------------------------------------------- 8-9 asymptotics

def _stirling_ratio(h):
    z = 1 / h
    log_lead = (z + 1) * math.log(z) - z + 0.5 * math.log(2 * math.pi / z)
    return math.exp(math.lgamma(z + 1) - log_lead) * math.sqrt(2 * math.pi)


def c8(s):
    out = []
    lap = asym.stirling_from_laplace(3)
    ber = asym.stirling_from_bernoulli(3)
    out.append(exact("a_1 steepest descent", Fraction(1, 12), lap[1]))
    out.append(exact("a_1 Bernoulli", Fraction(1, 12), ber[1]))
    out.append(exact("a_2 steepest descent", Fraction(1, 288), lap[2]))
    out.append(exact("a_2 Bernoulli", Fraction(1, 288), ber[2]))
    out.append(exact("routes agree a_3", lap[3], ber[3]))
    o = 24
    t = Series.monomial(1, o)
    le = asym.steepest_descent_coeffs((t * t + t ** 4) * Fraction(1, 2), Series.one(o), 5)
    for n in range(6):
        expected = Fraction((-1) ** n * double_factorial(4 * n - 1), 2 ** n * factorial(n))
        out.append(exact("quartic a_%d / sqrt(2 pi)" % n, expected, le.coeffs[n]))
    hs = [0.2, 0.1, 0.05]
    for N in (1, 2, 3):
        slope = asym.error_order_slope(_stirling_ratio, lap, math.sqrt(2 * math.pi), hs, N)
        out.append(close("Stirling truncation N=%d error slope" % N, N, slope, 0.2 * N, counted=True))
    for N in (1, 2, 3):
        slope = asym.error_order_slope(asym.quartic_integral, [asym.quartic_coefficient(n) for n in range(N)],
                                       math.sqrt(2 * math.pi), hs, N)
        out.append(close("quartic truncation N=%d error slope (pre-asymptotic at these hbar)" % N, N, slope,
                         0.2 * N, counted=False))
    return out


def c9(s):
    out = []
    coeffs = [(-1) ** n * factorial(n) for n in range(20)]
    for h in np.linspace(0.1, 1.0, 10):
        h = float(h)
        ref = asym.euler_series_closed_form(h)
        out.append(close("Euler series, closed Borel transform, hbar=%.2f" % h, ref,
                         asym.borel_sum(None, h, transform=asym.euler_borel_transform), 1e-10 * s.tol_scale))
        out.append(close("Euler series, Pade from 20 coefficients, hbar=%.2f" % h, ref,
                         asym.borel_sum(coeffs, h), 1e-10 * s.tol_scale))
    for n in range(12):
        out.append(exact("quartic Borel transform coefficient %d" % n,
                         asym.quartic_coefficient(n) / factorial(n), asym.quartic_borel_transform_coeff(n)))
    for h in (0.05, 0.1, 0.2, 0.5, 1.0):
        val = math.sqrt(2 * math.pi) * asym.borel_sum(None, h, transform=asym.quartic_borel_transform)
        out.append(close("quartic Borel sum vs quadrature, hbar=%s" % h, asym.quartic_integral(h), val, 1e-8 * s.tol_scale))
    return out


# ---------------------------------------------------------------- 10-13 matrix models

def c10(s):
    out = []
    for m in range(1, 7):
        census = mm.polygon_gluing_census(m)
        out.append(exact("eps_0(%d) = Catalan" % m, catalan(m), census.get(0, 0)))
        ok = mm.census_polynomial(m) == mm.harer_zagier_poly(m)
        out.append(Check("P_%d census = Harer-Zagier" % m, mm.format_poly(mm.harer_zagier_poly(m)),
                         mm.format_poly(mm.census_polynomial(m)), 0 if ok else 1, ok))
    for N in range(1, 4):
        for m in range(1, 4):
            P = mm.harer_zagier_poly(m).evaluate({"x": N})
            out.append(exact("hermitian Wick N=%d m=%d" % (N, m), P, mm.matrix_wick_oracle(N, m, "hermitian")))
            out.append(exact("real symmetric Wick N=%d m=%d" % (N, m), mm.twisted_gluing_sum(m, N),
                             mm.matrix_wick_oracle(N, m, "real_symmetric")))
    for g in (1, 2):
        out.append(exact("4g-gon genus g=%d" % g, Fraction(double_factorial(4 * g - 1), 2 * g + 1), mm.all_crossing_count(g)))
    return out


def c11(s):
    out = []
    for g, expected in ((1, Fraction(-1, 12)), (2, Fraction(1, 120))):
        ec = mm.moduli_euler_char(g, jobs=s.jobs)
        out.append(exact("chi(Gamma_%d^1)" % g, expected, ec.value))
        out.append(exact("chi(Gamma_%d^1) = -B_2g/2g" % g, ec.expected(), ec.value))
    return out


def c12(s):
    out = []
    for n, expected in ((1, 2), (2, 36)):
        out.append(exact("planar census c_%d" % n, expected, mm.planar_quartic_census(n)))
    for n in (1, 2, 3):
        out.append(exact("closed form = census n=%d" % n, mm.bipz(n), mm.planar_quartic_census(n)))
    return out


def c13(s):
    out = []
    for m in range(7):
        out.append(exact("Wigner m=%d" % m, catalan(m), mm.wigner_moment(m)))
    for m in (1, 2):
        val = mm.gue_moment(m, 200, 10, s.seed)
        out.append(close("GUE N=200 seed=%d m=%d" % (s.seed, m), catalan(m), val, 0.05, relative=True))
    return out


# ---------------------------------------------------------------- 14-17 quantum mechanics

def c14(s):
    out = []
    g = qm1d.tadpole_graph()
    for m in (Fraction(1), Fraction(3, 2), Fraction(1, 3)):
        F = qm1d.position_amplitude(g, m) * qm1d.correlator_weight(g)
        diff = F - qm1d.tadpole_closed_form(m)
        out.append(Check("tadpole exact, m=%s" % m, "0", repr(diff), len(diff.terms), diff.is_zero()))
    w = float(qm1d.correlator_weight(g))
    for m, times in ((1.0, (0.3, 1.2)), (1.5, (2.0, -0.5)), (0.7, (0.0, 0.0))):
        t = abs(times[0] - times[1])
        closed = 1 / (16 * m ** 4) * math.exp(-m * t) * (1 + m * t)
        out.append(close("tadpole vs quadrature m=%s t=%s" % (m, times), closed,
                         w * qm1d.amplitude_quadrature(g, times, m), 1e-8 * s.tol_scale))
    for m in (1.0, 1.3):
        for E in (0.0, 0.7, 2.3):
            closed = qm1d.bubble_closed_form(E, m)
            out.append(close("bubble residue E=%s m=%s" % (E, m), closed, qm1d.bubble_residue(E, m), 1e-10 * s.tol_scale, True))
            out.append(close("bubble quadrature E=%s m=%s" % (E, m), closed, qm1d.bubble_quadrature(E, m), 1e-10 * s.tol_scale, True))
    return out


def c15(s):
    out = []
    for L in (0.3, 1.0, 2.5, 7.0):
        out.append(close("oscillator trace L=%s" % L, 1 / (2 * math.sinh(L / 2)), qm1d.oscillator_trace(L),
                         1e-12 * s.tol_scale, True))
    for m0 in (Fraction(1), Fraction(3, 2)):
        flags = qm1d.det_ratio_check(m0, 4)
        for k, ok in enumerate(flags):
            out.append(Check("det ratio a^%d, m0=%s" % (k, m0), "equal", ok, 0 if ok else 1, ok))
    return out


def c16(s):
    out = []
    L, m = 2.0, 1.0
    cases = [(1.2,), (1.5, 0.3), (1.9, 1.2, 0.5), (1.9, 1.2, 0.5, 0.1), (1.0, 1.0, 0.2, 0.2), (2.0, 1.4, 0.6, 0.0)]
    for times in cases:
        r = qm1d.feynman_kac_check(list(times), L, m, 40)
        out.append(close("trace vs Wick, times=%s" % (times,), r["wick"], r["operator"], 1e-6 * s.tol_scale))
    return out


def c17(s):
    out = []
    a, M, hbar = 1.0, 0.1, 10.0
    ns = range(20, 41)
    stated = qm1d.bifurcation_errors(a, M, hbar, ns, "halved")
    worst = max(stated.values())
    out.append(Check("splitting vs stated asymptotics, n in [20,40], M=0.1, hbar=%s (max rel. error of E - Lambda_n)" % hbar,
                     "< 0.1", worst, worst, worst < 0.1))
    corrected = qm1d.bifurcation_errors(a, M, hbar, ns, "perturbative")
    w2 = max(corrected.values())
    out.append(Check("splitting vs perturbative asymptotics (both corrections doubled), hbar=%s" % hbar,
                     "< 0.1", w2, w2, w2 < 0.1, counted=False))
    lam = {n: hbar * hbar * n * n / 2 for n in ns}
    e_rel = max(abs(qm1d.pair_near(n, a, M, hbar)[1] - qm1d.bifurcation_prediction(n, a, M, hbar, "halved")[1]) / lam[n]
                for n in ns)
    out.append(Check("stated asymptotics, relative error of E itself", "< 0.1", e_rel, e_rel, e_rel < 0.1, counted=False))
    for M in (0.1, 1.0):
        E = 2 * M * (2 * math.pi - a)
        ratio = qm1d.weyl_ratio(E, a, M, 0.01)
        out.append(within("Weyl ratio hbar=0.01 E=2 sup U M=%s" % M, ratio, 0.95, 1.05))
    return out


# ---------------------------------------------------------------- 18-20

def c18(s):
    out = []
    worst = 0.0
    for u in (0.0, 0.3, -0.7, 1.4, 2.5, 0.25 + 0.1j):
        for T in (0.2, 0.5, 1.0, 2.0, 5.0, 1.3 + 0.4j):
            worst = max(worst, qm1d.theta_modular_residual(u, T))
    out.append(Check("theta modularity on a 6x6 (u,T) grid", "< 1e-10", worst, worst, worst < 1e-10 * s.tol_scale))
    for r2 in (Fraction(2, 3), Fraction(2), Fraction(5, 7)):
        ok = cft.t_duality_exact(r2, 8)
        out.append(Check("T-duality term multisets r^2=%s" % r2, "equal", ok, 0 if ok else 1, ok))
    return out


def c19(s):
    out = []
    expected_table = {2: "g(phi)(dphi)^2 + U(phi)", 3: "P_6(phi)", 4: "P_4(phi)", 5: "P_3(phi)", 6: "P_3(phi)",
                      7: "none", 8: "none"}
    table = renorm.scalar_table(range(2, 9))
    for d in expected_table:
        out.append(exact("scalar d=%d" % d, expected_table[d], table[d]))
    ferm = renorm.fermion_table(range(2, 7))
    out.append(exact("psi^4 critical only at d=2", [2], [d for d in ferm if "psi^4" in ferm[d]]))
    out.append(exact("Yukawa phi psi^2 for d<=4", [2, 3, 4], [d for d in ferm if "phi psi^2" in ferm[d]]))
    out.append(exact("phi^2 psi^2 for d<=3", [2, 3], [d for d in ferm if "phi^2 psi^2" in ferm[d]]))
    for term, d, cls in (("phi^2", 4, renorm.SUPER), ("phi^3", 6, renorm.CRITICAL), ("phi^4", 4, renorm.CRITICAL),
                         ("psi^4", 2, renorm.CRITICAL), ("(dphi)^2 phi", 3, renorm.NON)):
        out.append(exact("%s at d=%d" % (term, d), cls, renorm.classify_term(term, d)))
    for a in ((1, 1), (1, 2, 3), (2.0, 0.5, 1.5), (0.5, 1.0, 2.0, 3.0)):
        out.append(close("Feynman parameters a=%s" % (a,), 1 / math.prod(a), renorm.feynman_parameter_integral(list(a)),
                         1e-10 * s.tol_scale))
    for p, m in ((1.0, 1.0), (2.5, 1.0), (0.3, 0.7)):
        closed = renorm.bubble_closed_form(p, m, 2)
        out.append(close("d=2 bubble vs Feynman-parameter quadrature p=%s m=%s" % (p, m), closed,
                         renorm.bubble_feynman_parameter(p, m, 2), 1e-6 * s.tol_scale))
        out.append(close("d=2 bubble vs momentum quadrature p=%s m=%s" % (p, m), closed,
                         renorm.bubble_momentum_quadrature(p, m, 2), 1e-6 * s.tol_scale))
    for p in (1.0, 3.0):
        seq = renorm.cutoff_sequence(p, 1.0)
        sc = seq.scaled()
        ok = seq.monotone() and all(sc[i + 1] <= sc[i] for i in range(len(sc) - 1))
        out.append(Check("d=4 cutoffs 10,20,40,80: monotone, error*cutoff non-increasing, p=%s" % p,
                         seq.limit, seq.values[-1], seq.errors[-1], ok))
    return out


def c20(s):
    out = []
    for sector in ("boson", "fermion"):
        fails, checked = cft.virasoro_check(5, 10, sector)
        out.append(exact("Virasoro residual %s |n|,|m|<=5 degree<=10 (failing triples)" % sector, 0, fails))
    for sector, c in (("boson", Fraction(1)), ("fermion", Fraction(1, 2))):
        vals = cft.central_values(5, sector)
        for n in range(1, 6):
            out.append(exact("L_%d L_-%d Omega (%s)" % (n, n, sector), Fraction(n ** 3 - n, 12) * c, vals[n]))
    ope = cft.ope_extract("T", "T")
    out.append(exact("TT order 4", {"1": Fraction(1, 2)}, ope.get(4)))
    out.append(exact("TT order 3", None, ope.get(3)))
    out.append(exact("TT order 2", {"T": 2}, ope.get(2)))
    out.append(exact("TT order 1", {"T'": 1}, ope.get(1)))
    flags = cft.two_point_check(8)
    out.append(exact("vertex two-point through order 8", [True] * 9, flags))
    worst = max(cft.eta_modular_residual(t) for t in (1j, 0.5 + 0.9j, -0.3 + 1.4j, 0.1 + 0.6j, 2j))
    out.append(Check("eta modularity", "< 1e-12", worst, worst, worst < 1e-12 * s.tol_scale))
    from .series import partitions
    out.append(exact("boson character = p(n) through q^20", partitions(20), cft.boson_character(20).coeffs))
    out.append(exact("NS character = distinct odd partitions through q^10",
                     [cft.distinct_odd_partitions(n) for n in range(21)], cft.fermion_character(10).coeffs))
    return out


CRITERIA = {
    1: ("Wick moments", c1),
    2: ("Graph identity", c2),
    3: ("Matching/graph dual-mode agreement", c3),
    4: ("log Z = connected sum", c4),
    5: ("Tree slices", c5),
    6: ("Effective action", c6),
    7: ("Tree counts", c7),
    8: ("Steepest descent", c8),
    9: ("Borel", c9),
    10: ("Matrix models", c10),
    11: ("Moduli Euler characteristic", c11),
    12: ("Planar counts", c12),
    13: ("Wigner moments", c13),
    14: ("QM amplitudes", c14),
    15: ("Partition functions", c15),
    16: ("Feynman-Kac", c16),
    17: ("Spectra", c17),
    18: ("Theta modularity", c18),
    19: ("Renormalization", c19),
    20: ("CFT", c20),
}


def run_criterion(n, settings=None):
    settings = settings or Settings()
    title, fn = CRITERIA[n]
    t = time.perf_counter()
    res = CriterionResult(n, title)
    try:
        res.checks = fn(settings)
    except Exception as exc:      # report, do not abort the sweep
        res.error = "%s: %s" % (type(exc).__name__, exc)
    res.seconds = time.perf_counter() - t
    return res


def run(numbers=None, settings=None):
    return [run_criterion(n, settings) for n in (numbers or sorted(CRITERIA))]


def summary_line(res):
    status = "PASS" if res.passed else "FAIL"
    counted = [c for c in res.checks if c.counted]
    worst = next((c for c in counted if not c.passed), None)
    detail = "%d/%d checks" % (sum(c.passed for c in counted), len(counted))
    if res.error:
        detail = res.error
    elif worst is not None:
        detail += "; failing: %s (actual %s, expected %s)" % (worst.name, _short(worst.actual), _short(worst.expected))
    return "[%s] %2d. %s: %s" % (status, res.number, res.title, detail)


def _short(x):
    if isinstance(x, float):
        return "%.6g" % x
    return str(x)
