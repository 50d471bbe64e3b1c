"""Laplace-type and oscillatory integrals in one variable: asymptotic
coefficients, the Stirling series, Borel summation and a quadrature wrapper.

For I(hbar) = int g(x) exp(-f(x)/hbar) dx with a nondegenerate minimum of f at c,
    I(hbar) ~ hbar^{1/2} exp(-f(c)/hbar) * sqrt(2 pi / f''(c)) * sum_n c_n hbar^n,
and steepest_descent_coeffs returns the exact rationals c_n (c_0 = g(c)).
"""
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, special

from . import linalg
from .series import Series, SeriesError, bernoulli, double_factorial


class AsymptoticsError(ValueError):
    pass


@dataclass
class LocalExpansion:
    """Exact coefficients c_n with a prefactor sqrt(2 pi) / sqrt(curvature) and a phase."""
    coeffs: list
    curvature: Fraction
    phase_eighths: int = 0   # overall phase exp(i pi phase_eighths / 4)

    def prefactor(self):
        return math.sqrt(2 * math.pi / float(self.curvature))

    def absolute(self, n):
        """a_n / sqrt(2 pi) with the curvature folded in (float if curvature is not a square)."""
        return self.coeffs[n]

    def evaluate(self, hbar, terms=None):
        terms = len(self.coeffs) if terms is None else terms
        s = sum(float(c) * hbar ** k for k, c in enumerate(self.coeffs[:terms]))
        return self.prefactor() * s


def _normalized_chart(f):
    """q(t) with q^2 = 2 f(t) / f''(0), q'(0) = +1, for f = f2 t^2/2 + ..."""
    if f[0] != 0 or f[1] != 0:
        raise AsymptoticsError("f must be expanded at a critical point with f(c)=0 removed")
    f2 = 2 * f[2]
    if f2 == 0:
        raise AsymptoticsError("degenerate critical point")
    u = (f * Fraction(2) / f2).shift(-2)     # q^2 = t^2 u(t), u(0) = 1
    return f2, Series.monomial(1, u.order + 1) * u.power(Fraction(1, 2))


def steepest_descent_coeffs(f, g, N):
    """c_0..c_{N} for f, g given as exact Series in t = x - c (f may include f(c)).

    f needs terms through t^{2N+2}, g through t^{2N}.
    """
    f = f - Series.from_dict({0: f[0]}, f.order) if f.order > 0 else f
    if f.order < 2 * N + 3:
        raise AsymptoticsError("f is known to order %d, need %d" % (f.order, 2 * N + 3))
    if g.order < 2 * N + 1:
        raise AsymptoticsError("g is known to order %d, need %d" % (g.order, 2 * N + 1))
    if f[1] != 0:
        raise AsymptoticsError("expansion point is not critical")
    if f[2] <= 0:
        raise AsymptoticsError("need f''(c) > 0 for steepest descent")
    f2, q = _normalized_chart(f)
    t = q.truncate(2 * N + 2).reversion()          # t as a series in q
    h = g.compose(t) * t.deriv()
    coeffs = []
    for n in range(N + 1):
        coeffs.append(h[2 * n] * double_factorial(2 * n - 1) / f2 ** n)
    return LocalExpansion(coeffs, f2)


def stationary_phase_coeffs(f, g, N):
    """Coefficients for int g exp(i f / hbar): c_n i^n (or (-i)^n), phase exp(+-i pi/4).

    Returned as pairs (real, imag) of Fractions.
    """
    if f[2] == 0:
        raise AsymptoticsError("degenerate critical point")
    sign = 1 if f[2] > 0 else -1
    base = steepest_descent_coeffs(f * sign, g, N)
    out = []
    for n, c in enumerate(base.coeffs):
        k = (sign * n) % 4
        unit = [(1, 0), (0, 1), (-1, 0), (0, -1)][k]
        out.append((c * unit[0], c * unit[1]))
    return LocalExpansion(out, base.curvature, phase_eighths=sign)


def stirling_from_laplace(N):
    """Gamma(s+1) = s^{s+1} e^{-s} sqrt(2 pi / s) sum a_n s^{-n}: a_n via the steepest-descent chart."""
    order = 2 * N + 4
    t = Series.monomial(1, order)
    f = t - (Series.one(order) + t).log()
    return steepest_descent_coeffs(f, Series.one(order), N).coeffs


def stirling_log_gamma(N):
    """Coefficients of log Gamma(z+1) - (z log z - z + log z / 2 + log(2 pi)/2) in powers of 1/z.

    Entry k is the coefficient of z^{-k}, equal to B_{k+1}/(k(k+1)).
    """
    if N < 2:
        raise AsymptoticsError("need N >= 2")
    B = bernoulli(N + 1)
    return Series.from_dict({n - 1: B[n] / (n * (n - 1)) for n in range(2, N + 1)}, N)


def stirling_from_bernoulli(N):
    """a_n as the coefficients of exp(sum B_n u^{n-1}/(n(n-1)))."""
    return list(stirling_log_gamma(N + 1).exp().coeffs[: N + 1])


def log_gamma_series_value(z, N):
    s = stirling_log_gamma(N)
    corr = sum(float(s[k]) * z ** (-k) for k in range(1, N))
    return z * math.log(z) - z + 0.5 * math.log(z) + 0.5 * math.log(2 * math.pi) + corr


def quartic_coefficient(n):
    """c_n for int exp(-(y^2 + hbar y^4)/2) dy = sqrt(2 pi) sum c_n hbar^n."""
    return Fraction((-1) ** n * double_factorial(4 * n - 1), 2 ** n * math.factorial(n))


def quartic_integral(hbar):
    return quadrature(lambda y: math.exp(-(y * y + hbar * y ** 4) / 2), (-math.inf, math.inf), 1e-13)


# ---------------------------------------------------------------- quadrature

class QuadratureError(RuntimeError):
    def __init__(self, msg, estimate):
        super().__init__(msg)
        self.estimate = estimate


def quadrature(fn, domain, tol=1e-12, limit=500, points=None):
    """Adaptive Gauss-Kronrod quadrature (QUADPACK); infinite ends are mapped internally."""
    a, b = domain
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            kw = {"points": points} if points is not None and math.isfinite(a) and math.isfinite(b) else {}
            val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=tol, limit=limit, **kw)
        except integrate.IntegrationWarning as exc:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                val, err = integrate.quad(fn, a, b, epsabs=tol, epsrel=tol, limit=limit)
            if err > 100 * tol * max(1.0, abs(val)):
                raise QuadratureError(str(exc), val)
    return val


def sin_power_integral(n):
    """int_0^pi sin^n by the reduction I_n = (n-1)/n I_{n-2}: returns (rational, has_pi)."""
    if n == 0:
        return Fraction(1), True
    if n == 1:
        return Fraction(2), False
    r, p = sin_power_integral(n - 2)
    return r * Fraction(n - 1, n), p


def laplace_integral(f, g, hbar, c, width=None):
    """hbar^{-1/2} exp(f(c)/hbar) int g(x) exp(-f(x)/hbar) dx, numerically."""
    fc = f(c)
    val = quadrature(lambda x: g(x) * math.exp(-(f(x) - fc) / hbar), (-math.inf, math.inf)
                     if width is None else (c - width, c + width), 1e-14)
    return val / math.sqrt(hbar)


def error_order_slope(exact, coeffs, prefactor, hbars, N):
    """Least-squares slope of log|exact(h) - prefactor sum_{n<N} c_n h^n| against log h."""
    xs, ys = [], []
    for h in hbars:
        approx = prefactor * sum(float(coeffs[n]) * h ** n for n in range(N))
        xs.append(math.log(h))
        ys.append(math.log(abs(exact(h) - approx)))
    return float(np.polyfit(xs, ys, 1)[0])


# ---------------------------------------------------------------- Borel summation

def borel_transform(coeffs):
    """Coefficients a_n / n!."""
    return [Fraction(a) / math.factorial(n) for n, a in enumerate(coeffs)]


def pade(coeffs, L, M):
    """[L/M] Pade approximant (numerator, denominator coefficient lists), q_0 = 1.

    Solved exactly for rational input; if the system is singular the
    denominator degree is lowered until it is not.
    """
    c = [Fraction(x) for x in coeffs]
    if len(c) < L + M + 1:
        raise AsymptoticsError("need %d coefficients" % (L + M + 1))
    while M > 0:
        A = [[c[L + i - j] if L + i - j >= 0 else Fraction(0) for j in range(1, M + 1)]
             for i in range(1, M + 1)]
        if linalg.det(A) != 0:
            break
        M -= 1
    if M == 0:
        return c[: L + 1], [Fraction(1)]
    inv = linalg.inverse(A)
    rhs = [-c[L + i] for i in range(1, M + 1)]
    q = [Fraction(1)] + [sum(inv[i][j] * rhs[j] for j in range(M)) for i in range(M)]
    p = [sum(c[i - j] * q[j] for j in range(0, min(i, M) + 1)) for i in range(L + 1)]
    return p, q


def borel_sum(coeffs, hbar, transform=None, pade_order=None, tol=1e-13):
    """int_0^inf B(hbar u) e^{-u} du with B the Borel transform of the series.

    B is either given in closed form (transform) or continued by a Pade approximant
    of order pade_order = (L, M) built from the coefficients.
    """
    if transform is None:
        bt = borel_transform(coeffs)
        if pade_order is None:
            n = len(bt) - 1
            pade_order = (n // 2, n - n // 2)
        p, q = pade(bt, *pade_order)
        p = np.array([float(x) for x in p])
        q = np.array([float(x) for x in q])
        roots = np.roots(q[::-1]) if len(q) > 1 else []
        for r in roots:
            if abs(r.imag) < 1e-9 and r.real > 0:
                raise AsymptoticsError("continuation pole on the positive axis at %g" % r.real)
        transform = lambda u: np.polyval(p[::-1], u) / np.polyval(q[::-1], u)
    return quadrature(lambda u: transform(hbar * u) * math.exp(-u), (0, math.inf), tol)


def euler_series_closed_form(hbar):
    """hbar^{-1} e^{1/hbar} E_1(1/hbar), the Borel sum of sum (-1)^n n! hbar^n."""
    x = 1.0 / hbar
    return x * special.exp1(x) * math.exp(x)


def euler_borel_transform(u):
    return 1.0 / (1.0 + u)


def quartic_borel_transform(u):
    """Closed form of sum c_n u^n / n! for the quartic coefficients: 2F1(1/4, 3/4; 1; -8u)."""
    return special.hyp2f1(0.25, 0.75, 1.0, -8.0 * u)


def quartic_borel_transform_coeff(n):
    """Taylor coefficient of 2F1(1/4,3/4;1;-8u) computed from Pochhammer symbols."""
    out = Fraction(1)
    for k in range(n):
        out *= Fraction(4 * k + 1, 4) * Fraction(4 * k + 3, 4) / (k + 1) ** 2 * -8
    return out
