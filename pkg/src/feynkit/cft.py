"""Free chiral boson and free chiral fermion in two dimensions.

Boson: the Fock space F_mu is the polynomial ring in X_1, X_2, ... with a_{-n} = X_n,
a_n = n d/dX_n (n > 0) and a_0 = mu.  A basis monomial is a tuple of exponents
(e_1, e_2, ...); its degree is sum j e_j and its norm squared prod j^{e_j} e_j!.

Fermion (Neveu-Schwarz): the exterior algebra on xi_{-1/2}, xi_{-3/2}, ...; a basis
vector is the increasing tuple (r_1 < ... < r_k) of positive half-integers standing
for xi_{-r_1} ... xi_{-r_k} Omega.

Coefficients may be Fractions or Polys (used for symbolic zero modes and
vertex-operator exponents).
"""
import cmath
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .poly import Poly
from .series import bernoulli_number, partitions


class CFTError(ValueError):
    pass


HALF = Fraction(1, 2)


def _nonzero(c):
    return not (c == 0)


class FockVector:
    """Finite linear combination of basis vectors of a graded Fock space."""
    __slots__ = ("terms", "sector")

    def __init__(self, terms=None, sector="boson"):
        self.terms = {k: v for k, v in (terms or {}).items() if _nonzero(v)}
        self.sector = sector

    @classmethod
    def vacuum(cls, sector="boson", c=1):
        return cls({(): c}, sector)

    @classmethod
    def monomial(cls, exps, c=1):
        return cls({_trim(tuple(exps)): c})

    def __add__(self, o):
        out = defaultdict(int, self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v
        return FockVector(out, self.sector)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, c):
        return FockVector({k: c * v for k, v in self.terms.items()}, self.sector)

    __rmul__ = scale

    def __eq__(self, o):
        return (self - o).is_zero()

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((basis_degree(k, self.sector) for k in self.terms), default=None)

    def coefficient(self, key):
        return self.terms.get(key, 0)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("(%s)*%s" % (v, _name(k, self.sector)) for k, v in sorted(self.terms.items()))


def _trim(exps):
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _name(key, sector):
    if sector == "fermion":
        return "".join("xi[-%s]" % r for r in key) + "Omega" if key else "Omega"
    parts = ["X%d^%d" % (j + 1, e) if e > 1 else "X%d" % (j + 1) for j, e in enumerate(key) if e]
    return "*".join(parts) or "1"


def basis_degree(key, sector="boson"):
    if sector == "fermion":
        return sum(key, Fraction(0))
    return sum((j + 1) * e for j, e in enumerate(key))


# ---------------------------------------------------------------- boson modes

def boson_basis(degree):
    """Monomials of exact degree `degree` (one per partition)."""
    out = []

    def rec(n, maxpart, exps):
        if n == 0:
            out.append(_trim(exps))
            return
        for j in range(min(n, maxpart), 0, -1):
            e = list(exps) + [0] * max(0, j - len(exps))
            e[j - 1] += 1
            rec(n - j, j, e)

    rec(degree, degree, [])
    return out


def boson_norm(key):
    """<X^e, X^e> = prod j^{e_j} e_j!."""
    out = 1
    for j, e in enumerate(key):
        out *= (j + 1) ** e * factorial(e)
    return out


def boson_inner(u, v):
    """Hermitian form with monomials orthogonal; coefficients taken real."""
    return sum((c * v.terms[k] * boson_norm(k) for k, c in u.terms.items() if k in v.terms), 0)


def _mode_on_key(n, key, mu):
    """a_n applied to one monomial: list of (key, coeff)."""
    if n == 0:
        return [(key, mu)]
    if n < 0:
        j = -n
        e = list(key) + [0] * max(0, j - len(key))
        e[j - 1] += 1
        return [(tuple(e), 1)]
    if n > len(key) or key[n - 1] == 0:
        return []
    e = list(key)
    c = n * e[n - 1]
    e[n - 1] -= 1
    return [(_trim(e), c)]


def apply_mode(n, v, mu=0):
    """a_n v on F_mu (boson) or xi_n v (fermion; n a half-integer)."""
    if v.sector == "fermion":
        return apply_fermion_mode(Fraction(n), v)
    out = defaultdict(int)
    for k, c in v.terms.items():
        for k2, c2 in _mode_on_key(n, k, mu):
            out[k2] = out[k2] + c * c2
    return FockVector(out, "boson")


def apply_modes(ns, v, mu=0):
    """a_{n_1} ... a_{n_k} v (rightmost acts first)."""
    for n in reversed(ns):
        v = apply_mode(n, v, mu)
    return v


class Virasoro:
    """L_n on F_mu (boson, c = 1) or on the NS fermion space (c = 1/2), memoized on basis vectors.

    Boson: L_n = (1/2) sum_k :a_{n-k} a_k:, so L_0 = mu^2/2 + sum_{k>0} a_{-k} a_k.
    Fermion: L_n = (1/2) sum_r r :xi_{n-r} xi_r: over r in Z + 1/2, so L_0 = sum_{r>0} r xi_{-r} xi_r.
    """

    def __init__(self, sector="boson", mu=0):
        if sector not in ("boson", "fermion"):
            raise CFTError("sector must be boson or fermion")
        self.sector = sector
        self.mu = mu
        self.central_charge = Fraction(1) if sector == "boson" else HALF
        self._cache = {}

    def _on_key(self, n, key):
        ck = (n, key)
        if ck in self._cache:
            return self._cache[ck]
        v = FockVector({key: 1}, self.sector)
        D = basis_degree(key, self.sector)
        out = FockVector({}, self.sector)
        if self.sector == "boson":
            K = int(D) + abs(n) + 1
            for k in range(-K, K + 1):
                i, j = n - k, k
                hi, lo = max(i, j), min(i, j)      # annihilators to the right
                out = out + apply_modes([lo, hi], v, self.mu)
            out = out.scale(HALF)
        else:
            K = D + abs(n) + 1
            r = Fraction(math.floor(-K)) + HALF
            while r <= K:
                i, j = n - r, r
                if i > 0 and j < 0:
                    term = apply_fermion_mode(j, apply_fermion_mode(i, v)).scale(-1)
                else:
                    term = apply_fermion_mode(i, apply_fermion_mode(j, v))
                out = out + term.scale(r)
                r += 1
            out = out.scale(HALF)
        self._cache[ck] = out
        return out

    def L(self, n, v):
        out = FockVector({}, self.sector)
        for k, c in v.terms.items():
            out = out + self._on_key(n, k).scale(c)
        return out

    def basis(self, degree):
        return boson_basis(degree) if self.sector == "boson" else fermion_basis(degree)

    def graded_basis(self, cap):
        """All basis vectors of degree <= cap."""
        out = []
        if self.sector == "boson":
            for d in range(int(cap) + 1):
                out.extend(boson_basis(d))
        else:
            d = Fraction(0)
            while d <= cap:
                out.extend(fermion_basis(d))
                d += HALF
        return out


def virasoro_bracket_residual(n, m, degree_cap, sector="boson", mu=0, vir=None):
    """([L_n, L_m] - (n - m) L_{n+m} - c (n^3 - n)/12 delta_{n,-m}) v over all basis v of degree <= cap.

    Returns the list of non-zero residual vectors (empty when the relation holds).
    """
    vir = vir or Virasoro(sector, mu)
    c = vir.central_charge
    bad = []
    for key in vir.graded_basis(degree_cap):
        v = FockVector({key: 1}, vir.sector)
        r = vir.L(n, vir.L(m, v)) - vir.L(m, vir.L(n, v)) - vir.L(n + m, v).scale(n - m)
        if n == -m:
            r = r - v.scale(c * Fraction(n ** 3 - n, 12))
        if not r.is_zero():
            bad.append((key, r))
    return bad


def virasoro_check(N, degree_cap, sector="boson", mu=0):
    """Count of failing (n, m, basis vector) triples over |n|, |m| <= N."""
    vir = Virasoro(sector, mu)
    fails = 0
    checked = 0
    for n in range(-N, N + 1):
        for m in range(-N, N + 1):
            fails += len(virasoro_bracket_residual(n, m, degree_cap, sector, mu, vir))
            checked += 1
    return fails, checked


def central_values(N, sector="boson"):
    """n -> c' with L_n L_{-n} Omega = c' Omega, for comparison with (n^3 - n)/12 * c."""
    vir = Virasoro(sector)
    out = {}
    for n in range(1, N + 1):
        w = vir.L(n, vir.L(-n, FockVector.vacuum(sector)))
        extra = {k: v for k, v in w.terms.items() if k != ()}
        if extra:
            raise CFTError("L_n L_-n Omega not proportional to Omega")
        out[n] = w.coefficient(())
    return out


def hermitian_residual(n, degree_cap, mu=0):
    """max |<L_n u, v> - <u, L_{-n} v>| over basis u, v of degree <= cap (boson)."""
    vir = Virasoro("boson", mu)
    basis = vir.graded_basis(degree_cap)
    worst = 0
    for ku in basis:
        u = FockVector.monomial(ku)
        Lu = vir.L(n, u)
        for kv in basis:
            v = FockVector.monomial(kv)
            d = boson_inner(Lu, v) - boson_inner(u, vir.L(-n, v))
            worst = max(worst, abs(d))
    return worst


def heisenberg_residual(degree_cap, N=None, mu=0):
    """Count of failures of [a_n, a_m] = n delta_{n,-m} on basis vectors of degree <= cap."""
    N = degree_cap if N is None else N
    fails = 0
    basis = Virasoro("boson", mu).graded_basis(degree_cap)
    for key in basis:
        v = FockVector.monomial(key)
        for n in range(-N, N + 1):
            for m in range(-N, N + 1):
                r = apply_modes([n, m], v, mu) - apply_modes([m, n], v, mu)
                if n == -m:
                    r = r - v.scale(n)
                fails += not r.is_zero()
    return fails


# ---------------------------------------------------------------- fermion modes

def fermion_basis(degree):
    """Increasing tuples of distinct positive half-integers with the given sum."""
    degree = Fraction(degree)
    out = []

    def rec(left, smallest, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        r = smallest
        while r <= left:
            rec(left - r, r + 1, acc + [r])
            r += 1

    rec(degree, HALF, [])
    return out


def apply_fermion_mode(n, v):
    """xi_n on the exterior algebra: creation (wedge in front) for n < 0, contraction for n > 0."""
    n = Fraction(n)
    if n.denominator != 2:
        raise CFTError("NS fermion modes are half-integers")
    out = defaultdict(int)
    r = abs(n)
    for key, c in v.terms.items():
        if n < 0:
            if r in key:
                continue
            pos = sum(1 for x in key if x < r)
            new = tuple(sorted(key + (r,)))
            out[new] = out[new] + c * (-1) ** pos
        else:
            if r not in key:
                continue
            pos = key.index(r)
            new = key[:pos] + key[pos + 1:]
            out[new] = out[new] + c * (-1) ** pos
    return FockVector(out, "fermion")


def clifford_residual(degree_cap, N=Fraction(7, 2)):
    """Failures of xi_n xi_m + xi_m xi_n = delta_{n,-m} on basis vectors of degree <= cap."""
    fails = 0
    vir = Virasoro("fermion")
    modes = [Fraction(k) + HALF for k in range(-int(N + HALF), int(N + HALF))]
    for key in vir.graded_basis(degree_cap):
        v = FockVector({key: 1}, "fermion")
        for n in modes:
            for m in modes:
                r = apply_fermion_mode(n, apply_fermion_mode(m, v)) + apply_fermion_mode(m, apply_fermion_mode(n, v))
                if n == -m:
                    r = r - v
                fails += not r.is_zero()
    return fails


# ---------------------------------------------------------------- OPE

@dataclass
class Field:
    """A chiral field given by its state (state-field correspondence) and conformal weight.

    modes(k, v) applies the k-th mode A_k of A(z) = sum A_k z^{-k-h}.
    """
    name: str
    weight: int
    state: FockVector
    modes: object = field(repr=False, default=None)


def _vir_modes(scale=1, shift=None):
    vir = Virasoro("boson")

    def f(k, v):
        factor = scale if shift is None else -(k + shift)
        return vir.L(k, v).scale(factor)
    return f


def standard_fields():
    """1, a, a', T = (1/2):a^2:, T'."""
    vac = FockVector.vacuum()
    return {
        "1": Field("1", 0, vac, lambda k, v: v if k == 0 else FockVector({})),
        "a": Field("a", 1, FockVector.monomial((1,)), lambda k, v: apply_mode(k, v)),
        "a'": Field("a'", 2, FockVector.monomial((0, 1)), lambda k, v: apply_mode(k, v).scale(-(k + 1))),
        "T": Field("T", 2, FockVector.monomial((2,), HALF), _vir_modes()),
        "T'": Field("T'", 3, FockVector.monomial((1, 1)), _vir_modes(shift=2)),
    }


def _identify(state, fields):
    """Write a state as a rational combination of known field states (single term if possible)."""
    if state.is_zero():
        return {}
    for f in fields.values():
        ref = f.state
        k = next(iter(ref.terms))
        if k in state.terms:
            c = Fraction(state.terms[k]) / ref.terms[k]
            if (state - ref.scale(c)).is_zero():
                return {f.name: c}
    raise CFTError("state %r is not one of the known fields" % state)


def ope_extract(A, B, fields=None):
    """Singular part of A(z)B(w) = sum_j R_j(w)/(z-w)^j: j -> {field name: coefficient}.

    R_j is the field of the state A_{j - h_A} B_{-h_B} Omega.
    """
    fields = fields or standard_fields()
    A, B = fields[A] if isinstance(A, str) else A, fields[B] if isinstance(B, str) else B
    out = {}
    for j in range(1, A.weight + B.weight + 1):
        st = A.modes(j - A.weight, B.state)
        ident = _identify(st, fields)
        if ident:
            out[j] = ident
    return out


def ope_commutator_residual(A, B, N=4, degree_cap=6, fields=None):
    """Check [A_m, B_n] = sum_j binom(m + h_A - 1, j - 1) (R_j)_{m+n} on graded components.

    Returns the number of failing (m, n, basis vector) triples.
    """
    fields = fields or standard_fields()
    Af, Bf = fields[A], fields[B]
    ope = ope_extract(Af, Bf, fields)
    fails = 0
    vir = Virasoro("boson")
    for key in vir.graded_basis(degree_cap):
        v = FockVector.monomial(key)
        for m in range(-N, N + 1):
            for n in range(-N, N + 1):
                lhs = Af.modes(m, Bf.modes(n, v)) - Bf.modes(n, Af.modes(m, v))
                rhs = FockVector({})
                for j, comb_ in ope.items():
                    b = _binom(m + Af.weight - 1, j - 1)
                    for name, c in comb_.items():
                        rhs = rhs + fields[name].modes(m + n, v).scale(b * c)
                fails += not (lhs - rhs).is_zero()
    return fails


def _binom(n, k):
    """Generalized binomial coefficient for integer n (possibly negative)."""
    out = Fraction(1)
    for i in range(k):
        out = out * (n - i) / (i + 1)
    return out


# ---------------------------------------------------------------- characters

@dataclass
class QSeries:
    """q^prefactor * sum_k coeffs[k] q^{k/den}, truncated after len(coeffs) terms."""
    coeffs: list
    prefactor: Fraction = Fraction(0)
    den: int = 1

    def value(self, q):
        return q ** float(self.prefactor) * sum(c * q ** (k / self.den) for k, c in enumerate(self.coeffs))


def boson_character(terms):
    """Tr q^{L_0 - 1/24} on F_0 = q^{-1/24} prod_n (1 - q^n)^{-1}, expanded from the product."""
    c = [1] + [0] * terms
    for n in range(1, terms + 1):
        for k in range(n, terms + 1):
            c[k] += c[k - n]
    return QSeries(c, Fraction(-1, 24))


def fermion_character(terms):
    """NS: q^{-1/48} prod_{r in N - 1/2} (1 + q^r), in powers of q^{1/2} through q^{terms}."""
    N = 2 * terms
    c = [1] + [0] * N
    for r2 in range(1, N + 1, 2):
        for k in range(N, r2 - 1, -1):
            c[k] += c[k - r2]
    return QSeries(c, Fraction(-1, 48), 2)


def fock_dimensions(sector, terms):
    """Dimensions of graded components counted from L_0 eigenvalues of the basis."""
    vir = Virasoro(sector)
    out = defaultdict(int)
    for key in vir.graded_basis(terms):
        v = FockVector({key: 1}, sector)
        Lv = vir.L(0, v)
        ev = Lv.coefficient(key)
        if not (Lv - v.scale(ev)).is_zero():
            raise CFTError("basis vector is not an L_0 eigenvector")
        out[ev] += 1
    return dict(out)


def distinct_odd_partitions(n):
    """Partitions of n into distinct odd parts (counting oracle for the NS character in q^{1/2})."""
    @lru_cache(maxsize=None)
    def rec(left, smallest):
        if left == 0:
            return 1
        total = 0
        k = smallest
        while k <= left:
            total += rec(left - k, k + 2)
            k += 2
        return total
    return rec(n, 1)


def zeta_minus_one():
    """zeta(-1) from the functional equation at s = 2: 2 (2 pi)^{-2} cos(pi) Gamma(2) zeta(2), with zeta(2)/pi^2 = 1/6."""
    zeta2_over_pi2 = Fraction(1, 6)
    return 2 * Fraction(1, 4) * (-1) * factorial(1) * zeta2_over_pi2


def zeta_negative_odd(g):
    """zeta(1 - 2g) = -B_{2g}/(2g)."""
    return -bernoulli_number(2 * g) / (2 * g)


def eta(tau, tol=1e-17):
    """Dedekind eta q^{1/24} prod (1 - q^n), q = e^{2 pi i tau}, Im tau > 0."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise CFTError("need Im tau > 0")
    q = cmath.exp(2j * math.pi * tau)
    out = cmath.exp(2j * math.pi * tau / 24)
    n = 1
    while True:
        qn = q ** n
        out *= 1 - qn
        if abs(qn) < tol:
            return out
        n += 1


def eta_modular_residual(tau):
    """|eta(-1/tau) - sqrt(-i tau) eta(tau)| / |eta(-1/tau)|."""
    tau = complex(tau)
    lhs = eta(-1 / tau)
    rhs = cmath.sqrt(-1j * tau) * eta(tau)
    return abs(lhs - rhs) / abs(lhs)


def eta_abs_residual(tau):
    """||eta(-1/tau)| - sqrt|tau| |eta(tau)|| relative."""
    tau = complex(tau)
    a = abs(eta(-1 / tau))
    return abs(a - math.sqrt(abs(tau)) * abs(eta(tau))) / a


def boson_partition_function(tau):
    """(Im tau)^{-1/2} |eta(tau)|^{-2}: the noncompact boson with its zero-mode factor."""
    tau = complex(tau)
    return tau.imag ** -0.5 / abs(eta(tau)) ** 2


def circle_theta(r2, tau, K=None):
    """theta_r(tau, taubar) = sum_{l,N} exp(-pi (l^2/r^2 + N^2 r^2) Im tau + 2 pi i l N Re tau); r2 = r^2."""
    tau = complex(tau)
    r2 = float(r2)
    y = tau.imag
    if K is None:
        K = int(math.sqrt(40 / (math.pi * y) * max(r2, 1 / r2))) + 3
    total = 0j
    for l in range(-K, K + 1):
        for N in range(-K, K + 1):
            total += cmath.exp(-math.pi * (l * l / r2 + N * N * r2) * y + 2j * math.pi * l * N * tau.real)
    return total.real


def circle_partition_function(r2, tau):
    return circle_theta(r2, tau) / abs(eta(tau)) ** 2


def circle_theta_terms(r2, K):
    """Multiset of (Im tau coefficient l^2/r^2 + N^2 r^2, Re tau coefficient l N) over |l|, |N| <= K, exact."""
    r2 = Fraction(r2)
    out = defaultdict(int)
    for l in range(-K, K + 1):
        for N in range(-K, K + 1):
            out[(l * l / r2 + N * N * r2, l * N)] += 1
    return dict(out)


def t_duality_exact(r2, K):
    """theta_r and theta_{1/r} have identical term multisets (under (l, N) -> (N, l))."""
    return circle_theta_terms(r2, K) == circle_theta_terms(1 / Fraction(r2), K)


def circle_theta_modular_residual(r2, tau):
    """|theta_r(-1/tau) - |tau| theta_r(tau)| relative."""
    tau = complex(tau)
    a = circle_theta(r2, -1 / tau)
    return abs(a - abs(tau) * circle_theta(r2, tau)) / abs(a)


# ---------------------------------------------------------------- vertex operators

def vertex_exponents(lams, mu):
    """Exponent data of <mu + sum lam | X(lam_1, z_1) ... X(lam_n, z_n) | mu>.

    Returns ({j: lam_j mu} for the z_j factors, {(j, k): lam_j lam_k} for (z_j - z_k), target weight).
    """
    zs = {j: l * mu for j, l in enumerate(lams)}
    pairs = {(j, k): lams[j] * lams[k] for j in range(len(lams)) for k in range(j + 1, len(lams))}
    return zs, pairs, mu + sum(lams)


def vertex_correlator(lams, mu, zs, target=None):
    """prod z_j^{lam_j mu} prod_{j<k} (z_j - z_k)^{lam_j lam_k} (principal branches, |z_1| > |z_2| > ...).

    Zero (with flag False) when target is given and differs from mu + sum lam.
    """
    ez, ep, weight = vertex_exponents(lams, mu)
    if target is not None and target != weight:
        return 0.0, False
    val = 1 + 0j
    for j, e in ez.items():
        val *= complex(zs[j]) ** e if e else 1
    for (j, k), e in ep.items():
        # expand around |z_k/z_j| < 1: z_j^e (1 - z_k/z_j)^e
        val *= complex(zs[j]) ** e * (1 - complex(zs[k]) / complex(zs[j])) ** e
    return val, True


def two_point_binomial(order):
    """Coefficients of (1 - t)^s = sum_k binom(s, k) (-t)^k as Polys in the symbol s = lam*nu."""
    s = Poly.var("s")
    out = [Poly.const(1)]
    term = Poly.const(1)
    for k in range(1, order + 1):
        term = term * (s - (k - 1)) * Fraction(-1, k)
        out.append(term)
    return out


def _poly_exp_operator(apply_term, v, order, degree_of):
    """exp(O) v = sum O^k v/k! truncated when the grading exceeds `order`."""
    out = v
    term = v
    for k in range(1, 2 * order + 2):
        term = apply_term(term).scale(Fraction(1, k))
        term = FockVector({key: c for key, c in term.terms.items() if degree_of(key, c) <= order})
        if term.is_zero():
            break
        out = out + term
    return out


def two_point_mode_expansion(order):
    """Vacuum coefficient of e^{-lam sum a_n z^{-n}/n} e^{nu sum a_{-n} w^n/n} Omega, as Polys in t = w/z.

    The creation exponential is built mode by mode with coefficients in Q[lam, nu, t]; the annihilation
    exponential is then applied and the Omega component read off.  Returns a list of coefficients
    of t^0..t^order, each a Poly in lam and nu.
    """
    lam, nu, t = Poly.var("lam"), Poly.var("nu"), Poly.var("t")

    def tdeg(c):
        return max((e for k in c.terms for s, e in k if s == "t"), default=0)

    def create(v):
        out = FockVector({})
        for n in range(1, order + 1):
            out = out + apply_mode(-n, v).scale(nu * t ** n * Fraction(1, n))
        return out

    def annihilate(v):
        out = FockVector({})
        for n in range(1, order + 1):
            out = out + apply_mode(n, v).scale(lam * Fraction(-1, n))
        return out

    # t-degree of a term equals its Fock degree after creation; drop beyond `order`
    state = _poly_exp_operator(create, FockVector({(): Poly.const(1)}), order,
                               lambda key, c: basis_degree(key))
    vac = _poly_exp_operator(annihilate, state, 10 ** 6, lambda key, c: 0)
    c0 = vac.coefficient(())
    if c0 == 0:
        c0 = Poly.const(0)
    coeffs = [Poly() for _ in range(order + 1)]
    for mono, val in c0.terms.items():
        d = dict(mono).get("t", 0)
        rest = tuple((s, e) for s, e in mono if s != "t")
        if d <= order:
            coeffs[d] = coeffs[d] + Poly({rest: val})
    return coeffs


def two_point_check(order=8):
    """Mode expansion equals the binomial series of (1 - w/z)^{lam nu} through t^order, exactly."""
    modes = two_point_mode_expansion(order)
    binom = two_point_binomial(order)
    lam, nu = Poly.var("lam"), Poly.var("nu")
    ok = []
    for k in range(order + 1):
        # substitute s = lam*nu
        sub = Poly()
        for mono, c in binom[k].terms.items():
            e = dict(mono).get("s", 0)
            sub = sub + (lam * nu) ** e * c
        ok.append(sub == modes[k])
    return ok


def braiding_phase(lam, nu):
    """e^{pi i lam nu}: X(lam, z) X(nu, w) = e^{pi i lam nu} X(nu, w) X(lam, z) after continuation."""
    return cmath.exp(1j * math.pi * lam * nu)


def braiding_check(lam, nu, z, w):
    """Continue (z - w)^{lam nu} to (w - z)^{lam nu} along the upper half circle; compare with the phase."""
    z, w = complex(z), complex(w)
    d = z - w
    # rotating w around z by +pi multiplies (z - w) by e^{i pi}
    continued = abs(d) ** (lam * nu) * cmath.exp(1j * lam * nu * (cmath.phase(d) + math.pi))
    direct = abs(d) ** (lam * nu) * cmath.exp(1j * lam * nu * cmath.phase(d))
    return abs(continued / direct - braiding_phase(lam, nu))


def vertex_spin(lam):
    """L_0 eigenvalue of the highest weight vector of F_lam: lam^2/2."""
    vir = Virasoro("boson", lam)
    v = FockVector.vacuum()
    return vir.L(0, v).coefficient(())
