"""Power counting and one-loop integrals for scalar field theory.

Degrees of divergence and the renormalizability classification of Lagrangian
monomials, the Feynman parameter identity, and the phi^3 self-energy bubble in
d = 2 (closed form) and d = 4 (cutoff plus logarithmic mass counterterm).
"""
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from scipy import integrate

from .asymptotics import quadrature
from .graphs import Multigraph, Profile, enumerate_multigraphs


class RenormError(ValueError):
    pass


SUPER, CRITICAL, NON = "super-renormalizable", "critical", "non-renormalizable"


@dataclass(frozen=True)
class Monomial:
    """phi^bosons psi^fermions with `derivatives` derivatives in total."""
    bosons: int = 0
    fermions: int = 0
    derivatives: int = 0

    def dimension(self, d):
        """Classical scaling dimension [Phi]: [phi] = (d-2)/2, [psi] = (d-1)/2, [d] = 1."""
        d = Fraction(d)
        return self.bosons * (d - 2) / 2 + self.fermions * (d - 1) / 2 + self.derivatives

    def degree(self, d):
        """D(Phi) = [Phi] - d, the contribution of a fully internal vertex to D(Gamma)."""
        return self.dimension(d) - d

    def __mul__(self, o):
        return Monomial(self.bosons + o.bosons, self.fermions + o.fermions, self.derivatives + o.derivatives)

    def is_quadratic(self):
        return self.bosons + self.fermions == 2

    def is_kinetic(self):
        return (self.bosons == 2 and self.fermions == 0 and self.derivatives == 2) or \
               (self.fermions == 2 and self.bosons == 0 and self.derivatives == 1)

    def __str__(self):
        parts = []
        free_b = self.bosons
        derivs = self.derivatives
        dphi = min(derivs, free_b)
        if self.fermions == 0 and derivs and derivs <= free_b:
            free_b -= dphi
        else:
            dphi = 0
        if free_b:
            parts.append("phi" if free_b == 1 else "phi^%d" % free_b)
        if dphi:
            parts.append("(dphi)" if dphi == 1 else "(dphi)^%d" % dphi)
        if self.fermions:
            parts.append("psi" if self.fermions == 1 else "psi^%d" % self.fermions)
        if derivs and not dphi:
            parts.append("d" if derivs == 1 else "d^%d" % derivs)
        return " ".join(parts) or "1"


_FACTOR = re.compile(r"\(?\s*(d\s*)?(phi|psi)\s*\)?\s*(?:\^\s*(\d+))?|(d)(?:\^(\d+))?")


def parse_term(text):
    """Monomial from text such as 'phi^4', '(dphi)^2 phi', 'phi psi^2', 'psi dpsi', 'psi^4'."""
    s = text.replace("*", " ").strip()
    if not s:
        raise RenormError("empty term")
    b = f = nd = 0
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _FACTOR.match(s, pos)
        if not m or m.end() == pos:
            raise RenormError("cannot parse %r near %r" % (text, s[pos:]))
        if m.group(2):
            k = int(m.group(3) or 1)
            if m.group(2) == "phi":
                b += k
            else:
                f += k
            if m.group(1):
                nd += k
        else:
            nd += int(m.group(5) or 1)
        pos = m.end()
    return Monomial(b, f, nd)


def classify_term(term, d):
    if isinstance(term, str):
        term = parse_term(term)
    D = term.degree(d)
    return SUPER if D < 0 else CRITICAL if D == 0 else NON


def classify(terms, d):
    """Per-term classes and the verdict for the whole Lagrangian.

    Kinetic terms ((dphi)^2, psi dpsi) are skipped in the verdict: super-renormalizable when every
    other term is, critical when the worst is D = 0 and some interaction (non-quadratic term)
    attains it, non-renormalizable when some term has D > 0.
    """
    mons = [parse_term(t) if isinstance(t, str) else t for t in terms]
    per = [(str(m), m.degree(d), classify_term(m, d)) for m in mons]
    rest = [m for m in mons if not m.is_kinetic()]
    if any(m.degree(d) > 0 for m in rest):
        verdict = NON
    elif any(m.degree(d) == 0 and not m.is_quadratic() for m in rest):
        verdict = CRITICAL
    elif all(m.degree(d) < 0 for m in rest):
        verdict = SUPER
    else:
        verdict = CRITICAL
    return per, verdict


def max_scalar_power(d):
    """Largest n with phi^n (super-)renormalizable: n <= 2d/(d-2); None means every n (d = 2)."""
    if d <= 2:
        return None
    n = 2
    while Monomial(n + 1).degree(d) <= 0:
        n += 1
    return n


def scalar_table(dims=range(2, 9)):
    """d -> description of the most general (super-)renormalizable self-interaction."""
    out = {}
    for d in dims:
        n = max_scalar_power(d)
        if n is None:
            derivative_ok = all(Monomial(k, 0, 2).degree(d) <= 0 for k in range(2, 12))
            out[d] = "g(phi)(dphi)^2 + U(phi)" if derivative_ok else "U(phi)"
        elif n < 3:
            out[d] = "none"
        else:
            out[d] = "P_%d(phi)" % n
    return out


def fermion_table(dims=range(2, 7), kmax=4, nmax=4):
    """d -> list of (super-)renormalizable non-quadratic terms among psi^{2k} and phi^n psi^2."""
    out = {}
    for d in dims:
        ok = []
        for k in range(2, kmax + 1):
            if Monomial(0, 2 * k).degree(d) <= 0:
                ok.append(str(Monomial(0, 2 * k)))
        for n in range(1, nmax + 1):
            if Monomial(n, 2).degree(d) <= 0:
                ok.append(str(Monomial(n, 2)))
        out[d] = ok
    return out


# ---------------------------------------------------------------- graphs

def degree_of_divergence(graph, d, monomials=None):
    """D(Gamma) = d - k(d-2)/2 + sum over vertices of D(Phi).

    graph is a Multigraph (legs are its external vertices) or a tuple (k, [Monomial, ...]).
    monomials maps vertex kinds to Monomials; default phi^valency.
    """
    if isinstance(graph, Multigraph):
        k = graph.legs
        verts = [_monomial_of(kind, monomials) for kind in graph.kinds]
    else:
        k, verts = graph
    d = Fraction(d)
    return d - k * (d - 2) / 2 + sum((m.degree(d) for m in verts), Fraction(0))


def _monomial_of(kind, monomials):
    if monomials and kind in monomials:
        return monomials[kind]
    if monomials and kind[1] in monomials:
        return monomials[kind[1]]
    return Monomial(kind[0])


def degree_by_counting(graph, d, monomials=None):
    """Power counting on the momentum integral: d * loops - 2 * internal edges + derivatives.

    Only bosonic vertices; legs carry external propagators which are not integrated.
    """
    verts = [_monomial_of(kind, monomials) for kind in graph.kinds]
    if any(m.fermions for m in verts):
        raise RenormError("momentum counting here is for bosonic vertices only")
    if len(graph.components()) != 1:
        raise RenormError("connected graphs only")
    e = len(graph.internal_edges())
    v = len(graph.kinds)
    N = sum(m.derivatives for m in verts)
    return (d - 2) * e - d * v + d + N


def divergent_census(valency, d, max_vertices, max_legs):
    """Connected graphs with D >= 0, grouped by (vertices, legs), for a single phi^valency coupling."""
    out = {}
    for v in range(1, max_vertices + 1):
        for k in range(0, max_legs + 1):
            if (valency * v + k) % 2:
                continue
            D = degree_of_divergence((k, [Monomial(valency)] * v), d)
            if D < 0:
                continue
            classes = enumerate_multigraphs(Profile({valency: v}, k))
            conn = [g for g in classes.values() if g.is_connected()]
            for g in conn:
                if degree_by_counting(g, d) != D:
                    raise RenormError("power counting routes disagree")
            if conn:
                out[(v, k)] = (int(D), len(conn))
    return out


def one_loop_polygon_degree(k, d):
    """D of the k-gon with one phi^3 leg per corner: d - 2k."""
    corners = [Monomial(3)] * k
    return degree_of_divergence((k, corners), d)


# ---------------------------------------------------------------- Feynman parameters

def simplex_integral(f, n, tol=1e-12):
    """int over {y_i >= 0, sum y_i = 1} of f(y), Lebesgue measure in (y_1..y_{n-1})."""
    if n == 1:
        return f([1.0])

    def ranges(i):
        def r(*later):
            return (0.0, 1.0 - sum(later))
        return r

    def g(*ys):
        ys = list(ys)
        return f(ys + [1.0 - sum(ys)])

    opts = {"epsabs": tol, "epsrel": tol, "limit": 200}
    val, _ = integrate.nquad(g, [ranges(i) for i in range(n - 1)], opts=[opts] * (n - 1))
    return val


def feynman_parameter_integral(a, tol=1e-12):
    """(n-1)! int_simplex dy / (sum a_i y_i)^n; equal to 1/prod a_i.

    The (n-1)! turns the Lebesgue measure into the probability measure on the simplex.
    """
    n = len(a)
    if any(x <= 0 for x in a):
        raise RenormError("need a_i > 0")
    raw = simplex_integral(lambda y: 1.0 / sum(ai * yi for ai, yi in zip(a, y)) ** n, n, tol)
    return math.factorial(n - 1) * raw


def feynman_parameter_check(a, tol=1e-12):
    """|(n-1)! int_simplex dy/(a.y)^n - 1/prod a|."""
    return abs(feynman_parameter_integral(a, tol) - 1.0 / math.prod(a))


def feynman_parameter_symmetry(a, tol=1e-12):
    """Largest spread of the parameter integral over permutations of a."""
    vals = [feynman_parameter_integral(list(p), tol) for p in set(permutations(a))]
    return max(vals) - min(vals)


# ---------------------------------------------------------------- one-loop bubble

def arccoth(x):
    if x <= 1:
        raise RenormError("arccoth needs x > 1")
    return 0.5 * math.log((x + 1) / (x - 1))


def _x(p, m):
    return math.sqrt(4 * m * m / (p * p) + 1)


def sphere_area(d):
    """Area of the unit sphere in R^d."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def bubble_feynman_parameter(p, m, d=2):
    """C_d int_0^1 dy int_0^oo r^{d-1} dr/(r^2 + M^2)^2 with M^2 = y(1-y)p^2 + m^2 (d = 2, 3)."""
    if d not in (2, 3):
        raise RenormError("the bubble converges only for d < 4")
    Cd = sphere_area(d)

    def inner(y):
        M2 = y * (1 - y) * p * p + m * m
        return quadrature(lambda r: r ** (d - 1) / (r * r + M2) ** 2, (0, math.inf), 1e-13)

    return Cd * quadrature(inner, (0, 1), 1e-12)


def bubble_closed_form(p, m, d=2):
    """int d^d q / ((q^2 + m^2)((p - q)^2 + m^2)) for d = 2, 3.

    d=2: 4 pi arccoth(x)/(p^2 x) with x = sqrt(4m^2/p^2 + 1); p -> 0 limit pi/m^2.
    d=3: (2 pi^2/p) arctan(p/(2m)); p -> 0 limit pi^2/m.
    """
    if d == 2:
        if p == 0:
            return math.pi / (m * m)
        x = _x(p, m)
        return 4 * math.pi * arccoth(x) / (p * p * x)
    if d == 3:
        if p == 0:
            return math.pi ** 2 / m
        return 2 * math.pi ** 2 / abs(p) * math.atan(abs(p) / (2 * m))
    raise RenormError("closed form only for d = 2, 3")


def bubble_momentum_quadrature(p, m, d=2, tol=1e-11):
    """Direct integral over q without Feynman parameters (radial times angular)."""
    if d == 2:
        def radial(r):
            A = r * r + p * p + m * m
            B = 2 * r * abs(p)
            # (1/2pi) int dtheta/(A - B cos theta) = 1/sqrt(A^2 - B^2)
            return 2 * math.pi * r / ((r * r + m * m) * math.sqrt((A - B) * (A + B)))
        return quadrature(radial, (0, math.inf), tol)
    if d == 3:
        def radial(r):
            A = r * r + p * p + m * m
            B = 2 * r * abs(p)
            ang = 2.0 / A if B == 0 else math.log((A + B) / (A - B)) / B
            return 2 * math.pi * r * r / (r * r + m * m) * ang
        return quadrature(radial, (0, math.inf), tol)
    raise RenormError("direct quadrature only for d = 2, 3")


def bubble(p, m, d=2):
    return bubble_closed_form(p, m, d)


def renormalized_bubble_d4(p, m):
    """I(p) = lim (int_{|q|<=L} d^4q/((q^2+m^2)((p-q)^2+m^2)) - 2 pi^2 log(L/m)) = 2 pi^2 (1/2 - x arccoth x)."""
    if p == 0:
        return -math.pi ** 2
    x = _x(p, m)
    return 2 * math.pi ** 2 * (0.5 - x * arccoth(x))


def renormalized_bubble_d4_parametric(p, m):
    """Same limit via Feynman parameters: int_0^1 2 pi^2 (log m - (1 + log M^2)/2) dy."""
    f = lambda y: 2 * math.pi ** 2 * (math.log(m) - 0.5 * (1 + math.log(y * (1 - y) * p * p + m * m)))
    return quadrature(f, (0, 1), 1e-13)


def cutoff_bubble_d4(p, m, cutoff, tol=1e-12):
    """int over the ball |q| <= cutoff in R^4 minus 2 pi^2 log(cutoff/m).

    The angular average over S^3 of 1/(A - B cos) is 2(A - sqrt(A^2 - B^2))/B^2 = 2/(A + sqrt(A^2 - B^2)).
    """
    def radial(r):
        A = r * r + p * p + m * m
        B = 2 * r * abs(p)
        return 2 * math.pi ** 2 * r ** 3 / (r * r + m * m) * 2 / (A + math.sqrt((A - B) * (A + B)))
    pts = [x for x in (abs(p), m) if 0 < x < cutoff]
    val = quadrature(radial, (0, cutoff), tol, points=pts or None)
    return val - 2 * math.pi ** 2 * math.log(cutoff / m)


@dataclass
class CutoffSequence:
    cutoffs: list
    values: list
    limit: float

    @property
    def errors(self):
        return [abs(v - self.limit) for v in self.values]

    def monotone(self):
        e = self.errors
        return all(e[i + 1] < e[i] for i in range(len(e) - 1))

    def scaled(self):
        """Error times cutoff: bounded (indeed shrinking) for an O(1/cutoff) approach."""
        return [e * c for e, c in zip(self.errors, self.cutoffs)]


def cutoff_sequence(p, m, factors=(10, 20, 40, 80)):
    cuts = [f * m for f in factors]
    return CutoffSequence(cuts, [cutoff_bubble_d4(p, m, c) for c in cuts], renormalized_bubble_d4(p, m))
