"""Quantum mechanics as 0+1 dimensional field theory.

Euclidean propagators on the line and the circle, exact position-space
amplitudes of Feynman graphs, momentum-space amplitudes, partition functions,
the operator side of the Feynman-Kac formula, circle-valued correlators,
the spectrum of a two-step periodic potential, WKB and the Weyl law.

Position-space amplitudes use the rules: a leg i sits at time t_i, an internal
vertex j at a time s_j integrated over the line, every edge carries
G(x - y) = e^{-m|x-y|}/(2m) and every internal vertex its coupling.
"""
import cmath
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
from scipy import integrate, optimize

from .asymptotics import quadrature
from .expsum import ExpSum
from .gaussian import matching_sum, pfaffian
from .graphs import Multigraph
from .series import Series


class QMError(ValueError):
    pass


class InfraredDivergence(QMError):
    pass


# ---------------------------------------------------------------- propagators

@dataclass
class Propagator:
    kind: str = "line"          # line | circle | massless-circle
    m: float = 1.0
    L: float = None

    def __post_init__(self):
        if self.kind not in ("line", "circle", "massless-circle", "massless-line"):
            raise QMError("unknown propagator kind %r" % self.kind)
        if self.kind == "massless-line":
            raise InfraredDivergence(
                "the massless propagator on the line, -|t|/2 + C, does not decay; "
                "amplitudes with internal vertices diverge at large times")
        if self.kind == "line" and not self.m > 0:
            raise QMError("the line propagator needs m > 0")
        if self.kind in ("circle", "massless-circle") and not (self.L and self.L > 0):
            raise QMError("circle propagators need L > 0")
        if self.kind == "circle" and not self.m > 0:
            raise QMError("use massless-circle for m = 0")

    def __call__(self, t):
        return green(self.kind, self.m, self.L, t)


def green(kind, m=1.0, L=None, t=0.0):
    """Green's function of -d^2/dt^2 + m^2 (zero mode removed for massless-circle)."""
    if kind == "line":
        if not m > 0:
            raise QMError("the line propagator needs m > 0")
        return math.exp(-m * abs(t)) / (2 * m)
    if kind == "massless-line":
        raise InfraredDivergence("no decaying Green's function for m = 0 on the line")
    if not (L and L > 0):
        raise QMError("circle propagators need L > 0")
    t = t % L
    if kind == "circle":
        return (math.exp(-m * (t - L / 2)) + math.exp(-m * (L / 2 - t))) / (
            2 * m * (math.exp(m * L / 2) - math.exp(-m * L / 2)))
    if kind == "massless-circle":
        return (t - L / 2) ** 2 / (2 * L) - L / 24
    raise QMError("unknown propagator kind %r" % kind)


def green_circle_images(m, L, t, terms=60):
    """G_L as the image sum sum_k G(t - kL)."""
    return sum(green("line", m, None, t - k * L) for k in range(-terms, terms + 1))


def fourier_propagator(t, m):
    """(1/2pi) int e^{-iEt}/(E^2+m^2) dE, numerically (cosine-weighted quadrature)."""
    if t == 0:
        return quadrature(lambda E: 1 / (E * E + m * m), (-math.inf, math.inf), 1e-13) / (2 * math.pi)
    val, _ = integrate.quad(lambda E: 1 / (E * E + m * m), 0, math.inf, weight="cos", wvar=abs(t))
    return val / math.pi


# ---------------------------------------------------------------- position space

def _vertex_factor(graph, couplings):
    out = Fraction(1)
    for k in graph.kinds:
        if couplings is None:
            c = 1
        elif isinstance(couplings, dict):
            c = couplings.get(k, couplings.get(k[0] if isinstance(k, tuple) else k, 1))
        else:
            c = couplings
        out *= Fraction(c)
    return out


def _check_legs(graph):
    for comp in graph.components():
        if not any(v < graph.legs for v in comp):
            raise InfraredDivergence(
                "a component without legs integrates a constant such as G(0)^2 over "
                "the whole line and diverges")


def _cells(n_ext, n_int):
    """All merges of the fixed external chain with orderings of the internal vertices.

    Yields sequences (ascending time) of ('e', i) / ('s', j), where the external
    chain is given in ascending order positions 0..n_ext-1.
    """
    total = n_ext + n_int
    for perm in permutations(range(n_int)):
        for slots in combinations(range(total), n_int):
            seq, ie, ii = [], 0, 0
            for pos in range(total):
                if ii < n_int and slots[ii] == pos:
                    seq.append(("s", perm[ii]))
                    ii += 1
                else:
                    seq.append(("e", ie))
                    ie += 1
            yield seq


def position_amplitude(graph, m, couplings=None, order=None):
    """F_Gamma as an exact ExpSum in the leg times t0, t1, ...

    Valid on the region t_{order[0]} >= t_{order[1]} >= ... (default: leg 0 latest).
    m must be rational.
    """
    graph.check()
    _check_legs(graph)
    m = Fraction(m)
    n = graph.legs
    V = len(graph.kinds)
    order = list(range(n)) if order is None else list(order)
    ascending = list(reversed(order))            # external chain, earliest first
    name = {}
    for i in range(n):
        name[i] = "t%d" % i
    for j in range(V):
        name[n + j] = "s%d" % j
    half = Fraction(1) / (2 * m)
    total = ExpSum()
    for seq in _cells(n, V):
        rank, chain = {}, []
        for r, (kind, idx) in enumerate(seq):
            v = ascending[idx] if kind == "e" else n + idx
            rank[v] = r
            chain.append(v)
        integrand = ExpSum.const(1)
        for a, b in graph.edges:
            if a == b:
                integrand = integrand * half
                continue
            hi, lo = (a, b) if rank[a] > rank[b] else (b, a)
            integrand = integrand * ExpSum.term(half, None, {name[hi]: -m, name[lo]: m})
        while any(v >= n for v in chain):
            pos = next(i for i, v in enumerate(chain) if v >= n)
            lower = name[chain[pos - 1]] if pos > 0 else -math.inf
            upper = name[chain[pos + 1]] if pos + 1 < len(chain) else math.inf
            integrand = integrand.integrate(name[chain[pos]], lower, upper)
            chain.pop(pos)
        total = total + integrand
    return total * _vertex_factor(graph, couplings)


def amplitude_at(graph, times, m, couplings=None):
    """Numerical value of F_Gamma at given leg times (the exact form for their ordering)."""
    order = sorted(range(len(times)), key=lambda i: -times[i])
    expr = position_amplitude(graph, m, couplings, order)
    return expr.evaluate({"t%d" % i: t for i, t in enumerate(times)})


def amplitude_quadrature(graph, times, m, couplings=None, tol=1e-11):
    """Oracle: integrate the product of propagators over the internal times numerically."""
    _check_legs(graph)
    n, V = graph.legs, len(graph.kinds)
    m = float(m)
    factor = float(_vertex_factor(graph, couplings))

    def integrand(*s):
        pos = list(times) + list(s)
        out = 1.0
        for a, b in graph.edges:
            out *= math.exp(-m * abs(pos[a] - pos[b])) / (2 * m)
        return out

    if V == 0:
        return factor * integrand()
    pts = sorted(set(float(t) for t in times))
    lo, hi = pts[0] - 40.0 / m, pts[-1] + 40.0 / m
    opts = [{"points": pts, "limit": 400, "epsabs": tol, "epsrel": tol}] * V
    val, _ = integrate.nquad(integrand, [(lo, hi)] * V, opts=opts)
    return factor * val


def correlator_weight(graph, hbar=1):
    """hbar^{b} / |Aut| with b = #edges - #internal vertices."""
    return Fraction(hbar) ** graph.loop_number() / graph.aut_order()


def tadpole_graph():
    """Two legs joined through a quartic vertex carrying a self-loop."""
    return Multigraph([(4, "g")], 2, [(0, 2), (1, 2), (2, 2)])


def tadpole_closed_form(m, g=1):
    """(g/16m^4) e^{-m(t0-t1)} (1 + m(t0-t1)) on t0 >= t1: the order-g correction to <q q>."""
    m, g = Fraction(m), Fraction(g)
    c = g / (16 * m ** 4)
    return (ExpSum.term(c, None, {"t0": -m, "t1": m})
            + ExpSum.term(c * m, {"t0": 1}, {"t0": -m, "t1": m})
            - ExpSum.term(c * m, {"t1": 1}, {"t0": -m, "t1": m}))


def free_two_point(m, hbar=1):
    """hbar G(t0 - t1) on t0 >= t1, as an ExpSum."""
    m = Fraction(m)
    return ExpSum.term(Fraction(hbar) / (2 * m), None, {"t0": -m, "t1": m})


def cross_graph():
    """Four legs on one quartic vertex."""
    return Multigraph([(4, "g")], 4, [(0, 4), (1, 4), (2, 4), (3, 4)])


# ---------------------------------------------------------------- momentum space

def _edge_momenta(graph):
    """Linear forms {symbol: coeff} for every edge, symbols 'E<i>' and 'Q<k>'.

    Legs are oriented inward, internal edges a -> b as stored, non-tree internal
    edges get free loop momenta.  Returns (forms per edge index, number of loops).
    """
    n = graph.legs
    internal = list(graph.internal())
    parent = {internal[0]: None} if internal else {}
    tree_edge = {}
    adj = defaultdict(list)
    for idx, (a, b) in enumerate(graph.edges):
        if a >= n and b >= n and a != b:
            adj[a].append((b, idx))
            adj[b].append((a, idx))
    order = []
    for root in internal:
        if root in parent and root != internal[0]:
            continue
        parent.setdefault(root, None)
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for u, idx in adj[v]:
                if u not in parent:
                    parent[u] = v
                    tree_edge[u] = idx
                    stack.append(u)
    forms = {}
    inflow = defaultdict(lambda: defaultdict(Fraction))
    loops = 0
    tree_idx = set(tree_edge.values())
    for idx, (a, b) in enumerate(graph.edges):
        if a < n and b < n:
            forms[idx] = {"E%d" % a: Fraction(1)}
            continue
        if a < n or b < n:
            leg, v = (a, b) if a < n else (b, a)
            forms[idx] = {"E%d" % leg: Fraction(1)}
            inflow[v]["E%d" % leg] += 1
            continue
        if idx in tree_idx:
            continue
        q = "Q%d" % loops
        loops += 1
        forms[idx] = {q: Fraction(1)}
        if a != b:
            inflow[a][q] -= 1      # leaves a
            inflow[b][q] += 1      # enters b
    for v in reversed(order):
        if parent.get(v) is None:
            # what reaches the root is the total external energy of its component
            left = {k: c for k, c in inflow[v].items() if c}
            if any(k.startswith("Q") for k in left) or len(set(left.values())) > 1:
                raise QMError("inconsistent momentum routing at vertex %d" % v)
            continue
        idx = tree_edge[v]
        a, b = graph.edges[idx]
        # momentum on the tree edge oriented a -> b; v must send out its inflow
        sign = 1 if a == v else -1
        forms[idx] = {k: sign * c for k, c in inflow[v].items() if c}
        u = parent[v]
        for k, c in inflow[v].items():
            inflow[u][k] += c
    return forms, loops


def momentum_amplitude(graph, energies, m, couplings=None, amputated=False, method="auto", tol=1e-12):
    """Coefficient of delta(sum E) dE in the momentum-space amplitude (dQ per loop momentum).

    Trees need no integration; one loop is done by residues (quadrature if poles
    collide); more loops by nested quadrature.
    """
    if abs(sum(energies)) > 1e-12 * max(1.0, max(abs(e) for e in energies)):
        raise QMError("energies must sum to zero (first Kirchhoff law)")
    graph.check()
    for comp in graph.components():
        legs = [v for v in comp if v < graph.legs]
        if abs(sum(energies[i] for i in legs)) > 1e-12 * max(1.0, max(abs(e) for e in energies)):
            raise QMError("energy is not conserved in a connected component")
    forms, loops = _edge_momenta(graph)
    factor = float(_vertex_factor(graph, couplings))
    Es = {"E%d" % i: float(e) for i, e in enumerate(energies)}
    n = graph.legs
    ext, internal = 1.0, []
    for idx, (a, b) in enumerate(graph.edges):
        f = forms[idx]
        shift = sum(c * Es[k] for k, c in f.items() if k.startswith("E"))
        qc = {k: float(c) for k, c in f.items() if k.startswith("Q")}
        if a < n or b < n:
            if a < n and b < n:
                ext *= 1 / (shift ** 2 + m * m)
            elif not amputated:
                ext *= 1 / (shift ** 2 + m * m)
            continue
        internal.append((qc, shift))
    if loops == 0:
        val = 1.0
        for _, shift in internal:
            val *= 1 / (shift ** 2 + m * m)
        return factor * ext * val
    if loops == 1 and method in ("auto", "residue"):
        try:
            return factor * ext * _one_loop_residue(internal, m)
        except QMError:
            if method == "residue":
                raise
    return factor * ext * _loop_quadrature(internal, loops, m, tol)


def _one_loop_residue(internal, m):
    """int dQ prod 1/((s Q + c)^2 + m^2) with s = +-1 (constant factors for Q-free edges)."""
    const, poles = 1.0, []
    for qc, shift in internal:
        s = qc.get("Q0", 0.0)
        if s == 0:
            const *= 1 / (shift ** 2 + m * m)
            continue
        # (sQ + c)^2 + m^2 = (Q + c/s)^2 + m^2 since s^2 = 1
        poles.append(shift / s)
    if not poles:
        raise QMError("loop momentum does not appear")
    centers = [-c for c in poles]           # factor (Q - center)^2 + m^2
    groups = []
    for c in centers:
        for grp in groups:
            if abs(grp[0] - c) < 1e-12 * max(1.0, m, abs(c)):
                grp[1] += 1
                break
        else:
            groups.append([c, 1])
    total = 0j
    for k, (ck, mult) in enumerate(groups):
        z = complex(ck, m)
        # residue at z of a pole of order mult: Taylor coefficient h^{mult-1} of h^mult f(z + h)
        ser = _cpow_series([2j * m, 1], -mult, mult)
        for j, (c, e) in enumerate(groups):
            if j != k:
                w = z - c
                ser = _cmul(ser, _cpow_series([w * w + m * m, 2 * w, 1], -e, mult), mult)
        total += ser[mult - 1]
    return const * (2j * math.pi * total).real


def _cmul(a, b, n):
    out = [0j] * n
    for i, x in enumerate(a[:n]):
        for j, y in enumerate(b[:n - i]):
            out[i + j] += x * y
    return out


def _cpow_series(a, k, n):
    """(a0 + a1 h + ...)^k truncated to n terms, for a0 != 0 and integer k."""
    a = list(a) + [0j] * n
    out = [a[0] ** k] + [0j] * (n - 1)
    for j in range(1, n):
        # J.C.P. Miller recurrence
        s = sum(((k + 1) * i - j) * a[i] * out[j - i] for i in range(1, j + 1))
        out[j] = s / (j * a[0])
    return out


def _loop_quadrature(internal, loops, m, tol):
    def integrand(*Q):
        out = 1.0
        for qc, shift in internal:
            x = shift + sum(c * Q[int(k[1:])] for k, c in qc.items())
            out /= x * x + m * m
        return out
    val, _ = integrate.nquad(integrand, [(-math.inf, math.inf)] * loops,
                             opts=[{"epsabs": tol, "epsrel": tol, "limit": 200}] * loops)
    return val


def bubble_graph():
    """Four legs, two quartic vertices joined by a double edge (legs 0,1 | 2,3)."""
    return Multigraph([(4, "g"), (4, "g")], 4, [(0, 4), (1, 4), (2, 5), (3, 5), (4, 5), (4, 5)])


def bubble_closed_form(E, m):
    """int dQ / ((Q^2+m^2)((E-Q)^2+m^2)) = 2 pi / (m (E^2 + 4 m^2))."""
    return 2 * math.pi / (m * (E * E + 4 * m * m))


def bubble_residue(E, m):
    return _one_loop_residue([({"Q0": 1.0}, 0.0), ({"Q0": -1.0}, E)], m)


def bubble_quadrature(E, m, tol=1e-13):
    return quadrature(lambda Q: 1 / ((Q * Q + m * m) * ((E - Q) ** 2 + m * m)), (-math.inf, math.inf), tol)


# ---------------------------------------------------------------- partition functions

def partition_circle(m, L):
    """Z_L = 1/(2 sinh(mL/2))."""
    return 1 / (2 * math.sinh(m * L / 2))


def oscillator_trace(L, m=1.0, terms=None):
    """sum_n e^{-L m (n + 1/2)} summed until the terms drop below 1e-18."""
    total, n = 0.0, 0
    while True:
        t = math.exp(-L * m * (n + 0.5))
        total += t
        n += 1
        if (terms is not None and n >= terms) or (terms is None and t < 1e-18 * total):
            return total


def _x_minus_xinv(m0):
    half = Fraction(m0) / 2
    return ExpSum.term(1, None, {"L": half}) - ExpSum.term(1, None, {"L": -half})


def _circle_green_exp(m0, diff_hi, diff_lo):
    """G_L(hi - lo) for 0 <= hi - lo <= L: D/(2m) (e^{-m d + mL/2} + e^{m d - mL/2})."""
    m0 = Fraction(m0)
    c = Fraction(1) / (2 * m0)
    e1 = {"L": m0 / 2}
    e2 = {"L": -m0 / 2}
    if diff_hi is not None:
        e1[diff_hi] = e1.get(diff_hi, 0) - m0
        e2[diff_hi] = e2.get(diff_hi, 0) + m0
    if diff_lo is not None:
        e1[diff_lo] = e1.get(diff_lo, 0) + m0
        e2[diff_lo] = e2.get(diff_lo, 0) - m0
    return ExpSum.term(c, None, e1, 1) + ExpSum.term(c, None, e2, 1)


def polygon_circle_integral(N, m0):
    """int over (R/LZ)^N of G_L(s1-s2) G_L(s2-s3) ... G_L(sN-s1), exactly.

    The answer lives in Q[L, e^{+-m0 L/2}, D] with D = 1/(e^{m0L/2} - e^{-m0L/2}).
    s0 is fixed at 0 by translation invariance (factor L).
    """
    if N == 1:
        return _circle_green_exp(m0, None, None) * ExpSum.term(1, {"L": 1})
    names = ["s%d" % i for i in range(N)]
    total = ExpSum()
    for perm in permutations(range(1, N)):
        chain = [0] + list(perm)             # ascending positions in (0, L)
        rank = {v: r for r, v in enumerate(chain)}
        integrand = ExpSum.const(1)
        for i in range(N):
            a, b = i, (i + 1) % N
            hi, lo = (a, b) if rank[a] > rank[b] else (b, a)
            integrand = integrand * _circle_green_exp(
                m0, names[hi] if hi != 0 else None, names[lo] if lo != 0 else None)
        seq = list(chain)
        while len(seq) > 1:
            pos = 1
            lower = names[seq[pos - 1]] if seq[pos - 1] != 0 else 0
            upper = names[seq[pos + 1]] if pos + 1 < len(seq) else "L"
            integrand = integrand.integrate(names[seq[pos]], lower, upper)
            seq.pop(pos)
        total = total + integrand
    return total * ExpSum.term(1, {"L": 1})


def _clear_d(expr, m0, K):
    """Multiply by (X - 1/X)^K and replace D (X - 1/X) by 1: a Laurent polynomial form."""
    xm = _x_minus_xinv(m0)
    out = ExpSum()
    for (p, e, d), c in expr.terms.items():
        if d > K:
            raise QMError("clearing order too small")
        t = ExpSum({(p, e, 0): c})
        for _ in range(K - d):
            t = t * xm
        out = out + t
    return out


def _trunc_mul(a, b, order):
    out = [ExpSum() for _ in range(order)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < order:
                out[i + j] = out[i + j] + x * y
    return out


def _trunc_exp(a, order):
    """exp of a truncated series with a[0] = 0 (coefficients ExpSum)."""
    out = [ExpSum.const(1)] + [ExpSum() for _ in range(order - 1)]
    term = list(out)
    for k in range(1, order):
        term = [t * Fraction(1, k) for t in _trunc_mul(term, a, order)]
        out = [x + y for x, y in zip(out, term)]
    return out


def _trunc_inverse(a, order):
    """1/a for a[0] = 1."""
    out = [ExpSum.const(1)] + [ExpSum() for _ in range(order - 1)]
    for n in range(1, order):
        s = ExpSum()
        for k in range(1, n + 1):
            if k < len(a):
                s = s + a[k] * out[n - k]
        out[n] = -s
    return out


def det_ratio_series(m0, order=4):
    """sinh(m0 L/2)/sinh(m L/2) with m^2 = m0^2 + a, as coefficients of a^0..a^{order-1}."""
    m0 = Fraction(m0)
    # delta = (L/2)(m - m0) = (L/2) m0 sum_{k>=1} binom(1/2, k) (a/m0^2)^k
    delta = [ExpSum()]
    b = Fraction(1)
    for k in range(1, order):
        b = b * (Fraction(1, 2) - (k - 1)) / k
        delta.append(ExpSum.term(b * m0 / 2 / m0 ** (2 * k), {"L": 1}))
    cosh = [ExpSum.const(1)] + [ExpSum() for _ in range(order - 1)]
    sinh = [ExpSum() for _ in range(order)]
    power = [ExpSum.const(1)] + [ExpSum() for _ in range(order - 1)]
    for j in range(1, order):
        power = [t * Fraction(1, j) for t in _trunc_mul(power, delta, order)]
        target = sinh if j % 2 else cosh
        for i in range(order):
            target[i] = target[i] + power[i]
    # coth(m0 L/2) = (X + 1/X) D
    coth = (ExpSum.term(1, None, {"L": m0 / 2}) + ExpSum.term(1, None, {"L": -m0 / 2})) * ExpSum.term(1, None, None, 1)
    denom = [c + coth * s for c, s in zip(cosh, sinh)]
    return _trunc_inverse(denom, order)


def det_ratio_diagrams(m0, order=4):
    """exp(sum_N (-a)^N C_N / (2N)) from exact N-gon integrals on the circle."""
    W = [ExpSum()]
    for N in range(1, order):
        W.append(polygon_circle_integral(N, m0) * Fraction((-1) ** N, 2 * N))
    return _trunc_exp(W, order)


def det_ratio_check(m0, order=4):
    """Per-order exact comparison of the sinh ratio with the polygon sum; True where they agree."""
    lhs = det_ratio_series(m0, order)
    rhs = det_ratio_diagrams(m0, order)
    out = []
    for k in range(order):
        diff = lhs[k] - rhs[k]
        K = max([d for (_, _, d) in diff.terms] + [0])
        out.append(_clear_d(diff, m0, K).is_zero())
    return out


def det_ratio_numeric(m0, a, L):
    m = math.sqrt(m0 * m0 + a)
    return math.sinh(m0 * L / 2) / math.sinh(m * L / 2)


def det_ratio_euler_product(m0, a, L, terms=200000):
    """prod_n (1 + a/(4 pi^2 n^2/L^2 + m0^2))^{-1/2} over all integers n."""
    n = np.arange(1, terms + 1, dtype=float)
    lam = 4 * math.pi ** 2 * n ** 2 / L ** 2 + m0 * m0
    tail = a * L * L / (4 * math.pi ** 2 * (terms + 0.5))      # sum_{n > terms} a / lambda_n
    log = -0.5 * math.log1p(a / (m0 * m0)) - float(np.sum(np.log1p(a / lam))) - tail
    return math.exp(log)


# ---------------------------------------------------------------- Feynman-Kac

def fock_operators(K):
    a = np.zeros((K, K))
    for n in range(1, K):
        a[n - 1, n] = math.sqrt(n)
    return a, a.T.copy()


def feynman_kac_operator(times, L, m=1.0, K=40):
    """Tr(q(t1) ... q(tn) e^{-L H}) / Tr(e^{-L H}) with Euclidean q(t) = e^{tH} q e^{-tH}.

    H = m (a^+ a + 1/2), q = (a + a^+)/sqrt(2m); times in [0, L], decreasing.
    """
    if any(times[i] < times[i + 1] for i in range(len(times) - 1)):
        raise QMError("times must be in decreasing order")
    a, ad = fock_operators(K)
    diag = np.exp(-L * m * (np.arange(K) + 0.5))
    prod = np.eye(K)
    for t in times:
        prod = prod @ ((math.exp(m * t) * ad + math.exp(-m * t) * a) / math.sqrt(2 * m))
    return float(np.trace(prod * diag[None, :])) / float(diag.sum())


def wick_circle(times, L, m=1.0):
    """Sum over pairings of products of G_L(t_i - t_j)."""
    n = len(times)
    if n % 2:
        return 0.0
    return float(matching_sum(n, lambda i, j: green("circle", m, L, times[i] - times[j])))


def feynman_kac_check(times, L, m=1.0, K=40):
    op = feynman_kac_operator(times, L, m, K)
    wk = wick_circle(times, L, m)
    return {"operator": op, "wick": wk, "residual": abs(op - wk)}


# ---------------------------------------------------------------- circle-valued fields

def theta(u, T, tol=1e-17):
    """theta(u, T) = sum_N exp(2 pi i u N - pi T N^2) for complex u, Re T > 0."""
    u = complex(u)
    T = complex(T)
    if T.real <= 0:
        raise QMError("need Re T > 0")
    total = 1 + 0j
    N = 1
    while True:
        a = cmath.exp(2j * math.pi * u * N - math.pi * T * N * N)
        b = cmath.exp(-2j * math.pi * u * N - math.pi * T * N * N)
        total += a + b
        if abs(a) + abs(b) < tol * abs(total) and N > 3:
            return total
        N += 1
        if N > 10 ** 6:
            raise QMError("theta series did not converge")


def theta_modular_residual(u, T):
    """|theta(u/(iT), 1/T) - sqrt(T) e^{pi u^2/T} theta(u, T)| relative to the right side."""
    lhs = theta(u / (1j * T), 1 / T)
    rhs = cmath.sqrt(T) * cmath.exp(math.pi * u * u / T) * theta(u, T)
    return abs(lhs - rhs) / abs(rhs)


def _check_charges(p):
    if sum(p) != 0:
        return False
    return True


def circle_valued_correlator(r, hbar, L, p, t):
    """<prod exp(i p_j q(t_j)/r)> for q valued in a circle of radius r, time on a circle of length L.

    Degree-zero part exp(-(hbar/2r^2) sum p_l p_j G(t_l - t_j)) with the zero-mode-free
    Green's function, times the normalized sum over winding numbers.  Zero unless sum p = 0.
    """
    if not _check_charges(p):
        return 0.0
    expo = 0.0
    for l in range(len(p)):
        for j in range(len(p)):
            expo += p[l] * p[j] * green("massless-circle", 0, L, t[l] - t[j])
    zero = math.exp(-hbar / (2 * r * r) * expo)
    T = 2 * math.pi * r * r / (hbar * L)
    x = sum(pj * tj for pj, tj in zip(p, t)) / L
    return zero * (theta(x, T) / theta(0, T)).real


def circle_valued_correlator_theta(r, hbar, L, p, t):
    """Closed form on L >= t_1 >= ... >= t_n >= 0 with partial charge sums P_j = p_1 + ... + p_j:

    exp((hbar/2r^2)(-sum_j (t_j - t_{j+1}) P_j^2 + (sum p_j t_j)^2 / L)) theta(x, T)/theta(0, T).
    """
    if not _check_charges(p):
        return 0.0
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)):
        raise QMError("times must be decreasing")
    P, s = 0, 0.0
    for j in range(len(p) - 1):
        P += p[j]
        s += (t[j] - t[j + 1]) * P * P
    x = sum(pj * tj for pj, tj in zip(p, t))
    T = 2 * math.pi * r * r / (hbar * L)
    pref = math.exp(hbar / (2 * r * r) * (-s + x * x / L))
    return pref * (theta(x / L, T) / theta(0, T)).real


def line_valued_limit(r, hbar, p, t):
    """The line-time answer exp((hbar/2r^2) sum_{l<j} p_l p_j |t_l - t_j|)."""
    s = 0.0
    for l in range(len(p)):
        for j in range(l + 1, len(p)):
            s += p[l] * p[j] * abs(t[l] - t[j])
    return math.exp(hbar / (2 * r * r) * s)


def free_fermion_correlator(times):
    """<psi(t_1)...psi(t_2n)> by the Pfaffian rule with propagator (i/2) sign(t_i - t_j).

    Returned as (Pfaffian of the sign matrix, n): the value is (i/2)^n times the first entry.
    """
    k = len(times)
    if k % 2:
        return 0, k // 2
    S = [[(times[i] > times[j]) - (times[i] < times[j]) for j in range(k)] for i in range(k)]
    return pfaffian(S), k // 2


# ---------------------------------------------------------------- two-step periodic potential

@dataclass
class TransferMatrix:
    """Monodromies of H psi = E psi across [0, a) and [a, 2 pi) in the (value, slope) basis."""
    A: np.ndarray
    B: np.ndarray

    def trace(self):
        return float(np.trace(self.A @ self.B))

    def dets(self):
        return float(np.linalg.det(self.A)), float(np.linalg.det(self.B))


def _piece(E, V, length, hbar):
    """(cos kl, sin kl / k, -k sin kl) for k^2 = 2(E - V)/hbar^2, with the cosh form below V."""
    q = 2 * (E - V) / hbar ** 2
    if q > 0:
        k = math.sqrt(q)
        return math.cos(k * length), math.sin(k * length) / k, -k * math.sin(k * length)
    if q < 0:
        k = math.sqrt(-q)
        return math.cosh(k * length), math.sinh(k * length) / k, k * math.sinh(k * length)
    return 1.0, float(length), 0.0


def transfer_matrices(E, a, M, hbar):
    b = 2 * math.pi - a
    c1, s1, d1 = _piece(E, M * b, a, hbar)
    c2, s2, d2 = _piece(E, -M * a, b, hbar)
    return TransferMatrix(np.array([[c1, s1], [d1, c1]]), np.array([[c2, s2], [d2, c2]]))


def half_trace(E, a, M, hbar):
    """Tr(AB)/2; eigenvalues are the solutions of half_trace = 1."""
    b = 2 * math.pi - a
    c1, s1, d1 = _piece(E, M * b, a, hbar)
    c2, s2, d2 = _piece(E, -M * a, b, hbar)
    return (2 * c1 * c2 + s1 * d2 + d1 * s2) / 2


def _phase_rate(E, a, M, hbar):
    b = 2 * math.pi - a
    rate = 0.0
    for V, l in ((M * b, a), (-M * a, b)):
        k = max(math.sqrt(2 * abs(E - V)) / hbar, 1.0 / l)
        rate += l / (hbar ** 2 * k)
    return rate


class SpectrumError(QMError):
    def __init__(self, msg, trace):
        super().__init__(msg)
        self.trace = trace


def _roots_in(lo, hi, a, M, hbar, tangency_tol=1e-11, samples_per_cycle=40):
    """Roots of half_trace - 1 on [lo, hi] with multiplicity (tangencies counted twice)."""
    f = lambda E: half_trace(E, a, M, hbar) - 1
    xs = [lo]
    while xs[-1] < hi:
        xs.append(min(hi, xs[-1] + 2 * math.pi / (samples_per_cycle * _phase_rate(xs[-1], a, M, hbar))))
    fs = [f(x) for x in xs]
    roots = []
    for i in range(len(xs) - 1):
        if fs[i] == 0:
            roots.append(xs[i])
        elif fs[i] * fs[i + 1] < 0:
            roots.append(optimize.brentq(f, xs[i], xs[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
    for i in range(1, len(xs) - 1):
        if fs[i] < 0 and fs[i] >= fs[i - 1] and fs[i] >= fs[i + 1]:
            r = optimize.minimize_scalar(lambda E: -f(E), bounds=(xs[i - 1], xs[i + 1]), method="bounded",
                                         options={"xatol": 1e-15 * max(1.0, abs(xs[i]))})
            top = -r.fun
            if top > 0:
                roots.append(optimize.brentq(f, xs[i - 1], r.x, xtol=1e-14))
                roots.append(optimize.brentq(f, r.x, xs[i + 1], xtol=1e-14))
            elif top > -tangency_tol:
                roots.extend([r.x, r.x])
    return sorted(roots)


def piecewise_spectrum(a, M, hbar, count):
    """The lowest `count` eigenvalues (with multiplicity) of -hbar^2/2 d^2 + U on R/2piZ,
    U = M b on [0, a), -M a on [a, 2 pi), b = 2 pi - a."""
    if not 0 < a < 2 * math.pi:
        raise QMError("need 0 < a < 2 pi")
    if M < 0:
        raise QMError("need M >= 0")
    lo = -M * a - 1e-9 * max(1.0, M)
    width = max(hbar ** 2, 1e-3)
    found = []
    steps = []
    while len(found) < count:
        hi = lo + width
        rs = _roots_in(lo, hi, a, M, hbar)
        steps.append((lo, hi, len(rs)))
        found.extend(rs)
        lo = hi
        width *= 1.5
        if len(steps) > 200:
            raise SpectrumError("root scan did not reach %d eigenvalues" % count, steps)
    return sorted(found)[:count]


def eigenvalue_count(E, a, M, hbar):
    """nu(E): number of eigenvalues <= E."""
    lo = -M * a - 1e-9 * max(1.0, M)
    return len(_roots_in(lo, E, a, M, hbar))


def free_spectrum(hbar, count):
    out = [0.0]
    n = 1
    while len(out) < count:
        out.extend([hbar * hbar * n * n / 2] * 2)
        n += 1
    return out[:count]


def pair_near(n, a, M, hbar):
    """The two eigenvalues bifurcating from hbar^2 n^2 / 2, located around the local maximum of Tr/2."""
    lam = hbar * hbar * n * n / 2
    w = 0.4 * hbar * hbar * n
    f = lambda E: half_trace(E, a, M, hbar) - 1
    r = optimize.minimize_scalar(lambda E: -f(E), bounds=(lam - w, lam + w), method="bounded",
                                 options={"xatol": 1e-15 * lam})
    if -r.fun <= 0:
        return r.x, r.x
    lo = optimize.brentq(f, lam - w, r.x, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    hi = optimize.brentq(f, r.x, lam + w, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return lo, hi


def bifurcation_prediction(n, a, M, hbar, form="perturbative"):
    """(E-, E+) predicted for the pair near Lambda_n = hbar^2 n^2/2.

    form='perturbative': Lambda_n + M^2 a(2pi-a)/(4 Lambda_n) -+ M|sin na|/n, from degenerate
    perturbation theory (first order splits by twice |U_hat(2n)|, second order shifts by
    sum |U_hat(k)|^2/(Lambda_n - Lambda_k)).
    form='halved': both corrections halved, M^2 a(2pi-a)/(8 Lambda_n) -+ M|sin na|/(2n).
    """
    lam = hbar * hbar * n * n / 2
    shift = M * M * a * (2 * math.pi - a) / lam
    split = M * abs(math.sin(n * a)) / n
    if form == "perturbative":
        return lam + shift / 4 - split, lam + shift / 4 + split
    if form == "halved":
        return lam + shift / 8 - split / 2, lam + shift / 8 + split / 2
    raise QMError("unknown form %r" % form)


def bifurcation_errors(a, M, hbar, ns, form="perturbative"):
    """Relative error of E+- - Lambda_n against the prediction, per n."""
    out = {}
    for n in ns:
        lam = hbar * hbar * n * n / 2
        lo, hi = pair_near(n, a, M, hbar)
        plo, phi = bifurcation_prediction(n, a, M, hbar, form)
        out[n] = max(abs((lo - lam) / (plo - lam) - 1), abs((hi - lam) / (phi - lam) - 1))
    return out


def weyl_area(E, a, M):
    """A(E) = (1/pi) int_0^{2pi} sqrt(2(E - U)) dx over the allowed region."""
    b = 2 * math.pi - a
    s = 0.0
    if E > M * b:
        s += a * math.sqrt(2 * (E - M * b))
    if E > -M * a:
        s += b * math.sqrt(2 * (E + M * a))
    return s / math.pi


def weyl_ratio(E, a, M, hbar):
    return eigenvalue_count(E, a, M, hbar) * hbar / weyl_area(E, a, M)


def quantization_count(E, a, M, hbar):
    """2n+1 with n the largest integer such that int p dx >= 2 pi n hbar (E > sup U)."""
    if E <= M * (2 * math.pi - a):
        raise QMError("the quantization condition count needs E > sup U")
    n = int(math.floor(weyl_area(E, a, M) * math.pi / (2 * math.pi * hbar)))
    return 2 * n + 1


# ---------------------------------------------------------------- WKB

@dataclass
class WKBBasis:
    """Formal solutions Psi_+- = exp((1/hbar) int y), y = sum hbar^k y_k, around x0.

    With q = 2(E - U) and p = sqrt(q): y_k = (+-i) p S_k for even k and y_k = R_k for odd k,
    S_k and R_k exact power series in (x - x0).  S_0 = 1 and R_1 = -q'/(4q), so the leading
    solutions are q^{-1/4} exp(+-(i/hbar) int p).
    """
    q: Series
    S: dict
    R: dict


def wkb_basis(U, E, order):
    """WKB coefficients through hbar^order for U given as a Series in (x - x0)."""
    E = Fraction(E)
    q = (Series.one(U.order) * E - U) * 2
    if q[0] <= 0:
        raise QMError("turning point (E <= U) at the expansion point")
    qi = q.inverse()
    dq = q.deriv()
    S = {0: Series.one(q.order - 1)}
    R = {}
    # y_k y_j products: even*even -> -S S q, odd*odd -> R R, mixed -> (+-i) p S R
    for k in range(1, order + 1):
        if k % 2:
            # imaginary part: 2 y0 y_k + sum_{0<j<k} y_j y_{k-j} + y'_{k-1} = 0, all / (+-i p)
            X = S[k - 1].deriv() + S[k - 1] * dq * qi * Fraction(1, 2)
            for j in range(1, k):
                if j % 2 == 0:
                    X = X + S[j] * R[k - j]
                else:
                    X = X + R[j] * S[k - j]
            R[k] = X * Fraction(-1, 2)
        else:
            Y = R[k - 1].deriv()
            for j in range(1, k):
                if j % 2:
                    Y = Y + R[j] * R[k - j]
                else:
                    Y = Y - S[j] * S[k - j] * q
            S[k] = Y * qi * Fraction(1, 2)
    return WKBBasis(q, S, R)


def wkb_leading(U, E, hbar, x0, x, sign=1):
    """Leading WKB solution (2(E-U))^{-1/4} exp(sign (i/hbar) int_{x0}^x sqrt(2(E-U))), normalized at x0."""
    p = lambda y: math.sqrt(2 * (E - U(y)))
    phase = quadrature(p, (x0, x), 1e-13) if x != x0 else 0.0
    return (p(x) / p(x0)) ** -0.5 * cmath.exp(sign * 1j * phase / hbar)


def wkb_ode_error(U, dU, E, hbar, x0, x1):
    """max relative deviation between the leading WKB solution and a high-accuracy ODE solution."""
    p0 = math.sqrt(2 * (E - U(x0)))
    dp0 = -dU(x0) / p0
    psi0 = 1.0 + 0j
    dpsi0 = (1j * p0 / hbar - 0.5 * dp0 / p0) * psi0

    def rhs(x, y):
        return [y[1], -2 * (E - U(x)) / hbar ** 2 * y[0]]

    xs = np.linspace(x0, x1, 9)[1:]
    sol = integrate.solve_ivp(rhs, (x0, x1), [psi0, dpsi0], t_eval=xs, rtol=1e-12, atol=1e-14, method="DOP853")
    if not sol.success:
        raise QMError(sol.message)
    return float(max(abs(sol.y[0][i] - wkb_leading(U, E, hbar, x0, x)) for i, x in enumerate(xs)))
