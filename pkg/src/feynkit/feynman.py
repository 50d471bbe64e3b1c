"""Perturbative expansion of Gaussian-dominated integrals as exact series in
formal couplings and hbar, computed by summing Feynman graph amplitudes.

Action convention: S(x) = B(x,x)/2 - sum_k g_k B_k(x,...,x)/i_k!, where each
coupling term k has a symbol g_k (symbols may repeat across valencies) and a
symmetric tensor B_k of rank i_k.  A vertex of valency i carries the weight
g ħ^{i/2-1}; an edge carries ħ-free B^{-1}.
"""
from collections import defaultdict
from fractions import Fraction
from itertools import product
from math import factorial

import numpy as np

from . import graphs as G
from .gaussian import QuadraticForm
from .linalg import inverse


class FeynmanError(ValueError):
    pass


# ---------------------------------------------------------------- series ring

def _degkey(d):
    return tuple(sorted((s, e) for s, e in d.items() if e))


class Expansion:
    """Finite sum of c * prod g^n * hbar^h, keyed by (degree tuple, hbar Fraction)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, v in (terms or {}).items():
            if v != 0:
                self.terms[k] = v

    @classmethod
    def const(cls, c=1, hbar=0):
        return cls({((), Fraction(hbar)): Fraction(c) if not isinstance(c, float) else c})

    @classmethod
    def monomial(cls, degrees, hbar=0, c=1):
        return cls({(_degkey(degrees), Fraction(hbar)): c})

    @staticmethod
    def total(key):
        return sum(e for _, e in key[0])

    def max_total(self):
        return max((self.total(k) for k in self.terms), default=-1)

    def truncate(self, max_degree):
        return Expansion({k: v for k, v in self.terms.items() if self.total(k) <= max_degree})

    def __add__(self, o):
        if not isinstance(o, Expansion):
            o = Expansion.const(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return Expansion(out)

    __radd__ = __add__

    def __neg__(self):
        return Expansion({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def mul(self, o, max_degree=None):
        if not isinstance(o, Expansion):
            return Expansion({k: v * o for k, v in self.terms.items()})
        out = defaultdict(int)
        for (da, ha), va in self.terms.items():
            ta = sum(e for _, e in da)
            for (db, hb), vb in o.terms.items():
                if max_degree is not None and ta + sum(e for _, e in db) > max_degree:
                    continue
                deg = dict(da)
                for s, e in db:
                    deg[s] = deg.get(s, 0) + e
                out[(_degkey(deg), ha + hb)] += va * vb
        return Expansion(out)

    __mul__ = mul

    def __rmul__(self, c):
        return Expansion({k: c * v for k, v in self.terms.items()})

    def constant_term(self):
        return sum((v for (d, h), v in self.terms.items() if not d), 0)

    def hbar_slice(self, h):
        """Coefficients of hbar^h as an hbar-free expansion."""
        h = Fraction(h)
        return Expansion({(d, Fraction(0)): v for (d, hh), v in self.terms.items() if hh == h})

    def hbar_exponents(self):
        return sorted({h for _, h in self.terms})

    def shift_hbar(self, k):
        return Expansion({(d, h + k): v for (d, h), v in self.terms.items()})

    def exp(self, max_degree):
        """exp of an expansion without a degree-zero part."""
        if any(not d for d, _ in self.terms):
            raise FeynmanError("exp needs a vanishing degree-zero part")
        out = Expansion.const(1)
        term = Expansion.const(1)
        for k in range(1, max_degree + 1):
            term = term.mul(self, max_degree).mul(Fraction(1, k))
            out = out + term
        return out

    def log(self, max_degree):
        """log of an expansion whose degree-zero part is exactly 1."""
        rest = self - Expansion.const(1)
        if any(not d for d, _ in rest.terms):
            raise FeynmanError("log needs degree-zero part 1")
        out = Expansion()
        term = Expansion.const(1)
        for k in range(1, max_degree + 1):
            term = term.mul(rest, max_degree)
            out = out + term.mul(Fraction((-1) ** (k + 1), k))
        return out

    def evaluate(self, values, hbar):
        total = 0.0
        for (d, h), v in self.terms.items():
            t = float(v) * float(hbar) ** float(h)
            for s, e in d:
                t *= float(values[s]) ** e
            total += t
        return total

    def __eq__(self, o):
        if not isinstance(o, Expansion):
            o = Expansion.const(o)
        return self.terms == o.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (d, h), v in sorted(self.terms.items(), key=lambda kv: (self.total(kv[0]), kv[0])):
            mono = "".join("*%s^%d" % (s, e) if e != 1 else "*%s" % s for s, e in d)
            hb = "" if h == 0 else "*hbar^%s" % h
            parts.append("%s%s%s" % (v, mono, hb))
        return " + ".join(parts)

    def to_json(self):
        rows = []
        for (d, h), v in sorted(self.terms.items(), key=lambda kv: (self.total(kv[0]), kv[0])):
            v = Fraction(v)
            rows.append({"degrees": {s: e for s, e in d},
                         "hbar": {"num": h.numerator, "den": h.denominator},
                         "coeff": {"num": v.numerator, "den": v.denominator}})
        return {"terms": rows}

    @classmethod
    def from_json(cls, obj):
        terms = {}
        for row in obj["terms"]:
            key = (_degkey(row["degrees"]), Fraction(row["hbar"]["num"], row["hbar"]["den"]))
            terms[key] = Fraction(row["coeff"]["num"], row["coeff"]["den"])
        return cls(terms)


# ---------------------------------------------------------------- actions

class SymTensor:
    """Dense symmetric tensor with exact entries."""

    def __init__(self, data):
        data = np.asarray(data, dtype=object)
        self.data = np.vectorize(Fraction, otypes=[object])(data) if data.size else data
        self.rank = data.ndim
        self.dim = data.shape[0] if data.ndim else None

    @classmethod
    def scalar(cls, rank, value=1, dim=1):
        """The rank-r tensor of x^r in d=1 (or c * sum of diagonal entries)."""
        arr = np.empty((dim,) * rank, dtype=object)
        arr[...] = Fraction(0)
        if rank == 0:
            arr = np.array(Fraction(value), dtype=object)
        elif dim == 1:
            arr[(0,) * rank] = Fraction(value)
        else:
            raise FeynmanError("use from_function for d > 1")
        return cls(arr)

    @classmethod
    def from_function(cls, rank, dim, f):
        arr = np.empty((dim,) * rank, dtype=object)
        for idx in product(range(dim), repeat=rank):
            arr[idx] = Fraction(f(tuple(sorted(idx))))
        return cls(arr)

    def is_symmetric(self):
        from itertools import permutations
        for idx in product(range(self.dim or 1), repeat=self.rank):
            for p in permutations(idx):
                if self.data[p] != self.data[idx]:
                    return False
        return True

    def evaluate(self, x):
        out = self.data
        for _ in range(self.rank):
            out = np.tensordot(out, x, axes=([0], [0]))
        return out


class Coupling:
    def __init__(self, symbol, valency, tensor):
        self.symbol = symbol
        self.valency = valency
        self.tensor = tensor if isinstance(tensor, SymTensor) else SymTensor(tensor)
        if self.tensor.rank != valency:
            raise FeynmanError("tensor rank %d does not match valency %d" % (self.tensor.rank, valency))


class Action:
    def __init__(self, B, couplings=()):
        self.B = B if isinstance(B, QuadraticForm) else QuadraticForm(B)
        self.couplings = list(couplings)
        self.dim = self.B.dim
        for c in self.couplings:
            if c.valency and c.tensor.dim != self.dim:
                raise FeynmanError("tensor dimension mismatch")
        self.Binv = np.array(self.B.inverse(), dtype=object)

    @classmethod
    def one_dim(cls, terms, b=1):
        """terms: list of (symbol, valency, coefficient) for g*c*x^i/i!."""
        return cls([[Fraction(b)]], [Coupling(s, i, SymTensor.scalar(i, c)) for s, i, c in terms])

    def symbols(self):
        return sorted({c.symbol for c in self.couplings})

    def potential(self, x, values):
        """Numeric S(x) for d=1 with coupling values substituted."""
        b = float(self.B.matrix[0][0])
        out = b * x * x / 2
        for c in self.couplings:
            coef = float(c.tensor.data[(0,) * c.valency]) if c.valency else float(c.tensor.data)
            out -= values[c.symbol] * coef * x ** c.valency / factorial(c.valency)
        return out

    def to_json(self):
        return {"B": [[str(x) for x in r] for r in self.B.matrix],
                "couplings": [{"symbol": c.symbol, "valency": c.valency,
                               "tensor": np.vectorize(str, otypes=[object])(c.tensor.data).tolist()}
                              for c in self.couplings]}

    @classmethod
    def from_json(cls, obj):
        B = [[Fraction(x) for x in r] for r in obj["B"]]
        cs = []
        for c in obj["couplings"]:
            t = np.array(c["tensor"], dtype=object)
            cs.append(Coupling(c["symbol"], int(c["valency"]), t))
        return cls(B, cs)


# ---------------------------------------------------------------- amplitudes

def amplitude(action, g, kinds_to_coupling, covectors=None, amputated=False):
    """F_Gamma: contract vertex tensors along edges with B^{-1}.

    Legs carry the covectors (through B^{-1}); with amputated=True the legs are
    left as free indices and the result is a rank-N array.
    """
    d = action.dim
    Binv = action.Binv
    internal = list(g.internal())
    if d == 1 and not amputated:
        val = Fraction(1)
        b = Binv[0, 0]
        for v in internal:
            c = kinds_to_coupling[g.kinds[v - g.legs]]
            t = c.tensor.data
            val *= t[(0,) * c.valency] if c.valency else t[()]
        val *= b ** len(g.edges)
        for j in range(g.legs):
            val *= Fraction(covectors[j][0]) if covectors is not None else 1
        return val
    ops = []
    slots = {v: [] for v in internal}
    outputs = [None] * g.legs
    scalar = Fraction(1)
    label = [0]

    def fresh():
        label[0] += 1
        return label[0] - 1

    for a, b in g.edges:
        if a < g.legs and b < g.legs:
            if amputated:
                raise FeynmanError("leg-leg edge in an amputated amplitude")
            la, lb = np.array(covectors[a], dtype=object), np.array(covectors[b], dtype=object)
            scalar *= la.dot(Binv).dot(lb)
        elif a < g.legs:
            i = fresh()
            slots[b].append(i)
            if amputated:
                outputs[a] = i
            else:
                ops.append((Binv.dot(np.array(covectors[a], dtype=object)), [i]))
        else:
            i, j = fresh(), fresh()
            slots[a].append(i)
            slots[b].append(j)
            ops.append((Binv, [i, j]))
    args = []
    for v in internal:
        c = kinds_to_coupling[g.kinds[v - g.legs]]
        if c.valency == 0:
            scalar *= c.tensor.data[()]
        else:
            args.append((c.tensor.data, slots[v]))
    args.extend(ops)
    if not args:
        return scalar if not amputated else np.array(scalar, dtype=object)
    flat = []
    for arr, sub in args:
        flat.extend([arr, sub])
    out = outputs if amputated else []
    res = np.einsum(*flat, out, optimize="greedy") if len(args) > 1 else np.einsum(*flat, out)
    if amputated:
        return np.asarray(res, dtype=object) * scalar
    return scalar * (res.item() if isinstance(res, np.ndarray) else res)


def _profiles(action, max_degree, legs, max_hbar=None, offset=Fraction(0)):
    """Coupling-count vectors with total <= max_degree, even half-edge total, hbar within cap."""
    K = len(action.couplings)

    def rec(k, left):
        if k == K:
            yield ()
            return
        for n in range(left + 1):
            for rest in rec(k + 1, left - n):
                yield (n,) + rest

    for counts in rec(0, max_degree):
        he = legs + sum(n * c.valency for n, c in zip(counts, action.couplings))
        if he % 2:
            continue
        h = offset + sum(n * Fraction(c.valency - 2, 2) for n, c in zip(counts, action.couplings))
        if max_hbar is not None and h > max_hbar:
            continue
        yield counts, h


def _profile_obj(action, counts, legs):
    kinds = []
    for k, (n, c) in enumerate(zip(counts, action.couplings)):
        kinds.extend([(c.valency, k)] * n)
    return G.Profile(kinds, legs)


def _degrees(action, counts):
    deg = defaultdict(int)
    for n, c in zip(counts, action.couplings):
        deg[c.symbol] += n
    return dict(deg)


def _graph_terms(profile, mode, connected=False):
    """(graph, weight) pairs whose weighted sum is sum_{classes} 1/|Aut|."""
    if mode == "graph":
        for g in G.enumerate_multigraphs(profile).values():
            yield g, Fraction(1, g.aut_order())
    elif mode == "matching":
        sym = profile.symmetry()
        for edges, count in G.labeled_graph_counts(profile, connected=connected).items():
            yield G.Multigraph(profile.kinds, profile.legs, edges), Fraction(count, sym)
    elif mode == "raw":
        sym = profile.symmetry()
        for m in G.enumerate_matchings(profile.half_edges()):
            yield G.graph_of(m, profile), Fraction(1, sym)
    else:
        raise FeynmanError("unknown mode %r" % mode)


def _can_connect(action, counts, legs):
    V = sum(counts)
    if V == 0:
        return legs == 2
    half = legs + sum(n * c.valency for n, c in zip(counts, action.couplings))
    if half // 2 < V + legs - 1:
        return False
    has_isolated = any(n and c.valency == 0 for n, c in zip(counts, action.couplings))
    return not has_isolated or (V == 1 and legs == 0)


def _can_be_1pi(action, counts, legs):
    V = sum(counts)
    if V < 2:
        return V == 1
    # every internal vertex of a bridgeless amputated graph keeps two internal half-edges
    return legs <= sum(n * (c.valency - 2) for n, c in zip(counts, action.couplings))


def graph_sum(action, max_degree, covectors=(), mode="graph", keep=None, max_hbar=None,
              amputated_legs=0, hbar_offset=None, connected=False, one_pi=False):
    """Sum over graphs of prod(g hbar^{i/2-1})^{n} hbar^{N/2} F/|Aut|, restricted by keep(graph)."""
    kinds = {}
    for k, c in enumerate(action.couplings):
        kinds[(c.valency, k)] = c
    legs = amputated_legs or len(covectors)
    offset = Fraction(legs, 2) if hbar_offset is None else Fraction(hbar_offset)
    total = Expansion()
    acc = defaultdict(int) if not amputated_legs else {}
    for counts, h in _profiles(action, max_degree, legs, max_hbar, offset):
        if connected and not _can_connect(action, counts, legs):
            continue
        if one_pi and not _can_be_1pi(action, counts, legs):
            continue
        profile = _profile_obj(action, counts, legs)
        key = (_degkey(_degrees(action, counts)), h)
        for g, w in _graph_terms(profile, mode, connected):
            if keep is not None and not keep(g):
                continue
            if amputated_legs:
                f = amplitude(action, g, kinds, amputated=True) * w
                acc[key] = acc[key] + f if key in acc else f
            else:
                acc[key] += w * amplitude(action, g, kinds, covectors)
    if amputated_legs:
        return acc
    total = Expansion(dict(acc))
    return total


def _check_grading(e):
    for _, h in e.terms:
        if h.denominator != 1:
            raise FeynmanError("half-integer hbar power survived: %s" % h)
    return e


def partition_expansion(action, max_degree, mode="graph"):
    """Z/Z0 as an exact expansion."""
    return _check_grading(graph_sum(action, max_degree, mode=mode))


def correlator_expansion(action, covectors, max_degree, mode="graph", normalized=False):
    """<l_1 ... l_N> (unnormalised: integral against exp(-S/hbar) divided by Z0).

    normalized=True divides by Z, keeping graphs whose every component touches a leg.
    """
    keep = None
    if normalized:
        keep = _every_component_has_leg
    return graph_sum(action, max_degree, covectors, mode=mode, keep=keep)


def _every_component_has_leg(g):
    return all(min(c) < g.legs for c in g.components())


def connected_expansion(action, max_degree, mode="graph", max_hbar=None):
    """log(Z/Z0) as a sum over connected vacuum graphs."""
    return graph_sum(action, max_degree, mode=mode, max_hbar=max_hbar, connected=True,
                     keep=lambda g: g.is_connected() and len(g.kinds) > 0)


# ---------------------------------------------------------------- trees and one loop

def _vertex_terms(action):
    """(coefficient expansion, tensor, rank) with S = B/2 - sum coeff T/rank!."""
    return [(Expansion.monomial({c.symbol: 1}), c.tensor.data, c.valency) for c in action.couplings]


def _contract_except_first(T, x, rank, max_degree):
    """Vector v_a = T(a, x, ..., x) with Expansion entries."""
    d = len(x)
    out = [Expansion() for _ in range(d)]
    for idx in product(range(d), repeat=rank):
        coef = T[idx]
        if coef == 0:
            continue
        term = Expansion.const(coef)
        for i in idx[1:]:
            term = term.mul(x[i], max_degree)
        out[idx[0]] = out[idx[0]] + term
    return out


def _full_contract(T, x, rank, max_degree):
    d = len(x)
    if rank == 0:
        return Expansion.const(T[()])
    total = Expansion()
    for idx in product(range(d), repeat=rank):
        coef = T[idx]
        if coef == 0:
            continue
        term = Expansion.const(coef)
        for i in idx:
            term = term.mul(x[i], max_degree)
        total = total + term
    return total


def critical_point(Binv, vertices, dim, max_degree):
    """Solve x = B^{-1} sum coeff T(., x, ..., x)/(r-1)! degree by degree."""
    x = [Expansion() for _ in range(dim)]
    for _ in range(max_degree + 1):
        force = [Expansion() for _ in range(dim)]
        for coeff, T, r in vertices:
            if r == 0:
                continue
            v = _contract_except_first(T, x, r, max_degree)
            for a in range(dim):
                force[a] = force[a] + coeff.mul(v[a], max_degree).mul(Fraction(1, factorial(r - 1)))
        new = [Expansion() for _ in range(dim)]
        for a in range(dim):
            for b in range(dim):
                if Binv[a][b] != 0:
                    new[a] = new[a] + force[b].mul(Binv[a][b])
        x = [e.truncate(max_degree) for e in new]
    return x


def critical_value(B, vertices, max_degree):
    """-S(x0) for S = B(x,x)/2 - sum coeff T(x..x)/r!."""
    dim = len(B)
    Binv = inverse(B)
    x = critical_point(Binv, vertices, dim, max_degree)
    quad = Expansion()
    for a in range(dim):
        for b in range(dim):
            if B[a][b] != 0:
                quad = quad + x[a].mul(x[b], max_degree).mul(B[a][b])
    S = quad.mul(Fraction(1, 2))
    for coeff, T, r in vertices:
        S = S - coeff.mul(_full_contract(T, x, r, max_degree), max_degree).mul(Fraction(1, factorial(r)))
    return -S.truncate(max_degree)


def tree_level(action, max_degree):
    """-S(x0) at the formal critical point: the hbar^{-1} part of log(Z/Z0)."""
    return critical_value(action.B.matrix, _vertex_terms(action), max_degree)


def one_loop(action, max_degree):
    """(1/2) log det(B / S''(x0)) = (1/2) sum_k tr((B^{-1}V)^k)/k with V = B - S''(x0)."""
    dim = action.dim
    Binv = inverse(action.B.matrix)
    verts = _vertex_terms(action)
    x = critical_point(Binv, verts, dim, max_degree)
    V = [[Expansion() for _ in range(dim)] for _ in range(dim)]
    for coeff, T, r in verts:
        if r < 2:
            continue
        for a in range(dim):
            for b in range(dim):
                sub = T[a, b] if r >= 2 else None
                val = _full_contract(np.asarray(sub, dtype=object), x, r - 2, max_degree)
                V[a][b] = V[a][b] + coeff.mul(val, max_degree).mul(Fraction(1, factorial(r - 2)))
    M = [[sum((V[k][b].mul(Binv[a][k]) for k in range(dim)), Expansion()) for b in range(dim)]
         for a in range(dim)]
    total = Expansion()
    P = M
    for k in range(1, max_degree + 1):
        tr = sum((P[a][a] for a in range(dim)), Expansion())
        total = total + tr.mul(Fraction(1, 2 * k))
        P = [[sum((P[a][c].mul(M[c][b], max_degree) for c in range(dim)), Expansion())
              for b in range(dim)] for a in range(dim)]
    return total.truncate(max_degree)


# ---------------------------------------------------------------- effective action

class EffectiveAction:
    """S_eff = B/2 - sum_N calB_N/N!, each calB_N a map from (degrees, hbar) keys to rank-N arrays."""

    def __init__(self, B, tensors):
        self.B = B
        self.tensors = tensors   # N -> {key: ndarray}

    def vertex_terms(self):
        out = []
        for N, table in sorted(self.tensors.items()):
            for key, arr in table.items():
                arr = np.asarray(arr, dtype=object)
                if np.all(arr == 0):
                    continue
                out.append((Expansion({key: Fraction(1)}), arr, N))
        return out

    def coefficient(self, N):
        """For d=1: calB_N as an Expansion (coefficient of x^N)."""
        table = self.tensors.get(N, {})
        return Expansion({k: np.asarray(v, dtype=object).reshape(-1)[0] if N else np.asarray(v).item()
                          for k, v in table.items()})

    def loop_part(self, L):
        return {N: {k: v for k, v in t.items() if k[1] == L} for N, t in self.tensors.items()}

    def numeric_1d(self, values, hbar):
        """Polynomial coefficients s_N with S_eff(x) = sum s_N x^N (d=1)."""
        out = defaultdict(float)
        out[2] += float(self.B[0][0]) / 2
        for N in self.tensors:
            out[N] -= self.coefficient(N).evaluate(values, hbar) / factorial(N)
        return dict(out)


def effective_action(action, max_degree, loop_cap=None, max_legs=None, mode="graph"):
    """1PI graph sums with amputated legs; a 1PI graph with L loops carries hbar^L."""
    if loop_cap is not None and loop_cap < 1:
        raise FeynmanError("loop_cap must be at least 1")
    if max_legs is None:
        top = max((c.valency for c in action.couplings), default=0)
        max_legs = max(top, max_degree * (top - 2))
    tensors = {}
    for N in range(0, max_legs + 1):
        # hbar exponent of a graph: 1 + sum n(i/2-1) - N/2 = loops of the amputated graph
        table = graph_sum(action, max_degree, mode=mode, keep=G.Multigraph.is_1pi,
                          max_hbar=loop_cap, amputated_legs=N if N else 0, connected=True, one_pi=True,
                          hbar_offset=1 - Fraction(N, 2)) if N else None
        if N == 0:
            e = graph_sum(action, max_degree, mode=mode, keep=G.Multigraph.is_1pi,
                          max_hbar=loop_cap, hbar_offset=1, connected=True, one_pi=True)
            table = {k: np.array(v, dtype=object) for k, v in e.terms.items()}
        table = {k: v for k, v in table.items() if not np.all(np.asarray(v) == 0)}
        if table:
            tensors[N] = table
    return EffectiveAction(action.B.matrix, tensors)


def effective_tree_level(eff, max_degree):
    """hbar^{-1} times the critical value of S_eff: must reproduce log(Z/Z0)."""
    return critical_value(eff.B, eff.vertex_terms(), max_degree).shift_hbar(-1)


# ---------------------------------------------------------------- Legendre transform

def legendre_series(f, order=None):
    """Legendre transform of a one-variable series f = x^2/(2a) + ... (exact).

    Solves f'(x) = p by reversion and returns p x(p) - f(x(p)).
    """
    from .series import Series
    fp = f.deriv()
    if fp.valuation() != 1:
        raise FeynmanError("series needs an invertible quadratic part")
    xp = fp.reversion()
    n = order or f.order
    xp = xp.truncate(n)
    p = Series.monomial(1, n)
    return (p * xp - f.compose(xp)).truncate(n)


def legendre_numeric(f, df, p, x0=0.0, d2f=None, tol=1e-15, maxiter=100):
    """sup_x (p x - f(x)) for a smooth convex f, by Newton's method on f'(x) = p."""
    from scipy.optimize import brentq
    x = x0
    for _ in range(maxiter):
        if d2f is None:
            break
        h = d2f(x)
        if h <= 0:
            raise FeynmanError("function is not convex at x=%g" % x)
        step = (df(x) - p) / h
        x -= step
        if abs(step) < tol:
            break
    if d2f is None:
        lo, hi = x0 - 1.0, x0 + 1.0
        while df(lo) > p:
            lo -= 2 * (hi - lo)
        while df(hi) < p:
            hi += 2 * (hi - lo)
        x = brentq(lambda t: df(t) - p, lo, hi, xtol=1e-15)
    return p * x - f(x)


def legendre_sampled(xs, fs):
    """Discrete Legendre transform of samples; raises unless the samples are strictly convex."""
    xs = np.asarray(xs, dtype=float)
    fs = np.asarray(fs, dtype=float)
    slopes = np.diff(fs) / np.diff(xs)
    if np.any(np.diff(slopes) <= 0):
        raise FeynmanError("samples are not strictly convex")
    ps = 0.5 * (slopes[1:] + slopes[:-1])
    idx = np.arange(1, len(xs) - 1)
    return ps, ps * xs[idx] - fs[idx]


def log_partition_numeric(action, values, hbar, p=0.0):
    """hbar log(Z(p)/Z0) for a one-dimensional action by quadrature."""
    from scipy.integrate import quad
    b = float(action.B.matrix[0][0])
    xc = p / b
    # centre and rescale: subtract the free exponent to keep the integrand O(1)
    scale = np.sqrt(hbar / b)

    def integrand(y):
        x = xc + scale * y
        return np.exp((p * x - action.potential(x, values) - p * p / (2 * b)) / hbar)

    val, _ = quad(integrand, -np.inf, np.inf, epsabs=0, epsrel=1e-13, limit=400)
    z0 = np.sqrt(2 * np.pi)
    return p * p / (2 * b) + hbar * np.log(val / z0)
