"""Fat graphs, polygon gluings and the Gaussian matrix integrals they count.

Conventions.  A fat flower of valency i is a vertex whose half-edges are
cyclically ordered.  Half-edges carry two boundary sides, h+ (facing the next
half-edge in the cyclic order) and h- (facing the previous one).  An ordinary
ribbon joins h+ to k- and h- to k+; a twisted ribbon joins h+ to k+ and h- to k-.
Boundary components are the cycles of the resulting 2-regular graph on sides.

A gluing of a 2m-gon pairs its sides; side s runs from corner s to corner s+1.
An orientation-reversing (ordinary) identification of sides s and t glues
corner s to corner t+1 and corner s+1 to corner t; a twisted one glues s to t
and s+1 to t+1.  The resulting closed surface has one face, m edges and V
vertices, V being the number of corner classes.
"""
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial

import numpy as np

from .asymptotics import quadrature, sin_power_integral
from .feynman import Expansion
from .graphs import Multigraph, enumerate_matchings
from .poly import Poly
from .series import bernoulli_number, catalan, double_factorial


class MatrixModelError(ValueError):
    pass


CENSUS_BUDGET = 9          # 2m <= 18 sides
PY_CENSUS_LIMIT = 6        # above this the compiled kernel is used
ORACLE_BUDGET = 4


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[a] = b

    def classes(self):
        return len({self.find(x) for x in range(len(self.parent))})


# ---------------------------------------------------------------- fat graphs

@dataclass
class FatGraph:
    """Flowers given by their cyclically ordered half-edge labels, plus a matching.

    flowers: list of tuples of half-edge labels (cyclic order)
    edges: list of pairs of half-edge labels
    twists: optional set of edge indices glued with a half twist
    """
    flowers: list
    edges: list
    twists: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        self.flowers = [tuple(f) for f in self.flowers]
        self.edges = [tuple(e) for e in self.edges]
        self.twists = frozenset(self.twists)
        labels = [h for f in self.flowers for h in f]
        if len(set(labels)) != len(labels):
            raise MatrixModelError("half-edge labels repeat")
        used = [h for e in self.edges for h in e]
        if sorted(used) != sorted(labels):
            raise MatrixModelError("edges must pair every half-edge exactly once")

    @classmethod
    def from_matching(cls, valencies, partner, twists=()):
        """Flowers with consecutive labels; partner is a fixed-point-free involution."""
        flowers, start = [], 0
        for v in valencies:
            flowers.append(tuple(range(start, start + v)))
            start += v
        edges = [(h, partner[h]) for h in range(len(partner)) if h < partner[h]]
        return cls(flowers, edges, frozenset(twists))

    def _index(self):
        return {h: i for i, h in enumerate(h for f in self.flowers for h in f)}

    def vertex_of(self):
        return {h: v for v, f in enumerate(self.flowers) for h in f}

    def components(self):
        d = _DSU(len(self.flowers))
        vof = self.vertex_of()
        for a, b in self.edges:
            d.union(vof[a], vof[b])
        groups = defaultdict(list)
        for v in range(len(self.flowers)):
            groups[d.find(v)].append(v)
        return list(groups.values())

    def is_connected(self):
        return len(self.components()) <= 1

    def boundary_count(self):
        """nu: number of boundary circles, by tracing sides."""
        idx = self._index()
        d = _DSU(2 * len(idx))
        plus = lambda h: 2 * idx[h]
        minus = lambda h: 2 * idx[h] + 1
        for f in self.flowers:
            for k, h in enumerate(f):
                d.union(plus(h), minus(f[(k + 1) % len(f)]))
        for e, (a, b) in enumerate(self.edges):
            if e in self.twists:
                d.union(plus(a), plus(b))
                d.union(minus(a), minus(b))
            else:
                d.union(plus(a), minus(b))
                d.union(minus(a), plus(b))
        return d.classes()

    def euler_characteristic(self):
        """chi of the closed surface obtained by capping every boundary circle with a disc."""
        return len(self.flowers) - len(self.edges) + self.boundary_count()

    def genus(self):
        """1 - chi/2 (an exact half-integer when twists make the surface non-orientable)."""
        if not self.is_connected():
            raise MatrixModelError("genus is defined per component; use boundary_and_genus")
        return 1 - Fraction(self.euler_characteristic(), 2)

    def multigraph(self):
        """Underlying Multigraph (no legs); kinds are the valencies."""
        vof = self.vertex_of()
        return Multigraph([(len(f), "") for f in self.flowers], 0,
                          [(vof[a], vof[b]) for a, b in self.edges])


def boundary_and_genus(fg):
    """{'nu', 'genus'} for a connected fat graph; a list of these, one per component, otherwise."""
    comps = fg.components()
    if len(comps) == 1:
        return {"nu": fg.boundary_count(), "genus": fg.genus()}
    out = []
    for comp in comps:
        flowers = [fg.flowers[v] for v in comp]
        hs = {h for f in flowers for h in f}
        keep = [i for i, e in enumerate(fg.edges) if e[0] in hs]
        sub = FatGraph(flowers, [fg.edges[i] for i in keep],
                       frozenset(j for j, i in enumerate(keep) if i in fg.twists))
        out.append({"nu": sub.boundary_count(), "genus": sub.genus()})
    return out


def boundary_permutation_count(valencies, partner):
    """nu by a second route: the number of cycles of (matching) o (rotation)."""
    rot, start = [], 0
    for v in valencies:
        rot.extend(start + (k + 1) % v for k in range(v))
        start += v
    perm = [partner[rot[h]] for h in range(len(partner))]
    return _cycles(perm)


def _cycles(perm):
    seen = [False] * len(perm)
    c = 0
    for s in range(len(perm)):
        if not seen[s]:
            c += 1
            x = s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
    return c


# ---------------------------------------------------------------- polygon gluings

def gluing_vertices(partner, twists=()):
    """Corner classes of the surface glued from a polygon (union-find over corners)."""
    n = len(partner)
    d = _DSU(n)
    for s in range(n):
        t = partner[s]
        if s > t:
            continue
        if s in twists:
            d.union(s, t)
            d.union((s + 1) % n, (t + 1) % n)
        else:
            d.union(s, (t + 1) % n)
            d.union((s + 1) % n, t)
    return d.classes()


def condition_a(partner):
    """No side is glued to a cyclically neighbouring side."""
    n = len(partner)
    return all(partner[s] not in ((s + 1) % n, (s - 1) % n) for s in range(n))


def condition_b(partner):
    """No consecutive pair of sides is glued to a consecutive pair in the opposite order."""
    n = len(partner)
    return all(partner[(s + 1) % n] != (partner[s] - 1) % n for s in range(n))


def _census_python(m, mode, conditions):
    counts = Counter()
    n = 2 * m
    for partner in enumerate_matchings(n):
        if conditions in ("A", "AB") and not condition_a(partner):
            continue
        if conditions == "AB" and not condition_b(partner):
            continue
        if mode == "oriented":
            v = gluing_vertices(partner)
            counts[Fraction(m + 1 - v, 2)] += 1
        else:
            pairs = [s for s in range(n) if s < partner[s]]
            for bits in product((0, 1), repeat=m):
                tw = {s for s, b in zip(pairs, bits) if b}
                v = gluing_vertices(partner, tw)
                counts[1 - Fraction(v - m + 1, 2)] += 1
    return counts


_KERNEL = None


def _kernel():
    """Compiled census: counts[cond][V] for cond in (none, A, AB) with side 0 glued to `first`."""
    global _KERNEL
    if _KERNEL is not None:
        return _KERNEL
    import numba

    @numba.njit(cache=True)
    def run(m, first, want_conditions):
        n = 2 * m
        counts = np.zeros((3, n + 2), dtype=np.int64)
        partner = -np.ones(n, dtype=np.int64)
        lows = np.zeros(m + 1, dtype=np.int64)   # index paired at each depth
        cand = np.zeros(m + 1, dtype=np.int64)   # next partner to try at each depth
        seen = np.zeros(n, dtype=np.bool_)
        partner[0] = first
        partner[first] = 0
        d = 1
        if d < m:
            low = 0
            while partner[low] >= 0:
                low += 1
            lows[d] = low
            cand[d] = low + 1
        while True:
            if d == m:
                # corners c ~ partner[c] + 1: vertices are the cycles of that map
                for c in range(n):
                    seen[c] = False
                v = 0
                for c in range(n):
                    if not seen[c]:
                        v += 1
                        x = c
                        while not seen[x]:
                            seen[x] = True
                            x = (partner[x] + 1) % n
                counts[0, v] += 1
                if want_conditions:
                    a = True
                    for s in range(n):
                        p = partner[s]
                        if p == (s + 1) % n or p == (s - 1 + n) % n:
                            a = False
                            break
                    if a:
                        counts[1, v] += 1
                        b = True
                        for s in range(n):
                            if partner[(s + 1) % n] == (partner[s] - 1 + n) % n:
                                b = False
                                break
                        if b:
                            counts[2, v] += 1
                d -= 1
                if d == 0:
                    break
                i = lows[d]
                partner[partner[i]] = -1
                partner[i] = -1
                continue
            i = lows[d]
            j = cand[d]
            while j < n and partner[j] >= 0:
                j += 1
            if j >= n:
                d -= 1
                if d == 0:
                    break
                i = lows[d]
                partner[partner[i]] = -1
                partner[i] = -1
                continue
            partner[i] = j
            partner[j] = i
            cand[d] = j + 1
            d += 1
            if d < m:
                low = i + 1
                while partner[low] >= 0:
                    low += 1
                lows[d] = low
                cand[d] = low + 1
        return counts

    _KERNEL = run
    return run


def _census_task(args):
    m, first, want = args
    return _kernel()(m, first, want)


def census_vertex_table(m, conditions=True, jobs=1):
    """counts[c][V] over all oriented gluings of a 2m-gon, c indexing (none, A, AB).

    The work is split by the partner of side 0; partial tallies are summed.
    """
    if m > CENSUS_BUDGET:
        raise MatrixModelError("census budget exceeded (m <= %d)" % CENSUS_BUDGET)
    tasks = [(m, j, conditions) for j in range(1, 2 * m)]
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_census_task, tasks))
    else:
        parts = [_census_task(t) for t in tasks]
    total = np.zeros_like(parts[0])
    for p in parts:
        total += p
    return total


def polygon_gluing_census(m, mode="oriented", conditions="none", engine="auto", jobs=1):
    """Map genus -> number of gluings of a 2m-gon with labeled sides.

    conditions: 'none' (epsilon), 'A' (mu) or 'AB' (lambda).  Twisted mode counts
    every matching with every choice of twist bits and reports genus 1 - chi/2.
    """
    if m < 1:
        raise MatrixModelError("need m >= 1")
    if m > CENSUS_BUDGET:
        raise MatrixModelError("census budget exceeded (m <= %d)" % CENSUS_BUDGET)
    if conditions not in ("none", "A", "AB"):
        raise MatrixModelError("conditions must be none, A or AB")
    if mode not in ("oriented", "twisted"):
        raise MatrixModelError("mode must be oriented or twisted")
    if mode == "twisted":
        if m > PY_CENSUS_LIMIT - 1:
            raise MatrixModelError("twisted census budget exceeded (m <= %d)" % (PY_CENSUS_LIMIT - 1))
        return _as_genus_map(_census_python(m, mode, conditions))
    if engine == "python" or (engine == "auto" and m <= PY_CENSUS_LIMIT):
        return _as_genus_map(_census_python(m, mode, conditions))
    row = {"none": 0, "A": 1, "AB": 2}[conditions]
    table = census_vertex_table(m, conditions != "none", jobs)[row]
    out = {}
    for v, c in enumerate(table):
        if c:
            out[(m + 1 - v) // 2] = int(c)
    return out


def _as_genus_map(counts):
    out = {}
    for g, c in sorted(counts.items()):
        out[int(g) if g.denominator == 1 else g] = c
    return out


def twisted_gluing_sum(m, N):
    """Sum over matchings and twist bits of N^V (the real symmetric prediction)."""
    total = 0
    for partner in enumerate_matchings(2 * m):
        pairs = [s for s in range(2 * m) if s < partner[s]]
        for bits in product((0, 1), repeat=m):
            total += N ** gluing_vertices(partner, {s for s, b in zip(pairs, bits) if b})
    return total


def all_crossing_count(g):
    """Gluings of a 4g-gon into a genus-g surface (the maximal genus)."""
    return polygon_gluing_census(2 * g).get(g, 0)


def all_crossing_formula(g):
    return Fraction(double_factorial(4 * g - 1), 2 * g + 1)


# ---------------------------------------------------------------- Harer-Zagier

def harer_zagier_poly(m):
    """P_m(x) = (2m)!/(2^m m!) sum_p C(m,p) 2^p x(x-1)...(x-p)/(p+1)!, as a Poly in x."""
    if m < 1:
        raise MatrixModelError("need m >= 1")
    x = Poly.var("x")
    total = Poly.const(0)
    for p in range(m + 1):
        falling = Poly.const(1)
        for k in range(p + 1):
            falling = falling * (x - k)
        total = total + falling * Fraction(comb(m, p) * 2 ** p, factorial(p + 1))
    return total * Fraction(factorial(2 * m), 2 ** m * factorial(m))


def harer_zagier_coefficients(m):
    """epsilon_g(m) read off the closed form: coefficient of x^{m+1-2g}."""
    P = harer_zagier_poly(m)
    out = {}
    for g in range(m // 2 + 1):
        c = P.coefficient({"x": m + 1 - 2 * g})
        if c:
            out[g] = int(c)
    return out


def census_polynomial(m, **kw):
    x = Poly.var("x")
    total = Poly.const(0)
    for g, c in polygon_gluing_census(m, **kw).items():
        total = total + x ** (m + 1 - 2 * g) * c
    return total


def format_poly(P, var="x"):
    """Descending-degree text such as '2x^3+x'."""
    terms = []
    for k, c in sorted(P.terms.items(), key=lambda kv: -sum(e for _, e in kv[0])):
        d = sum(e for _, e in k)
        mono = "" if d == 0 else (var if d == 1 else "%s^%d" % (var, d))
        mag = abs(c)
        coef = str(mag) if (mag != 1 or not mono) else ""
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + mono))
    if not terms:
        return "0"
    text = "".join(s + t for s, t in terms)
    return text[1:] if text[0] == "+" else text


# ---------------------------------------------------------------- Euler characteristic

def _invert(values, n_max, coeff):
    """Solve values[n] = sum_i coeff(n, i) out[n-i] for out, triangularly (out[0] = 0)."""
    out = {0: 0}
    for n in range(1, n_max + 1):
        out[n] = values.get(n, 0) - sum(coeff(n, i) * out[n - i] for i in range(1, n + 1))
    return out


def mu_from_epsilon(eps, n_max):
    return _invert(eps, n_max, lambda n, i: comb(2 * n, i))


def lambda_from_mu(mu, n_max):
    return _invert(mu, n_max, lambda n, i: comb(n, i))


def epsilon_from_mu(mu, n):
    return sum(comb(2 * n, i) * mu.get(n - i, 0) for i in range(n + 1))


def mu_from_lambda(lam, n):
    return sum(comb(n, i) * lam.get(n - i, 0) for i in range(n + 1))


@dataclass
class EulerCharacteristic:
    genus: int
    value: Fraction
    epsilon: dict
    mu: dict
    lam: dict
    vanishing_checked_to: int

    def expected(self):
        g = self.genus
        return -bernoulli_number(2 * g) / (2 * g)


def moduli_euler_char(g, jobs=1, extra=3):
    """sum_n (-1)^{n-1} lambda_g(n)/(2n) from the census of epsilon_g(n), n <= 6g-3.

    The two binomial recursions are used genus by genus (valid for g >= 1).
    lambda_g(n) = 0 for n > 6g-3 is asserted for `extra` further n using the
    closed-form epsilon values.
    """
    if g < 1:
        raise MatrixModelError("need g >= 1")
    top = 6 * g - 3
    if top > CENSUS_BUDGET:
        raise MatrixModelError("census budget exceeded: genus %d needs %d-gons" % (g, 2 * top))
    eps = {}
    for n in range(1, top + 1):
        eps[n] = polygon_gluing_census(n, jobs=jobs).get(g, 0)
    hi = top + extra
    eps_ext = dict(eps)
    for n in range(top + 1, hi + 1):
        eps_ext[n] = harer_zagier_coefficients(n).get(g, 0)
    mu = mu_from_epsilon(eps_ext, hi)
    lam = lambda_from_mu(mu, hi)
    for n in range(top + 1, hi + 1):
        if lam[n] != 0:
            raise MatrixModelError("lambda_%d(%d) = %d should vanish" % (g, n, lam[n]))
    value = sum(Fraction((-1) ** (n - 1) * lam[n], 2 * n) for n in range(1, top + 1))
    return EulerCharacteristic(g, value, eps, {n: mu[n] for n in range(1, top + 1)},
                               {n: lam[n] for n in range(1, top + 1)}, hi)


# ---------------------------------------------------------------- Wick oracles

def matrix_wick_oracle(N, m, ensemble="hermitian"):
    """<Tr A^{2m}> by summing explicit index tuples over all Wick pairings of the 2m entries.

    Covariance <A_ij A_kl> is d_il d_jk (hermitian) or d_ik d_jl + d_il d_jk (real symmetric).
    """
    if N > ORACLE_BUDGET or m > ORACLE_BUDGET:
        raise MatrixModelError("oracle budget exceeded (N, m <= %d)" % ORACLE_BUDGET)
    if ensemble not in ("hermitian", "real_symmetric"):
        raise MatrixModelError("unknown ensemble %r" % ensemble)
    n = 2 * m
    idx = np.indices((N,) * n).reshape(n, -1)          # idx[s] = i_s
    row = idx
    col = np.roll(idx, -1, axis=0)                       # entry s is A_{i_s i_{s+1}}
    total = 0
    for partner in enumerate_matchings(n):
        if ensemble == "hermitian":
            w = np.ones(idx.shape[1], dtype=np.int64)
        else:
            w = None
        terms = [np.ones(idx.shape[1], dtype=np.int64)]
        for s in range(n):
            t = partner[s]
            if s > t:
                continue
            straight = (row[s] == col[t]) & (col[s] == row[t])
            if ensemble == "hermitian":
                w = w * straight
            else:
                crossed = (row[s] == row[t]) & (col[s] == col[t])
                terms = [x * straight for x in terms] + [x * crossed for x in terms]
        total += int(w.sum()) if ensemble == "hermitian" else int(sum(x.sum() for x in terms))
    return total


# ---------------------------------------------------------------- genus expansion

def _flower_group(valencies):
    """All elements of prod_i (Z/i)^{n_i} x S_{n_i} acting on half-edge labels."""
    by_val = defaultdict(list)
    starts, s = [], 0
    for k, v in enumerate(valencies):
        by_val[v].append(k)
        starts.append(s)
        s += v
    classes = sorted(by_val.items())
    factors = []
    for v, flowers in classes:
        opts = []
        for perm in permutations(flowers):
            for rots in product(range(v), repeat=len(flowers)):
                opts.append((flowers, perm, rots, v))
        factors.append(opts)
    H = s
    for combo in product(*factors):
        g = [0] * H
        for flowers, perm, rots, v in combo:
            for src, dst, r in zip(flowers, perm, rots):
                for k in range(v):
                    g[starts[src] + k] = starts[dst] + (k + r) % v
        yield g


def flower_group_order(valencies):
    c = Counter(valencies)
    out = 1
    for i, n in c.items():
        out *= i ** n * factorial(n)
    return out


def _act(g, partner):
    out = [0] * len(partner)
    for h, p in enumerate(partner):
        out[g[h]] = g[p]
    return tuple(out)


def _connected(valencies, partner):
    d = _DSU(len(valencies))
    vof = [k for k, v in enumerate(valencies) for _ in range(v)]
    for h, p in enumerate(partner):
        d.union(vof[h], vof[p])
    return d.classes() == 1


def fat_graph_classes(valencies):
    """Isomorphism classes of connected fat graphs on the given flowers.

    Each class is (representative matching, genus, nu, |Aut|) with |Aut| the
    stabilizer of the matching in the flower group.
    """
    group = list(_flower_group(valencies))
    seen = set()
    out = []
    for partner in enumerate_matchings(sum(valencies)):
        if partner in seen or not _connected(valencies, partner):
            continue
        orbit = {_act(g, partner) for g in group}
        seen |= orbit
        stab = len(group) // len(orbit)
        fg = FatGraph.from_matching(valencies, partner)
        out.append((partner, fg.genus(), fg.boundary_count(), stab))
    return out


def connected_gluing_census(valencies):
    """Map genus -> number of matchings of the labeled flowers giving a connected fat graph."""
    counts = Counter()
    for partner in enumerate_matchings(sum(valencies)):
        if not _connected(valencies, partner):
            continue
        nu = boundary_permutation_count(valencies, partner)
        b = len(partner) // 2 - len(valencies)
        counts[(b + 2 - nu) // 2] += 1
    return dict(counts)


def _profiles_for(couplings, max_degree):
    syms = sorted(couplings)
    for total in range(1, max_degree + 1):
        for combo in product(range(total + 1), repeat=len(syms)):
            if sum(combo) == total:
                yield {s: n for s, n in zip(syms, combo) if n}


def genus_expansion(couplings, max_degree, method="census"):
    """Coefficient a_g of N^{2-2g} in log Z_N(hbar/N) for S = Tr A^2/2 - sum g_i Tr A^i / i.

    couplings: {symbol: valency}.  Returns {g: Expansion} with terms
    prod (g_i hbar^{i/2-1})^{n_i} times the weighted fat-graph count, computed
    either from the labeled census divided by prod i^{n_i} n_i! ('census') or by
    summing 1/|Aut| over isomorphism classes ('classes').
    """
    out = defaultdict(Expansion)
    for prof in _profiles_for(couplings, max_degree):
        valencies = sorted(v for s, n in prof.items() for v in [couplings[s]] * n)
        if sum(valencies) % 2:
            continue
        hbar = sum(Fraction(couplings[s], 2) - 1 for s, n in prof.items() for _ in range(n))
        if method == "census":
            weights = {g: Fraction(c, flower_group_order(valencies))
                       for g, c in connected_gluing_census(valencies).items()}
        elif method == "classes":
            weights = defaultdict(Fraction)
            for _, g, _, aut in fat_graph_classes(valencies):
                weights[int(g)] += Fraction(1, aut)
        else:
            raise MatrixModelError("unknown method %r" % method)
        for g, w in weights.items():
            out[g] = out[g] + Expansion.monomial(prof, hbar, w)
    return dict(out)


# ---------------------------------------------------------------- planar quartic counts

def bipz(n):
    """12^n (2n-1)!/(n+2)!: connected planar gluings of n labeled 4-valent flowers."""
    if n < 1:
        raise MatrixModelError("need n >= 1")
    return Fraction(12 ** n * factorial(2 * n - 1), factorial(n + 2))


def planar_quartic_census(n):
    if n < 1 or n > 3:
        raise MatrixModelError("census budget exceeded (1 <= n <= 3)")
    return connected_gluing_census([4] * n).get(0, 0)


# ---------------------------------------------------------------- Wigner

def wigner_moment(m):
    """(1/2pi) int_{-2}^2 x^{2m} sqrt(4-x^2) dx, exactly.

    With x = 2 sin t this is (2^{2m+1}/pi) (I_{2m} - I_{2m+2}), I_k = int_0^pi sin^k.
    """
    a, _ = sin_power_integral(2 * m)
    b, _ = sin_power_integral(2 * m + 2)
    return Fraction(2 ** (2 * m + 1)) * (a - b)


def wigner_moment_numeric(m):
    return quadrature(lambda x: x ** (2 * m) * math.sqrt(max(0.0, 4 - x * x)), (-2.0, 2.0), 1e-13) / (2 * math.pi)


def sample_gue(N, rng):
    """Hermitian matrix with density proportional to exp(-Tr A^2 / 2)."""
    x = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (x + x.conj().T) / 2


def gue_moment(m, N=200, samples=10, seed=0):
    """Monte Carlo estimate of (1/N) E Tr (A/sqrt N)^{2m}."""
    rng = np.random.default_rng(seed)
    acc = 0.0
    for _ in range(samples):
        ev = np.linalg.eigvalsh(sample_gue(N, rng)) / math.sqrt(N)
        acc += float(np.sum(ev ** (2 * m))) / N
    return acc / samples


# ---------------------------------------------------------------- Hermite polynomials

SQRT_PI = "sqrt(pi)"


@dataclass
class HermitePoly:
    """H_n with exact integer coefficients (index = power of x).

    norm() is gamma_n = 2^n n! sqrt(pi), returned as (integer, True) meaning
    integer * sqrt(pi).
    """
    n: int
    coeffs: list

    def __call__(self, x):
        return sum(c * x ** k for k, c in enumerate(self.coeffs))

    def norm(self):
        return (2 ** self.n * factorial(self.n), True)

    def leading(self):
        return self.coeffs[-1]


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a, b, sb=1):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    out = [x + sb * y for x, y in zip(a, b)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def hermite(n):
    """Rodrigues: H_n = (-1)^n e^{x^2} d^n e^{-x^2}, built as H_{k+1} = 2x H_k - H_k'."""
    if n < 0:
        raise MatrixModelError("need n >= 0")
    h = [1]
    for _ in range(n):
        deriv = [k * c for k, c in enumerate(h)][1:] or [0]
        h = _padd(_pmul([0, 2], h), deriv, -1)
    return HermitePoly(n, h)


def hermite_three_term(n):
    """Independent route: H_{k+1} = 2x H_k - 2k H_{k-1}."""
    a, b = [1], [0, 2]
    if n == 0:
        return a
    for k in range(1, n):
        a, b = b, _padd(_pmul([0, 2], b), [2 * k * c for c in a], -1)
    return b


def gaussian_moment(coeffs):
    """(1/sqrt pi) int e^{-x^2} p(x) dx for p given by its coefficient list, exactly."""
    total = Fraction(0)
    for k, c in enumerate(coeffs):
        if k % 2 == 0:
            total += c * Fraction(double_factorial(k - 1), 2 ** (k // 2))
    return total


def hermite_inner(m, n):
    """(1/sqrt pi) int e^{-x^2} H_m H_n."""
    return gaussian_moment(_pmul(hermite(m).coeffs, hermite(n).coeffs))


def hermite_moment(m, k):
    """(1/sqrt pi) int e^{-x^2} x^{2m} H_{2k}: (the integral, the closed form)."""
    xm = [0] * (2 * m) + [1]
    lhs = gaussian_moment(_pmul(xm, hermite(2 * k).coeffs))
    rhs = Fraction(factorial(2 * m), factorial(m - k)) * Fraction(2) ** (2 * (k - m)) if k <= m else Fraction(0)
    return lhs, rhs


def hermite_square_expansion(r):
    """(H_r^2/(2^r r!), sum_k r!/(2^k k!^2 (r-k)!) H_{2k}) as coefficient lists."""
    lhs = [Fraction(c, 2 ** r * factorial(r)) for c in _pmul(hermite(r).coeffs, hermite(r).coeffs)]
    rhs = [Fraction(0)]
    for k in range(r + 1):
        w = Fraction(factorial(r), 2 ** k * factorial(k) ** 2 * factorial(r - k))
        rhs = _padd(rhs, [w * c for c in hermite(2 * k).coeffs])
    return lhs, rhs


def hermite_identities(r, k, m):
    """Residuals of orthogonality (H_r, H_r and H_r, H_{r+1}), the x^{2m} H_{2k} moment and the
    H_r^2 expansion.  Every entry is an exact scalar; all vanish when the identities hold."""
    gamma, _ = hermite(r).norm()
    lhs, rhs = hermite_moment(m, k)
    sq_l, sq_r = hermite_square_expansion(r)
    sq = max((abs(a - b) for a, b in zip(sq_l + [0] * len(sq_r), sq_r + [0] * len(sq_l))), default=0)
    return {
        "norm": hermite_inner(r, r) - gamma,
        "orthogonal": hermite_inner(r, r + 1),
        "moment": lhs - rhs,
        "square": Fraction(sq),
    }
