"""Counting labeled trees: Pruefer enumeration, trivalent and oriented trees,
the Kirchhoff polynomial, the coloured matrix-tree formula and the d=1 tree sum."""
from collections import Counter
from fractions import Fraction
from itertools import product
from math import comb, factorial, prod

from . import linalg
from .poly import Poly, det_expand
from .series import Series


class TreeError(ValueError):
    pass


MAX_ENUM = 9


def prufer_decode(seq, n):
    """Edge list of the labeled tree on range(n) with the given Pruefer sequence."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        for leaf in range(n):
            if degree[leaf] == 1:
                break
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def labeled_trees(n):
    """Every labeled tree on range(n), as an edge list."""
    if n > MAX_ENUM:
        raise TreeError("enumeration budget exceeded (n <= %d)" % MAX_ENUM)
    if n == 1:
        yield []
        return
    for seq in product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def enumerate_labeled_trees(n, predicate=None):
    """Number of labeled trees on n vertices satisfying predicate(edges)."""
    return sum(1 for t in labeled_trees(n) if predicate is None or predicate(t))


def count_by_valency(n, allowed):
    """Trees on n labeled vertices with every valency in allowed (degree read off the Pruefer code)."""
    if n > MAX_ENUM:
        raise TreeError("enumeration budget exceeded (n <= %d)" % MAX_ENUM)
    if n == 1:
        return 1 if 0 in allowed else 0
    if n == 2:
        return 1 if 1 in allowed else 0
    total = 0
    for seq in product(range(n), repeat=n - 2):
        c = Counter(seq)
        if all(1 + c[i] in allowed for i in range(n)):
            total += 1
    return total


def valencies(edges, n):
    d = [0] * n
    for a, b in edges:
        d[a] += 1
        d[b] += 1
    return d


def cayley(n):
    if n < 1:
        raise ValueError("need at least one vertex")
    return n ** (n - 2) if n >= 2 else 1


def trivalent_count_formula(k):
    """Labeled trees on 2k vertices with valencies 1 and 3: (2k)! (2k-3)!!/(k+1)!."""
    from .series import double_factorial
    return factorial(2 * k) * double_factorial(2 * k - 3) // factorial(k + 1)


def bipartition(edges, n):
    side = [None] * n
    side[0] = 0
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if side[u] is None:
                side[u] = 1 - side[v]
                stack.append(u)
    return side


def oriented_tree_count(p, q):
    """p^{q-1} q^{p-1} (p+q)!/(p! q!): trees with p sources and q sinks, every edge source->sink."""
    if p < 1 or q < 1:
        raise TreeError("need p, q >= 1")
    return p ** (q - 1) * q ** (p - 1) * comb(p + q, p)


def oriented_tree_count_fixed(p, q):
    return p ** (q - 1) * q ** (p - 1)


def oriented_tree_enumerate(p, q, fixed=False):
    """Count (tree, orientation) pairs by enumeration.

    Orientations make every vertex a pure source or a pure sink, i.e. a proper
    2-colouring; with fixed=True the sources must be exactly the labels 0..p-1.
    """
    n = p + q
    total = 0
    for edges in labeled_trees(n):
        side = bipartition(edges, n)
        for colouring in (side, [1 - s for s in side]):
            sources = [v for v in range(n) if colouring[v] == 0]
            if len(sources) != p:
                continue
            if fixed and sources != list(range(p)):
                continue
            total += 1
    return total


# ---------------------------------------------------------------- Kirchhoff

def _u(i, k):
    i, k = min(i, k), max(i, k)
    return "u%d%d" % (i + 1, k + 1)


def laplacian_form(u, m):
    """Matrix delta_il sum_k u_kl - u_il with u a function of unordered pairs (i != k)."""
    L = [[0] * m for _ in range(m)]
    for i in range(m):
        for l in range(m):
            if i == l:
                L[i][l] = sum((u(k, l) for k in range(m) if k != l), 0)
            else:
                L[i][l] = -u(i, l)
    return L


def reduced(M, j):
    return [row[:j] + row[j + 1:] for r, row in enumerate(M) if r != j]


def kirchhoff_polynomial(m, j=None):
    """K_m in variables u_ik as a Poly, from the reduced Laplacian with row/column j removed."""
    L = laplacian_form(lambda i, k: Poly.var(_u(i, k)), m)
    j = m - 1 if j is None else j
    return det_expand(reduced(L, j)) if m > 1 else Poly.const(1)


def kirchhoff_value(u, m, j=None):
    """K_m at numeric/rational u (function of pairs)."""
    L = laplacian_form(u, m)
    j = m - 1 if j is None else j
    return linalg.det(reduced(L, j)) if m > 1 else Fraction(1)


def spanning_tree_count(adjacency):
    """Number of spanning trees: a principal cofactor of the Laplacian, exactly."""
    m = len(adjacency)
    for i in range(m):
        if adjacency[i][i]:
            raise TreeError("self-loops are not allowed")
    if m == 1:
        return 1
    L = laplacian_form(lambda i, k: Fraction(adjacency[i][k]), m)
    return int(linalg.det(reduced(L, 0)))


def spanning_tree_count_eigen(adjacency):
    """Float cross-check: product of non-zero Laplacian eigenvalues divided by m."""
    import numpy as np
    A = np.array(adjacency, dtype=float)
    L = np.diag(A.sum(axis=1)) - A
    ev = np.sort(np.linalg.eigvalsh(L))
    return float(np.prod(ev[1:]) / len(A))


def spanning_tree_count_dc(adjacency):
    """Deletion-contraction on a multigraph given by its adjacency matrix."""
    A = [list(r) for r in adjacency]
    m = len(A)
    if m == 1:
        return 1
    for i in range(m):
        for k in range(i + 1, m):
            if A[i][k]:
                deleted = [list(r) for r in A]
                deleted[i][k] -= 1
                deleted[k][i] -= 1
                return spanning_tree_count_dc(deleted) + _contract_count(A, i, k)
    return 0


def _contract_count(A, i, k):
    m = len(A)
    C = [list(r) for r in A]
    for t in range(m):
        if t != i and t != k:
            C[i][t] += C[k][t]
            C[t][i] += C[t][k]
    C[i][i] = 0
    C = [row[:k] + row[k + 1:] for r, row in enumerate(C) if r != k]
    return spanning_tree_count_dc(C)


# ---------------------------------------------------------------- coloured trees

def colored_tree_generating(p, z):
    """Closed form Q_p(z) = (p_1...p_m)^{-1} K(p_k z_kl p_l) prod_l (sum_k p_k z_kl)^{p_l - 1}.

    z is a symmetric m x m matrix of numbers or Polys.
    """
    m = len(p)
    if any(x < 1 for x in p):
        raise TreeError("colour multiplicities must be positive")
    K = _kirchhoff_generic(lambda k, l: p[k] * z[k][l] * p[l], m)
    out = K
    for l in range(m):
        s = sum((p[k] * z[k][l] for k in range(m)), 0)
        out = out * s ** (p[l] - 1)
    denom = prod(p)
    return out * Fraction(1, denom)


def _kirchhoff_generic(u, m):
    if m == 1:
        return Fraction(1)
    L = laplacian_form(u, m)
    R = reduced(L, m - 1)
    if any(isinstance(x, Poly) for row in R for x in row):
        return det_expand(R)
    return linalg.det(R)


def colored_tree_enumerate(p, z):
    """sum over labeled trees with colours assigned in blocks (first p_1 colour 0, ...) of prod z_{c(a) c(b)}."""
    colour = [c for c, n in enumerate(p) for _ in range(n)]
    n = len(colour)
    total = 0
    for edges in labeled_trees(n):
        term = 1
        for a, b in edges:
            term = term * z[colour[a]][colour[b]]
        total = total + term
    return total


def colored_tree_polynomial(p):
    """Q_p as a Poly in variables z_ij (i <= j), by enumeration."""
    m = len(p)
    z = [[Poly.var("z%d%d" % (min(i, j) + 1, max(i, j) + 1)) for j in range(m)] for i in range(m)]
    return colored_tree_enumerate(p, z), colored_tree_generating(p, z)


# ---------------------------------------------------------------- tree sums

def tree_sum_closed_form(h, max_degree):
    """F(g) = int_0^g h(f(a)) da with f the compositional inverse of x / h'(x).

    This is -S(x0) for S = x^2/2 - g h(x), i.e. the sum over trees.
    """
    order = max_degree + 1
    h = h.truncate(order) if h.order > order else h
    hp = h.deriv()
    if hp[0] == 0:
        raise TreeError("need h'(0) != 0")
    x = Series.monomial(1, order)
    q = x / hp
    f = q.reversion()
    return h.compose(f).integral().truncate(max_degree + 1)


def exp_h(order):
    return Series.from_function(lambda n: Fraction(1, factorial(n)), order)


def trivalent_h(order):
    return Series.from_dict({1: 1, 3: Fraction(1, 6)}, order)
