"""Gaussian integrals in closed form: bosonic Wick moments, Pfaffians,
fermionic Wick sums, supertrace and Berezinian.

Exact inputs (int/Fraction) give exact outputs; floats take the float path
through the same matching kernel.
"""
from fractions import Fraction
from itertools import product
from math import factorial, pi, sqrt

from . import linalg
from .graphs import enumerate_matchings
from .series import double_factorial


class GaussianError(ValueError):
    pass


def _scalar(x):
    return x if isinstance(x, (float, complex)) else Fraction(x)


class QuadraticForm:
    def __init__(self, matrix, euclidean=True):
        self.matrix = [[_scalar(x) for x in row] for row in matrix]
        d = len(self.matrix)
        for i in range(d):
            if len(self.matrix[i]) != d:
                raise GaussianError("form must be square")
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise GaussianError("form must be symmetric")
        self.dim = d
        self.euclidean = euclidean
        self._inv = None
        self._det = None

    @classmethod
    def identity(cls, d):
        return cls(linalg.identity(d, Fraction(1)))

    def det(self):
        if self._det is None:
            self._det = linalg.det(self.matrix)
        return self._det

    def inverse(self):
        if self._inv is None:
            if self.det() == 0:
                raise GaussianError("singular quadratic form")
            self._inv = linalg.inverse(self.matrix)
        return self._inv

    def pair_inverse(self, u, v):
        """B^{-1}(u, v) for covectors u, v."""
        inv = self.inverse()
        return sum(u[i] * inv[i][j] * v[j] for i in range(self.dim) for j in range(self.dim))

    def prefactor(self):
        """The normalisation (2pi)^{d/2} det(B)^{-1/2}, kept symbolic."""
        return {"two_pi_power": Fraction(self.dim, 2), "det": self.det()}

    def prefactor_value(self):
        return (2 * pi) ** (self.dim / 2) / sqrt(float(self.det()))


def _covector(c, d):
    if isinstance(c, int) and not isinstance(c, bool):
        v = [0] * d
        v[c] = 1
        return v
    return list(c)


def matching_sum(n, weight, signed=False):
    """Sum over perfect matchings of range(n) of the product of weight(i, j), i < j.

    With signed=True each term carries the sign of the permutation
    (i1, s(i1), i2, s(i2), ...) with i_r < s(i_r) listed by increasing i_r.
    """
    if n % 2:
        return 0
    total = 0
    for m in enumerate_matchings(n):
        term = 1
        seq = []
        for i in range(n):
            j = m[i]
            if i < j:
                term = term * weight(i, j)
                seq.extend((i, j))
        if signed and _perm_sign(seq) < 0:
            term = -term
        total = total + term
    return total


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


def wick_moment(B, covectors):
    """Normalised Gaussian expectation of a product of linear functions."""
    if not isinstance(B, QuadraticForm):
        B = QuadraticForm(B)
    vecs = [_covector(c, B.dim) for c in covectors]
    if len(vecs) % 2:
        return Fraction(0)
    B.inverse()
    gram = [[B.pair_inverse(u, v) for v in vecs] for u in vecs]
    return matching_sum(len(vecs), lambda i, j: gram[i][j])


def moment_1d(k, b=1):
    """<x^k> for the weight exp(-b x^2 / 2)."""
    if k % 2:
        return Fraction(0)
    return Fraction(double_factorial(k - 1)) / Fraction(b) ** (k // 2)


class SkewForm:
    def __init__(self, matrix):
        self.matrix = [[_scalar(x) for x in row] for row in matrix]
        n = len(self.matrix)
        for i in range(n):
            for j in range(n):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise GaussianError("form must be antisymmetric")
        self.dim = n

    def inverse(self):
        if linalg.det(self.matrix) == 0:
            raise GaussianError("singular skew form")
        return linalg.inverse(self.matrix)

    def pair_inverse(self, u, v):
        inv = self.inverse()
        n = self.dim
        return sum(u[i] * inv[i][j] * v[j] for i in range(n) for j in range(n))


def pfaffian(A, method=None):
    a = A.matrix if isinstance(A, SkewForm) else [list(r) for r in A]
    n = len(a)
    if n % 2:
        raise GaussianError("Pfaffian needs even dimension, got %d" % n)
    if n == 0:
        return Fraction(1)
    if method is None:
        method = "matching" if n <= 10 else "elimination"
    if method == "matching":
        return matching_sum(n, lambda i, j: a[i][j], signed=True)
    return _pfaffian_elim(a)


def _pfaffian_elim(a):
    """Skew Gaussian elimination (Parlett-Reid without the tridiagonal step)."""
    n = len(a)
    exact = linalg.is_exact([x for r in a for x in r])
    m = [[Fraction(x) if exact else x for x in row] for row in a]
    out = Fraction(1) if exact else 1.0
    for k in range(0, n - 1, 2):
        if exact:
            piv = next((r for r in range(k + 1, n) if m[k][r] != 0), None)
        else:
            piv = max(range(k + 1, n), key=lambda r: abs(m[k][r]))
        if piv is None or m[k][piv] == 0:
            return 0 * out
        if piv != k + 1:
            # swap index k+1 and piv in rows and columns
            m[k + 1], m[piv] = m[piv], m[k + 1]
            for row in m:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            out = -out
        p = m[k][k + 1]
        out = out * p
        # Schur complement of the leading 2x2 block
        for i in range(k + 2, n):
            for j in range(k + 2, n):
                m[i][j] = m[i][j] + (m[k + 1][i] * m[k][j] - m[k][i] * m[k + 1][j]) / p
    return out


def fermionic_wick(B, covectors):
    """Integral of lambda_1...lambda_n exp(-B(xi,xi)/2) by the Pfaffian formula."""
    if not isinstance(B, SkewForm):
        B = SkewForm(B)
    vecs = [_covector(c, B.dim) for c in covectors]
    neg = [[-x for x in row] for row in B.matrix]
    if len(vecs) % 2:
        return Fraction(0)
    B.inverse()
    gram = [[B.pair_inverse(u, v) for v in vecs] for u in vecs]
    return pfaffian(neg) * matching_sum(len(vecs), lambda i, j: gram[i][j], signed=True)


class Grassmann:
    """Element of the exterior algebra on ngens odd generators; monomials are bitmasks."""

    __slots__ = ("n", "c")

    def __init__(self, n, coeffs=None):
        self.n = n
        self.c = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def gen(cls, n, i, coeff=1):
        return cls(n, {1 << i: coeff})

    @classmethod
    def const(cls, n, x):
        return cls(n, {0: x})

    def _lift(self, x):
        return x if isinstance(x, Grassmann) else Grassmann(self.n, {0: x})

    def __add__(self, o):
        o = self._lift(o)
        d = dict(self.c)
        for k, v in o.c.items():
            d[k] = d.get(k, 0) + v
        return Grassmann(self.n, d)

    __radd__ = __add__

    def __neg__(self):
        return Grassmann(self.n, {k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, Grassmann):
            return Grassmann(self.n, {k: v * o for k, v in self.c.items()})
        d = {}
        for a, x in self.c.items():
            for b, y in o.c.items():
                if a & b:
                    continue
                s = _mono_sign(a, b)
                k = a | b
                d[k] = d.get(k, 0) + (x * y if s > 0 else -(x * y))
        return Grassmann(self.n, d)

    def __rmul__(self, o):
        return Grassmann(self.n, {k: o * v for k, v in self.c.items()})

    def __truediv__(self, o):
        return self * o.inverse() if isinstance(o, Grassmann) else self * (1 / Fraction(o) if isinstance(o, int) else 1 / o)

    def body(self):
        return self.c.get(0, 0)

    def soul(self):
        return Grassmann(self.n, {k: v for k, v in self.c.items() if k})

    def inverse(self):
        b = self.body()
        if b == 0:
            raise ZeroDivisionError("element with zero body is not invertible")
        ib = Fraction(1, b) if isinstance(b, int) else 1 / b
        s = self.soul() * ib
        # (b(1+s))^{-1} = b^{-1} sum (-s)^k, finite since s is nilpotent
        out = Grassmann.const(self.n, 1)
        term = Grassmann.const(self.n, 1)
        for _ in range(self.n):
            term = term * (-s)
            if not term.c:
                break
            out = out + term
        return out * ib

    def exp(self):
        """exp of an even element; the body goes through the scalar exp."""
        import cmath
        import math
        b = self.body()
        s = self.soul()
        out = Grassmann.const(self.n, 1)
        term = Grassmann.const(self.n, 1)
        for k in range(1, self.n + 1):
            term = term * s * Fraction(1, k)
            if not term.c:
                break
            out = out + term
        if b == 0:
            return out
        eb = cmath.exp(b) if isinstance(b, complex) else math.exp(b)
        return out * eb

    def is_even(self):
        return all(bin(k).count("1") % 2 == 0 for k in self.c)

    def is_odd(self):
        return all(bin(k).count("1") % 2 == 1 for k in self.c)

    def top(self, order=None):
        """Coefficient of xi_{o1} xi_{o2} ... for the given generator order (default 0..n-1)."""
        full = (1 << self.n) - 1
        v = self.c.get(full, 0)
        if order is None:
            return v
        return v * _perm_sign(list(order))

    def __eq__(self, o):
        o = self._lift(o)
        return self.n == o.n and self.c == o.c

    def __repr__(self):
        return "Grassmann(%d, %r)" % (self.n, self.c)


def _mono_sign(a, b):
    """Sign from sorting the product of monomials a*b into increasing order."""
    swaps = 0
    x = b
    while x:
        j = (x & -x).bit_length() - 1
        swaps += bin(a >> (j + 1)).count("1")
        x &= x - 1
    return -1 if swaps % 2 else 1


def grassmann_exp_quadratic(B, scale):
    """exp(scale * sum_ij B_ij xi_i xi_j) in the exterior algebra."""
    n = len(B)
    q = Grassmann(n)
    for i in range(n):
        for j in range(n):
            if B[i][j] != 0:
                q = q + Grassmann.gen(n, i) * Grassmann.gen(n, j) * (scale * B[i][j])
    return q.exp()


def grassmann_linear(vec):
    n = len(vec)
    out = Grassmann(n)
    for i, x in enumerate(vec):
        if x != 0:
            out = out + Grassmann.gen(n, i, x)
    return out


def fermionic_wick_oracle(B, covectors):
    """Top coefficient of lambda_1...lambda_n exp(-B(xi,xi)/2), computed in the exterior algebra."""
    B = B.matrix if isinstance(B, SkewForm) else B
    n = len(B)
    integrand = Grassmann.const(n, Fraction(1))
    for c in covectors:
        integrand = integrand * grassmann_linear(_covector(c, n))
    integrand = integrand * grassmann_exp_quadratic(B, Fraction(-1, 2))
    return integrand.top()


def operator_integral(A):
    """Top coefficient of exp(sum_ij a_ij xi_j eta_i), generators ordered xi_1..xi_n, eta_1..eta_n."""
    n = len(A)
    S = Grassmann(2 * n)
    for i in range(n):
        for j in range(n):
            if A[i][j] != 0:
                S = S + Grassmann.gen(2 * n, j) * Grassmann.gen(2 * n, n + i) * A[i][j]
    return S.exp().top()


def operator_integral_formula(A):
    n = len(A)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * linalg.det(A)


# supermatrices

class SuperMatrix:
    """Blocks A00 (n x n, even), A01 (n x m, odd), A10 (m x n, odd), A11 (m x m, even).

    Entries may be plain numbers (odd blocks then usually zero) or Grassmann elements.
    """

    def __init__(self, a00, a01, a10, a11):
        self.a00 = [list(r) for r in a00]
        self.a11 = [list(r) for r in a11]
        self.n = len(self.a00)
        self.m = len(self.a11)
        self.a01 = [list(r) for r in a01] if a01 else [[0] * self.m for _ in range(self.n)]
        self.a10 = [list(r) for r in a10] if a10 else [[0] * self.n for _ in range(self.m)]

    def blocks(self):
        return self.a00, self.a01, self.a10, self.a11

    def __matmul__(self, o):
        def mm(x, y, rows, cols):
            if not rows or not cols:
                return [[0] * cols for _ in range(rows)] if rows else []
            return [[sum((x[i][k] * y[k][j] for k in range(len(y))), 0) for j in range(cols)]
                    for i in range(rows)]

        def add(x, y):
            return [[a + b for a, b in zip(r, s)] for r, s in zip(x, y)]

        n, m = self.n, self.m
        c00 = add(mm(self.a00, o.a00, n, n), mm(self.a01, o.a10, n, n))
        c01 = add(mm(self.a00, o.a01, n, m), mm(self.a01, o.a11, n, m))
        c10 = add(mm(self.a10, o.a00, m, n), mm(self.a11, o.a10, m, n))
        c11 = add(mm(self.a10, o.a01, m, m), mm(self.a11, o.a11, m, m))
        return SuperMatrix(c00, c01, c10, c11)


def supertrace(A):
    return sum((A.a00[i][i] for i in range(A.n)), 0) - sum((A.a11[i][i] for i in range(A.m)), 0)


def berezinian(A, tol=0):
    if A.m == 0:
        return linalg.det(A.a00, tol)
    d11 = linalg.det(A.a11, tol)
    if linalg._is_zero(d11, tol):
        raise GaussianError("Berezinian undefined: A11 is singular")
    inv11 = linalg.inverse(A.a11, tol)
    if A.n:
        corr = linalg.matmul(linalg.matmul(A.a01, inv11), A.a10)
        schur = [[A.a00[i][j] - corr[i][j] for j in range(A.n)] for i in range(A.n)]
        top = linalg.det(schur, tol)
    else:
        top = 1
    if isinstance(d11, Grassmann):
        return d11.inverse() * top
    return top * (Fraction(1, d11) if isinstance(d11, int) else 1 / d11)


def super_exp(C, terms=40):
    """exp of a supermatrix by its power series (for numeric checks)."""
    n, m = C.n, C.m
    ident = SuperMatrix(linalg.identity(n, 1.0), None, None, linalg.identity(m, 1.0))
    out = ident
    term = ident
    for k in range(1, terms):
        term = term @ C
        term = SuperMatrix(*[[[x * (1.0 / k) for x in row] for row in blk] for blk in term.blocks()])
        out = SuperMatrix(*[[[a + b for a, b in zip(r, s)] for r, s in zip(x, y)]
                            for x, y in zip(out.blocks(), term.blocks())])
    return out


def random_supermatrix(rng, n, m, ngens, exact=True, scale=1.0, diag_shift=0):
    """Random even supermatrix with Grassmann entries: even blocks get even elements,
    odd blocks odd elements.  Body of even blocks is random plus diag_shift on the diagonal."""

    def rnd():
        if exact:
            return Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        return float(rng.normal()) * scale

    even_masks = [k for k in range(1, 1 << ngens) if bin(k).count("1") % 2 == 0]
    odd_masks = [k for k in range(1 << ngens) if bin(k).count("1") % 2 == 1]

    def elem(parity, diag=False):
        masks = even_masks if parity == 0 else odd_masks
        coeffs = {}
        for k in masks:
            if rng.random() < 0.5:
                coeffs[k] = rnd()
        if parity == 0:
            b = rnd()
            if diag:
                b = b + diag_shift
            coeffs[0] = b
        return Grassmann(ngens, coeffs)

    a00 = [[elem(0, i == j) for j in range(n)] for i in range(n)]
    a11 = [[elem(0, i == j) for j in range(m)] for i in range(m)]
    a01 = [[elem(1) for _ in range(m)] for _ in range(n)]
    a10 = [[elem(1) for _ in range(n)] for _ in range(m)]
    return SuperMatrix(a00, a01, a10, a11)
