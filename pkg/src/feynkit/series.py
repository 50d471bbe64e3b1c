"""Truncated formal power series with exact rational coefficients.

A series is stored as a valuation offset ``val`` and a list of coefficients
for the exponents ``val, val+1, ..., order-1``.  Everything at or above
``order`` is unknown, so arithmetic only ever reports what both operands
actually determine.  Finitely many negative exponents are allowed.
"""
from fractions import Fraction
from math import comb, factorial
import json


class SeriesError(ValueError):
    pass


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("series coefficients must be exact, got a float")
    return Fraction(c)


class Series:
    __slots__ = ("var", "val", "coeffs", "order")

    def __init__(self, coeffs, order=None, val=0, var="x"):
        coeffs = [_frac(c) for c in coeffs]
        if order is None:
            order = val + len(coeffs)
        n = order - val
        if n < 0:
            raise SeriesError("truncation order below the first stored exponent")
        if len(coeffs) > n:
            coeffs = coeffs[:n]
        else:
            coeffs = coeffs + [Fraction(0)] * (n - len(coeffs))
        self.var = var
        self.val = val
        self.coeffs = coeffs
        self.order = order

    # construction helpers
    @classmethod
    def zero(cls, order, var="x"):
        return cls([], order, 0, var)

    @classmethod
    def one(cls, order, var="x"):
        return cls([1], order, 0, var)

    @classmethod
    def monomial(cls, k, order, c=1, var="x"):
        if k >= order:
            return cls([], order, min(k, order), var)
        return cls([c], order, k, var)

    @classmethod
    def from_dict(cls, terms, order, var="x"):
        lo = min([0] + [k for k in terms])
        cs = [Fraction(0)] * (order - lo)
        for k, c in terms.items():
            if k < order:
                cs[k - lo] += _frac(c)
        return cls(cs, order, lo, var)

    @classmethod
    def from_function(cls, fn, order, start=0, var="x"):
        return cls([fn(n) for n in range(start, order)], order, start, var)

    # basic access
    def __getitem__(self, k):
        if k >= self.order:
            raise SeriesError("coefficient of x^%d is beyond the truncation order %d" % (k, self.order))
        if k < self.val:
            return Fraction(0)
        return self.coeffs[k - self.val]

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.val + i
        return self.order

    def is_zero(self):
        return self.valuation() >= self.order

    def terms(self):
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    def truncate(self, order):
        order = min(order, self.order)
        lo = min(self.val, order)
        return Series([self[k] for k in range(lo, order)], order, lo, self.var)

    def __eq__(self, other):
        if isinstance(other, Series):
            if self.order != other.order:
                return False
            lo = min(self.val, other.val)
            return all(self[k] == other[k] for k in range(lo, self.order))
        return NotImplemented

    def agrees(self, other, order=None):
        n = min(self.order, other.order) if order is None else order
        lo = min(self.val, other.val)
        return all(self[k] == other[k] for k in range(lo, n))

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.terms().items()))))

    def __repr__(self):
        parts = []
        for k, c in sorted(self.terms().items()):
            parts.append("%s*%s^%d" % (c, self.var, k))
        parts.append("O(%s^%d)" % (self.var, self.order))
        return " + ".join(parts)

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        if self.order <= 0:
            return Series([], self.order, self.order, self.var)
        return Series([_frac(other)], self.order, 0, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        lo = min(self.val, other.val, order)
        return Series([self[k] + other[k] if k < self.order and k < other.order else 0
                       for k in range(lo, order)], order, lo, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Series([-c for c in self.coeffs], self.order, self.val, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = _frac(c)
        return Series([c * a for a in self.coeffs], self.order, self.val, self.var)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + vb, other.order + va)
        if va >= self.order or vb >= other.order:
            order = min(order, max(va + vb, min(self.order, other.order)))
            return Series([], order, min(0, order), self.var)
        a = self.coeffs[va - self.val:]
        b = other.coeffs[vb - other.val:]
        lo = va + vb
        n = order - lo
        out = [Fraction(0)] * max(n, 0)
        for i, x in enumerate(a):
            if i >= n:
                break
            if not x:
                continue
            for j in range(min(len(b), n - i)):
                out[i + j] += x * b[j]
        return Series(out, order, lo, self.var)

    def __rmul__(self, other):
        return self.scale(other)

    def inverse(self):
        v = self.valuation()
        if v >= self.order:
            raise SeriesError("series is zero to its truncation order; not invertible")
        a = self.coeffs[v - self.val:]
        n = self.order - v
        inv0 = 1 / a[0]
        h = [inv0]
        for k in range(1, n):
            s = sum(a[j] * h[k - j] for j in range(1, min(k, len(a) - 1) + 1))
            h.append(-s * inv0)
        return Series(h, -v + n, -v, self.var)

    def __truediv__(self, other):
        if not isinstance(other, Series):
            return self.scale(1 / _frac(other))
        if other.valuation() >= other.order:
            raise SeriesError("division by a series with no invertible leading term")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse().scale(other)

    def __pow__(self, n):
        if not isinstance(n, int):
            return self.power(n)
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return Series.one(max(self.order - self.valuation(), 1), self.var)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by var**k."""
        return Series(self.coeffs, self.order + k, self.val + k, self.var)

    # calculus
    def deriv(self):
        terms = {k - 1: k * c for k, c in self.terms().items() if k != 0}
        return Series.from_dict(terms, self.order - 1, self.var)

    def integral(self):
        if self.val < 0 and self[-1] != 0:
            raise SeriesError("integral of x^-1 is not a Laurent series")
        cs = {}
        for k in range(self.val, self.order):
            c = self[k]
            if c:
                cs[k + 1] = c / (k + 1)
        return Series.from_dict(cs, self.order + 1, self.var)

    def compose(self, g):
        """self(g(x)); g must have zero constant term."""
        if g.val < 0 and any(g[k] for k in range(g.val, min(0, g.order))):
            raise SeriesError("inner series has negative powers")
        if g.order > 0 and g[0] != 0:
            raise SeriesError("inner series must have zero constant term")
        if self.valuation() < 0:
            raise SeriesError("outer Laurent series cannot be composed")
        vg = g.valuation()
        if vg >= g.order:
            order = g.order
        else:
            order = self.order * vg
        for k in range(1, self.order):
            if self[k]:
                order = min(order, g.order + (k - 1) * vg)
        order = max(order, 1) if self.order > 0 else 0
        g = g.truncate(order)
        if self.order <= 0:
            return Series([], order, 0, self.var)
        acc = Series([], order, 0, self.var)
        top = min(self.order - 1, order // max(vg, 1) + 1)
        for k in range(top, -1, -1):
            acc = (acc * g).truncate(order) + Series([self[k]], order, 0, self.var)
        return acc

    def reversion(self):
        """Compositional inverse by Newton iteration."""
        if self.val < 0 and any(self[k] for k in range(self.val, 0)):
            raise SeriesError("reversion needs a power series")
        if self.order < 2:
            raise SeriesError("need at least the linear coefficient")
        if self[0] != 0:
            raise SeriesError("reversion needs f(0)=0")
        if self[1] == 0:
            raise SeriesError("reversion needs an invertible linear coefficient")
        N = self.order
        x = Series.monomial(1, N, 1, self.var)
        df = self.deriv()
        g = Series([0, 1 / self[1]], 2, 0, self.var)
        prec = 2
        while prec < N:
            prec = min(2 * prec, N)
            gp = g.truncate(prec)
            gp = Series([gp[k] if k < g.order else 0 for k in range(prec)], prec, 0, self.var)
            fg = self.truncate(prec).compose(gp)
            resid = fg - x.truncate(prec)
            dfg = df.truncate(prec).compose(gp)
            g = gp - (resid / dfg).truncate(prec)
        return g.truncate(N)

    def exp(self):
        if self.order <= 0:
            return Series([], self.order, 0, self.var)
        if self.valuation() < 0:
            raise SeriesError("exp of a series with negative powers")
        if self[0] != 0:
            raise SeriesError("exp needs zero constant term to stay rational")
        n = self.order
        h = [Fraction(1)] + [Fraction(0)] * (n - 1)
        f = [self[k] for k in range(n)]
        for m in range(1, n):
            h[m] = sum(k * f[k] * h[m - k] for k in range(1, m + 1)) / m
        return Series(h, n, 0, self.var)

    def log(self):
        if self.valuation() != 0 or self[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.deriv() / self).integral().truncate(self.order)

    def power(self, alpha):
        """self**alpha for rational alpha; needs constant term 1."""
        alpha = _frac(alpha)
        if self.valuation() != 0:
            raise SeriesError("rational power needs a nonzero constant term")
        if self[0] != 1:
            raise SeriesError("rational power needs constant term 1")
        n = self.order
        f = [self[k] for k in range(n)]
        h = [Fraction(1)] + [Fraction(0)] * (n - 1)
        for m in range(1, n):
            s = Fraction(0)
            for k in range(1, m + 1):
                if f[k]:
                    s += ((alpha + 1) * k - m) * f[k] * h[m - k]
            h[m] = s / m
        return Series(h, n, 0, self.var)

    def __call__(self, x):
        """Evaluate the known part at a number."""
        return sum(c * x ** k for k, c in self.terms().items())

    # serialization
    def to_json(self):
        return {"var": self.var, "min_exp": self.val,
                "coeffs": [{"num": c.numerator, "den": c.denominator} for c in self.coeffs]}

    @classmethod
    def from_json(cls, d):
        if isinstance(d, str):
            d = json.loads(d)
        cs = [Fraction(c["num"], c["den"]) for c in d["coeffs"]]
        return cls(cs, d["min_exp"] + len(cs), d["min_exp"], d.get("var", "x"))


FormalSeries = Series


def geometric(ratio, order, var="x"):
    ratio = _frac(ratio)
    return Series([ratio ** n for n in range(order)], order, 0, var)


def exp_series(order, var="x"):
    return Series([Fraction(1, factorial(n)) for n in range(order)], order, 0, var)


def log1p_series(order, var="x"):
    return Series([0] + [Fraction((-1) ** (n + 1), n) for n in range(1, order)], order, 0, var)


# classical sequences

def double_factorial(n):
    """n!! with (-1)!! = 1."""
    if n <= 0:
        return 1
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def bernoulli(N):
    """B_0..B_N with generating function t/(1-e^{-t}), so B_1 = +1/2."""
    # (1 - e^{-t})/t = sum (-1)^n t^n/(n+1)!
    d = Series([Fraction((-1) ** n, factorial(n + 1)) for n in range(N + 1)], N + 1)
    g = d.inverse()
    return [g[n] * factorial(n) for n in range(N + 1)]


def bernoulli_number(n):
    return bernoulli(n)[n]


def partitions(n):
    """p(0..n) by Euler's recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        s = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                s += sign * p[m - g2]
            k += 1
        p[m] = s
    return p
