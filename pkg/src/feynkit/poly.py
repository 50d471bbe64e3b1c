"""Sparse multivariate polynomials with exact coefficients."""
from fractions import Fraction
from itertools import permutations


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # terms: {tuple of (var, exp) sorted: coeff}
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def var(cls, name):
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)})

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        out = {}
        for a, x in self.terms.items():
            for b, y in o.terms.items():
                m = dict(a)
                for s, e in b:
                    m[s] = m.get(s, 0) + e
                k = tuple(sorted(m.items()))
                out[k] = out.get(k, 0) + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        return self.terms == self._lift(o).terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def evaluate(self, values):
        total = 0
        for k, v in self.terms.items():
            t = v
            for s, e in k:
                t = t * values[s] ** e
            total = total + t
        return total

    def coefficient(self, monomial):
        return self.terms.get(tuple(sorted(monomial.items())), Fraction(0))

    def variables(self):
        return sorted({s for k in self.terms for s, _ in k})

    def degree(self):
        return max((sum(e for _, e in k) for k in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items()):
            mono = "*".join(s if e == 1 else "%s^%d" % (s, e) for s, e in k)
            parts.append(("%s*%s" % (v, mono) if v != 1 else mono) if mono else str(v))
        return " + ".join(parts)


def det_expand(m):
    """Determinant by cofactor expansion along the first row (any commutative ring)."""
    n = len(m)
    if n == 0:
        return Poly.const(1)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_expand(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
