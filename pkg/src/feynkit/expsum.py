"""Exact sums of terms c * prod v^r * exp(sum a_v v) * D^k.

This is the closed class of functions produced by integrating products of
exponential propagators over ordered cells: integration of t^r e^{at} between
variables, 0, the circle length or +-infinity stays inside it.  D is an
optional formal symbol carried along untouched (used for 1/(X - 1/X) on the
circle).
"""
import math
from collections import defaultdict
from fractions import Fraction
from math import factorial


class ExpSumError(ValueError):
    pass


def _key(powers, expo, dpow):
    return (tuple(sorted((v, r) for v, r in powers.items() if r)),
            tuple(sorted((v, Fraction(a)) for v, a in expo.items() if a)),
            dpow)


class ExpSum:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c):
        return cls({((), (), 0): Fraction(c)})

    @classmethod
    def term(cls, c=1, powers=None, expo=None, dpow=0):
        return cls({_key(powers or {}, expo or {}, dpow): Fraction(c)})

    def __add__(self, o):
        o = o if isinstance(o, ExpSum) else ExpSum.const(o)
        out = defaultdict(Fraction, self.terms)
        for k, c in o.terms.items():
            out[k] += c
        return ExpSum(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpSum({k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, ExpSum):
            return ExpSum({k: c * Fraction(o) for k, c in self.terms.items()})
        out = defaultdict(Fraction)
        for (p1, e1, d1), c1 in self.terms.items():
            for (p2, e2, d2), c2 in o.terms.items():
                p = dict(p1)
                for v, r in p2:
                    p[v] = p.get(v, 0) + r
                e = dict(e1)
                for v, a in e2:
                    e[v] = e.get(v, 0) + a
                out[_key(p, e, d1 + d2)] += c1 * c2
        return ExpSum(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        o = o if isinstance(o, ExpSum) else ExpSum.const(o)
        return (self - o).terms == {}

    def is_zero(self):
        return not self.terms

    def variables(self):
        out = set()
        for p, e, _ in self.terms:
            out |= {v for v, _ in p} | {v for v, _ in e}
        return out

    def substitute(self, var, target):
        """Replace var by another variable name, by 0, or by a linear form {name: coeff}."""
        out = ExpSum()
        for (p, e, d), c in self.terms.items():
            p, e = dict(p), dict(e)
            r = p.pop(var, 0)
            a = e.pop(var, 0)
            if target == 0:
                if r:
                    continue
                out = out + ExpSum({_key(p, e, d): c})
                continue
            form = {target: Fraction(1)} if isinstance(target, str) else dict(target)
            for v, k in form.items():
                e[v] = e.get(v, 0) + a * k
            base = ExpSum({_key(p, e, d): c})
            if r:
                lin = ExpSum()
                for v, k in form.items():
                    lin = lin + ExpSum.term(k, {v: 1})
                for _ in range(r):
                    base = base * lin
            out = out + base
        return out

    def integrate(self, var, lower, upper):
        """int_lower^upper d var; bounds are variable names, 0, or +-math.inf."""
        out = ExpSum()
        for (p, e, d), c in self.terms.items():
            p, e = dict(p), dict(e)
            r = p.pop(var, 0)
            a = e.pop(var, 0)
            rest = ExpSum({_key(p, e, d): c})
            out = out + rest * (_antideriv_at(var, r, a, upper) - _antideriv_at(var, r, a, lower))
        return out

    def evaluate(self, values, D=None):
        """Float value; values maps variable names to numbers."""
        total = 0.0
        for (p, e, d), c in self.terms.items():
            t = float(c)
            for v, r in p:
                t *= float(values[v]) ** r
            t *= math.exp(sum(float(a) * float(values[v]) for v, a in e))
            if d:
                if D is None:
                    raise ExpSumError("value of D required")
                t *= D ** d
            total += t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, e, d), c in sorted(self.terms.items(), key=str):
            s = str(c)
            s += "".join("*%s^%d" % (v, r) if r > 1 else "*%s" % v for v, r in p)
            if e:
                s += "*exp(%s)" % "+".join("%s*%s" % (a, v) for v, a in e)
            if d:
                s += "*D^%d" % d
            parts.append(s)
        return " + ".join(parts)


def _antideriv_at(var, r, a, bound):
    """Antiderivative of var^r e^{a var} evaluated at the bound, as an ExpSum."""
    if bound in (math.inf, -math.inf):
        if a == 0 or (a > 0) == (bound > 0):
            raise ExpSumError("integral over %s diverges at %s" % (var, bound))
        return ExpSum()
    if a == 0:
        f = ExpSum.term(Fraction(1, r + 1), {var: r + 1})
    else:
        f = ExpSum()
        for k in range(r + 1):
            coef = Fraction((-1) ** k * factorial(r), factorial(r - k)) / Fraction(a) ** (k + 1)
            f = f + ExpSum.term(coef, {var: r - k}, {var: a})
    return f.substitute(var, bound)
