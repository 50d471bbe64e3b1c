"""Small dense linear algebra over any field-like scalars (Fraction, float,
complex, or even Grassmann elements with invertible body)."""
from fractions import Fraction


def _body(x):
    b = getattr(x, "body", None)
    return b() if callable(b) else x


def _recip(x):
    inv = getattr(x, "inverse", None)
    if callable(inv):
        return inv()
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def _is_zero(x, tol):
    b = _body(x)
    return abs(b) <= tol if tol else b == 0


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def matmul(a, b):
    m = len(b)
    return [[sum((row[k] * b[k][j] for k in range(1, m)), row[0] * b[0][j]) if m else 0
             for j in range(len(b[0]))] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def det(a, tol=0):
    """Determinant by elimination; pivots must have non-zero body."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    out = 1
    for c in range(n):
        piv = None
        best = None
        for r in range(c, n):
            if not _is_zero(m[r][c], tol):
                mag = abs(_body(m[r][c]))
                if piv is None or (tol and mag > best):
                    piv, best = r, mag
                    if not tol:
                        break
        if piv is None:
            return 0 * m[0][0]
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        p = m[c][c]
        out = out * p
        ip = _recip(p)
        for r in range(c + 1, n):
            if _is_zero(m[r][c], 0):
                continue
            f = m[r][c] * ip
            m[r] = [m[r][j] - f * m[c][j] if j >= c else m[r][j] for j in range(n)]
    return out


def inverse(a, tol=0):
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for c in range(n):
        piv = None
        best = None
        for r in range(c, n):
            if not _is_zero(m[r][c], tol):
                mag = abs(_body(m[r][c]))
                if piv is None or (tol and mag > best):
                    piv, best = r, mag
                    if not tol:
                        break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        ip = _recip(m[c][c])
        m[c] = [x * ip for x in m[c]]
        for r in range(n):
            if r != c and not _is_zero(m[r][c], 0):
                f = m[r][c]
                m[r] = [m[r][j] - f * m[c][j] for j in range(2 * n)]
    return [row[n:] for row in m]


def is_exact(entries):
    return all(isinstance(x, (int, Fraction)) for x in entries)


def to_exact(a):
    return [[Fraction(x) for x in row] for row in a]
