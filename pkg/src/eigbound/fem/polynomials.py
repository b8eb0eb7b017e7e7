"""Exact bivariate polynomials with rational coefficients.

A polynomial is a dict mapping exponent pairs ``(a, b)`` to
:class:`fractions.Fraction` coefficients of ``x**a * y**b``.  These are only
used to build reference-element tensors once per degree, so clarity beats
speed here.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def poly(terms=None):
    out = {}
    for k, v in (terms or {}).items():
        v = Fraction(v)
        if v:
            out[k] = v
    return out


def const(c):
    return poly({(0, 0): c})


X = poly({(1, 0): 1})
Y = poly({(0, 1): 1})


def add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
        if not out[k]:
            del out[k]
    return out


def scale(p, c):
    c = Fraction(c)
    return {k: v * c for k, v in p.items()} if c else {}


def sub(p, q):
    return add(p, scale(q, -1))


def mul(p, q):
    out = {}
    for (a, b), u in p.items():
        for (c, d), v in q.items():
            k = (a + c, b + d)
            out[k] = out.get(k, 0) + u * v
    return {k: v for k, v in out.items() if v}


def lincomb(coeffs, polys):
    out = {}
    for c, p in zip(coeffs, polys):
        if c:
            out = add(out, scale(p, c))
    return out


def dx(p):
    return {(a - 1, b): v * a for (a, b), v in p.items() if a > 0}


def dy(p):
    return {(a, b - 1): v * b for (a, b), v in p.items() if b > 0}


def degree(p):
    return max((a + b for a, b in p), default=0)


def evaluate(p, x, y):
    x, y = Fraction(x), Fraction(y)
    return sum((v * x**a * y**b for (a, b), v in p.items()), Fraction(0))


def monomial_integral(a, b):
    """Integral of ``x**a y**b`` over the reference triangle (0,0), (1,0), (0,1)."""
    return Fraction(factorial(a) * factorial(b), factorial(a + b + 2))


def integrate(p):
    return sum((v * monomial_integral(a, b) for (a, b), v in p.items()), Fraction(0))


def monomials(p):
    """Exponents of all monomials of total degree <= p, graded order."""
    return [(d - j, j) for d in range(p + 1) for j in range(d + 1)]


# univariate polynomials on [0, 1]: lists of Fraction coefficients in t

def upoly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1) if p and q else []
    for i, u in enumerate(p):
        for j, v in enumerate(q):
            out[i + j] += u * v
    return out


def upoly_integrate(p):
    return sum((c / (k + 1) for k, c in enumerate(p)), Fraction(0))


def restrict(p, start, end):
    """Coefficients in ``t`` of ``p(start + t (end - start))`` for ``t`` in [0, 1]."""
    x0, y0 = (Fraction(c) for c in start)
    tx, ty = Fraction(end[0]) - x0, Fraction(end[1]) - y0
    out = [Fraction(0)]
    for (a, b), v in p.items():
        term = [v]
        for _ in range(a):
            term = upoly_mul(term, [x0, tx])
        for _ in range(b):
            term = upoly_mul(term, [y0, ty])
        if len(term) > len(out):
            out += [Fraction(0)] * (len(term) - len(out))
        for k, c in enumerate(term):
            out[k] += c
    return out


def shifted_legendre(j):
    """Coefficients of the Legendre polynomial of degree j on [0, 1]."""
    # P~_j(t) = sum_k (-1)^(j+k) C(j,k) C(j+k,k) t^k
    from math import comb

    return [Fraction((-1) ** (j + k) * comb(j, k) * comb(j + k, k)) for k in range(j + 1)]


def solve_exact(matrix, rhs):
    """Solve a square rational system by Gauss-Jordan elimination.

    ``rhs`` is a list of columns; returns the solution columns.
    """
    n = len(matrix)
    m = len(rhs)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[c][r]) for c in range(m)]
           for r, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular rational system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [[aug[r][n + c] for r in range(n)] for c in range(m)]
