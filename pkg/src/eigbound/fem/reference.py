"""Reference-element bases and exact integral tensors.

All tensors are computed in rational arithmetic on the reference triangle
with vertices (0,0), (1,0), (0,1) and then enclosed by the tightest float
intervals.  Affine element maps make every integrand a polynomial, so no
quadrature error enters the assembled matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from ..interval import Interval, fraction_bounds
from ..mesh import LOCAL_EDGES
from . import polynomials as P

REF_VERTICES = ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
MAX_DEGREE = 3


def _edge(i):
    a, b = LOCAL_EDGES[i]
    return REF_VERTICES[a], REF_VERTICES[b]


def lagrange_nodes(p):
    """Equispaced nodes: vertices, then edge nodes in local edge direction,
    then interior nodes."""
    nodes = list(REF_VERTICES)
    for i in range(3):
        (x0, y0), (x1, y1) = _edge(i)
        for k in range(1, p):
            t = Fraction(k, p)
            nodes.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    for j in range(1, p):
        for i in range(1, p - j):
            nodes.append((Fraction(i, p), Fraction(j, p)))
    return nodes


def _nodal_basis(nodes, p):
    mons = P.monomials(p)
    V = [[x**a * y**b for (a, b) in mons] for (x, y) in nodes]
    n = len(nodes)
    cols = P.solve_exact(V, [[Fraction(int(r == c)) for r in range(n)] for c in range(n)])
    return [P.poly({m: c[k] for k, m in enumerate(mons)}) for c in cols]


@dataclass(frozen=True)
class ScalarElement:
    family: str
    p: int
    basis: tuple
    nodes: tuple

    @property
    def nloc(self):
        return len(self.basis)


@lru_cache(maxsize=None)
def scalar_element(family, p):
    """``CG`` / ``DG`` (equispaced Lagrange) or ``CR`` reference element."""
    if family == "CR":
        if p != 1:
            raise ValueError("CR is linear")
        l0 = P.sub(P.sub(P.const(1), P.X), P.Y)
        lam = [l0, P.X, P.Y]
        basis = tuple(P.sub(P.const(1), P.scale(l, 2)) for l in lam)
        mids = []
        for i in range(3):
            (x0, y0), (x1, y1) = _edge(i)
            mids.append(((x0 + x1) / 2, (y0 + y1) / 2))
        return ScalarElement("CR", 1, basis, tuple(mids))
    if family == "DG" and p == 0:
        return ScalarElement("DG", 0, (P.const(1),), ((Fraction(1, 3), Fraction(1, 3)),))
    if family not in ("CG", "DG"):
        raise ValueError(f"unknown scalar family {family!r}")
    if not (1 if family == "CG" else 0) <= p <= MAX_DEGREE:
        raise ValueError(f"unsupported degree {p} for {family}")
    nodes = lagrange_nodes(p)
    return ScalarElement(family, p, tuple(_nodal_basis(nodes, p)), tuple(nodes))


@dataclass(frozen=True)
class RTElement:
    p: int
    basis: tuple  # pairs (wx, wy) of polynomials

    @property
    def nloc(self):
        return len(self.basis)

    @property
    def n_edge(self):
        return self.p + 1


def _rt_functionals(p):
    """DOF functionals as callables on vector polynomials."""
    legendre = [P.shifted_legendre(j) for j in range(p + 1)]
    funcs = []
    for i in range(3):
        start, end = _edge(i)
        nx, ny = end[1] - start[1], -(end[0] - start[0])  # rot of the tangent

        def edge_moment(w, start=start, end=end, nx=nx, ny=ny, j=0):
            flux = P.add(P.scale(w[0], nx), P.scale(w[1], ny))
            return P.upoly_integrate(P.upoly_mul(P.restrict(flux, start, end), legendre[j]))

        for j in range(p + 1):
            funcs.append(lambda w, f=edge_moment, j=j: f(w, j=j))
    for comp in range(2):
        for m in P.monomials(p - 1) if p >= 1 else []:
            mono = P.poly({m: 1})
            funcs.append(lambda w, mono=mono, comp=comp: P.integrate(P.mul(w[comp], mono)))
    return funcs


@lru_cache(maxsize=None)
def rt_element(p):
    """Raviart-Thomas element of index ``p`` (normal traces of degree ``p``)."""
    if not 0 <= p <= MAX_DEGREE:
        raise ValueError(f"unsupported RT degree {p}")
    prime = []
    for m in P.monomials(p):
        prime.append((P.poly({m: 1}), {}))
        prime.append(({}, P.poly({m: 1})))
    for j in range(p + 1):
        m = P.poly({(p - j, j): 1})
        prime.append((P.mul(P.X, m), P.mul(P.Y, m)))
    funcs = _rt_functionals(p)
    n = len(prime)
    if len(funcs) != n:
        raise AssertionError("RT functional count mismatch")
    V = [[f(w) for w in prime] for f in funcs]
    cols = P.solve_exact(V, [[Fraction(int(r == c)) for r in range(n)] for c in range(n)])
    basis = []
    for c in cols:
        wx = P.lincomb(c, [w[0] for w in prime])
        wy = P.lincomb(c, [w[1] for w in prime])
        basis.append((wx, wy))
    return RTElement(p, tuple(basis))


def div(w):
    return P.add(P.dx(w[0]), P.dy(w[1]))


# -- tensors ----------------------------------------------------------------------------------

def _gram(f, g):
    return [[P.integrate(P.mul(a, b)) for b in g] for a in f]


@dataclass(frozen=True)
class Tensor:
    """Exact rational tensor with cached float and interval versions."""

    exact: tuple

    @cached_property
    def value(self):
        return np.array([[float(v) for v in row] for row in self.exact])

    @cached_property
    def interval(self):
        return Interval.from_fractions(np.array(self.exact, dtype=object))

    @cached_property
    def split(self):
        """``(hi, lo, rem)``: ``exact = hi + lo + e`` with ``|e| <= rem``."""
        hi = self.value
        shape = hi.shape
        lo = np.zeros(shape)
        rem = np.zeros(shape)
        for idx in np.ndindex(shape):
            x = Fraction(self.exact[idx[0]][idx[1]])
            d = x - Fraction(float(hi[idx]))
            lo[idx] = float(d)
            rem[idx] = fraction_bounds(abs(d - Fraction(float(lo[idx]))))[1]
        return hi, lo, rem


def _tensor(rows):
    return Tensor(tuple(tuple(r) for r in rows))


@lru_cache(maxsize=None)
def scalar_tensors(family, p):
    """Mass and the four gradient blocks ``S_ab = int d_a phi_i d_b phi_j``."""
    el = scalar_element(family, p)
    b = el.basis
    gx = [P.dx(f) for f in b]
    gy = [P.dy(f) for f in b]
    return {
        "mass": _tensor(_gram(b, b)),
        "sxx": _tensor(_gram(gx, gx)),
        "sxy": _tensor(_gram(gx, gy)),
        "syx": _tensor(_gram(gy, gx)),
        "syy": _tensor(_gram(gy, gy)),
    }


@lru_cache(maxsize=None)
def edge_mass(family, p, i):
    """``int_0^1 phi_k phi_l`` along local edge ``i`` (scale by edge length)."""
    el = scalar_element(family, p)
    start, end = _edge(i)
    tr = [P.restrict(f, start, end) for f in el.basis]
    return _tensor([[P.upoly_integrate(P.upoly_mul(a, b)) for b in tr] for a in tr])


@lru_cache(maxsize=None)
def edge_legendre_moments(family, p, i, q):
    """``int_0^1 phi_k(edge_i(t)) P~_j(t) dt`` for j = 0..q."""
    el = scalar_element(family, p)
    start, end = _edge(i)
    leg = [P.shifted_legendre(j) for j in range(q + 1)]
    tr = [P.restrict(f, start, end) for f in el.basis]
    return _tensor([[P.upoly_integrate(P.upoly_mul(a, l)) for l in leg] for a in tr])


@lru_cache(maxsize=None)
def rt_tensors(p):
    """RT mass blocks, div-div, mixed div/DG pairing and div in DG coefficients."""
    el = rt_element(p)
    wx = [w[0] for w in el.basis]
    wy = [w[1] for w in el.basis]
    dv = [div(w) for w in el.basis]
    dg = scalar_element("DG", p)
    # div of RT_p is a polynomial of degree <= p: nodal values give DG coefficients
    div_dg = [[P.evaluate(d, x, y) for d in dv] for (x, y) in dg.nodes]
    return {
        "rxx": _tensor(_gram(wx, wx)),
        "rxy": _tensor(_gram(wx, wy)),
        "ryx": _tensor(_gram(wy, wx)),
        "ryy": _tensor(_gram(wy, wy)),
        "divdiv": _tensor(_gram(dv, dv)),
        "div_dg_pair": _tensor(_gram(dv, dg.basis)),
        "div_in_dg": _tensor(div_dg),
    }


@lru_cache(maxsize=None)
def cg_in_dg(p):
    """Coefficients of the CG(p) local basis in the DG(p) basis (identity for p >= 1)."""
    cg = scalar_element("CG", p)
    dg = scalar_element("DG", p)
    return _tensor([[P.evaluate(f, x, y) for f in cg.basis] for (x, y) in dg.nodes])


# -- float evaluation -------------------------------------------------------------------------

def _coef_matrix(polys, deg):
    mons = P.monomials(deg)
    C = np.zeros((len(mons), len(polys)))
    for j, f in enumerate(polys):
        for k, m in enumerate(mons):
            C[k, j] = float(f.get(m, 0))
    return mons, C


def _mono_values(mons, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.stack([x**a * y**b for (a, b) in mons], axis=-1)


def eval_scalar(family, p, x, y, deriv=None):
    """Values (..., nloc) of the reference basis at reference points.

    ``deriv`` is None, ``"x"`` or ``"y"``.
    """
    el = scalar_element(family, p)
    polys = el.basis
    if deriv == "x":
        polys = [P.dx(f) for f in polys]
    elif deriv == "y":
        polys = [P.dy(f) for f in polys]
    mons, C = _coef_matrix(polys, max(p, 0))
    return _mono_values(mons, x, y) @ C


def eval_rt(p, x, y):
    """Reference RT basis values, shape (..., nloc, 2)."""
    el = rt_element(p)
    mons, Cx = _coef_matrix([w[0] for w in el.basis], p + 1)
    _, Cy = _coef_matrix([w[1] for w in el.basis], p + 1)
    V = _mono_values(mons, x, y)
    return np.stack([V @ Cx, V @ Cy], axis=-1)


def eval_rt_div(p, x, y):
    el = rt_element(p)
    mons, C = _coef_matrix([div(w) for w in el.basis], p)
    return _mono_values(mons, x, y) @ C
