"""Assembly of the bilinear forms over a mesh.

Point mode returns ``scipy.sparse.csr_matrix``; interval mode returns an
:class:`~eigbound.interval.IntervalSparse` whose entries enclose the exact
matrix for the (exact, float-valued) vertex coordinates.  Local matrices are
linear combinations of exact reference tensors with geometry factors, so
interval mode is rigorous without any quadrature remainder.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from ..interval import Interval, IntervalSparse
from . import polynomials as P
from .reference import Tensor, edge_mass, rt_tensors, scalar_element, scalar_tensors

FORMS = ("grad_grad", "mass", "boundary_mass", "div_div", "rt_mass", "rt_div_dg")
MODES = ("point", "interval")


class Geometry:
    """Affine-map data per element: ``x = v0 + [e1 e2] xhat``."""

    def __init__(self, mesh, mode="point"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.mode = mode
        v = mesh.vertices[mesh.triangles]
        if mode == "point":
            e1 = v[:, 1] - v[:, 0]
            e2 = v[:, 2] - v[:, 0]
            self.det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
            self.g11 = (e1 * e1).sum(axis=1)
            self.g22 = (e2 * e2).sum(axis=1)
            self.g12 = (e1 * e2).sum(axis=1)
        else:
            V = Interval(v)
            e1 = V[:, 1] - V[:, 0]
            e2 = V[:, 2] - V[:, 0]
            self.det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
            self.g11 = e1[:, 0].square() + e1[:, 1].square()
            self.g22 = e2[:, 0].square() + e2[:, 1].square()
            self.g12 = e1[:, 0] * e2[:, 0] + e1[:, 1] * e2[:, 1]
        lo = self.det.lo if mode == "interval" else self.det
        if np.any(lo <= 0):
            raise ValueError("element with non-positive Jacobian determinant")
        self.mesh = mesh

    def edge_length(self, edges):
        m = self.mesh
        a = m.vertices[m.edges[edges, 0]]
        b = m.vertices[m.edges[edges, 1]]
        if self.mode == "point":
            return np.hypot(b[:, 0] - a[:, 0], b[:, 1] - a[:, 1])
        d = Interval(b) - Interval(a)
        return (d[:, 0].square() + d[:, 1].square()).sqrt()


def _ref(t, mode):
    return t.value if mode == "point" else t.interval


def _col(x, mode):
    """Per-element scalar as an (nt, 1, 1) broadcastable factor."""
    if mode == "point":
        return np.asarray(x)[:, None, None]
    return x.reshape(-1, 1, 1)


def _combine(terms, mode):
    out = None
    for coef, tensor in terms:
        term = _col(coef, mode) * _ref(tensor, mode)[None, :, :]
        out = term if out is None else out + term
    return out


@lru_cache(maxsize=None)
def _cross_mass(fu, pu, fv, pv):
    bu = scalar_element(fu, pu).basis
    bv = scalar_element(fv, pv).basis
    return Tensor(tuple(tuple(P.integrate(P.mul(a, b)) for b in bv) for a in bu))


def local_matrices(space_u, space_v, form, geom):
    """Element matrices of shape (nt, nloc_u, nloc_v) (signs not applied)."""
    mode = geom.mode
    fu, fv = space_u.family, space_v.family
    if form == "grad_grad":
        if fu != fv or space_u.p != space_v.p or fu not in ("CG", "CR", "DG"):
            raise ValueError("grad_grad needs two equal scalar spaces")
        T = scalar_tensors(fu, space_u.p)
        inv = 1.0 / geom.det
        S12 = _ref(T["sxy"], mode) + _ref(T["syx"], mode)
        out = (_col(geom.g22 * inv, mode) * _ref(T["sxx"], mode)[None]
               - _col(geom.g12 * inv, mode) * S12[None]
               + _col(geom.g11 * inv, mode) * _ref(T["syy"], mode)[None])
        return out
    if form == "mass":
        if fu == "RT" or fv == "RT":
            raise ValueError("use rt_mass for RT spaces")
        if (fu, space_u.p) == (fv, space_v.p):
            M = scalar_tensors(fu, space_u.p)["mass"]
        else:
            M = _cross_mass(fu, space_u.p, fv, space_v.p)
        return _combine([(geom.det, M)], mode)
    if form in ("rt_mass", "div_div"):
        if fu != "RT" or fv != "RT" or space_u.p != space_v.p:
            raise ValueError(f"{form} needs two equal RT spaces")
        T = rt_tensors(space_u.p)
        inv = 1.0 / geom.det
        if form == "div_div":
            return _combine([(inv, T["divdiv"])], mode)
        R12 = _ref(T["rxy"], mode) + _ref(T["ryx"], mode)
        return (_col(geom.g11 * inv, mode) * _ref(T["rxx"], mode)[None]
                + _col(geom.g12 * inv, mode) * R12[None]
                + _col(geom.g22 * inv, mode) * _ref(T["ryy"], mode)[None])
    if form == "rt_div_dg":
        if fu != "DG" or fv != "RT" or space_u.p != space_v.p:
            raise ValueError("rt_div_dg needs (DG(p), RT(p))")
        # int_K div w psi dx = int_Khat divhat what psihat (det > 0): geometry free
        T = _ref(rt_tensors(space_v.p)["div_dg_pair"], mode).T
        nt = geom.mesh.nt
        if mode == "point":
            return np.broadcast_to(T[None], (nt,) + T.shape)
        return Interval(np.broadcast_to(T.lo[None], (nt,) + T.shape),
                        np.broadcast_to(T.hi[None], (nt,) + T.shape))
    raise ValueError(f"unknown form {form!r}")


def _scatter(rows, cols, vals, shape, mode):
    if mode == "point":
        m = sp.coo_matrix((np.ravel(vals), (np.ravel(rows), np.ravel(cols))), shape=shape)
        return m.tocsr()
    return IntervalSparse.from_coo(rows, cols, vals.lo, vals.hi, shape)


def _signed(local, su, sv, mode):
    s = su[:, :, None] * sv[:, None, :]
    if np.all(s == 1):
        return local
    return local * s


def assemble_form(space_u, space_v, form, mode="point", geometry=None, markers=None):
    """Global matrix ``[form(phi_j, psi_i)]`` with rows in ``space_u``.

    Parameters
    ----------
    space_u, space_v : DofSpace
        Row / column spaces.  For ``rt_div_dg`` rows are DG, columns RT.
    form : str
        One of ``grad_grad``, ``mass``, ``boundary_mass``, ``div_div``,
        ``rt_mass``, ``rt_div_dg``.
    mode : {"point", "interval"}
    markers : iterable of int, optional
        Restrict ``boundary_mass`` to boundary edges with these markers.
    """
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    if space_u.mesh is not space_v.mesh:
        raise ValueError("spaces live on different meshes")
    geom = geometry if geometry is not None else Geometry(space_u.mesh, mode)
    mode = geom.mode
    shape = (space_u.ndof, space_v.ndof)
    if form == "boundary_mass":
        return _boundary_mass(space_u, space_v, geom, shape, markers)
    local = local_matrices(space_u, space_v, form, geom)
    local = _signed(local, space_u.signs, space_v.signs, mode)
    rows = np.broadcast_to(space_u.dofs[:, :, None], local.shape)
    cols = np.broadcast_to(space_v.dofs[:, None, :], local.shape)
    return _scatter(rows, cols, local, shape, mode)


def _boundary_mass(space_u, space_v, geom, shape, markers):
    fu, fv = space_u.family, space_v.family
    if fu != fv or space_u.p != space_v.p or fu not in ("CG", "CR", "DG"):
        raise ValueError("boundary_mass needs two equal scalar spaces")
    mesh = space_u.mesh
    mode = geom.mode
    keep = np.ones(len(mesh.boundary_edges), dtype=bool)
    if markers is not None:
        keep = np.isin(mesh.markers, np.asarray(list(markers)))
    bids = mesh.boundary_edge_ids[keep]
    rows_all, cols_all, vals_all = [], [], []
    for i in range(3):
        e = mesh.tri_edges[:, i]
        sel = np.nonzero(np.isin(e, bids))[0]
        if sel.size == 0:
            continue
        L = geom.edge_length(e[sel])
        E = edge_mass(fu, space_u.p, i)
        vals_all.append(_combine([(L, E)], mode))
        d = space_u.dofs[sel]
        rows_all.append(np.broadcast_to(d[:, :, None], (sel.size,) + E.value.shape))
        cols_all.append(np.broadcast_to(d[:, None, :], (sel.size,) + E.value.shape))
    if not vals_all:
        if mode == "point":
            return sp.csr_matrix(shape)
        return IntervalSparse.from_coo([], [], [], [], shape)
    rows = np.concatenate([r.reshape(-1) for r in rows_all])
    cols = np.concatenate([c.reshape(-1) for c in cols_all])
    if mode == "point":
        vals = np.concatenate([v.reshape(-1) for v in vals_all])
        return _scatter(rows, cols, vals, shape, mode)
    lo = np.concatenate([v.lo.reshape(-1) for v in vals_all])
    hi = np.concatenate([v.hi.reshape(-1) for v in vals_all])
    return IntervalSparse.from_coo(rows, cols, lo, hi, shape)


def apply_dirichlet(space, matrix, columns=True):
    """Remove the rows (and columns) of constrained DOFs.

    Returns the reduced matrix and the kept global indices.
    """
    free = space.free_dofs
    if isinstance(matrix, IntervalSparse):
        return matrix.submatrix(free, free if columns else np.arange(matrix.shape[1])), free
    m = sp.csr_matrix(matrix)
    m = m[free]
    if columns:
        m = m[:, free]
    return m, free


def local_lift(values, space, free):
    """Expand a vector on ``free`` DOFs to the full space with zeros elsewhere."""
    out = np.zeros(space.ndof)
    out[free] = values
    return out


def rayleigh(a_matrix, b_matrix, v):
    """Rayleigh quotient ``b(v, v) / a(v, v)``."""
    v = np.asarray(v, dtype=float)
    a = float(v @ (a_matrix @ v))
    if not a > 0:
        raise ValueError("zero or negative a-norm")
    return float(v @ (b_matrix @ v)) / a
