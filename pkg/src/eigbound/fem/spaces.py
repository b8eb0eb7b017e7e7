"""Global degree-of-freedom maps for CR, CG(p), DG(p) and RT(p)."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .reference import MAX_DEGREE, rt_element, scalar_element

FAMILIES = ("CR", "CG", "DG", "RT")


class DofSpace:
    """Finite element space on a mesh.

    Parameters
    ----------
    mesh : Mesh
    family : {"CR", "CG", "DG", "RT"}
    p : int
        Polynomial degree (``RT`` index: normal traces of degree ``p``).

    Attributes
    ----------
    dofs : (nt, nloc) ndarray of int
        Element-to-global map.
    signs : (nt, nloc) ndarray
        +1/-1 orientation factors (only RT has negative entries).
    ndof : int
    """

    def __init__(self, mesh, family, p=1):
        family = family.upper()
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        p = int(p)
        if family == "CR":
            p = 1
        elif family == "CG" and not 1 <= p <= MAX_DEGREE:
            raise ValueError("CG degree must be 1..3")
        elif family in ("DG", "RT") and not 0 <= p <= MAX_DEGREE:
            raise ValueError(f"{family} degree must be 0..3")
        self.mesh = mesh
        self.family = family
        self.p = p
        builder = {"CR": self._build_cr, "CG": self._build_cg, "DG": self._build_dg, "RT": self._build_rt}
        self.dofs, self.signs, self.ndof = builder[family]()

    @property
    def element(self):
        if self.family == "RT":
            return rt_element(self.p)
        return scalar_element(self.family, self.p)

    @property
    def nloc(self):
        return self.dofs.shape[1]

    def __repr__(self):
        return f"DofSpace({self.family}{self.p}, ndof={self.ndof})"

    # -- builders --------------------------------------------------------------------

    def _build_cr(self):
        m = self.mesh
        dofs = m.tri_edges.copy()
        return dofs, np.ones(dofs.shape), len(m.edges)

    def _build_dg(self):
        m = self.mesh
        nl = scalar_element("DG", self.p).nloc
        dofs = np.arange(m.nt * nl, dtype=np.int64).reshape(m.nt, nl)
        return dofs, np.ones(dofs.shape), m.nt * nl

    def _build_cg(self):
        m, p = self.mesh, self.p
        nv, ne, nt = m.nv, len(m.edges), m.nt
        ni = (p - 1) * (p - 2) // 2
        cols = [m.triangles]
        if p > 1:
            k = np.arange(p - 1)
            for i in range(3):
                e = m.tri_edges[:, i]
                fwd = m.edge_signs[:, i] > 0
                pos = np.where(fwd[:, None], k[None, :], (p - 2 - k)[None, :])
                cols.append(nv + e[:, None] * (p - 1) + pos)
        if ni:
            base = nv + ne * (p - 1)
            cols.append(base + np.arange(nt)[:, None] * ni + np.arange(ni)[None, :])
        dofs = np.concatenate(cols, axis=1).astype(np.int64)
        return dofs, np.ones(dofs.shape), nv + ne * (p - 1) + nt * ni

    def _build_rt(self):
        m, p = self.mesh, self.p
        ne, nt = len(m.edges), m.nt
        q = p + 1
        ni = p * (p + 1)
        cols, sgn = [], []
        j = np.arange(q)
        for i in range(3):
            e = m.tri_edges[:, i]
            cols.append(e[:, None] * q + j[None, :])
            s = m.edge_signs[:, i].astype(float)
            sgn.append(s[:, None] ** (j[None, :] + 1))
        if ni:
            cols.append(ne * q + np.arange(nt)[:, None] * ni + np.arange(ni)[None, :])
            sgn.append(np.ones((nt, ni)))
        return (np.concatenate(cols, axis=1).astype(np.int64), np.concatenate(sgn, axis=1),
                ne * q + nt * ni)

    # -- boundary sets ------------------------------------------------------------------

    @cached_property
    def boundary_dofs(self):
        """Sorted DOFs carrying boundary values (CG, CR) or normal traces (RT)."""
        m = self.mesh
        bed = np.nonzero(m.is_boundary_edge)[0]
        if self.family == "CR":
            return bed
        if self.family == "DG":
            return np.zeros(0, dtype=np.int64)
        if self.family == "RT":
            q = self.p + 1
            return (bed[:, None] * q + np.arange(q)[None, :]).ravel()
        p = self.p
        out = [m.boundary_vertices]
        if p > 1:
            out.append((m.nv + bed[:, None] * (p - 1) + np.arange(p - 1)[None, :]).ravel())
        return np.unique(np.concatenate(out))

    @cached_property
    def free_dofs(self):
        mask = np.ones(self.ndof, dtype=bool)
        mask[self.boundary_dofs] = False
        return np.nonzero(mask)[0]

    def edge_dofs(self, edges):
        """RT DOFs of the given global edges, shape (len(edges), p + 1)."""
        if self.family != "RT":
            raise ValueError("edge DOFs are defined for RT only")
        q = self.p + 1
        return np.asarray(edges)[:, None] * q + np.arange(q)[None, :]

    def gather(self, coeffs):
        """Local coefficient arrays (nt, nloc) including orientation signs."""
        c = np.asarray(coeffs)
        return c[self.dofs] * self.signs

    def interpolate(self, func):
        """Nodal interpolant of ``func(x, y)`` (CG and DG only)."""
        if self.family not in ("CG", "DG"):
            raise ValueError("nodal interpolation needs a Lagrange space")
        m = self.mesh
        nodes = np.array([[float(a), float(b)] for a, b in self.element.nodes])
        v = m.vertices[m.triangles]
        e1 = v[:, 1] - v[:, 0]
        e2 = v[:, 2] - v[:, 0]
        xy = v[:, None, 0] + nodes[None, :, 0, None] * e1[:, None] + nodes[None, :, 1, None] * e2[:, None]
        out = np.zeros(self.ndof)
        out[self.dofs.ravel()] = func(xy[..., 0], xy[..., 1]).ravel()
        return out
