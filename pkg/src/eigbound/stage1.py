"""Rough guaranteed lower bounds from Crouzeix-Raviart projection estimates.

For the CR discrete eigenvalue ``lam_h`` and a projection-error constant
``C_h`` the exact eigenvalue satisfies ``lam >= lam_h / (1 + C_h^2 lam_h)``.
The bound is increasing in ``lam_h`` and decreasing in ``C_h``, so the lower
endpoint of a verified enclosure of ``lam_h`` and the upper endpoint of
``C_h`` give a safe result.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from decimal import ROUND_FLOOR, Decimal
from fractions import Fraction

import numpy as np

from .eigsolve import solve_pencil
from .fem import DofSpace, Geometry, apply_dirichlet, assemble_form
from .interval import Interval, add_up, div_down, fraction_bounds, mul_up
from .mesh import MeshError, is_steklov_compatible
from .verify import DENSE_LIMIT, SymPencil, VerificationError, pencil_enclosures, schur_condense

log = logging.getLogger(__name__)

PROBLEMS = ("laplacian", "steklov")
POSITIVE_TOL = 1e-12


def _constant(text):
    lo, hi = fraction_bounds(Fraction(text))
    return Interval(lo, hi)


# published upper bounds of the interpolation constants, enclosed outward
C_CR = _constant("0.1893")
C_TRACE = _constant("0.6711")


@dataclass
class ProjectionBound:
    """Guaranteed lower bound of ``lambda_k`` from the CR eigenvalue."""

    k: int
    lambda_cr: Interval
    c_h: Interval
    lower: float

    @property
    def lambda_cr_lo(self):
        return float(self.lambda_cr.lo)


@dataclass
class Stage1Result:
    problem: str
    bounds: list
    c_h: Interval
    ndof: int
    h_max: float
    verified: bool
    lambda1_cr: Interval | None = None
    extras: dict = field(default_factory=dict)

    def lower(self, k):
        for b in self.bounds:
            if b.k == k:
                return b.lower
        raise KeyError(k)


def _interval_h(mesh):
    """Enclosures of every edge length from the float vertex coordinates."""
    a = Interval(mesh.vertices[mesh.edges[:, 0]])
    b = Interval(mesh.vertices[mesh.edges[:, 1]])
    d = b - a
    return (d[:, 0].square() + d[:, 1].square()).sqrt()


def h_max_interval(mesh):
    L = _interval_h(mesh)
    return Interval(float(L.lo.max()), float(L.hi.max()))


def ch_laplacian(mesh):
    """``C_h = 0.1893 h_max`` as an interval."""
    return C_CR * h_max_interval(mesh)


def steklov_mesh_term(mesh):
    """Enclosure of ``max_{K in T_b} h_K / sqrt(H_K)``, ``H_K = 2|K| / |e_b|``."""
    if not is_steklov_compatible(mesh):
        raise MeshError("Steklov constant needs every boundary element to have exactly one boundary edge")
    tris, local, _ = mesh.boundary_elements()
    L = _interval_h(mesh)
    te = mesh.tri_edges[tris]
    hk = Interval(L.lo[te].max(axis=1), L.hi[te].max(axis=1))
    eb = mesh.tri_edges[tris, local]
    geom = Geometry(mesh, "interval")
    det = geom.det[tris]
    H = det / L[eb]
    q = hk / H.sqrt()
    return Interval(float(q.lo.max()), float(q.hi.max()))


def ch_steklov(mesh, lambda1h_lower):
    """``C_h = 0.6711 max_b h_K / sqrt(H_K) + 0.1893 / sqrt(lam_1h) h_max``.

    ``lambda1h_lower`` must be a lower bound of the discrete ``lambda_{1,h}``
    (smaller values only enlarge ``C_h``).
    """
    lam = Interval.wrap(lambda1h_lower)
    lam = Interval(lam.lo, lam.lo)
    if not float(lam.lo) > 0:
        raise ValueError("lambda_1h lower bound must be positive")
    return C_TRACE * steklov_mesh_term(mesh) + C_CR / lam.sqrt() * h_max_interval(mesh)


def projection_lower_bound(lambda_cr_lo, c_h_hi):
    """``lam / (1 + c^2 lam)`` rounded towards minus infinity."""
    lam = float(lambda_cr_lo)
    c = float(c_h_hi)
    if lam <= 0:
        return lam
    denom = add_up(1.0, mul_up(mul_up(c, c), lam))
    return float(div_down(lam, denom))


def round_down_sig(x, digits=3):
    """Round a positive float down to ``digits`` significant digits."""
    # a decimal below the shortest repr never converts back above x
    d = Decimal(repr(float(x)))
    if d <= 0:
        raise ValueError("rho must be positive")
    exp = d.adjusted() - digits + 1
    return float(d.quantize(Decimal(1).scaleb(exp), rounding=ROUND_FLOOR))


# -- CR pencils ----------------------------------------------------------------------------

def cr_matrices(problem, mesh, mode):
    """Assembled CR pencil; Dirichlet DOFs removed for the Laplacian."""
    V = DofSpace(mesh, "CR")
    geom = Geometry(mesh, mode)
    K = assemble_form(V, V, "grad_grad", mode, geom)
    M = assemble_form(V, V, "mass", mode, geom)
    if problem == "laplacian":
        K, _ = apply_dirichlet(V, K)
        M, _ = apply_dirichlet(V, M)
        return V, K, M
    A = K + M
    B = assemble_form(V, V, "boundary_mass", mode, geom)
    return V, A, B, M


def _support(B):
    rows = np.unique(B.rows[(B.lo != 0) | (B.hi != 0)])
    return rows


def _verified_laplacian(mesh, k_max):
    V, K, M = cr_matrices("laplacian", mesh, "interval")
    n = K.shape[0]
    if n > DENSE_LIMIT:
        raise VerificationError(
            f"CR Laplacian pencil has {n} DOFs, above the dense verification cap {DENSE_LIMIT}; "
            "use a coarser stage-1 mesh or float mode")
    if k_max > n:
        raise ValueError(f"k_max={k_max} exceeds d'={n}")
    enc = pencil_enclosures(SymPencil(K.toarray(), M.toarray()), range(1, k_max + 1))
    return [e.interval for e in enc], n


def _verified_steklov(mesh, k_max):
    V, A, B, M = cr_matrices("steklov", mesh, "interval")
    S_idx = _support(B)
    mask = np.ones(A.shape[0], dtype=bool)
    mask[S_idx] = False
    I_idx = np.nonzero(mask)[0]
    # A_ii >= M_ii (stiffness is semidefinite) and the CR mass matrix is diagonal
    lam_min = float(M.diagonal().lo[I_idx].min()) if I_idx.size else 1.0
    if S_idx.size > DENSE_LIMIT:
        raise VerificationError("boundary support exceeds the dense verification cap")
    S = schur_condense(A, S_idx, lam_min)
    Bss = B.submatrix(S_idx, S_idx).toarray()
    # eigenvalues of (-B, S) are -mu in ascending order
    enc = pencil_enclosures(SymPencil(-Bss, S), range(1, k_max + 1))
    out = []
    for e in enc:
        mu_lo, mu_hi = -e.hi, -e.lo
        if not mu_lo > POSITIVE_TOL:
            raise ValueError(f"k_max={k_max} exceeds d' (mu_{e.k} not certified positive)")
        lam = Interval(1.0, 1.0) / Interval(mu_lo, mu_hi)
        out.append(lam)
    return out, A.shape[0]


def _float_values(problem, mesh, k_max):
    if problem == "laplacian":
        V, K, M = cr_matrices("laplacian", mesh, "point")
        pairs = solve_pencil(K, M, k_max, "smallest")
        n = K.shape[0]
    else:
        V, A, B, M = cr_matrices("steklov", mesh, "point")
        pairs = solve_pencil(A, B, k_max, "largest_finite")
        n = A.shape[0]
    return [Interval(p.value) for p in pairs], n


def cr_lower_bounds(problem, mesh, k_max, mode="verified"):
    """Stage-1 bounds ``lam_k >= lam_kh / (1 + C_h^2 lam_kh)`` for k = 1..k_max.

    Parameters
    ----------
    problem : {"laplacian", "steklov"}
    mesh : Mesh
        For Steklov every boundary element must have a single boundary edge.
    k_max : int
    mode : {"verified", "float"}
        ``verified`` encloses the CR eigenvalues rigorously; ``float`` uses
        approximate eigenvalues (the bounds are then not guaranteed).
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    if mode not in ("verified", "float"):
        raise ValueError("mode must be 'verified' or 'float'")
    k_max = int(k_max)
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if problem == "steklov" and not is_steklov_compatible(mesh):
        raise MeshError("mesh is not Steklov-compatible; run steklov_compatible first")
    if mode == "verified":
        runner = _verified_laplacian if problem == "laplacian" else _verified_steklov
        lams, n = runner(mesh, k_max)
    else:
        lams, n = _float_values(problem, mesh, k_max)
    lam1 = None
    if problem == "laplacian":
        c_h = ch_laplacian(mesh)
    else:
        lam1 = lams[0]
        c_h = ch_steklov(mesh, float(lam1.lo))
    bounds = [ProjectionBound(k + 1, lam, c_h, projection_lower_bound(lam.lo, c_h.hi))
              for k, lam in enumerate(lams)]
    return Stage1Result(problem, bounds, c_h, n, mesh.h_max, mode == "verified", lam1)
