"""Sharp lower bounds by the Lehmann-Goerisch theorem.

Trial functions ``v_i`` are conforming CG(p) eigenvector approximations.
For each one a flux ``w_i`` in RT(p) is built so that the Goerisch
constraint holds exactly:

* Laplacian: ``div w_i + v_i = 0`` (mixed saddle-point solve, enclosed in
  intervals), or with a shift ``lh > 0`` the pair ``(w1, w2)`` with
  ``w2 = (div w1 + v_i) / lh`` evaluated rigorously;
* Steklov: ``w_i . n = v_i`` on the boundary (normal-trace DOFs written
  exactly), ``w2 = div w_i``.

With ``A0 = a(v_i, v_j)``, ``A1 = b(v_i, v_j)``, ``A2 = b_G(w_i, w_j)``,
``A = A0 - rho A1`` and ``B = A0 - 2 rho A1 + rho^2 A2`` every certified
negative eigenvalue ``nu_k`` of ``A z = nu B z`` gives
``lambda_{m+1-k} >= rho - rho / (1 - nu_k)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .eigsolve import solve_pencil
from .fem import DofSpace, Geometry, apply_dirichlet, assemble_form
from .fem.reference import edge_legendre_moments, rt_tensors
from .interval import (ETA, Interval, IntervalSparse, add_down, compensated_sum, div_up, edge_gram, gamma,
                       imatmul, itdot, sub_down)
from .interval import _prod_valid as _prod_ok, _two_prod_err as _prod_err
from .verify import (SymPencil, VerificationError, certify_positive_definite, pencil_enclosures,
                     solve_enclosure)

log = logging.getLogger(__name__)

# the m x m pencils are cheap: bisect until the inertia test gives up
SMALL_RTOL = 1e-15
MODES = ("float", "verified", "verified-shift")


class InfeasibleRho(RuntimeError):
    """The a-priori bound does not satisfy ``Lambda_n < rho``."""


# -- conforming discretisation -------------------------------------------------------------

@dataclass
class Discretization:
    problem: str
    space: DofSpace
    A: object
    B: object
    free: np.ndarray
    mode: str = "point"

    @property
    def ndof(self):
        return self.free.size


def cg_matrices(problem, mesh, p, mode="point"):
    """``(a, b)`` forms on CG(p).  The Laplacian matrices are restricted to
    interior DOFs; Steklov keeps all DOFs."""
    V = DofSpace(mesh, "CG", p)
    geom = Geometry(mesh, mode)
    K = assemble_form(V, V, "grad_grad", mode, geom)
    M = assemble_form(V, V, "mass", mode, geom)
    if problem == "laplacian":
        Kr, free = apply_dirichlet(V, K)
        Mr, _ = apply_dirichlet(V, M)
        return Discretization(problem, V, Kr, Mr, free, mode)
    if problem == "steklov":
        B = assemble_form(V, V, "boundary_mass", mode, geom)
        return Discretization(problem, V, K + M, B, np.arange(V.ndof), mode)
    raise ValueError(f"unknown problem {problem!r}")


def select_vi(problem, mesh, p, n, m=None, disc=None):
    """Approximate eigenvectors for ``lambda_1..lambda_m`` (columns ``m-n..m-1``
    feed the Lehmann-Goerisch step), a-orthonormal, in full CG ordering.

    Returns
    -------
    values : ndarray (m,)
    vectors : ndarray (ndof, m)
    """
    m = n if m is None else m
    if m < max(n, 1):
        raise ValueError("need m >= n >= 1")
    disc = disc or cg_matrices(problem, mesh, p)
    which = "smallest" if problem == "laplacian" else "largest_finite"
    pairs = solve_pencil(disc.A, disc.B, m, which)
    V = np.zeros((disc.space.ndof, m))
    for j, pr in enumerate(pairs):
        V[disc.free, j] = pr.vector
    return np.array([pr.value for pr in pairs]), V


# -- fluxes ----------------------------------------------------------------------------------

@dataclass
class Flux:
    """Flux reconstructions for the trial functions and their Goerisch Gram matrix."""

    W: object  # (nrt, n) Interval or float array
    A2: object  # (n, n) Interval or float array
    residual: object = None  # constraint residual enclosure (Laplacian)
    extras: dict = field(default_factory=dict)

    @property
    def residual_ok(self):
        if self.residual is None:
            return True
        r = self.residual
        if isinstance(r, Interval):
            return bool(np.all(r.contains_zero()))
        return True


def _block_saddle(Mrt, Bd):
    """Sparse ``[[Mrt, Bd^T], [Bd, 0]]`` (point or interval)."""
    nr = Mrt.shape[0]
    nd = Bd.shape[0]
    shape = (nr + nd, nr + nd)
    if isinstance(Mrt, IntervalSparse):
        BdT = Bd.T
        rows = np.concatenate([Mrt.rows, BdT.rows, Bd.rows + nr])
        cols = np.concatenate([Mrt.cols, BdT.cols + nr, Bd.cols])
        lo = np.concatenate([Mrt.lo, BdT.lo, Bd.lo])
        hi = np.concatenate([Mrt.hi, BdT.hi, Bd.hi])
        return IntervalSparse(rows, cols, lo, hi, shape)
    return sp.bmat([[Mrt, Bd.T], [Bd, None]], format="csc")


def laplacian_flux_spaces(mesh, p):
    return DofSpace(mesh, "RT", p), DofSpace(mesh, "DG", p)


def compute_wi_laplacian(vectors, mesh, p, mode="verified", cg_space=None):
    """Fluxes with ``div w_i + v_i = 0`` from the mixed system

        (w, q) + (phi, div q) = 0,   (div w, psi) + (v_i, psi) = 0.

    In ``verified`` mode the solution is enclosed by ``solve_enclosure`` and
    the residual ``(div w + v_i, psi)`` is returned as an interval.
    """
    V = cg_space or DofSpace(mesh, "CG", p)
    R, D = laplacian_flux_spaces(mesh, p)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float).T).T
    amode = "interval" if mode == "verified" else "point"
    geom = Geometry(mesh, amode)
    Mrt = assemble_form(R, R, "rt_mass", amode, geom)
    Bd = assemble_form(D, R, "rt_div_dg", amode, geom)
    C = assemble_form(D, V, "mass", amode, geom)
    nr = R.ndof
    S = _block_saddle(Mrt, Bd)
    if mode == "verified":
        F = imatmul(C, vectors)
        rhs = Interval(np.zeros((nr, vectors.shape[1])))
        rhs = Interval(np.concatenate([rhs.lo, -F.hi]), np.concatenate([rhs.hi, -F.lo]))
        X = solve_enclosure(S, rhs)
        W = X[:nr]
        residual = imatmul(Bd, W) + F
        A2 = _gram(W, Mrt)
        return Flux(W, A2, residual, {"rt_dofs": nr, "system_size": S.shape[0]})
    F = C @ vectors
    rhs = np.concatenate([np.zeros((nr, vectors.shape[1])), -F])
    X = spla.splu(sp.csc_matrix(S)).solve(rhs)
    W = X[:nr]
    residual = Bd @ W + F
    A2 = W.T @ (Mrt @ W)
    return Flux(W, 0.5 * (A2 + A2.T), residual, {"rt_dofs": nr, "system_size": S.shape[0]})


def _gram(W, M):
    """Enclosure of ``W^T M W`` (symmetrised by intersection)."""
    G = itdot(W, imatmul(M, W))
    return G.intersect(G.T)


def div_to_dg(R, D, geom):
    """Matrix mapping RT coefficients to DG coefficients of the divergence."""
    T = rt_tensors(R.p)["div_in_dg"]
    nt, nl = D.dofs.shape
    nr = R.nloc
    rows = np.broadcast_to(D.dofs[:, :, None], (nt, nl, nr))
    cols = np.broadcast_to(R.dofs[:, None, :], (nt, nl, nr))
    if geom.mode == "point":
        vals = (1.0 / geom.det)[:, None, None] * T.value[None] * R.signs[:, None, :]
        return sp.csr_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=(D.ndof, R.ndof))
    inv = (1.0 / geom.det).reshape(-1, 1, 1)
    vals = inv * T.interval[None] * R.signs[:, None, :]
    return IntervalSparse.from_coo(rows, cols, vals.lo, vals.hi, (D.ndof, R.ndof))


def div_dg_enclosure(R, D, geom, W):
    """Enclosure of the DG coefficients of ``div w`` for RT coefficient columns ``W``.

    Same map as :func:`div_to_dg`, but each element sum is evaluated with a
    double-double reference tensor and a compensated sum, so the radius is
    of the order of the unit roundoff times ``|div w|`` rather than times the
    ``h^-1`` larger sum of absolute terms.
    """
    Th, Tl, Trem = rt_tensors(R.p)["div_in_dg"].split
    Wm, Wr = (W.mid, W.rad) if isinstance(W, Interval) else (np.asarray(W, dtype=float), None)
    Wm = np.atleast_2d(Wm.T).T
    # signed local coefficients: (nr, nt, 1, ncol)
    loc = (Wm[R.dofs] * R.signs[:, :, None]).transpose(1, 0, 2)[:, :, None, :]
    Pr = Th.T[:, None, :, None] * loc
    Tb = np.broadcast_to(Th.T[:, None, :, None], Pr.shape)
    Lb = np.broadcast_to(loc, Pr.shape)
    E = np.where(_prod_ok(Tb, Lb, Pr), _prod_err(Tb, Lb, Pr), 0.0)
    small = Tl.T[:, None, :, None] * loc
    y, rad = compensated_sum(Pr, E + small)
    nr = Th.shape[1]
    absl = np.abs(loc)
    g = gamma(nr + 4)
    bound = np.where(_prod_ok(Tb, Lb, Pr), 0.0, np.abs(Pr) * (2 * g) + ETA).sum(axis=0)
    bound = bound + (np.abs(small) * g + (Trem.T[:, None, :, None] * absl)).sum(axis=0)
    if Wr is not None:
        lr = Wr[R.dofs].transpose(1, 0, 2)[:, :, None, :]
        bound = bound + ((np.abs(Th.T) + np.abs(Tl.T) + Trem.T)[:, None, :, None] * lr).sum(axis=0)
    rad = rad + bound * (1.0 + 2 * g) + 4 * nr * ETA
    Y = Interval.from_midrad(y, rad)
    det = geom.det if isinstance(geom.det, Interval) else Interval(geom.det)
    inv = Interval(1.0) / det
    Y = Y * Interval(inv.lo[:, None, None], inv.hi[:, None, None])
    lo = np.empty((D.ndof, Wm.shape[1]))
    hi = np.empty_like(lo)
    lo[D.dofs] = Y.lo
    hi[D.dofs] = Y.hi
    return Interval(lo, hi)


def compute_wi_laplacian_shifted(vectors, mesh, p, shift, cg_space=None, mode="verified"):
    """Shifted fluxes: ``w1`` from a float solve of

        (w1, q) + (div w1 + v_i, div q) / lh = 0,

    then ``lh * w2 = div w1 + v_i`` evaluated in interval arithmetic so the
    constraint holds exactly.  ``A2 = (w1, w1) + (div w1 + v, div w1 + v) / lh``.
    """
    lh = float(shift)
    if not lh > 0:
        raise ValueError("shift must be positive")
    V = cg_space or DofSpace(mesh, "CG", p)
    R, D = laplacian_flux_spaces(mesh, p)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float).T).T
    pgeom = Geometry(mesh, "point")
    Mrt = assemble_form(R, R, "rt_mass", "point", pgeom)
    Drt = assemble_form(R, R, "div_div", "point", pgeom)
    Bd = assemble_form(D, R, "rt_div_dg", "point", pgeom)
    vdg = np.stack([V.gather(vectors[:, j]).ravel() for j in range(vectors.shape[1])], axis=1)
    lhs = sp.csc_matrix(Mrt + Drt / lh)
    W1 = spla.splu(lhs).solve(-(Bd.T @ vdg) / lh)
    if mode != "verified":
        Z = div_to_dg(R, D, pgeom) @ W1 + vdg
        Md = assemble_form(D, D, "mass", "point", pgeom)
        A2 = W1.T @ (Mrt @ W1) + (Z.T @ (Md @ Z)) / lh
        return Flux(W1, 0.5 * (A2 + A2.T), None, {"shift": lh, "z": Z})
    igeom = Geometry(mesh, "interval")
    Mrt_i = assemble_form(R, R, "rt_mass", "interval", igeom)
    Md_i = assemble_form(D, D, "mass", "interval", igeom)
    Z = div_dg_enclosure(R, D, igeom, W1) + vdg
    A2 = _gram(W1, Mrt_i) + _gram(Z, Md_i) / Interval(lh)
    return Flux(W1, A2.intersect(A2.T), None, {"shift": lh, "z": Z})


def steklov_boundary_dofs(vectors, mesh, p, cg_space, rt_space, mode="interval"):
    """Normal-trace DOFs reproducing ``gamma v`` on every boundary edge.

    Returns the RT boundary DOF indices and their values (Interval in
    interval mode) for every column of ``vectors``.
    """
    V, R = cg_space, rt_space
    tris, local = mesh.boundary_sides()
    q = p + 1
    rows, vals_lo, vals_hi = [], [], []
    geom = Geometry(mesh, "interval" if mode == "interval" else "point")
    for i in range(3):
        sel = tris[local == i]
        if sel.size == 0:
            continue
        e = mesh.tri_edges[sel, i]
        s = mesh.edge_signs[sel, i].astype(float)
        sgn = s[:, None] ** (np.arange(q)[None, :] + 1)
        L = geom.edge_length(e)
        EM = edge_legendre_moments("CG", p, i, p)
        out = []
        for j in range(vectors.shape[1]):
            c = vectors[V.dofs[sel], j]
            if mode == "interval":
                mom = imatmul(c, EM.interval) * L.reshape(-1, 1) * sgn
            else:
                mom = (c @ EM.value) * L[:, None] * sgn
            out.append(mom)
        rows.append(R.edge_dofs(e))
        if mode == "interval":
            vals_lo.append(np.stack([o.lo for o in out], axis=-1))
            vals_hi.append(np.stack([o.hi for o in out], axis=-1))
        else:
            vals_lo.append(np.stack(out, axis=-1))
    idx = np.concatenate([r.reshape(-1) for r in rows])
    lo = np.concatenate([v.reshape(-1, vectors.shape[1]) for v in vals_lo])
    if mode == "interval":
        hi = np.concatenate([v.reshape(-1, vectors.shape[1]) for v in vals_hi])
        return idx, Interval(lo, hi)
    return idx, lo


def compute_wi_steklov(vectors, mesh, p, mode="verified", cg_space=None):
    """Fluxes with ``w . n = gamma v_i`` imposed DOF-wise; interior DOFs
    minimise ``||w||^2 + ||div w||^2``.  ``A2 = W^T M_rt W + Z^T M_dg Z``
    with ``Z`` the DG coefficients of ``div w``."""
    V = cg_space or DofSpace(mesh, "CG", p)
    R = DofSpace(mesh, "RT", p)
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float).T).T
    amode = "interval" if mode == "verified" else "point"
    idx, wb = steklov_boundary_dofs(vectors, mesh, p, V, R, amode)
    if np.unique(idx).size != idx.size or not np.array_equal(np.sort(idx), R.boundary_dofs):
        raise AssertionError("boundary-trace transcription does not cover the RT boundary DOFs")
    pgeom = Geometry(mesh, "point")
    G = sp.csr_matrix(assemble_form(R, R, "rt_mass", "point", pgeom)
                      + assemble_form(R, R, "div_div", "point", pgeom))
    interior = R.free_dofs
    wb_mid = wb.mid if isinstance(wb, Interval) else wb
    W = np.zeros((R.ndof, vectors.shape[1]))
    W[idx] = wb_mid
    if interior.size:
        Gii = sp.csc_matrix(G[interior][:, interior])
        rhs = -(G[interior][:, idx] @ wb_mid)
        W[interior] = spla.splu(Gii).solve(rhs)
    if mode != "verified":
        A2 = W.T @ (G @ W)
        return Flux(W, 0.5 * (A2 + A2.T), None, {"rt_dofs": R.ndof})
    igeom = Geometry(mesh, "interval")
    Wi = Interval(W.copy(), W.copy())
    Wi.lo[idx] = wb.lo
    Wi.hi[idx] = wb.hi
    # div-div part through the DG divergence: no cancellation on fine meshes
    D = DofSpace(mesh, "DG", p)
    Z = div_dg_enclosure(R, D, igeom, Wi)
    A2 = (_gram(Wi, assemble_form(R, R, "rt_mass", "interval", igeom))
          + _gram(Z, assemble_form(D, D, "mass", "interval", igeom)))
    return Flux(Wi, A2.intersect(A2.T), None, {"rt_dofs": R.ndof})


# -- Lehmann-Goerisch ----------------------------------------------------------------------------

@dataclass
class LGMatrices:
    A0: object
    A1: object
    A2: object
    rho: float
    A: object = None
    B: object = None

    def __post_init__(self):
        rho = self.rho
        if isinstance(self.A0, Interval):
            r = Interval(rho)
            self.A = self.A0 - r * self.A1
            self.B = self.A0 - (r * 2.0) * self.A1 + r.square() * self.A2
        else:
            self.A = self.A0 - rho * self.A1
            self.B = self.A0 - 2.0 * rho * self.A1 + rho**2 * self.A2


@dataclass
class LGBounds:
    """Outcome of the Lehmann-Goerisch step for indices ``m-n+1..m``."""

    m: int
    n: int
    rho: float
    Lambda_n: object
    nu: list
    q: int
    lower: dict  # eigenvalue index -> lower bound
    route: dict = field(default_factory=dict)
    verified: bool = False


def _lg_value(rho, nu_hi, safe):
    """``rho - rho / (1 - nu)`` (rounded down when ``safe``)."""
    if not safe:
        return rho - rho / (1.0 - nu_hi)
    denom = sub_down(1.0, nu_hi)
    return float(sub_down(rho, div_up(rho, denom)))


def lg_bounds(mats, m, n, verified=True):
    """Bounds ``lambda_{m+1-k} >= rho - rho / (1 - nu_k)`` for negative ``nu_k``.

    Two certified routes are combined index-wise: the pencil ``(A, B)``
    directly and the transformed pencil ``(A0 - rho A1, rho A2 - A1)`` whose
    eigenvalues are ``tau = rho nu / (1 - nu)`` (bound ``-tau``).
    """
    rho = float(mats.rho)
    if verified:
        lam = pencil_enclosures(SymPencil(mats.A0, mats.A1), [n], rtol=SMALL_RTOL)[0]
        Lambda_n = lam.interval
        if not float(Lambda_n.hi) < rho:
            raise InfeasibleRho(
                f"Lambda_n <= {float(Lambda_n.hi):.10g} is not below rho = {rho:.10g}; "
                "refine the mesh, raise the order, or reduce n")
        if not certify_positive_definite(mats.B):
            raise VerificationError("B = A0 - 2 rho A1 + rho^2 A2 not certified positive definite")
    else:
        w = sla.eigh(mats.A0, mats.A1, eigvals_only=True)
        Lambda_n = float(w[-1])
        if not Lambda_n < rho:
            raise InfeasibleRho(f"Lambda_n = {Lambda_n:.10g} is not below rho = {rho:.10g}")
    ks = list(range(1, n + 1))
    direct = {}
    transformed = {}
    nu = []
    if verified:
        try:
            for e in pencil_enclosures(SymPencil(mats.A, mats.B), ks, rtol=SMALL_RTOL):
                nu.append(e.interval)
                if e.hi < 0:
                    direct[e.k] = _lg_value(rho, e.hi, True)
        except VerificationError as exc:
            log.info("direct Lehmann-Goerisch route not certified: %s", exc)
        try:
            r = Interval(rho)
            C = r * mats.A2 - mats.A1
            for e in pencil_enclosures(SymPencil(mats.A, C), ks, rtol=SMALL_RTOL):
                if e.hi < 0:
                    transformed[e.k] = float(-e.interval.hi)
        except VerificationError as exc:
            log.info("transformed Lehmann-Goerisch route not certified: %s", exc)
    else:
        vals = sla.eigh(mats.A, mats.B, eigvals_only=True)
        for k, v in zip(ks, vals):
            nu.append(float(v))
            if v < 0:
                direct[k] = _lg_value(rho, v, False)
    lower, route = {}, {}
    for k in ks:
        cands = [(direct.get(k), "direct"), (transformed.get(k), "transformed")]
        cands = [c for c in cands if c[0] is not None]
        if not cands:
            continue
        val, how = max(cands)
        lower[m + 1 - k] = val
        route[m + 1 - k] = how
    q = len(lower)
    return LGBounds(m, n, rho, Lambda_n, nu, q, lower, route, verified)


# -- driver ------------------------------------------------------------------------------------------

@dataclass
class Stage2Result:
    problem: str
    p: int
    n: int
    m: int
    rho: float
    mode: str
    shift: float | None
    ritz: list  # float Ritz values for indices 1..m
    upper: dict  # index -> certified (or float) upper bound
    lg: LGBounds
    flux: Flux
    ndof: int

    @property
    def lower(self):
        return self.lg.lower


def _interval_gram(problem, mesh, p, V):
    """Verified ``(a(v_i, v_j), b(v_i, v_j))`` for ``V`` in full CG ordering.

    The stiffness part goes through the edge form, which avoids the
    cancellation of ``V^T K V`` on fine meshes.
    """
    space = DofSpace(mesh, "CG", p)
    geom = Geometry(mesh, "interval")
    K = assemble_form(space, space, "grad_grad", "interval", geom)
    M = assemble_form(space, space, "mass", "interval", geom)
    G0 = edge_gram(K, V)
    GM = itdot(V, imatmul(M, V))
    if problem == "laplacian":
        G0, G1 = G0, GM
    else:
        B = assemble_form(space, space, "boundary_mass", "interval", geom)
        G0, G1 = G0 + GM, itdot(V, imatmul(B, V))
    return G0.intersect(G0.T), G1.intersect(G1.T)


def run_stage2(problem, mesh, p, n, rho, m=None, mode="verified", shift=None, perturb=None):
    """Lehmann-Goerisch bounds for ``lambda_{m-n+1..m}`` given ``rho <= lambda_{m+1}``.

    Parameters
    ----------
    perturb : ndarray, optional
        Added to the trial vectors (full CG ordering); the bounds remain
        valid for any trial functions.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    m = n if m is None else int(m)
    n = int(n)
    rho = float(rho)
    if not rho > 0:
        raise ValueError("rho must be positive")
    if mode == "verified-shift" and problem != "laplacian":
        raise ValueError("the shift technique is implemented for the Laplacian")
    disc = cg_matrices(problem, mesh, p)
    values, vecs = select_vi(problem, mesh, p, n, m, disc)
    if perturb is not None:
        vecs = vecs + perturb
        if problem == "laplacian":
            bnd = disc.space.boundary_dofs
            vecs[bnd] = 0.0
    verified = mode != "float"
    if verified:
        G0, G1 = _interval_gram(problem, mesh, p, vecs)
        ritz_enc = pencil_enclosures(SymPencil(G0, G1), range(1, m + 1), rtol=SMALL_RTOL)
        upper = {e.k: e.hi for e in ritz_enc}
        ritz = [float(e.interval.mid) for e in ritz_enc]
    else:
        Vf = vecs[disc.free]
        G0 = Vf.T @ (disc.A @ Vf)
        G1 = Vf.T @ (disc.B @ Vf)
        ritz = list(sla.eigh(G0, G1, eigvals_only=True))
        upper = {k + 1: float(v) for k, v in enumerate(ritz)}
    sl = slice(m - n, m)
    trial = vecs[:, sl]
    if problem == "laplacian" and mode == "verified-shift":
        flux = compute_wi_laplacian_shifted(trial, mesh, p, shift, disc.space)
    elif problem == "laplacian":
        flux = compute_wi_laplacian(trial, mesh, p, "verified" if verified else "float", disc.space)
    else:
        flux = compute_wi_steklov(trial, mesh, p, "verified" if verified else "float", disc.space)
    if verified and not flux.residual_ok:
        raise VerificationError("divergence constraint residual does not contain zero")
    A0 = G0[sl, sl] if not verified else Interval(G0.lo[sl, sl], G0.hi[sl, sl])
    A1 = G1[sl, sl] if not verified else Interval(G1.lo[sl, sl], G1.hi[sl, sl])
    A2 = flux.A2
    rho_eff = rho
    if mode == "verified-shift":
        lh = float(shift)
        A0 = A0 + A1 * Interval(lh)
        rho_eff = float(add_down(rho, lh))
    mats = LGMatrices(A0, A1, A2, rho_eff)
    lg = lg_bounds(mats, m, n, verified)
    if mode == "verified-shift":
        lh = float(shift)
        lg.lower = {k: float(sub_down(v, lh)) for k, v in lg.lower.items()}
        lg.Lambda_n = lg.Lambda_n - Interval(lh)
        lg.rho = rho
    return Stage2Result(problem, p, n, m, rho, mode, shift, ritz, upper, lg, flux, disc.ndof)
