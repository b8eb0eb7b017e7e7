"""Floating-point symmetric generalized eigensolver.

Supplies approximate eigenpairs; nothing here is rigorous.  Two regimes:

``smallest``
    ``A v = lambda B v`` with ``B`` positive definite (Dirichlet problems).
``largest_finite``
    ``B`` positive semidefinite (Steklov: boundary mass).  The reciprocal
    problem ``B v = mu A v`` is solved for the largest ``mu > 0`` and
    ``lambda = 1 / mu`` is returned; ``B`` is never inverted.  Degrees of
    freedom outside the support of ``B`` are eliminated by a Schur
    complement first, which is exact for every ``mu != 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

log = logging.getLogger(__name__)

DENSE_CAP = 8192
SPARSE_SWITCH = 3000
RESIDUAL_TOL = 1e-8
POSITIVE_TOL = 1e-12


class EigenSolveError(RuntimeError):
    pass


@dataclass
class EigenPair:
    """Approximate eigenpair with ``v^T A v = 1``."""

    value: float
    vector: np.ndarray


def _dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)


def _fix_sign(V):
    idx = np.argmax(np.abs(V), axis=0)
    s = np.sign(V[idx, np.arange(V.shape[1])])
    s[s == 0] = 1.0
    return V * s


def _support(B):
    Bc = sp.csr_matrix(B)
    Bc.eliminate_zeros()
    rows = np.diff(Bc.indptr) > 0
    return np.nonzero(rows)[0]


def _smallest(A, B, k):
    n = A.shape[0]
    if n <= SPARSE_SWITCH:
        w, V = sla.eigh(_dense(A), _dense(B), subset_by_index=[0, k - 1])
        return w, V
    # shift-invert Lanczos with a deterministic start vector
    v0 = np.linspace(1.0, 2.0, n)
    w, V = spla.eigsh(sp.csc_matrix(A), k=k, M=sp.csc_matrix(B), sigma=0.0, which="LM",
                      v0=v0, tol=1e-13)
    order = np.argsort(w)
    return w[order], V[:, order]


def _largest_finite(A, B, k):
    n = A.shape[0]
    S_idx = _support(B)
    d_prime = S_idx.size
    if k > d_prime:
        raise EigenSolveError(f"requested {k} eigenvalues but only {d_prime} are finite")
    mask = np.ones(n, dtype=bool)
    mask[S_idx] = False
    I_idx = np.nonzero(mask)[0]
    A = sp.csr_matrix(A)
    Ass = _dense(A[S_idx][:, S_idx])
    Bss = _dense(sp.csr_matrix(B)[S_idx][:, S_idx])
    if I_idx.size:
        Aii = sp.csc_matrix(A[I_idx][:, I_idx])
        Ais = A[I_idx][:, S_idx].toarray()
        try:
            lu = spla.splu(Aii)
        except RuntimeError as exc:
            raise EigenSolveError("interior block is singular") from exc
        X = lu.solve(Ais)
        S = Ass - Ais.T @ X
        S = 0.5 * (S + S.T)
    else:
        X = np.zeros((0, S_idx.size))
        S = Ass
    if S_idx.size > DENSE_CAP:
        raise EigenSolveError("condensed problem exceeds the dense cap")
    try:
        mu, Vs = sla.eigh(Bss, S, subset_by_index=[S_idx.size - k, S_idx.size - 1])
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise EigenSolveError("A is not positive definite on the support of B") from exc
    mu = mu[::-1]
    Vs = Vs[:, ::-1]
    if np.any(mu <= POSITIVE_TOL):
        bad = int(np.nonzero(mu <= POSITIVE_TOL)[0][0]) + 1
        raise EigenSolveError(f"eigenvalue {bad} is not finite (mu <= {POSITIVE_TOL})")
    V = np.zeros((n, k))
    V[S_idx] = Vs
    if I_idx.size:
        V[I_idx] = -X @ Vs
    return 1.0 / mu, V


def solve_pencil(A, B, k, which="smallest", check=True):
    """Approximate eigenpairs of the symmetric pencil ``(A, B)``.

    Parameters
    ----------
    A, B : array_like or sparse matrix
    k : int
        Number of eigenpairs.
    which : {"smallest", "largest_finite"}
        ``largest_finite`` returns the ``k`` smallest finite eigenvalues
        ``lambda = 1/mu`` of a pencil with semidefinite ``B``.

    Returns
    -------
    list of EigenPair
        Ascending; vectors normalised to ``v^T A v = 1``, sign fixed so the
        largest-magnitude entry is positive.
    """
    n = A.shape[0]
    if A.shape != (n, n) or B.shape != (n, n):
        raise ValueError("A and B must be square of equal size")
    k = int(k)
    if k == 0:
        return []
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    if n > DENSE_CAP and which != "largest_finite":
        log.info("dimension %d above dense cap; using shift-invert Lanczos", n)
    if which == "smallest":
        w, V = _smallest(A, B, k)
    elif which == "largest_finite":
        w, V = _largest_finite(A, B, k)
    else:
        raise ValueError(f"unknown selection {which!r}")
    AV = A @ V
    quad = np.einsum("ij,ij->j", V, AV)
    if np.any(~(quad > 0)):
        raise EigenSolveError("A is not positive on a computed eigenvector")
    norms = np.sqrt(quad)
    V = _fix_sign(V / norms)
    if check:
        AV = A @ V
        BV = B @ V
        res = np.linalg.norm(AV - BV * w, axis=0)
        scale = np.linalg.norm(AV, axis=0)
        bad = np.nonzero(res > RESIDUAL_TOL * scale)[0]
        if bad.size:
            i = int(bad[0])
            raise EigenSolveError(
                f"eigenpair {i + 1} did not converge (relative residual {res[i] / scale[i]:.2e})")
    return [EigenPair(float(w[i]), V[:, i].copy()) for i in range(k)]


def count_finite(B):
    """Size of the support of ``B``, an upper bound for the number of finite eigenvalues."""
    return int(_support(B).size)
