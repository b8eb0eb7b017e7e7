"""Verified matrix kernels: inertia counts, pencil eigenvalue enclosures and
linear-system enclosures.

Counting eigenvalues of a symmetric-definite pencil ``A x = lambda B x`` below
a shift ``sigma`` relies on Sylvester's law of inertia: the number of
negative eigenvalues of ``A - sigma B`` is invariant under congruence.  Two
certificates are used:

* interval LDL^T without pivoting; every pivot interval must exclude zero;
* strict diagonal dominance of an interval matrix, which fixes the inertia to
  the signs of the diagonal (the path ``D + t F`` never becomes singular).

For enclosures the pencil is first congruence-transformed with approximate
eigenvectors, which makes ``A - sigma B`` nearly diagonal so the cheap
dominance certificate applies to every trial shift away from the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .interval import (
    Interval,
    IntervalSparse,
    add_up,
    div_up,
    imatmul,
    mul_up,
    sqrt_up,
    sub_down,
    sum_up,
)

DENSE_LIMIT = 4096
LDL_LIMIT = 400
NUDGE = 2.0**-20
MAX_RETRIES = 64
SMALL_FALLBACK = 64


class VerificationError(RuntimeError):
    """A verified computation could not be certified."""


def as_interval_matrix(m):
    if isinstance(m, Interval):
        return m
    if isinstance(m, IntervalSparse):
        return m.toarray()
    if sp.issparse(m):
        return Interval(m.toarray())
    return Interval(np.asarray(m, dtype=float))


def _symmetrize(m):
    lo = np.tril(m.lo) + np.tril(m.lo, -1).T
    hi = np.tril(m.hi) + np.tril(m.hi, -1).T
    return Interval(lo, hi)


class SymPencil:
    """Symmetric pencil ``(A, B)``; the lower triangles define both matrices."""

    def __init__(self, A, B):
        A = as_interval_matrix(A)
        B = as_interval_matrix(B)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("A must be square")
        if B.shape != A.shape:
            raise ValueError("dimension mismatch between A and B")
        self.A = _symmetrize(A)
        self.B = _symmetrize(B)

    @property
    def dim(self):
        return self.A.shape[0]

    def shifted(self, sigma):
        sigma = float(sigma)
        return self.A - self.B * sigma

    def mid(self):
        return self.A.mid, self.B.mid


# -- inertia -------------------------------------------------------------------------

def ldl_inertia(M):
    """Inertia ``(negative, positive)`` of a symmetric interval matrix via
    interval LDL^T without pivoting, or ``None`` if a pivot contains zero."""
    M = as_interval_matrix(M)
    n = M.shape[0]
    lo = M.lo.copy()
    hi = M.hi.copy()
    neg = 0
    for k in range(n):
        d = Interval(lo[k, k], hi[k, k])
        if d.lo <= 0 <= d.hi:
            return None
        if d.hi < 0:
            neg += 1
        if k + 1 < n:
            col = Interval(lo[k + 1:, k], hi[k + 1:, k])
            ell = col / d
            upd = Interval(lo[k + 1:, k + 1:], hi[k + 1:, k + 1:]) - ell[:, None] * col[None, :]
            lo[k + 1:, k + 1:] = upd.lo
            hi[k + 1:, k + 1:] = upd.hi
    return neg, n - neg


def dominance_inertia(M):
    """Inertia certified by strict diagonal dominance, or ``None``."""
    M = as_interval_matrix(M)
    n = M.shape[0]
    mag = M.mag()
    diag_lo = np.diag(M.lo).copy()
    diag_hi = np.diag(M.hi).copy()
    mag[np.arange(n), np.arange(n)] = 0.0
    radius = sum_up(mag, axis=1) if n > 1 else np.zeros(n)
    pos = diag_lo > radius
    neg = diag_hi < -radius
    if not np.all(pos | neg):
        return None
    k = int(np.count_nonzero(neg))
    return k, n - k


def matrix_inertia(M):
    M = as_interval_matrix(M)
    res = dominance_inertia(M)
    if res is None and M.shape[0] <= LDL_LIMIT:
        res = ldl_inertia(M)
    return res


def inertia_below(pencil, sigma):
    """Number of pencil eigenvalues strictly below ``sigma``.

    Returns ``None`` when the certificate is inconclusive; the caller should
    perturb ``sigma``.  ``B`` must be positive definite.
    """
    if pencil.dim > DENSE_LIMIT:
        raise ValueError("pencil dimension exceeds the dense verification cap")
    if pencil.dim == 0:
        return 0
    res = matrix_inertia(pencil.shifted(sigma))
    if res is None:
        return None
    return res[0]


def count_below(pencil, sigma, direction=-1.0):
    """:func:`inertia_below` with the retry policy for inconclusive shifts.

    Returns ``(count, sigma_used)``; ``direction`` chooses where nudged
    shifts move (negative: downward).
    """
    s = float(sigma)
    for _ in range(MAX_RETRIES):
        c = inertia_below(pencil, s)
        if c is not None:
            return c, s
        step = NUDGE * abs(s) if s != 0 else NUDGE
        s = s + direction * step
    return None, s


def certify_positive_definite(M):
    """True if the symmetric interval matrix is certified positive definite."""
    M = _symmetrize(as_interval_matrix(M))
    n = M.shape[0]
    if n == 0:
        return True
    res = matrix_inertia(M)
    if res is None:
        mid = M.mid
        try:
            _, Q = sla.eigh(mid)
        except np.linalg.LinAlgError:
            return False
        H = imatmul(Q.T, imatmul(M, Q))
        res = dominance_inertia(_symmetrize(H))
        if res is None:
            return False
    return res[0] == 0


# -- eigenvalue enclosures ---------------------------------------------------------------

@dataclass
class Enclosure:
    k: int
    interval: Interval
    clustered: bool = False

    @property
    def lo(self):
        return float(self.interval.lo)

    @property
    def hi(self):
        return float(self.interval.hi)


def _is_diagonal(m):
    off = ~np.eye(m.shape[0], dtype=bool)
    return not (np.any(m.lo[off] != 0) or np.any(m.hi[off] != 0))


class _Preconditioned:
    """Pencil congruence-transformed by approximate B-orthonormal eigenvectors.

    ``G = Q^T A Q`` and ``H = Q^T B Q`` are nearly diagonal.  Row sums of
    the off-diagonal magnitudes are computed once, so that a dominance
    certificate for ``G - sigma H`` costs O(n) per shift.
    """

    def __init__(self, pencil):
        Am, Bm = pencil.mid()
        if _is_diagonal(pencil.A) and _is_diagonal(pencil.B):
            G, H = pencil.A, pencil.B
            d = np.diag(Bm)
            if np.any(d <= 0):
                raise VerificationError("B is not numerically positive definite")
            self.estimates = np.sort(np.diag(Am) / d)
        else:
            try:
                w, Q = sla.eigh(Am, Bm)
            except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
                raise VerificationError("B is not numerically positive definite") from exc
            self.estimates = w
            G = _symmetrize(imatmul(Q.T, imatmul(pencil.A, Q)))
            H = _symmetrize(imatmul(Q.T, imatmul(pencil.B, Q)))
        hres = dominance_inertia(H)
        if hres is None and H.shape[0] <= LDL_LIMIT:
            hres = ldl_inertia(H)
        if hres is None or hres[0] != 0:
            raise VerificationError("could not certify positive definiteness of B")
        self.pencil = SymPencil(G, H)
        n = G.shape[0]
        idx = np.arange(n)
        self.g = Interval(G.lo[idx, idx], G.hi[idx, idx])
        self.h = Interval(H.lo[idx, idx], H.hi[idx, idx])
        gm = G.mag()
        hm = H.mag()
        gm[idx, idx] = 0.0
        hm[idx, idx] = 0.0
        self.rg = sum_up(gm, axis=1) if n > 1 else np.zeros(n)
        self.rh = sum_up(hm, axis=1) if n > 1 else np.zeros(n)

    def count(self, sigma):
        sigma = float(sigma)
        d = self.g - self.h * sigma
        r = add_up(self.rg, mul_up(abs(sigma), self.rh))
        pos = d.lo > r
        neg = d.hi < -r
        if np.all(pos | neg):
            return int(np.count_nonzero(neg))
        if d.size <= SMALL_FALLBACK:
            return inertia_below(self.pencil, sigma)
        return None


def pencil_enclosures(pencil, ks, rtol=1e-10, max_bisect=60):
    """Verified enclosures of the ``k``-th smallest eigenvalues (1-based).

    The pencil must have ``B`` positive definite; this is certified as part
    of the computation.  Each enclosure is grown around the float estimate
    until both endpoint counts are proven, then tightened by bisection if it
    is wider than ``rtol`` relative.
    """
    ks = sorted(set(int(k) for k in ks))
    n = pencil.dim
    if n > DENSE_LIMIT:
        raise ValueError("pencil dimension exceeds the dense verification cap")
    if not ks:
        return []
    if ks[0] < 1 or ks[-1] > n:
        raise ValueError("eigenvalue index out of range")
    pre = _Preconditioned(pencil)
    w = pre.estimates
    out = {}
    for k in ks:
        est = float(w[k - 1])
        base = max(abs(est), 1e-300) * 2.0**-52
        lo = _find_endpoint(pre, est, k, base, side=-1)
        hi = _find_endpoint(pre, est, k, base, side=+1)
        lo, hi = _bisect(pre, k, lo, hi, rtol * max(abs(est), 1e-300), max_bisect)
        out[k] = [lo, hi]
    # order preservation for consecutive indices
    for a, b in zip(ks[:-1], ks[1:]):
        if b == a + 1:
            out[b][0] = max(out[b][0], out[a][0])
    for a, b in reversed(list(zip(ks[:-1], ks[1:]))):
        if b == a + 1:
            out[a][1] = min(out[a][1], out[b][1])
    res = []
    for k in ks:
        lo, hi = out[k]
        clustered = False
        if k - 1 in out and out[k - 1][1] >= lo:
            clustered = True
        if k + 1 in out and out[k + 1][0] <= hi:
            clustered = True
        res.append(Enclosure(k, Interval(lo, hi), clustered))
    return res


def pencil_enclosure(pencil, k, rtol=1e-10):
    """Verified enclosure of the k-th smallest eigenvalue (1-based)."""
    return pencil_enclosures(pencil, [k], rtol=rtol)[0]


def _find_endpoint(pre, est, k, base, side):
    delta = base
    for _ in range(4 * MAX_RETRIES):
        sigma = est + side * delta
        c = pre.count(sigma)
        if c is not None:
            if side < 0 and c <= k - 1:
                return sigma
            if side > 0 and c >= k:
                return sigma
        delta *= 2.0
    raise VerificationError(f"could not bracket eigenvalue {k}")


def _bisect(pre, k, lo, hi, tol, max_steps):
    for _ in range(max_steps):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        c = pre.count(mid)
        if c is None:
            break
        if c <= k - 1:
            lo = mid
        else:
            hi = mid
    return lo, hi


# -- linear systems ---------------------------------------------------------------------------

def solve_enclosure(M, rhs):
    """Interval enclosure of the solution of ``M x = rhs``.

    ``M`` may be a point or interval matrix (dense or sparse); ``rhs`` a
    vector or a matrix of right-hand sides.  With an approximate inverse
    ``R`` the error ``e = x - x~`` satisfies ``e = R r + (I - R M) e``; if
    ``alpha = ||I - R M||_inf < 1`` then ``||e||_inf <= ||R r||_inf / (1 - alpha)``
    and componentwise ``|e| <= |R r| + |I - R M| 1 ||e||_inf``.
    """
    if isinstance(M, IntervalSparse):
        Mmid = M.mid.toarray()
    elif isinstance(M, Interval):
        Mmid = M.mid
    elif sp.issparse(M):
        Mmid = M.toarray()
    else:
        Mmid = np.asarray(M, dtype=float)
    n = Mmid.shape[0]
    if Mmid.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > DENSE_LIMIT:
        raise ValueError("system dimension exceeds the dense verification cap")
    b = Interval.wrap(rhs)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(n, 1)
    if b.shape[0] != n:
        raise ValueError("right-hand side has wrong length")
    try:
        R = sla.inv(Mmid)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise VerificationError("matrix is numerically singular") from exc
    bm = b.mid
    x = R @ bm
    x = x + R @ (bm - Mmid @ x)
    r = b - imatmul(M, x)
    z = imatmul(R, r)
    RM = imatmul(R, M)
    C = Interval(np.eye(n)) - RM
    cmag = C.mag()
    rowc = sum_up(cmag, axis=1) if n > 1 else cmag[:, 0].copy()
    alpha = float(np.max(rowc))
    if not alpha < 1.0:
        raise VerificationError(f"no contraction: ||I - R M|| <= {alpha:.3g}")
    zmag = z.mag()
    beta = div_up(np.max(zmag, axis=0), sub_down(1.0, alpha))
    err = add_up(zmag, mul_up(rowc[:, None], beta[None, :]))
    out = Interval(sub_down(x, err), add_up(x, err))
    return out.reshape(n) if vector else out


# -- Schur condensation -------------------------------------------------------------------------

def schur_condense(A, keep, lower_eig_bound):
    """Rigorous Schur complement of a symmetric positive definite interval
    matrix onto the index set ``keep``.

    ``lower_eig_bound`` must be a proven positive lower bound for the
    smallest eigenvalue of the eliminated block ``A_ii``.  With the float
    solution ``X~`` of ``A_ii X = A_ib`` and residual ``R = A_ib - A_ii X~``
    the exact complement is

        S = A_bb - X~^T A_ib - A_bi X~ + X~^T A_ii X~ - E^T R,

    where ``|(E^T R)_kj| <= ||r_k|| ||r_j|| / lower_eig_bound``.
    """
    if not isinstance(A, IntervalSparse):
        A = IntervalSparse.from_point(sp.csr_matrix(A))
    n = A.shape[0]
    keep = np.asarray(keep, dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[keep] = False
    elim = np.nonzero(mask)[0]
    Abb = A.submatrix(keep, keep).toarray()
    if elim.size == 0:
        return _symmetrize(Abb)
    if not lower_eig_bound > 0:
        raise VerificationError("eliminated block needs a positive eigenvalue bound")
    Aii = A.submatrix(elim, elim)
    Aib = A.submatrix(elim, keep)
    lu = spla.splu(sp.csc_matrix(Aii.mid))
    X = lu.solve(Aib.mid.toarray())
    AX = imatmul(Aii, X)
    R = Aib.toarray() - AX
    rmag = R.mag()
    rnorm = sqrt_up(sum_up(mul_up(rmag, rmag), axis=0))
    T1 = imatmul(X.T, Aib)
    T3 = imatmul(X.T, AX)
    S = Abb - T1 - T1.T + T3
    bound = div_up(mul_up(rnorm[:, None], rnorm[None, :]), float(lower_eig_bound))
    S = Interval(sub_down(S.lo, bound), add_up(S.hi, bound))
    S = S.intersect(S.T)
    return S
