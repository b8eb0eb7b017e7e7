"""Outward-rounded interval arithmetic on numpy arrays.

Directed rounding is obtained without touching the FPU rounding mode.  Every
operation is evaluated in round-to-nearest; an error-free transformation
(TwoSum / Dekker's TwoProduct) then tells whether the rounded value already
lies on the safe side, and only otherwise the endpoint is moved by one ulp
with ``np.nextafter``.  Where the error-free transformation is not valid
(overflow, subnormal range) the endpoint is nudged unconditionally.  No
process-global state is modified, so concurrent callers are unaffected.

Large matrix products use midpoint-radius arithmetic with a-priori rounding
error bounds (``gamma_n``) instead of per-operation nudging.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import scipy.sparse as sp

UNIT_ROUNDOFF = 2.0**-53
ETA = 2.0**-1074  # smallest subnormal
_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**995
_TINY_PRODUCT = 2.0**-969
_INF = np.inf


def gamma(n):
    """Upper bound for the relative rounding error of an n-term dot product."""
    n = float(max(int(n), 1))
    if n * UNIT_ROUNDOFF >= 0.01:
        raise ValueError("inner dimension too large for a-priori error bounds")
    return 1.01 * n * UNIT_ROUNDOFF


def _down(x):
    with np.errstate(over="ignore"):
        return np.nextafter(x, -_INF)


def _up(x):
    with np.errstate(over="ignore"):
        return np.nextafter(x, _INF)


# -- error-free transformations -------------------------------------------------

def _two_sum_err(a, b, s):
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod_err(a, b, p):
    ah, al = _split(a)
    bh, bl = _split(b)
    return al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _prod_valid(a, b, p):
    aa, ab, ap = np.abs(a), np.abs(b), np.abs(p)
    return (aa < _SPLIT_LIMIT) & (ab < _SPLIT_LIMIT) & (ap > _TINY_PRODUCT) & np.isfinite(p)


def add_down(a, b):
    with np.errstate(invalid="ignore", over="ignore"):
        s = a + b
        e = _two_sum_err(a, b, s)
        ok = np.isfinite(e) & (e >= 0)
    return np.where(ok, s, _down(s))


def add_up(a, b):
    with np.errstate(invalid="ignore", over="ignore"):
        s = a + b
        e = _two_sum_err(a, b, s)
        ok = np.isfinite(e) & (e <= 0)
    return np.where(ok, s, _up(s))


def sub_down(a, b):
    return add_down(a, -np.asarray(b))


def sub_up(a, b):
    return add_up(a, -np.asarray(b))


def mul_down(a, b):
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        p = a * b
        e = _two_prod_err(a, b, p)
        ok = _prod_valid(a, b, p) & (e >= 0)
        exact_zero = (p == 0) & ((a == 0) | (b == 0))
    return np.where(ok | exact_zero, p, _down(p))


def mul_up(a, b):
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        p = a * b
        e = _two_prod_err(a, b, p)
        ok = _prod_valid(a, b, p) & (e <= 0)
        exact_zero = (p == 0) & ((a == 0) | (b == 0))
    return np.where(ok | exact_zero, p, _up(p))


def _div_residual_sign(a, b, q):
    # sign of (a/b - q), valid where the returned mask is true
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        p = q * b
        e = _two_prod_err(q, b, p)
        r = (a - p) - e
        ok = _prod_valid(q, b, p) & np.isfinite(r) & (np.abs(q) > _TINY_PRODUCT)
    return np.sign(r) * np.sign(b), ok


def div_down(a, b):
    with np.errstate(invalid="ignore", over="ignore", under="ignore", divide="ignore"):
        q = a / b
    s, ok = _div_residual_sign(a, b, q)
    exact_zero = (a == 0)
    return np.where((ok & (s >= 0)) | exact_zero, q, _down(q))


def div_up(a, b):
    with np.errstate(invalid="ignore", over="ignore", under="ignore", divide="ignore"):
        q = a / b
    s, ok = _div_residual_sign(a, b, q)
    exact_zero = (a == 0)
    return np.where((ok & (s <= 0)) | exact_zero, q, _up(q))


def _sqrt_sign(x, r):
    # sign of (x - r*r)
    with np.errstate(invalid="ignore", over="ignore", under="ignore"):
        p = r * r
        e = _two_prod_err(r, r, p)
        d = (x - p) - e
        ok = _prod_valid(r, r, p) & np.isfinite(d)
    return np.sign(d), ok


def sqrt_down(x):
    r = np.sqrt(x)
    s, ok = _sqrt_sign(x, r)
    return np.where((ok & (s >= 0)) | (x == 0), r, np.maximum(_down(r), 0.0))


def sqrt_up(x):
    r = np.sqrt(x)
    s, ok = _sqrt_sign(x, r)
    return np.where((ok & (s <= 0)) | (x == 0), r, _up(r))


# -- rigorous summation -----------------------------------------------------------

def _sum_bound(a, axis):
    n = a.shape[axis] if a.ndim else 1
    if n <= 1:
        return None
    g = gamma(n)
    return np.sum(np.abs(a), axis=axis) * (g * (1.0 + 4.0 * g)) + n * ETA


def sum_down(a, axis=None):
    a = np.asarray(a, dtype=float)
    if axis is None:
        a = a.ravel()
        axis = 0
    s = np.sum(a, axis=axis)
    err = _sum_bound(a, axis)
    if err is None:
        return s
    return _down(s - err)


def sum_up(a, axis=None):
    a = np.asarray(a, dtype=float)
    if axis is None:
        a = a.ravel()
        axis = 0
    s = np.sum(a, axis=axis)
    err = _sum_bound(a, axis)
    if err is None:
        return s
    return _up(s + err)


# -- exact rationals ----------------------------------------------------------------

def fraction_bounds(value):
    """Tightest double interval containing the rational ``value``."""
    q = Fraction(value)
    f = float(q)
    fq = Fraction(f)
    if fq == q:
        return f, f
    if fq < q:
        return f, float(np.nextafter(f, _INF))
    return float(np.nextafter(f, -_INF)), f


class Interval:
    """Array of closed intervals ``[lo, hi]`` with numpy broadcasting.

    Arithmetic with plain floats or arrays treats those as exact points.
    """

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo = np.array(lo, dtype=float)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float)
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
            lo, hi = lo.copy(), hi.copy()
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise ValueError("interval endpoints must not be NaN")
        if np.any(lo > hi):
            raise ValueError("interval with lo > hi")
        self.lo = lo
        self.hi = hi

    # construction helpers
    @classmethod
    def from_fractions(cls, values):
        arr = np.asarray(values, dtype=object)
        lo = np.empty(arr.shape)
        hi = np.empty(arr.shape)
        for idx, v in np.ndenumerate(arr):
            lo[idx], hi[idx] = fraction_bounds(v)
        return cls(lo, hi)

    @classmethod
    def from_midrad(cls, mid, rad):
        mid = np.asarray(mid, dtype=float)
        return cls(sub_down(mid, rad), add_up(mid, rad))

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape))

    @staticmethod
    def wrap(x):
        return x if isinstance(x, Interval) else Interval(x)

    # array protocol
    @property
    def shape(self):
        return self.lo.shape

    @property
    def ndim(self):
        return self.lo.ndim

    @property
    def size(self):
        return self.lo.size

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, key):
        return Interval(self.lo[key], self.hi[key])

    def __setitem__(self, key, value):
        value = Interval.wrap(value)
        self.lo[key] = value.lo
        self.hi[key] = value.hi

    def copy(self):
        return Interval(self.lo.copy(), self.hi.copy())

    def reshape(self, *shape):
        return Interval(self.lo.reshape(*shape), self.hi.reshape(*shape))

    @property
    def T(self):
        return Interval(self.lo.T, self.hi.T)

    def transpose(self, *axes):
        return Interval(self.lo.transpose(*axes), self.hi.transpose(*axes))

    def __repr__(self):
        if self.ndim == 0:
            return f"Interval([{float(self.lo)!r}, {float(self.hi)!r}])"
        return f"Interval(shape={self.shape})"

    # derived quantities
    @property
    def mid(self):
        m = 0.5 * self.lo + 0.5 * self.hi
        return np.where(np.isfinite(m), m, 0.5 * (self.lo + self.hi))

    @property
    def rad(self):
        m = self.mid
        return np.maximum(sub_up(m, self.lo), sub_up(self.hi, m))

    @property
    def width(self):
        return sub_up(self.hi, self.lo)

    def mag(self):
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self):
        return np.where((self.lo <= 0) & (self.hi >= 0), 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def contains(self, x):
        x = Interval.wrap(x)
        return (self.lo <= x.lo) & (x.hi <= self.hi)

    def contains_zero(self):
        return (self.lo <= 0) & (self.hi >= 0)

    def hull(self, other):
        other = Interval.wrap(other)
        return Interval(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def intersect(self, other):
        other = Interval.wrap(other)
        lo = np.maximum(self.lo, other.lo)
        hi = np.minimum(self.hi, other.hi)
        if np.any(lo > hi):
            raise ValueError("empty intersection")
        return Interval(lo, hi)

    # arithmetic
    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Interval):
            return Interval(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
        other = np.asarray(other, dtype=float)
        return Interval(add_down(self.lo, other), add_up(self.hi, other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Interval):
            return Interval(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))
        other = np.asarray(other, dtype=float)
        return Interval(sub_down(self.lo, other), sub_up(self.hi, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Interval):
            a, b, c, d = self.lo, self.hi, other.lo, other.hi
            lo = np.minimum(np.minimum(mul_down(a, c), mul_down(a, d)), np.minimum(mul_down(b, c), mul_down(b, d)))
            hi = np.maximum(np.maximum(mul_up(a, c), mul_up(a, d)), np.maximum(mul_up(b, c), mul_up(b, d)))
            return Interval(lo, hi)
        y = np.asarray(other, dtype=float)
        a, b = self.lo, self.hi
        lo = np.minimum(mul_down(a, y), mul_down(b, y))
        hi = np.maximum(mul_up(a, y), mul_up(b, y))
        return Interval(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Interval.wrap(other)
        if np.any(other.contains_zero()):
            raise ZeroDivisionError("interval division by an interval containing zero")
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = np.minimum(np.minimum(div_down(a, c), div_down(a, d)), np.minimum(div_down(b, c), div_down(b, d)))
        hi = np.maximum(np.maximum(div_up(a, c), div_up(a, d)), np.maximum(div_up(b, c), div_up(b, d)))
        return Interval(lo, hi)

    def __rtruediv__(self, other):
        return Interval.wrap(other) / self

    def square(self):
        lo2 = mul_down(self.lo, self.lo)
        hi2 = mul_down(self.hi, self.hi)
        lo_up = mul_up(self.lo, self.lo)
        hi_up = mul_up(self.hi, self.hi)
        straddle = self.contains_zero()
        lo = np.where(straddle, 0.0, np.minimum(lo2, hi2))
        return Interval(lo, np.maximum(lo_up, hi_up))

    def __pow__(self, k):
        if k != 2:
            raise NotImplementedError("only squaring is supported")
        return self.square()

    def sqrt(self):
        if np.any(self.lo < 0):
            raise ValueError("square root of an interval with negative part")
        return Interval(sqrt_down(self.lo), sqrt_up(self.hi))

    def sum(self, axis=None):
        return Interval(sum_down(self.lo, axis), sum_up(self.hi, axis))

    def max(self, axis=None):
        return Interval(np.max(self.lo, axis=axis), np.max(self.hi, axis=axis))

    def min(self, axis=None):
        return Interval(np.min(self.lo, axis=axis), np.min(self.hi, axis=axis))

    def __matmul__(self, other):
        return imatmul(self, other)

    def __rmatmul__(self, other):
        return imatmul(other, self)


def isqrt(x):
    return Interval.wrap(x).sqrt()


class IntervalSparse:
    """Sparse interval matrix stored as canonical COO triplets.

    Rows and columns are unique and sorted (row-major); ``lo`` and ``hi``
    are the endpoint arrays for these positions.
    """

    def __init__(self, rows, cols, lo, hi, shape):
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        self.shape = (int(shape[0]), int(shape[1]))

    @classmethod
    def from_coo(cls, rows, cols, lo, hi, shape):
        """Sum duplicate entries with rigorous rounding error control."""
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        lo = np.asarray(lo, dtype=float).ravel()
        hi = np.asarray(hi, dtype=float).ravel()
        if rows.size == 0:
            return cls(rows, cols, lo, hi, shape)
        keys = rows * shape[1] + cols
        uniq, inv = np.unique(keys, return_inverse=True)
        counts = np.bincount(inv)
        lo_s = np.bincount(inv, weights=lo)
        hi_s = np.bincount(inv, weights=hi)
        kmax = int(counts.max())
        if kmax > 1:
            mag = np.bincount(inv, weights=np.maximum(np.abs(lo), np.abs(hi)))
            g = gamma(kmax)
            err = mag * (g * (1.0 + 4.0 * g)) + kmax * ETA
            multi = counts > 1
            lo_s = np.where(multi, _down(lo_s - err), lo_s)
            hi_s = np.where(multi, _up(hi_s + err), hi_s)
        return cls(uniq // shape[1], uniq % shape[1], lo_s, hi_s, shape)

    @classmethod
    def from_point(cls, matrix):
        m = sp.coo_matrix(matrix)
        return cls.from_coo(m.row, m.col, m.data, m.data, m.shape)

    def _csr(self, data):
        return sp.csr_matrix((data, (self.rows, self.cols)), shape=self.shape)

    @property
    def mid(self):
        return self._csr(0.5 * self.lo + 0.5 * self.hi)

    @property
    def rad(self):
        m = 0.5 * self.lo + 0.5 * self.hi
        return self._csr(np.maximum(sub_up(m, self.lo), sub_up(self.hi, m)))

    @property
    def lo_matrix(self):
        return self._csr(self.lo)

    @property
    def hi_matrix(self):
        return self._csr(self.hi)

    @property
    def nnz(self):
        return self.rows.size

    def toarray(self):
        lo = np.zeros(self.shape)
        hi = np.zeros(self.shape)
        lo[self.rows, self.cols] = self.lo
        hi[self.rows, self.cols] = self.hi
        return Interval(lo, hi)

    def diagonal(self):
        n = min(self.shape)
        lo = np.zeros(n)
        hi = np.zeros(n)
        d = self.rows == self.cols
        lo[self.rows[d]] = self.lo[d]
        hi[self.rows[d]] = self.hi[d]
        return Interval(lo, hi)

    def submatrix(self, row_index, col_index):
        row_index = np.asarray(row_index, dtype=np.int64)
        col_index = np.asarray(col_index, dtype=np.int64)
        rmap = np.full(self.shape[0], -1, dtype=np.int64)
        cmap = np.full(self.shape[1], -1, dtype=np.int64)
        rmap[row_index] = np.arange(row_index.size)
        cmap[col_index] = np.arange(col_index.size)
        r = rmap[self.rows]
        c = cmap[self.cols]
        keep = (r >= 0) & (c >= 0)
        return IntervalSparse.from_coo(r[keep], c[keep], self.lo[keep], self.hi[keep],
                                       (row_index.size, col_index.size))

    @property
    def T(self):
        return IntervalSparse.from_coo(self.cols, self.rows, self.lo, self.hi, self.shape[::-1])

    def __add__(self, other):
        if not isinstance(other, IntervalSparse):
            return NotImplemented
        if other.shape != self.shape:
            raise ValueError("shape mismatch")
        return IntervalSparse.from_coo(
            np.concatenate([self.rows, other.rows]), np.concatenate([self.cols, other.cols]),
            np.concatenate([self.lo, other.lo]), np.concatenate([self.hi, other.hi]), self.shape)

    def scale(self, factor):
        """Multiply every entry by a float or scalar interval."""
        f = Interval.wrap(factor)
        x = Interval(self.lo, self.hi) * f
        return IntervalSparse(self.rows, self.cols, x.lo, x.hi, self.shape)

    def __matmul__(self, other):
        return imatmul(self, other)

    def __rmatmul__(self, other):
        return imatmul(other, self)


def _as_midrad(x):
    """Return (mid, rad, kind) where kind is 'dense' or 'sparse'; rad may be None."""
    if isinstance(x, Interval):
        return x.mid, x.rad, "dense"
    if isinstance(x, IntervalSparse):
        return x.mid, x.rad, "sparse"
    if sp.issparse(x):
        return sp.csr_matrix(x), None, "sparse"
    return np.asarray(x, dtype=float), None, "dense"


def _absm(x):
    return abs(x) if sp.issparse(x) else np.abs(x)


def _dense(x):
    if sp.issparse(x):
        return x.toarray()
    return np.asarray(x)


def _mm(a, b):
    r = a @ b
    return _dense(r)


def _inner_count(am, bm, a_kind, b_kind):
    if a_kind == "sparse":
        return int(np.max(np.diff(am.indptr))) if am.nnz else 1
    if b_kind == "sparse":
        bc = sp.csc_matrix(bm)
        return int(np.max(np.diff(bc.indptr))) if bc.nnz else 1
    return am.shape[-1]


def imatmul(a, b):
    """Rigorous enclosure of the matrix product ``a @ b``.

    Operands may be float arrays, scipy sparse matrices, :class:`Interval`
    or :class:`IntervalSparse`.  The result is a dense :class:`Interval`.
    """
    am, ar, ak = _as_midrad(a)
    bm, br, bk = _as_midrad(b)
    k = max(_inner_count(am, bm, ak, bk), 1)
    cm = _mm(am, bm)
    aam = _absm(am)
    abm = _absm(bm)
    t = _mm(aam, abm)
    r = np.zeros_like(cm)
    if br is not None:
        r = r + _mm(aam, br)
    if ar is not None:
        bb = abm if br is None else (abm + br)
        r = r + _mm(ar, bb)
    g = gamma(k + 2)
    rad = (r + g * t) * (1.0 + 2.0 * g) + (k + 2) * ETA
    rad = _up(rad)
    return Interval(_down(cm - rad), _up(cm + rad))


def compensated_sum(P, E=None):
    """Compensated sum over axis 0 of ``P`` (plus known error terms ``E``).

    Returns the value and an upper bound of its distance to the exact sum
    of ``P + E``; pairwise TwoSum keeps every partial sum error exactly.
    """
    n = P.shape[0]
    csum = np.zeros(P.shape[1:])
    cabs = np.zeros(P.shape[1:])
    if E is not None:
        csum += E.sum(axis=0)
        cabs += np.abs(E).sum(axis=0)
    s = P
    while s.shape[0] > 1:
        if s.shape[0] % 2:
            s = np.concatenate([s, np.zeros((1,) + s.shape[1:])])
        a, b = s[0::2], s[1::2]
        t = a + b
        e = _two_sum_err(a, b, t)
        csum += e.sum(axis=0)
        cabs += np.abs(e).sum(axis=0)
        s = t
    r = s[0] + csum
    g = gamma(2 * n + 2)
    rad = (cabs * g + (np.abs(csum) + np.abs(r)) * UNIT_ROUNDOFF) * (1.0 + 4.0 * g) + 4 * n * ETA
    return r, _up(rad)


def _dot2(X, Y):
    """Compensated ``X^T Y`` for float (n, a) and (n, b): value and error radius."""
    P = X[:, :, None] * Y[:, None, :]
    Xb = np.broadcast_to(X[:, :, None], P.shape)
    Yb = np.broadcast_to(Y[:, None, :], P.shape)
    ok = _prod_valid(Xb, Yb, P)
    E = np.where(ok, _two_prod_err(Xb, Yb, P), 0.0)
    # products outside the error-free range: rounding error bounded directly
    bad = np.where(ok, 0.0, np.abs(P) * UNIT_ROUNDOFF + ETA).sum(axis=0)
    r, rad = compensated_sum(P, E)
    return r, _up(rad + bad * (1.0 + gamma(P.shape[0] + 2)))


def edge_gram(K, X):
    """Enclosure of ``X^T K X`` for a matrix whose exact value is symmetric
    with zero row sums (a stiffness matrix of a partition-of-unity basis).

    Uses ``x^T K y = -1/2 sum_ij K_ij (x_i - x_j)(y_i - y_j)``, whose terms
    do not cancel for smooth vectors, so the radius scales with ``|X^T K X|``
    instead of ``|X|^T |K| |X|``.
    """
    if not isinstance(K, IntervalSparse):
        K = IntervalSparse.from_point(K)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    off = K.rows != K.cols
    rows, cols = K.rows[off], K.cols[off]
    c = -0.5 * (K.lo[off] + K.hi[off])
    cr = _up(0.5 * (K.hi[off] - K.lo[off]) * (1.0 + 2 * UNIT_ROUNDOFF) + np.abs(c) * UNIT_ROUNDOFF)
    D = X[rows] - X[cols]
    a = X.shape[1]
    G = np.zeros((a, a))
    R = np.zeros((a, a))
    nnz = rows.size
    g = gamma(8)
    for i in range(a):
        for j in range(i, a):
            dd = D[:, i] * D[:, j]
            q = c * dd
            add = np.abs(dd) * ((np.abs(c) * g + cr) * (1.0 + g)) + 2 * ETA
            val, rad = compensated_sum(q[:, None])
            rad = rad[0] + float(np.sum(add)) * (1.0 + gamma(nnz + 2)) + nnz * ETA
            G[i, j] = G[j, i] = 0.5 * val[0]
            R[i, j] = R[j, i] = 0.5 * rad
    R = _up(_up(R) + np.abs(G) * UNIT_ROUNDOFF)
    return Interval(_down(G - R), _up(G + R))


def itdot(X, Y, chunk=2_000_000):
    """Enclosure of ``X^T Y`` for tall dense ``X`` (n, a) and ``Y`` (n, b).

    The midpoint product uses error-free transformations, so the radius is
    of the order of the unit roundoff times ``|X^T Y|`` plus the operand
    radii, independent of ``n``.  Use this for Gram matrices of long vectors.
    """
    Xm, Xr, _ = _as_midrad(X)
    Ym, Yr, _ = _as_midrad(Y)
    Xm = np.atleast_2d(np.asarray(Xm, dtype=float).T).T
    Ym = np.atleast_2d(np.asarray(Ym, dtype=float).T).T
    n, a = Xm.shape
    b = Ym.shape[1]
    if Ym.shape[0] != n:
        raise ValueError("inner dimensions differ")
    mid = np.zeros((a, b))
    rad = np.zeros((a, b))
    step = max(1, chunk // max(n, 1))
    for j0 in range(0, b, step):
        sl = slice(j0, min(b, j0 + step))
        mid[:, sl], rad[:, sl] = _dot2(Xm, Ym[:, sl])
    extra = None
    if Yr is not None:
        extra = np.abs(Xm).T @ Yr
    if Xr is not None:
        t = Xr.T @ (np.abs(Ym) + (Yr if Yr is not None else 0.0))
        extra = t if extra is None else extra + t
    if extra is not None:
        rad = rad + extra * (1.0 + 2.0 * gamma(n + 2)) + (n + 2) * ETA
        rad = _up(rad)
    return Interval(_down(mid - rad), _up(mid + rad))


def hull_of_points(*arrays):
    arrs = [np.asarray(a, dtype=float) for a in arrays]
    return Interval(np.minimum.reduce(arrs), np.maximum.reduce(arrs))
