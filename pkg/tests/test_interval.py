"""Interval arithmetic against an exact rational oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigbound.interval import (Interval, IntervalSparse, add_down, add_up, div_down, div_up,
                               edge_gram, fraction_bounds, gamma, imatmul, itdot, mul_down, mul_up,
                               sqrt_down, sqrt_up, sub_down, sub_up, sum_down, sum_up)

F = Fraction
finite = st.floats(min_value=-1e200, max_value=1e200, allow_nan=False, allow_infinity=False)


def _rand_floats(rng, n):
    # mix of magnitudes, including tiny and huge, exact ties and subnormals
    mant = rng.standard_normal(n)
    expo = rng.integers(-60, 60, n)
    x = np.ldexp(mant, expo)
    x[::17] = np.ldexp(rng.standard_normal(x[::17].size), -1040)
    x[::23] = np.round(x[::23])
    return x


def test_directed_scalar_ops_1000_random_cases():
    rng = np.random.default_rng(20240601)
    n = 1000
    a = _rand_floats(rng, n)
    b = _rand_floats(rng, n)
    b[b == 0] = 1.0
    bad = []
    ops = [
        (add_down, add_up, lambda x, y: x + y),
        (sub_down, sub_up, lambda x, y: x - y),
        (mul_down, mul_up, lambda x, y: x * y),
        (div_down, div_up, lambda x, y: x / y),
    ]
    for lo_f, hi_f, exact in ops:
        lo = lo_f(a, b)
        hi = hi_f(a, b)
        for i in range(n):
            e = exact(F(a[i]), F(b[i]))
            if not (F(lo[i]) <= e <= F(hi[i])):
                bad.append((exact, a[i], b[i]))
    assert bad == []


def test_sqrt_directed():
    rng = np.random.default_rng(7)
    x = np.abs(_rand_floats(rng, 1000))
    lo, hi = sqrt_down(x), sqrt_up(x)
    for xi, l, h in zip(x, lo, hi):
        assert F(l) ** 2 <= F(xi) <= F(h) ** 2


def test_interval_expressions_1000_cases_contain_exact():
    rng = np.random.default_rng(11)
    violations = 0
    for _ in range(1000):
        a, b, c = (F(v) for v in _rand_floats(rng, 3))
        A, B, C = Interval(float(a)), Interval(float(b)), Interval(float(c))
        val = (A + B) * C - A * A
        exact = (a + b) * c - a * a
        if not (F(float(val.lo)) <= exact <= F(float(val.hi))):
            violations += 1
        if c != 0:
            q = (A - B) / C
            ex = (a - b) / c
            if not (F(float(q.lo)) <= ex <= F(float(q.hi))):
                violations += 1
    assert violations == 0


def _within(x, exact):
    lo, hi = float(x.lo), float(x.hi)
    return (lo == -np.inf or F(lo) <= exact) and (hi == np.inf or exact <= F(hi))


@settings(max_examples=200, deadline=None)
@given(finite, finite, finite, finite)
def test_hypothesis_sum_and_product(a, b, c, d):
    x = Interval(min(a, b), max(a, b))
    y = Interval(min(c, d), max(c, d))
    s = x + y
    p = x * y
    for u in (min(a, b), max(a, b)):
        for v in (min(c, d), max(c, d)):
            assert _within(s, F(u) + F(v))
            assert _within(p, F(u) * F(v))


def test_directed_sums():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = _rand_floats(rng, 40)
        ex = sum(F(v) for v in x)
        assert F(float(sum_down(x))) <= ex <= F(float(sum_up(x)))


def test_fraction_bounds_tight():
    lo, hi = fraction_bounds(F(1, 3))
    assert F(lo) < F(1, 3) < F(hi)
    assert np.nextafter(lo, np.inf) == hi
    assert fraction_bounds(F(1, 4)) == (0.25, 0.25)


def test_gamma_guard():
    assert gamma(10) > 10 * 2.0**-53
    with pytest.raises(ValueError):
        gamma(10**15)


def test_interval_rejects_inverted():
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)


def _exact_matmul(A, B):
    A = [[F(v) for v in row] for row in A]
    B = [[F(v) for v in row] for row in B]
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _contains(enc, exact):
    lo, hi = enc.lo, enc.hi
    return all(F(lo[i, j]) <= exact[i][j] <= F(hi[i, j])
               for i in range(lo.shape[0]) for j in range(lo.shape[1]))


def test_imatmul_and_itdot_contain_exact_products():
    rng = np.random.default_rng(5)
    for trial in range(20):
        X = rng.standard_normal((30, 3)) * 10.0 ** rng.integers(-5, 5)
        Y = rng.standard_normal((30, 2))
        Y[:, 0] = X[:, 0] * (1 + 1e-12)  # strong cancellation is not needed, but big values are
        ex = _exact_matmul(X.T, Y)
        assert _contains(imatmul(X.T, Y), ex)
        assert _contains(itdot(X, Y), ex)


def test_itdot_is_tighter_on_cancellation():
    rng = np.random.default_rng(9)
    x = rng.standard_normal((5000, 1)) * 1e3
    y = np.vstack([x[:2500], -x[:2500]])
    x = np.vstack([x[:2500], x[:2500]])
    a = itdot(x, y)
    b = imatmul(x.T, y)
    assert a.lo[0, 0] <= 0.0 <= a.hi[0, 0]
    assert (a.hi - a.lo)[0, 0] < 1e-6 * (b.hi - b.lo)[0, 0]


def test_edge_gram_matches_exact_laplacian_form():
    # path graph Laplacian: zero row sums, symmetric
    n = 12
    K = np.diag(np.full(n, 2.0)) - np.diag(np.ones(n - 1), 1) - np.diag(np.ones(n - 1), -1)
    K[0, 0] = K[-1, -1] = 1.0
    rng = np.random.default_rng(1)
    X = rng.standard_normal((n, 3))
    ex = _exact_matmul(X.T, _exact_matmul(K, X))
    G = edge_gram(IntervalSparse.from_point(K), X)
    assert _contains(G, ex)


def test_interval_sparse_duplicates_summed_rigorously():
    rows = np.array([0, 0, 0, 1])
    cols = np.array([0, 0, 0, 1])
    vals = np.array([0.1, 0.2, 0.3, 1.0])
    S = IntervalSparse.from_coo(rows, cols, vals, vals, (2, 2))
    dense_lo = S._csr(S.lo).toarray()
    dense_hi = S._csr(S.hi).toarray()
    ex = F(0.1) + F(0.2) + F(0.3)
    assert F(dense_lo[0, 0]) <= ex <= F(dense_hi[0, 0])
