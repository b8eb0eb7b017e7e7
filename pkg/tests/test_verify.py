from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from eigbound.interval import Interval
from eigbound.verify import (SymPencil, VerificationError, certify_positive_definite, count_below,
                             inertia_below, ldl_inertia, matrix_inertia, pencil_enclosures,
                             schur_condense, solve_enclosure)


def _random_pencil(rng, n):
    Q = rng.standard_normal((n, n))
    A = Q + Q.T
    L = rng.standard_normal((n, n))
    B = L @ L.T + n * np.eye(n)
    return A, B


def test_inertia_matches_dense_eigensolver_on_200_pencils():
    rng = np.random.default_rng(2024)
    mismatches = inconclusive = 0
    for trial in range(200):
        n = int(rng.integers(1, 13))
        A, B = _random_pencil(rng, n)
        w = sla.eigh(A, B, eigvals_only=True)
        sigma = float(rng.uniform(w.min() - 1.0, w.max() + 1.0))
        c, used = count_below(SymPencil(A, B), sigma)
        if c is None:
            inconclusive += 1
            continue
        if c != int(np.sum(w < used)):
            mismatches += 1
    assert mismatches == 0
    assert inconclusive == 0


def test_ldl_inertia_of_indefinite_matrix():
    M = np.diag([3.0, -1.0, 2.0, -5.0])
    assert ldl_inertia(M) == (2, 2)
    assert matrix_inertia(np.array([[1.0, 2.0], [2.0, 1.0]])) == (1, 1)


def test_inertia_inconclusive_on_singular_shift():
    A = np.diag([1.0, 2.0])
    B = np.eye(2)
    assert inertia_below(SymPencil(A, B), 1.0) is None


def test_pencil_enclosures_contain_eigh_values():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        A, B = _random_pencil(rng, n)
        w = sla.eigh(A, B, eigvals_only=True)
        for e in pencil_enclosures(SymPencil(A, B), range(1, n + 1)):
            assert e.lo <= w[e.k - 1] <= e.hi
            assert e.hi - e.lo <= 1e-8 * max(1.0, abs(w[e.k - 1]))


def test_certify_positive_definite():
    assert certify_positive_definite(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert not certify_positive_definite(np.array([[1.0, 2.0], [2.0, 1.0]]))
    wide = Interval(np.array([[-0.5, 0.0], [0.0, 1.0]]), np.array([[0.5, 0.0], [0.0, 1.0]]))
    assert not certify_positive_definite(wide)


def test_solve_enclosure_contains_rational_solution():
    rng = np.random.default_rng(8)
    n = 6
    M = rng.standard_normal((n, n)) + n * np.eye(n)
    b = rng.standard_normal(n)
    x = solve_enclosure(M, b)
    # exact Gauss elimination in rationals
    A = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(M, b)]
    for i in range(n):
        for j in range(i + 1, n):
            f = A[j][i] / A[i][i]
            A[j] = [a - f * c for a, c in zip(A[j], A[i])]
    sol = [Fraction(0)] * n
    for i in reversed(range(n)):
        sol[i] = (A[i][n] - sum(A[i][j] * sol[j] for j in range(i + 1, n))) / A[i][i]
    for i in range(n):
        assert Fraction(x.lo[i]) <= sol[i] <= Fraction(x.hi[i])


def test_solve_enclosure_sparse_and_multiple_rhs():
    n = 40
    M = sp.diags([-np.ones(n - 1), 4 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]).tocsr()
    b = np.arange(2 * n, dtype=float).reshape(n, 2)
    X = solve_enclosure(M, b)
    ref = np.linalg.solve(M.toarray(), b)
    assert np.all(X.lo <= ref + 1e-14) and np.all(ref - 1e-14 <= X.hi)
    assert np.max(X.hi - X.lo) < 1e-12


def test_solve_enclosure_singular():
    with pytest.raises(VerificationError):
        solve_enclosure(np.zeros((2, 2)), np.ones(2))


def test_schur_condense_contains_exact_complement():
    rng = np.random.default_rng(3)
    n = 8
    L = rng.standard_normal((n, n))
    A = L @ L.T + n * np.eye(n)
    keep = np.array([0, 3])
    elim = np.setdiff1d(np.arange(n), keep)
    exact = A[np.ix_(keep, keep)] - A[np.ix_(keep, elim)] @ np.linalg.solve(A[np.ix_(elim, elim)],
                                                                          A[np.ix_(elim, keep)])
    lam = float(np.linalg.eigvalsh(A[np.ix_(elim, elim)]).min()) * 0.5
    S = schur_condense(A, keep, lam)
    assert np.all(S.lo <= exact + 1e-12) and np.all(exact - 1e-12 <= S.hi)
