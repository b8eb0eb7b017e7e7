import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg as sla

from eigbound.fem import DofSpace, Geometry, apply_dirichlet, assemble_form, edge_quadrature, quadrature
from eigbound.fem.reference import rt_tensors, scalar_tensors
from eigbound.interval import IntervalSparse
from eigbound.mesh import generate_mesh, template_domain, uniform_square


@pytest.fixture(scope="module")
def lmesh():
    return generate_mesh(template_domain("lshape"), 0.35)


@pytest.mark.parametrize("degree", range(0, 9))
def test_quadrature_exact_on_monomials(degree):
    pts, w = quadrature(degree)
    assert np.all(w > 0)
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            exact = Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 2))
            got = np.sum(w * pts[:, 0] ** a * pts[:, 1] ** b)
            assert got == pytest.approx(float(exact), rel=1e-13, abs=1e-15)


def test_edge_quadrature():
    t, w = edge_quadrature(5)
    assert np.sum(w * t**5) == pytest.approx(1 / 6)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_mass_and_stiffness_identities(lmesh, p):
    V = DofSpace(lmesh, "CG", p)
    M = assemble_form(V, V, "mass")
    K = assemble_form(V, V, "grad_grad")
    one = np.ones(V.ndof)
    assert one @ M @ one == pytest.approx(3.0, rel=1e-12)
    assert np.abs(K @ one).max() < 1e-11
    x = V.interpolate(lambda x, y: x + 2.0 * y)
    assert x @ K @ x == pytest.approx(5.0 * 3.0, rel=1e-11)
    B = assemble_form(V, V, "boundary_mass")
    assert one @ B @ one == pytest.approx(8.0, rel=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_interval_assembly_contains_point_assembly(lmesh, p):
    V = DofSpace(lmesh, "CG", p)
    pt = assemble_form(V, V, "grad_grad").tocoo()
    iv = assemble_form(V, V, "grad_grad", "interval", Geometry(lmesh, "interval"))
    assert isinstance(iv, IntervalSparse)
    lo = iv._csr(iv.lo).toarray()
    hi = iv._csr(iv.hi).toarray()
    d = pt.toarray()
    assert np.all(lo <= d + 1e-15 * np.abs(d)) and np.all(d - 1e-15 * np.abs(d) <= hi)
    assert np.max(hi - lo) < 1e-12


def test_cg_dirichlet_square_eigenvalues():
    m = uniform_square(8)
    V = DofSpace(m, "CG", 2)
    K, _ = apply_dirichlet(V, assemble_form(V, V, "grad_grad"))
    M, _ = apply_dirichlet(V, assemble_form(V, V, "mass"))
    w = sla.eigh(K.toarray(), M.toarray(), eigvals_only=True)[:4]
    exact = np.pi**2 * np.array([2, 5, 5, 8])
    assert np.all(w >= exact)
    assert np.allclose(w, exact, rtol=2e-2)


@pytest.mark.parametrize("p", [0, 1, 2])
def test_rt_divergence_theorem(p):
    # int_K div w = sum of edge fluxes; for the global space: int_Omega div w = boundary flux
    m = uniform_square(3)
    R = DofSpace(m, "RT", p)
    D = DofSpace(m, "DG", p)
    Bd = assemble_form(D, R, "rt_div_dg")
    ones_dg = np.ones(D.ndof)
    rng = np.random.default_rng(p)
    w = rng.standard_normal(R.ndof)
    w_int = w.copy()
    w_int[R.boundary_dofs] = 0.0
    # zero normal trace -> zero total divergence
    assert abs(ones_dg @ (Bd @ w_int)) < 1e-12


def test_rt_mass_positive_definite():
    m = uniform_square(2)
    R = DofSpace(m, "RT", 1)
    Mr = assemble_form(R, R, "rt_mass").toarray()
    assert np.linalg.eigvalsh(Mr).min() > 0


def test_reference_tensor_split_is_exact():
    T = rt_tensors(2)["div_in_dg"]
    hi, lo, rem = T.split
    for i, row in enumerate(T.exact):
        for j, v in enumerate(row):
            err = Fraction(v) - Fraction(hi[i, j]) - Fraction(lo[i, j])
            assert abs(err) <= Fraction(rem[i, j])
    assert scalar_tensors("CG", 1)["mass"].exact[0][0] == Fraction(1, 12)
