import numpy as np
import pytest

from eigbound.fem import DofSpace, Geometry, assemble_form
from eigbound.fem.reference import eval_rt, eval_scalar
from eigbound.interval import Interval
from eigbound.mesh import LOCAL_EDGES, generate_mesh, template_domain, uniform_square
from eigbound.stage2 import (InfeasibleRho, LGMatrices, compute_wi_laplacian, compute_wi_steklov,
                             div_dg_enclosure, div_to_dg, lg_bounds, run_stage2, select_vi)

STEKLOV = [0.2400790854272274, 1.4923031345335935, 1.4923031345335935, 2.0826470540332]
DIRICHLET = np.pi**2 * np.array([2, 5, 5, 8])


@pytest.mark.parametrize("p", [1, 2, 3])
def test_steklov_square_enclosures(p):
    r = run_stage2("steklov", uniform_square(4), p, 3, 2.0)
    assert r.lg.verified
    for k in (1, 2, 3):
        assert r.lower[k] <= STEKLOV[k - 1] <= r.upper[k]


def test_dirichlet_square_enclosures_and_residuals():
    r = run_stage2("laplacian", uniform_square(4), 2, 4, 90.0)
    for k in range(1, 5):
        assert r.lower[k] <= DIRICHLET[k - 1] <= r.upper[k]
    assert r.flux.residual_ok
    assert np.all(r.flux.residual.contains_zero())


def test_laplacian_flux_constraint_float():
    m = uniform_square(4)
    _, V = select_vi("laplacian", m, 2, 2)
    f = compute_wi_laplacian(V, m, 2, "float")
    assert np.abs(f.residual).max() < 1e-12


def test_div_residual_straddles_zero_on_graded_mesh():
    m = generate_mesh(template_domain("lshape"), 0.5, "auto")
    _, V = select_vi("laplacian", m, 1, 2)
    f = compute_wi_laplacian(V, m, 1, "verified")
    assert f.residual_ok


def test_perturbed_trial_functions_still_bound():
    m = uniform_square(4)
    rng = np.random.default_rng(1)
    dofs = DofSpace(m, "CG", 2).ndof
    r = run_stage2("steklov", m, 2, 1, 1.45, perturb=1e-2 * rng.standard_normal((dofs, 1)))
    assert r.lower[1] <= STEKLOV[0] <= r.upper[1]


def test_rho_monotonicity():
    m = uniform_square(4)
    lows = [run_stage2("steklov", m, 2, 3, rho).lower for rho in (1.6, 1.8, 2.0, 2.08)]
    for k in (1, 2, 3):
        seq = [lo[k] for lo in lows]
        assert all(a <= b for a, b in zip(seq, seq[1:]))


def test_infeasible_rho():
    with pytest.raises(InfeasibleRho):
        run_stage2("steklov", uniform_square(4), 2, 3, 1.0)
    with pytest.raises(InfeasibleRho):
        run_stage2("steklov", uniform_square(4), 2, 3, 1.0, mode="float")


def test_float_mode_agrees_with_verified():
    m = uniform_square(4)
    a = run_stage2("steklov", m, 2, 3, 2.0)
    b = run_stage2("steklov", m, 2, 3, 2.0, mode="float")
    for k in (1, 2, 3):
        assert b.lower[k] == pytest.approx(a.lower[k], rel=1e-9)
        assert b.upper[k] == pytest.approx(a.upper[k], rel=1e-9)


def test_shift_mode_close_to_unshifted():
    m = uniform_square(4)
    a = run_stage2("laplacian", m, 2, 4, 90.0)
    b = run_stage2("laplacian", m, 2, 4, 90.0, mode="verified-shift", shift=0.25)
    for k in range(1, 5):
        assert b.lower[k] <= DIRICHLET[k - 1]
        # the shift changes the flux, so the bounds agree only to leading order
        assert b.lower[k] == pytest.approx(a.lower[k], rel=5e-3)
    with pytest.raises(ValueError):
        run_stage2("steklov", m, 2, 1, 1.45, mode="verified-shift", shift=0.25)


def test_lg_bounds_on_known_matrices():
    # exact eigenfunctions: A0 = diag(lam), A1 = I, A2 = diag(1/lam) (equality case)
    lam = np.array([1.0, 2.0])
    mats = LGMatrices(Interval(np.diag(lam)), Interval(np.eye(2)), Interval(np.diag(1 / lam)), 3.0)
    out = lg_bounds(mats, 2, 2, verified=True)
    assert out.lower[1] == pytest.approx(1.0, rel=1e-12)
    assert out.lower[2] == pytest.approx(2.0, rel=1e-12)
    assert out.lower[1] <= 1.0 and out.lower[2] <= 2.0


def _normal_trace_error(mesh, p, W, V):
    """Pointwise ``max |w.n - v|`` over boundary edges, evaluated independently."""
    R = DofSpace(mesh, "RT", p)
    S = DofSpace(mesh, "CG", p)
    tris, loc = mesh.boundary_sides()
    ref = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    t = np.linspace(0.05, 0.95, 7)
    worst = 0.0
    for tri, i in zip(tris, loc):
        a, b = LOCAL_EDGES[i]
        verts = mesh.vertices[mesh.triangles[tri]]
        J = np.stack([verts[1] - verts[0], verts[2] - verts[0]], axis=1)
        det = np.linalg.det(J)
        tang = verts[b] - verts[a]
        n = np.array([tang[1], -tang[0]]) / np.linalg.norm(tang)
        xh = ref[a][None] + t[:, None] * (ref[b] - ref[a])[None]
        phi = eval_rt(p, xh[:, 0], xh[:, 1])  # (7, nloc, 2)
        coef = W[R.dofs[tri]] * R.signs[tri]
        w = (phi * coef[None, :, None]).sum(axis=1) @ J.T / det
        v = eval_scalar("CG", p, xh[:, 0], xh[:, 1]) @ V[S.dofs[tri]]
        worst = max(worst, float(np.max(np.abs(w @ n - v))))
    return worst


@pytest.mark.parametrize("p", [1, 2, 3])
def test_steklov_flux_trace_is_exact(p):
    m = generate_mesh(template_domain("lshape"), 0.6, "auto")
    _, V = select_vi("steklov", m, p, 2)
    f = compute_wi_steklov(V, m, p, "float")
    for j in range(2):
        assert _normal_trace_error(m, p, f.W[:, j], V[:, j]) < 1e-10
    fi = compute_wi_steklov(V, m, p, "verified")
    assert np.allclose(fi.W.mid, f.W, rtol=0, atol=1e-12)
    assert np.max(fi.W.hi - fi.W.lo) < 1e-14


@pytest.mark.parametrize("p", [1, 2])
def test_div_dg_enclosure_agrees_with_map(p):
    m = uniform_square(3)
    R = DofSpace(m, "RT", p)
    D = DofSpace(m, "DG", p)
    rng = np.random.default_rng(2)
    W = rng.standard_normal((R.ndof, 2))
    Z = div_dg_enclosure(R, D, Geometry(m, "interval"), W)
    z = div_to_dg(R, D, Geometry(m, "point")) @ W
    assert np.all(Z.lo <= z + 1e-12) and np.all(z - 1e-12 <= Z.hi)
    Bd = assemble_form(D, R, "rt_div_dg")
    Md = assemble_form(D, D, "mass")
    assert np.allclose(Md @ z, Bd @ W, atol=1e-12)
