import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from eigbound.estimators import ProjectionBounds, TwoStageBounds
from eigbound.mesh import uniform_square


def test_two_stage_estimator():
    est = TwoStageBounds(problem="steklov", p=2, n=1, mode="float", stage1_mode="float")
    with pytest.raises(NotFittedError):
        est.intervals()
    est.fit(uniform_square(4), stage1_mesh=uniform_square(8))
    iv = est.intervals()
    assert iv.shape == (1, 2)
    assert iv[0, 0] <= 0.2400790854272274 <= iv[0, 1]
    assert est.rho_ <= est.stage1_.lower_bounds_[1]
    assert est.indices_.tolist() == [1]


def test_params_and_clone():
    est = TwoStageBounds(problem="laplacian", p=3, n=2, rho=50.0)
    assert est.get_params()["p"] == 3
    c = clone(est).set_params(n=1)
    assert c.n == 1 and est.n == 2


def test_projection_estimator():
    est = ProjectionBounds("laplacian", k_max=2).fit(uniform_square(4))
    assert est.lower_bounds_.shape == (2,)
    assert np.all(est.lower_bounds_ <= np.pi**2 * np.array([2, 5]))
    assert est.c_h_ > 0 and est.n_dofs_ > 0
