"""Estimator-style wrappers around the two stages.

Hyperparameters go to the constructor, ``fit(mesh)`` runs the computation
and the results are stored in attributes with a trailing underscore::

    est = TwoStageBounds(problem="steklov", p=2, n=3).fit(uniform_square(32))
    est.lower_bounds_, est.upper_bounds_
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .mesh import steklov_compatible
from .stage1 import cr_lower_bounds, round_down_sig
from .stage2 import run_stage2


class ProjectionBounds(BaseEstimator):
    """Crouzeix-Raviart projection lower bounds for ``lambda_1..lambda_k_max``."""

    def __init__(self, problem="laplacian", k_max=1, mode="verified"):
        self.problem = problem
        self.k_max = k_max
        self.mode = mode

    def fit(self, mesh, y=None):
        if self.problem == "steklov":
            _, mesh = steklov_compatible(mesh)
        res = cr_lower_bounds(self.problem, mesh, self.k_max, self.mode)
        self.result_ = res
        self.lower_bounds_ = np.array([b.lower for b in res.bounds])
        self.lambda_cr_ = np.array([[float(b.lambda_cr.lo), float(b.lambda_cr.hi)] for b in res.bounds])
        self.c_h_ = float(res.c_h.hi)
        self.n_dofs_ = res.ndof
        return self


class TwoStageBounds(BaseEstimator):
    """Lehmann-Goerisch bounds for ``lambda_{m-n+1..m}``.

    Parameters
    ----------
    problem : {"laplacian", "steklov"}
    p : int
        Conforming order of the trial functions (1..3).
    n, m : int
        Cluster size and last index (``m`` defaults to ``n``).
    rho : float or None
        Lower bound of ``lambda_{m+1}``; ``None`` derives it from a CR run on
        ``stage1_mesh`` (or the fitted mesh).
    mode : {"verified", "verified-shift", "float"}
    shift : float
        Shift used in ``verified-shift`` mode.
    """

    def __init__(self, problem="laplacian", p=2, n=1, m=None, rho=None, mode="verified",
                 shift=0.25, stage1_mode="verified"):
        self.problem = problem
        self.p = p
        self.n = n
        self.m = m
        self.rho = rho
        self.mode = mode
        self.shift = shift
        self.stage1_mode = stage1_mode

    def fit(self, mesh, y=None, stage1_mesh=None):
        m = self.n if self.m is None else self.m
        rho = self.rho
        self.stage1_ = None
        if rho is None:
            s1 = ProjectionBounds(self.problem, m + 1, self.stage1_mode)
            s1.fit(stage1_mesh if stage1_mesh is not None else mesh)
            self.stage1_ = s1
            rho = round_down_sig(s1.lower_bounds_[m])
        res = run_stage2(self.problem, mesh, self.p, self.n, rho, m=m, mode=self.mode,
                         shift=self.shift if self.mode == "verified-shift" else None)
        self.rho_ = rho
        self.result_ = res
        self.indices_ = np.arange(m - self.n + 1, m + 1)
        self.lower_bounds_ = np.array([res.lower.get(k, np.nan) for k in self.indices_])
        self.upper_bounds_ = np.array([res.upper[k] for k in self.indices_])
        self.n_certified_ = res.lg.q
        return self

    def intervals(self):
        if not hasattr(self, "result_"):
            raise NotFittedError("call fit first")
        return np.stack([self.lower_bounds_, self.upper_bounds_], axis=1)
