"""End-to-end two-stage computation for one configuration."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .config import ConfigError, ProblemConfig, resolve
from .mesh import (MeshError, generate_mesh, read_mesh, read_polygon, steklov_compatible,
                   template_domain, uniform_square)
from .report import BoundRow, BoundsReport
from .stage1 import Stage1Result, cr_lower_bounds, round_down_sig
from .stage2 import Stage2Result, run_stage2, select_vi

log = logging.getLogger(__name__)


def build_domain(cfg: ProblemConfig):
    if cfg.domain in ("square", "lshape", "dumbbell"):
        return template_domain(cfg.domain, cfg.bar_width, cfg.bar_length, cfg.layout)
    return read_polygon(resolve(cfg, cfg.domain))


def build_mesh(cfg: ProblemConfig, mesh_cfg):
    if mesh_cfg.file:
        return read_mesh(resolve(cfg, mesh_cfg.file))
    if mesh_cfg.N is not None:
        if cfg.domain != "square":
            raise ConfigError("N selects the uniform square mesh; use h_max for other domains")
        return uniform_square(mesh_cfg.N)
    poly = build_domain(cfg)
    return generate_mesh(poly, mesh_cfg.h_max, mesh_cfg.grading, mesh_cfg.exponent, mesh_cfg.cutoff)


@dataclass
class RunResult:
    report: BoundsReport
    stage1: Stage1Result | None
    stage2: Stage2Result | None
    rho: float | None


def run(cfg: ProblemConfig, mesh=None, stage1_mesh=None) -> RunResult:
    """Stage 1 (CR bound for ``lambda_{m+1}`` unless rho is given), then stage 2.

    Raises
    ------
    stage2.InfeasibleRho
        ``Lambda_n >= rho``.
    MeshError, VerificationError, EigenSolveError
        Mesh or discretisation failures.
    """
    t0 = time.perf_counter()
    mesh = mesh if mesh is not None else build_mesh(cfg, cfg.mesh)
    n = cfg.n
    m = cfg.cluster_size
    meta = {"problem": cfg.problem, "domain": cfg.domain, "mode": cfg.mode, "p": cfg.p,
            "n": n, "m": m, "elements": mesh.nt, "h_max": mesh.h_max}
    if n == 0:
        k = max(m, 1)
        values, _ = select_vi(cfg.problem, mesh, cfg.p, k, k)
        rows = [BoundRow(i + 1, None, None, float(v)) for i, v in enumerate(values)]
        meta["rho"] = None
        _finish(meta, cfg, t0)
        return RunResult(BoundsReport(rows, meta), None, None, None)
    s1 = None
    if cfg.run_stage1 or cfg.rho is None:
        if stage1_mesh is None:
            stage1_mesh = build_mesh(cfg, cfg.stage1_mesh) if cfg.stage1_mesh else mesh
        if cfg.problem == "steklov":
            fixed, stage1_mesh = steklov_compatible(stage1_mesh)
            if not fixed:
                log.info("stage-1 mesh adjusted to %d elements for the boundary-layer constant",
                         stage1_mesh.nt)
        s1 = cr_lower_bounds(cfg.problem, stage1_mesh, m + 1, cfg.stage1_mode)
        meta["stage1_elements"] = stage1_mesh.nt
        meta["stage1_h_max"] = stage1_mesh.h_max
        meta["c_h"] = float(s1.c_h.hi)
        meta["stage1_dofs"] = s1.ndof
    if cfg.rho is None:
        rho = round_down_sig(s1.lower(m + 1))
        meta["rho_source"] = "stage1"
    else:
        rho = float(cfg.rho)
        meta["rho_source"] = "acknowledged"
        if s1 is not None:
            meta["rho_below_stage1"] = bool(rho <= s1.lower(m + 1))
    meta["rho"] = rho
    s2 = run_stage2(cfg.problem, mesh, cfg.p, n, rho, m=m, mode=cfg.mode,
                    shift=cfg.shift if cfg.mode == "verified-shift" else None)
    meta["dofs"] = s2.ndof
    meta["Lambda_n"] = float(s2.lg.Lambda_n.hi) if hasattr(s2.lg.Lambda_n, "hi") else float(s2.lg.Lambda_n)
    meta["q"] = s2.lg.q
    if cfg.mode == "verified-shift":
        meta["shift"] = cfg.shift
    rows = []
    for k in range(1, m + 1):
        lo1 = s1.lower(k) if s1 is not None else None
        rows.append(BoundRow(k, lo1, s2.lower.get(k), float(s2.upper[k])))
    _finish(meta, cfg, t0)
    return RunResult(BoundsReport(rows, meta), s1, s2, rho)


def _finish(meta, cfg, t0):
    if cfg.timing:
        meta["wall_time"] = round(time.perf_counter() - t0, 3)


__all__ = ["RunResult", "build_domain", "build_mesh", "run", "MeshError"]
