"""Problem configuration files.

INI layout (``key = value`` lines under bracketed section headers)::

    [problem]
    problem = steklov            ; laplacian | steklov
    domain = square              ; square | lshape | dumbbell | path to a polygon file

    [mesh]
    N = 32                       ; uniform square mesh, or
    h_max = 0.29                 ; generated mesh
    grading = auto               ; none | auto | x1 y1, x2 y2, ...
    exponent = 0.3333333333333333
    cutoff = 1.0

    [stage1]                     ; optional, defaults to the [mesh] section
    mode = verified              ; verified | float

    [stage2]
    p = 2
    n = 3
    m = 3
    rho = auto                   ; auto | number (needs rho_acknowledged = yes)
    mode = verified              ; float | verified | verified-shift
    shift = 0.25

    [output]
    format = markdown            ; markdown | csv
    path = report.md
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

PROBLEMS = ("laplacian", "steklov")
TEMPLATES = ("square", "lshape", "dumbbell")
STAGE2_MODES = ("float", "verified", "verified-shift")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class MeshConfig:
    N: int | None = None
    h_max: float | None = None
    grading: object = None  # None, "auto" or tuple of corner points
    exponent: float = 1.0 / 3.0
    cutoff: float = 1.0
    file: str | None = None

    def with_level(self, level):
        """Copy with the refinement level replaced (int -> N, float -> h_max)."""
        if isinstance(level, int):
            return replace(self, N=level, h_max=None, file=None)
        return replace(self, N=None, h_max=float(level), file=None)


@dataclass(frozen=True)
class ProblemConfig:
    problem: str
    domain: str
    mesh: MeshConfig
    stage1_mesh: MeshConfig | None = None
    stage1_mode: str = "verified"
    p: int = 2
    n: int = 1
    m: int | None = None
    rho: float | None = None  # None means auto
    rho_acknowledged: bool = False
    run_stage1: bool = True
    mode: str = "verified"
    shift: float = 0.25
    bar_width: float = 0.40625
    bar_length: float = 1.0
    layout: str = "flush"
    output_format: str = "markdown"
    output_path: str | None = None
    timing: bool = False
    reference: tuple | None = None
    base_dir: str = "."
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def cluster_size(self):
        return self.m if self.m is not None else self.n

    def with_level(self, level):
        s1 = self.stage1_mesh.with_level(level) if self.stage1_mesh is not None else None
        return replace(self, mesh=self.mesh.with_level(level), stage1_mesh=s1)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _number(section, key, kind, default=None, lo=None, hi=None):
    if key not in section:
        return default
    raw = section[key].strip()
    try:
        val = kind(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key}: cannot parse {raw!r}") from None
    if lo is not None and val < lo or hi is not None and val > hi:
        raise ConfigError(f"[{section.name}] {key}={val} outside [{lo}, {hi}]")
    return val


def _points(text):
    pts = []
    for chunk in text.split(","):
        parts = chunk.split()
        if len(parts) != 2:
            raise ConfigError(f"grading corner {chunk!r} is not 'x y'")
        pts.append((float(parts[0]), float(parts[1])))
    return tuple(pts)


def _mesh_section(sec, fallback=None):
    base = fallback or MeshConfig()
    N = _number(sec, "n", int, None, 1)
    h = _number(sec, "h_max", float, None, 0.0)
    file = sec.get("file", None)
    if N is None and h is None and file is None:
        if fallback is None:
            raise ConfigError(f"[{sec.name}] needs N, h_max or file")
        N, h, file = base.N, base.h_max, base.file
    if N is not None and h is not None:
        raise ConfigError(f"[{sec.name}] give either N or h_max, not both")
    if h is not None and not h > 0:
        raise ConfigError(f"[{sec.name}] h_max must be positive")
    grading = base.grading
    if "grading" in sec:
        g = sec["grading"].strip().lower()
        grading = None if g in ("none", "") else "auto" if g == "auto" else _points(sec["grading"])
    return MeshConfig(N=N, h_max=h, grading=grading,
                      exponent=_number(sec, "exponent", float, base.exponent, 0.0, 1.0),
                      cutoff=_number(sec, "cutoff", float, base.cutoff, 0.0),
                      file=file)


def parse_config(text, base_dir="."):
    """Parse configuration text into a :class:`ProblemConfig`."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    for name in ("problem", "mesh", "stage2"):
        if not cp.has_section(name):
            raise ConfigError(f"missing [{name}] section")
    pr = cp["problem"]
    problem = pr.get("problem", "").strip().lower()
    if problem not in PROBLEMS:
        raise ConfigError(f"[problem] problem must be one of {PROBLEMS}")
    domain = pr.get("domain", "").strip()
    if not domain:
        raise ConfigError("[problem] domain is required")
    layout = pr.get("layout", "flush").strip().lower()
    if layout not in ("flush", "centered"):
        raise ConfigError("[problem] layout must be flush or centered")
    mesh = _mesh_section(cp["mesh"])
    stage1_mesh = None
    stage1_mode = None
    if cp.has_section("stage1"):
        s1 = cp["stage1"]
        if any(k in s1 for k in ("n", "h_max", "file", "grading")):
            stage1_mesh = _mesh_section(s1, mesh)
        stage1_mode = s1.get("mode", None)
    s2 = cp["stage2"]
    mode = s2.get("mode", "verified").strip().lower()
    if mode not in STAGE2_MODES:
        raise ConfigError(f"[stage2] mode must be one of {STAGE2_MODES}")
    if stage1_mode is None:
        stage1_mode = "float" if mode == "float" else "verified"
    stage1_mode = stage1_mode.strip().lower()
    if stage1_mode not in ("verified", "float"):
        raise ConfigError("[stage1] mode must be verified or float")
    n = _number(s2, "n", int, 1, 0)
    m = _number(s2, "m", int, None, 0)
    if m is not None and m < n:
        raise ConfigError("[stage2] m must be >= n")
    rho_raw = s2.get("rho", "auto").strip().lower()
    rho = None
    if rho_raw != "auto":
        try:
            rho = float(rho_raw)
        except ValueError:
            raise ConfigError(f"[stage2] rho: cannot parse {rho_raw!r}") from None
        if not rho > 0:
            raise ConfigError("[stage2] rho must be positive")
    ack = _bool(s2.get("rho_acknowledged", "no"))
    if rho is not None and not ack:
        raise ConfigError("[stage2] an explicit rho needs rho_acknowledged = yes "
                          "(rigor then rests on rho <= lambda_{m+1})")
    out = cp["output"] if cp.has_section("output") else {}
    fmt = out.get("format", "markdown").strip().lower()
    if fmt not in ("markdown", "csv"):
        raise ConfigError("[output] format must be markdown or csv")
    reference = None
    if cp.has_section("reference") and "values" in cp["reference"]:
        try:
            reference = tuple(float(x) for x in cp["reference"]["values"].replace(",", " ").split())
        except ValueError:
            raise ConfigError("[reference] values must be numbers") from None
    return ProblemConfig(
        problem=problem, domain=domain, mesh=mesh, stage1_mesh=stage1_mesh,
        stage1_mode=stage1_mode,
        p=_number(s2, "p", int, 2, 1, 3), n=n, m=m, rho=rho, rho_acknowledged=ack,
        run_stage1=rho is None or cp.has_section("stage1"), mode=mode,
        shift=_number(s2, "shift", float, 0.25, 0.0),
        bar_width=_number(pr, "bar_width", float, 0.40625, 0.0, 1.0),
        bar_length=_number(pr, "bar_length", float, 1.0, 0.0),
        layout=layout, output_format=fmt, output_path=out.get("path", None),
        timing=_bool(out.get("timing", "no")), reference=reference, base_dir=str(base_dir))


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, base_dir=path.parent)


def resolve(cfg, name):
    """Path relative to the configuration file."""
    return name if os.path.isabs(name) else os.path.join(cfg.base_dir, name)
