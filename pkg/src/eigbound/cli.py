"""Command line front-end.

    eigbound run <config>
    eigbound converge <config> --levels 8 16 32 64 [--out series.csv]
    eigbound mesh <config> --out mesh.txt

Exit codes: 0 success, 1 configuration or usage error, 2 infeasible rho
(``Lambda_n >= rho``), 3 mesh / discretisation / verification failure.
``EIGBOUND_THREADS`` caps the BLAS threads and the number of worker
processes used by ``converge``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import numpy as np
from threadpoolctl import threadpool_limits

from .config import ConfigError, load_config
from .eigsolve import EigenSolveError
from .mesh import MeshError, write_mesh
from .pipeline import build_mesh, run
from .report import emit
from .stage2 import InfeasibleRho
from .verify import VerificationError

log = logging.getLogger("eigbound")

EXIT_OK, EXIT_CONFIG, EXIT_RHO, EXIT_MESH = 0, 1, 2, 3
FAMILIES = ("stage1_lower", "stage2_lower", "upper")


def thread_count():
    raw = os.environ.get("EIGBOUND_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"EIGBOUND_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("EIGBOUND_THREADS must be a positive integer")
    return n


# -- reference values ------------------------------------------------------------------

def builtin_references():
    text = resources.files("eigbound").joinpath("data/reference_eigenvalues.json").read_text("utf-8")
    return json.loads(text)


def reference_values(cfg):
    if cfg.reference:
        return list(cfg.reference)
    table = builtin_references()
    prefix = f"{cfg.problem}/{cfg.domain}"
    for key, entry in table.items():
        if key != prefix and not key.startswith(prefix + "-"):
            continue
        if cfg.domain == "dumbbell" and entry.get("bar_width") != cfg.bar_width:
            continue
        return entry["values"]
    return None


# -- commands ------------------------------------------------------------------------------

def cmd_run(args):
    cfg = load_config(args.config)
    with threadpool_limits(limits=thread_count()):
        res = run(cfg)
    path = args.out or cfg.output_path
    text = emit(res.report, cfg.output_format, path)
    if path is None:
        sys.stdout.write(text)
    return EXIT_OK


def parse_level(token):
    t = token.strip()
    try:
        return int(t)
    except ValueError:
        pass
    try:
        v = float(t)
    except ValueError:
        raise ConfigError(f"level {token!r} is neither an integer N nor a mesh size") from None
    if not v > 0:
        raise ConfigError("mesh size levels must be positive")
    return v


def _run_level(cfg, level, blas_threads):
    with threadpool_limits(limits=blas_threads):
        return level, run(cfg.with_level(level)).report


def fit_slope(h, err):
    """Least-squares slope of ``log err`` against ``log h`` (positive errors only)."""
    pts = [(math.log(a), math.log(b)) for a, b in zip(h, err) if b is not None and b > 0]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    if np.ptp(x) == 0:
        return None
    return float(np.polyfit(x, y, 1)[0])


def convergence_series(cfg, levels, workers=1, blas_threads=1):
    """Run every level; returns ``[(level, report)]`` in level order."""
    if len(levels) < 2:
        raise ConfigError("converge needs at least two levels")
    if workers > 1 and len(levels) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(levels))) as pool:
            futs = [pool.submit(_run_level, cfg, lv, blas_threads) for lv in levels]
            return [f.result() for f in futs]
    return [_run_level(cfg, lv, blas_threads) for lv in levels]


def series_table(series, reference=None):
    """Long-format rows ``(level, h_max, elements, k, family, value, error)`` and slopes."""
    rows = []
    for level, rep in series:
        for r in rep.rows:
            for fam in FAMILIES:
                val = getattr(r, fam)
                if val is None:
                    continue
                err = None
                if reference is not None and r.k <= len(reference):
                    err = abs(reference[r.k - 1] - val)
                rows.append((level, rep.meta["h_max"], rep.meta["elements"], r.k, fam, val, err))
    slopes = {}
    ks = sorted({r[3] for r in rows})
    for fam in FAMILIES:
        for k in ks:
            sel = [r for r in rows if r[4] == fam and r[3] == k]
            if len(sel) >= 2 and reference is not None:
                s = fit_slope([r[1] for r in sel], [r[6] for r in sel])
                if s is not None:
                    slopes[(fam, k)] = s
    return rows, slopes


def format_series(rows, slopes):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "h_max", "elements", "k", "family", "value", "error"])
    for level, h, nt, k, fam, val, err in rows:
        w.writerow([level, repr(float(h)), nt, k, fam, repr(float(val)),
                    "" if err is None else f"{err:.6e}"])
    for (fam, k), s in sorted(slopes.items()):
        buf.write(f"# slope {fam} k={k} = {s:.4f}\n")
    return buf.getvalue()


def cmd_converge(args):
    cfg = load_config(args.config)
    levels = [parse_level(t) for tok in args.levels for t in tok.split(",") if t.strip()]
    threads = thread_count()
    workers = min(threads, len(levels))
    series = convergence_series(cfg, levels, workers, max(1, threads // max(workers, 1)))
    rows, slopes = series_table(series, reference_values(cfg))
    text = format_series(rows, slopes)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mesh(args):
    cfg = load_config(args.config)
    mesh = build_mesh(cfg, cfg.mesh)
    write_mesh(mesh, args.out)
    log.info("wrote %d vertices, %d elements to %s", mesh.nv, mesh.nt, args.out)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="eigbound", description="Guaranteed eigenvalue bounds on polygons")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="two-stage bounds for one configuration")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="override the [output] path")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("converge", help="bounds over a series of refinement levels")
    p.add_argument("config")
    p.add_argument("--levels", nargs="+", required=True,
                   help="integers select N (uniform square), decimals select h_max")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_converge)
    p = sub.add_parser("mesh", help="write the configured mesh")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mesh)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="eigbound: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"eigbound: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleRho as exc:
        print(f"eigbound: infeasible rho: {exc}", file=sys.stderr)
        return EXIT_RHO
    except (MeshError, VerificationError, EigenSolveError, ValueError) as exc:
        print(f"eigbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MESH
    except OSError as exc:
        print(f"eigbound: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
