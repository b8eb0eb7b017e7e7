import os
import subprocess
import sys

import pytest

from eigbound.cli import (EXIT_CONFIG, EXIT_MESH, EXIT_OK, EXIT_RHO, fit_slope, main, parse_level,
                          reference_values, series_table, thread_count)
from eigbound.config import ConfigError, parse_config
from eigbound.mesh import read_mesh
from eigbound.report import parse_csv

from conftest import write_config

SMALL = """
[problem]
problem = steklov
domain = square
[mesh]
N = 4
[stage1]
N = 8
[stage2]
p = 2
n = 1
mode = {mode}
[output]
format = csv
"""


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_csv_and_determinism(tmp_path, capsys):
    cfg = write_config(tmp_path, SMALL.format(mode="float"))
    code, out1, _ = _run(["run", str(cfg)], capsys)
    assert code == EXIT_OK
    code, out2, _ = _run(["run", str(cfg)], capsys)
    assert out1 == out2
    rep = parse_csv(out1)
    assert rep.meta["rho_source"] == "stage1"
    row = rep.row(1)
    assert row.stage2_lower <= 0.2400790854272274 <= row.upper


def test_run_verified_writes_output(tmp_path, capsys):
    cfg = write_config(tmp_path, SMALL.format(mode="verified"))
    out = tmp_path / "r.csv"
    code, stdout, _ = _run(["run", str(cfg), "--out", str(out)], capsys)
    assert code == EXIT_OK and stdout == ""
    row = parse_csv(out.read_text(encoding="utf-8")).row(1)
    assert row.stage1_lower <= row.stage2_lower <= 0.2400790854272274 <= row.upper


def test_n_zero_gives_upper_bounds_only(tmp_path, capsys):
    cfg = write_config(tmp_path, SMALL.format(mode="float").replace("n = 1", "n = 0\nm = 2"))
    code, out, _ = _run(["run", str(cfg)], capsys)
    assert code == EXIT_OK
    rep = parse_csv(out)
    assert [r.k for r in rep.rows] == [1, 2]
    assert all(r.stage1_lower is None and r.stage2_lower is None and r.upper for r in rep.rows)


def test_exit_code_config_errors(tmp_path, capsys):
    assert _run(["run", str(tmp_path / "missing.ini")], capsys)[0] == EXIT_CONFIG
    bad = write_config(tmp_path, SMALL.format(mode="float").replace("n = 1", "n = 1\nrho = 2.0"))
    code, _, err = _run(["run", str(bad)], capsys)
    assert code == EXIT_CONFIG and "rho_acknowledged" in err


def test_exit_code_infeasible_rho(tmp_path, capsys):
    text = SMALL.format(mode="verified").replace("n = 1", "n = 3\nrho = 1.0\nrho_acknowledged = yes")
    text = text.replace("[stage1]\nN = 8\n", "")
    code, _, err = _run(["run", str(write_config(tmp_path, text))], capsys)
    assert code == EXIT_RHO and "Lambda_n" in err


def test_exit_code_mesh_error(tmp_path, capsys):
    poly = tmp_path / "cw.poly"
    poly.write_text("0 0\n0 1\n1 0\n", encoding="utf-8")
    text = SMALL.format(mode="float").replace("domain = square", f"domain = {poly.name}")
    text = text.replace("N = 4", "h_max = 0.3").replace("N = 8", "h_max = 0.2")
    code, _, err = _run(["run", str(write_config(tmp_path, text))], capsys)
    assert code == EXIT_MESH and "MeshError" in err


def test_mesh_command_round_trip(tmp_path, capsys):
    text = SMALL.format(mode="float").replace("domain = square", "domain = lshape")
    text = text.replace("N = 4", "h_max = 0.4\ngrading = auto").replace("N = 8", "h_max = 0.3")
    cfg = write_config(tmp_path, text)
    out = tmp_path / "mesh.txt"
    assert _run(["mesh", str(cfg), "--out", str(out)], capsys)[0] == EXIT_OK
    m = read_mesh(out)
    assert m.areas.sum() == pytest.approx(3.0)
    header = out.read_text(encoding="utf-8").splitlines()[0].split()
    assert [int(v) for v in header] == [m.nv, m.nt, len(m.boundary_edges)]


def test_converge_parallel_matches_serial(tmp_path, capsys, monkeypatch):
    cfg = write_config(tmp_path, SMALL.format(mode="float").replace("[stage1]\nN = 8\n", "[stage1]\n"))
    monkeypatch.setenv("EIGBOUND_THREADS", "1")
    code, serial, _ = _run(["converge", str(cfg), "--levels", "4", "8"], capsys)
    assert code == EXIT_OK
    monkeypatch.setenv("EIGBOUND_THREADS", "2")
    code, parallel, _ = _run(["converge", str(cfg), "--levels", "4,8"], capsys)
    assert code == EXIT_OK and parallel == serial
    assert "# slope stage2_lower k=1 = " in serial
    assert serial.splitlines()[0] == "level,h_max,elements,k,family,value,error"


def test_converge_needs_two_levels(tmp_path, capsys):
    cfg = write_config(tmp_path, SMALL.format(mode="float"))
    assert _run(["converge", str(cfg), "--levels", "4"], capsys)[0] == EXIT_CONFIG


def test_thread_count(monkeypatch):
    monkeypatch.delenv("EIGBOUND_THREADS", raising=False)
    assert thread_count() == 1
    monkeypatch.setenv("EIGBOUND_THREADS", "3")
    assert thread_count() == 3
    for bad in ("0", "x"):
        monkeypatch.setenv("EIGBOUND_THREADS", bad)
        with pytest.raises(ConfigError):
            thread_count()


def test_fit_slope_cases():
    h = [0.4, 0.2, 0.1]
    assert fit_slope(h, [1.6, 0.4, 0.1]) == pytest.approx(2.0)
    assert fit_slope(h, [0.3, 0.3, 0.3]) == pytest.approx(0.0, abs=1e-12)
    assert fit_slope(h, [None, 0.0, 0.1]) is None


def test_series_table_constant_bounds_slope_zero():
    from eigbound.report import BoundRow, BoundsReport
    series = [(n, BoundsReport([BoundRow(1, None, 1.0, 2.0)], {"h_max": 1.0 / n, "elements": n}))
              for n in (2, 4, 8)]
    _, slopes = series_table(series, [1.5])
    assert slopes[("stage2_lower", 1)] == pytest.approx(0.0, abs=1e-12)


def test_parse_level():
    assert parse_level("16") == 16 and parse_level("0.05") == 0.05
    with pytest.raises(ConfigError):
        parse_level("fine")


def test_builtin_references():
    cfg = parse_config(SMALL.format(mode="float"))
    assert reference_values(cfg)[0] == pytest.approx(0.2400790854272274)
    db = parse_config(SMALL.format(mode="float").replace("domain = square", "domain = dumbbell\n"
                                                         "bar_width = 0.34375")
                      .replace("problem = steklov", "problem = laplacian"))
    assert reference_values(db)[0] == pytest.approx(19.515284)


def test_console_script(tmp_path):
    cfg = write_config(tmp_path, SMALL.format(mode="float"))
    env = dict(os.environ, EIGBOUND_THREADS="1")
    res = subprocess.run([sys.executable, "-m", "eigbound.cli", "run", str(cfg)],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0].startswith("# problem")
