import json

import pytest

from eigbound.config import ConfigError, parse_config
from eigbound.report import (BoundRow, BoundsReport, emit, parse_csv, round_down, round_up, to_csv,
                             to_markdown)

BASE = """
[problem]
problem = steklov
domain = square
[mesh]
N = 4
[stage2]
p = 2
n = 1
"""


def test_parse_minimal():
    cfg = parse_config(BASE)
    assert cfg.problem == "steklov" and cfg.mesh.N == 4
    assert cfg.rho is None and cfg.run_stage1
    assert cfg.cluster_size == 1
    assert cfg.with_level(8).mesh.N == 8
    assert cfg.with_level(0.1).mesh.h_max == 0.1


def test_parse_full_sections():
    cfg = parse_config(BASE.replace("n = 1", "n = 2\nm = 3\nrho = 2.0\nrho_acknowledged = yes\nmode = float")
                       + "[stage1]\nN = 8\nmode = verified\n[output]\nformat = csv\npath = out.csv\n"
                       + "[reference]\nvalues = 0.24, 1.49\n")
    assert (cfg.n, cfg.m, cfg.rho, cfg.mode) == (2, 3, 2.0, "float")
    assert cfg.stage1_mesh.N == 8 and cfg.stage1_mode == "verified"
    assert cfg.output_format == "csv" and cfg.reference == (0.24, 1.49)


@pytest.mark.parametrize("edit", [
    lambda t: t.replace("steklov", "heat"),
    lambda t: t.replace("[mesh]\nN = 4", "[mesh]\nN = 4\nh_max = 0.1"),
    lambda t: t.replace("[mesh]\nN = 4", "[mesh]\n"),
    lambda t: t.replace("n = 1", "n = 1\nrho = 2.0"),
    lambda t: t.replace("n = 1", "n = 2\nm = 1"),
    lambda t: t.replace("p = 2", "p = 7"),
    lambda t: t.replace("n = 1", "n = 1\nmode = fast"),
    lambda t: t.replace("[stage2]", "[stagetwo]"),
    lambda t: t + "[output]\nformat = xml\n",
    lambda t: t.replace("n = 1", "n = 1\nrho = abc\nrho_acknowledged = yes"),
    lambda t: "not an ini file",
])
def test_config_errors(edit):
    with pytest.raises(ConfigError):
        parse_config(edit(BASE))


def test_directed_rounding():
    assert str(round_down(0.2400790844)) == "0.240079084"
    assert str(round_up(0.2400790844)) == "0.240079085"
    assert round_down(1.0) == round_up(1.0)
    assert round_down(None) is None


def _report():
    rows = [BoundRow(1, 0.2391520701, 0.24007908446, 0.2400790902),
            BoundRow(2, 1.4, None, 1.5)]
    return BoundsReport(rows, {"problem": "steklov", "rho": 1.45, "elements": 128})


def test_gap_uses_printed_values():
    lo1, lo2, up, gap = _report().rows[0].printed()
    assert str(lo2) == "0.240079084" and str(up) == "0.240079091"
    assert gap == up - lo2
    assert _report().rows[0].gap == pytest.approx(0.2400790902 - 0.24007908446)


def test_csv_round_trip():
    rep = _report()
    back = parse_csv(to_csv(rep))
    assert back == rep.rounded()
    assert back.rows[1].stage1_lower == 1.39999999


def test_markdown_shape_and_empty_report():
    md = to_markdown(_report())
    assert md.splitlines()[0] == "| k | stage-1 lower | stage-2 lower | upper | bound gap |"
    # binary 1.4 lies below 1.4, so it prints rounded down; the gap rounds up
    assert "| 2 | 1.39999999 | - | 1.50000000 | 1.01E-1 |" in md
    empty = BoundsReport()
    assert to_csv(empty) == "k,stage1_lower,stage2_lower,upper,gap\n"
    assert parse_csv(to_csv(empty)) == empty
    assert len(to_markdown(empty).splitlines()) == 2


def test_emit_writes_file(tmp_path):
    path = tmp_path / "r.csv"
    text = emit(_report(), "csv", path)
    assert path.read_text(encoding="utf-8") == text
    with pytest.raises(ValueError):
        emit(_report(), "xml")


def test_meta_is_json():
    lines = [ln for ln in to_csv(_report()).splitlines() if ln.startswith("# ")]
    assert json.loads(lines[1].split(" = ", 1)[1]) == 1.45
