"""Bounds reports: deterministic ``markdown`` / ``csv`` output and CSV parse-back.

Lower bounds are printed rounded towards minus infinity and upper bounds
towards plus infinity, both at 9 significant digits, so a printed interval
always contains the computed one.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal

DIGITS = 9
GAP_DIGITS = 3
COLUMNS = ("k", "stage1_lower", "stage2_lower", "upper", "gap")


def _round(x, digits, rounding):
    if x is None:
        return None
    # exact binary value, so directed rounding is safe
    d = Decimal(float(x))
    if d == 0:
        return Decimal(0)
    return Context(prec=digits, rounding=rounding).plus(d)


def round_down(x, digits=DIGITS):
    return _round(x, digits, ROUND_FLOOR)


def round_up(x, digits=DIGITS):
    return _round(x, digits, ROUND_CEILING)


def _text(d):
    if d is None:
        return ""
    if d == 0:
        return "0"
    # pad to the full number of significant digits (exact: d has at most DIGITS)
    return str(d.quantize(Decimal(1).scaleb(d.adjusted() - DIGITS + 1)))


def _gap_text(d):
    return "" if d is None else format(d, ".2E")


@dataclass
class BoundRow:
    k: int
    stage1_lower: float | None = None
    stage2_lower: float | None = None
    upper: float | None = None

    @property
    def lower(self):
        vals = [v for v in (self.stage1_lower, self.stage2_lower) if v is not None]
        return max(vals) if vals else None

    def printed(self):
        """Outward-rounded decimal strings and the exact gap of the printed values."""
        lo1 = round_down(self.stage1_lower)
        lo2 = round_down(self.stage2_lower)
        up = round_up(self.upper)
        los = [v for v in (lo1, lo2) if v is not None]
        gap = None
        if up is not None and los:
            gap = Context(prec=GAP_DIGITS, rounding=ROUND_CEILING).plus(up - max(los))
        return lo1, lo2, up, gap

    @property
    def gap(self):
        lo = self.lower
        if lo is None or self.upper is None:
            return None
        return self.upper - lo


@dataclass
class BoundsReport:
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def row(self, k):
        for r in self.rows:
            if r.k == k:
                return r
        raise KeyError(k)

    def rounded(self):
        """The report as it reads back from its CSV form."""
        rows = []
        for r in self.rows:
            lo1, lo2, up, _ = r.printed()
            rows.append(BoundRow(r.k, *(None if v is None else float(v) for v in (lo1, lo2, up))))
        return BoundsReport(rows, json.loads(json.dumps(self.meta)))

    def __eq__(self, other):
        if not isinstance(other, BoundsReport):
            return NotImplemented
        return self.rows == other.rows and self.meta == other.meta


def to_csv(report):
    buf = io.StringIO()
    for key, val in report.meta.items():
        buf.write(f"# {key} = {json.dumps(val)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in report.rows:
        lo1, lo2, up, gap = r.printed()
        w.writerow([r.k, _text(lo1), _text(lo2), _text(up), _gap_text(gap)])
    return buf.getvalue()


def parse_csv(text):
    meta = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, val = line[2:].partition(" = ")
            meta[key] = json.loads(val)
        elif line:
            body.append(line)
    rows = []
    reader = csv.DictReader(body)
    if reader.fieldnames is not None and tuple(reader.fieldnames) != COLUMNS:
        raise ValueError(f"unexpected columns {reader.fieldnames}")
    for rec in reader:
        def num(key):
            return float(rec[key]) if rec[key] else None
        rows.append(BoundRow(int(rec["k"]), num("stage1_lower"), num("stage2_lower"), num("upper")))
    return BoundsReport(rows, meta)


def to_markdown(report):
    out = ["| k | stage-1 lower | stage-2 lower | upper | bound gap |",
           "|---|---|---|---|---|"]
    for r in report.rows:
        lo1, lo2, up, gap = r.printed()
        cells = [str(r.k)] + [_text(v) or "-" for v in (lo1, lo2, up)] + [_gap_text(gap) or "-"]
        out.append("| " + " | ".join(cells) + " |")
    if report.meta:
        out.append("")
        out += [f"- {key}: {json.dumps(val)}" for key, val in report.meta.items()]
    return "\n".join(out) + "\n"


def emit(report, fmt="markdown", path=None):
    """Render ``report``; write it to ``path`` when given.  Returns the text."""
    if fmt == "csv":
        text = to_csv(report)
    elif fmt == "markdown":
        text = to_markdown(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
