"""Serialization of results: the CSV and JSON schemas the CLI owns.

Every document embeds the tool version, the constants-table version and
the frozen-grid version, so archived outputs cannot drift silently when
any of those change.  Formatting is deterministic: floats are written
with ``repr`` (shortest round-trip form), JSON keys in fixed insertion
order, line endings "\\n".

JSON documents validate against ``data/output_schema.json``; non-finite
floats are serialized as the strings "inf", "-inf", "nan" to stay within
strict JSON.  CSV documents put the metadata in leading "#" comment lines
above the fixed header row and quote fields RFC-4180 style.
"""

from __future__ import annotations

import csv
import importlib.resources
import io
import json
import math
from typing import Union

from . import __version__
from .constants import CONSTANTS_VERSION
from .core import RateBreakdown
from .refcheck import DeviationReport, LimitResidual, standard_grid
from .sweep import ScanTable

SCAN_CSV_HEADER = ["state", "zalpha", "epsilon", "f", "xi",
                   "ln_w_reduced", "w_reduced", "w_si", "flags"]
COMPARE_CSV_HEADER = ["zalpha", "f", "rel_dev"]
LIMITS_CSV_HEADER = ["delta", "ratio", "residual"]

_GRID_VERSION = standard_grid()[2]

JsonFloat = Union[float, str]


def meta() -> dict:
    return {
        "tool": "crossfield",
        "version": __version__,
        "constants_version": CONSTANTS_VERSION,
        "grid_version": _GRID_VERSION,
    }


def load_output_schema() -> dict:
    text = importlib.resources.files("crossfield.data").joinpath("output_schema.json").read_text()
    return json.loads(text)


def _jf(x: float) -> JsonFloat:
    """JSON-safe float: non-finite values become their repr strings."""
    return x if math.isfinite(x) else repr(x)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _meta_comments() -> list[str]:
    m = meta()
    return [
        "# tool=%s version=%s" % (m["tool"], m["version"]),
        "# constants_version=%s" % m["constants_version"],
        "# grid_version=%s" % m["grid_version"],
    ]


def _csv_doc(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    for line in _meta_comments():
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# scan tables
# ---------------------------------------------------------------------------

def _scan_row_values(row) -> list[str]:
    return [
        row.state,
        repr(row.zalpha),
        repr(row.epsilon),
        repr(row.f),
        repr(row.xi),
        repr(row.ln_w_reduced),
        repr(row.w_reduced),
        repr(row.w_si),
        ";".join(row.flags),
    ]


def scan_to_csv(table: ScanTable) -> str:
    return _csv_doc(SCAN_CSV_HEADER, [_scan_row_values(r) for r in table.rows])


def scan_to_json(table: ScanTable) -> str:
    rows = [
        {
            "state": r.state,
            "zalpha": _jf(r.zalpha),
            "epsilon": _jf(r.epsilon),
            "f": _jf(r.f),
            "xi": _jf(r.xi),
            "ln_w_reduced": _jf(r.ln_w_reduced),
            "w_reduced": _jf(r.w_reduced),
            "w_si": _jf(r.w_si),
            "flags": list(r.flags),
        }
        for r in table.rows
    ]
    return _dump({"meta": meta(), "rows": rows})


def scan_to_human(table: ScanTable) -> str:
    w_col = "w_si [1/s]" if table.output_units == "si" else "w_reduced"
    lines = ["%-10s %-12s %-12s %-12s %-14s %s"
             % ("state", "f", "xi", "ln_w", w_col, "flags")]
    for r in table.rows:
        w = r.w_si if table.output_units == "si" else r.w_reduced
        lines.append(
            "%-10s %-12.6g %-12.6g %-12.6g %-14.6g %s"
            % (r.state, r.f, r.xi, r.ln_w_reduced, w, ";".join(r.flags))
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# single-point rate breakdowns
# ---------------------------------------------------------------------------

def rate_doc(label: str, zalpha: float, epsilon: float, eta: float,
             f: float, bd: RateBreakdown) -> dict:
    return {
        "state": label,
        "zalpha": _jf(zalpha),
        "epsilon": _jf(epsilon),
        "eta": _jf(eta),
        "f": _jf(f),
        "xi": _jf(bd.xi),
        "exp_factor": _jf(bd.exp_factor),
        "preexp": _jf(bd.preexp),
        "coulomb": _jf(bd.coulomb),
        "c_lambda_sq": _jf(bd.c_lambda_sq),
        "ln_w_reduced": _jf(bd.ln_w_reduced),
        "w_reduced": _jf(bd.w_reduced),
        "w_si": _jf(bd.w_si),
        "flags": list(bd.flags),
    }


def rate_to_json(label, zalpha, epsilon, eta, f, bd: RateBreakdown) -> str:
    return _dump({"meta": meta(), "rate": rate_doc(label, zalpha, epsilon, eta, f, bd)})


def rate_to_csv(label, zalpha, epsilon, eta, f, bd: RateBreakdown) -> str:
    row = [label, repr(zalpha), repr(epsilon), repr(f), repr(bd.xi),
           repr(bd.ln_w_reduced), repr(bd.w_reduced), repr(bd.w_si),
           ";".join(bd.flags)]
    return _csv_doc(SCAN_CSV_HEADER, [row])


def rate_to_human(label, zalpha, epsilon, eta, f, bd: RateBreakdown, units: str = "both") -> str:
    pairs = [
        ("state", label),
        ("zalpha", repr(zalpha)),
        ("epsilon", repr(epsilon)),
        ("eta", repr(eta)),
        ("field f", repr(f)),
        ("xi", repr(bd.xi)),
        ("Exp", repr(bd.exp_factor)),
        ("P", repr(bd.preexp)),
        ("Q", repr(bd.coulomb)),
        ("C_lambda^2", repr(bd.c_lambda_sq)),
        ("ln w_reduced", repr(bd.ln_w_reduced)),
    ]
    if units in ("reduced", "both"):
        pairs.append(("w_reduced", "%s  [m_e c^2/hbar]" % repr(bd.w_reduced)))
    if units in ("si", "both"):
        pairs.append(("w_si", "%s  [1/s]" % repr(bd.w_si)))
    pairs.append(("flags", ";".join(bd.flags) or "-"))
    width = max(len(k) for k, _ in pairs)
    return "\n".join("%-*s  %s" % (width, k, v) for k, v in pairs) + "\n"


# ---------------------------------------------------------------------------
# deviation reports and limit tables
# ---------------------------------------------------------------------------

def report_doc(rep: DeviationReport) -> dict:
    return {
        "precision": rep.precision,
        "grid": [list(p) for p in rep.grid],
        "rel_dev": list(rep.rel_dev),
        "max_dev": rep.max_dev,
        "worst_point": list(rep.worst_point),
        "tolerance": rep.tolerance,
        "passed": rep.passed,
        "flagged": [list(p) for p in rep.flagged],
    }


def report_to_json(rep: DeviationReport) -> str:
    return _dump({"meta": meta(), "report": report_doc(rep)})


def report_to_csv(rep: DeviationReport) -> str:
    rows = [[repr(za), repr(f), repr(d)] for (za, f), d in zip(rep.grid, rep.rel_dev)]
    return _csv_doc(COMPARE_CSV_HEADER, rows)


def report_to_human(rep: DeviationReport) -> str:
    lines = [
        "precision    %s" % rep.precision,
        "points       %d evaluated, %d flagged" % (len(rep.grid), len(rep.flagged)),
        "max_dev      %.6g" % rep.max_dev,
        "worst_point  zalpha=%r f=%r" % rep.worst_point,
        "tolerance    %g" % rep.tolerance,
        "result       %s" % ("PASS" if rep.passed else "FAIL"),
    ]
    return "\n".join(lines) + "\n"


def limits_to_json(residuals: list[LimitResidual]) -> str:
    rows = [{"delta": r.delta, "ratio": r.ratio, "residual": r.residual} for r in residuals]
    return _dump({"meta": meta(), "limits": rows})


def limits_to_csv(residuals: list[LimitResidual]) -> str:
    rows = [[repr(r.delta), repr(r.ratio), repr(r.residual)] for r in residuals]
    return _csv_doc(LIMITS_CSV_HEADER, rows)


def limits_to_human(residuals: list[LimitResidual]) -> str:
    lines = ["%-12s %-22s %s" % ("delta", "ratio", "residual")]
    for r in residuals:
        lines.append("%-12g %-22.15g %.6g" % (r.delta, r.ratio, r.residual))
    return "\n".join(lines) + "\n"
