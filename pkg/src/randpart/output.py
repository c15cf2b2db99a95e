"""CSV / JSON encoding of experiment results.

Floats are rounded to 12 significant digits before encoding, so both formats
carry identical numbers and reruns diff cleanly. ``elapsed_ms`` is written
only when timing is requested; otherwise the field is empty (CSV) or null
(JSON) and files are byte-identical across reruns and worker counts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable

import numpy as np

from .experiments import EstimateResult, ScanResult

CSV_FIELDS = (
    "kind", "n", "t", "trials", "seed", "success",
    "estimate", "stderr", "ci_lo", "ci_hi", "elapsed_ms",
)
DIGITS = 12


def fmt(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def round_sig(x):
    if x is None:
        return None
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return x
        return float(fmt(x))
    return x


def _plain(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return [int(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return round_sig(float(value))
    return value


def canonical(result: EstimateResult, timing: bool = False) -> dict[str, Any]:
    """The encoded field set of ``result`` (what both formats write)."""
    row = {
        "kind": result.kind,
        "n": int(result.n),
        "t": int(result.t),
        "trials": int(result.trials),
        "seed": int(result.seed),
        "success": int(result.success),
        "estimate": round_sig(float(result.estimate)),
        "stderr": round_sig(float(result.stderr)),
        "ci_lo": round_sig(result.ci_lo),
        "ci_hi": round_sig(result.ci_hi),
        "elapsed_ms": round_sig(result.elapsed_ms) if timing and result.elapsed_ms is not None else None,
    }
    if result.records:
        row["records"] = _plain(result.records)
    if result.extra:
        row["extra"] = _plain(result.extra)
    return row


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def to_csv(results: Iterable[EstimateResult], timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in results:
        row = canonical(r, timing)
        writer.writerow([_csv_cell(row[f]) for f in CSV_FIELDS])
    return buf.getvalue()


def to_json(result: EstimateResult | ScanResult, timing: bool = False) -> str:
    if isinstance(result, ScanResult):
        doc: Any = {
            "rows": [canonical(r, timing) for r in result.rows],
            "monotone": result.monotone,
            "violations": [list(v) for v in result.violations],
        }
    else:
        doc = canonical(result, timing)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def parse_csv(text: str) -> list[dict[str, Any]]:
    """Inverse of ``to_csv`` on the fixed column set."""
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row: dict[str, Any] = {}
        for f in CSV_FIELDS:
            v = raw[f]
            if f == "kind":
                row[f] = v
            elif f in ("n", "t", "trials", "seed", "success"):
                row[f] = int(v)
            else:
                row[f] = float(v) if v != "" else None
        rows.append(row)
    return rows


def parse_json(text: str) -> Any:
    return json.loads(text)


def emit(result: EstimateResult | ScanResult, fmt_name: str, timing: bool = False) -> str:
    if fmt_name == "json":
        return to_json(result, timing)
    rows = result.rows if isinstance(result, ScanResult) else [result]
    return to_csv(rows, timing)
