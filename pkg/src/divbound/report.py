"""Inequality check records and their CSV/JSON serialization."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

DEFAULT_TOL = 1e-9

CSV_COLUMNS = ("name", "lhs", "rhs", "slack", "holds")


@dataclass(frozen=True)
class BoundReport:
    """One checked inequality ``lhs >= rhs``.

    ``slack = lhs - rhs``, so a nonnegative slack means the inequality holds.
    ``holds`` is ``slack >= -tolerance``.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    holds: bool
    tolerance: float
    inputs_digest: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def check(name: str, lhs: float, rhs: float, tol: float = DEFAULT_TOL, digest: str = "") -> BoundReport:
    """Build a report for ``lhs >= rhs``.

    Both sides infinite with the same sign counts as equality.
    """
    lhs, rhs = float(lhs), float(rhs)
    if math.isinf(lhs) and lhs == rhs:
        slack = 0.0
    else:
        slack = lhs - rhs
    holds = bool(slack >= -tol)  # nan never holds
    return BoundReport(name, lhs, rhs, slack, holds, tol, digest)


def digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        arr = np.ascontiguousarray(np.asarray(a))
        h.update(str(arr.shape).encode())
        h.update(arr.tobytes())
    return h.hexdigest()[:16]


def fmt(x: float) -> str:
    """Render a number with 9 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow([r.name, fmt(r.lhs), fmt(r.rhs), fmt(r.slack), fmt(r.holds)])
    return buf.getvalue()


def _json_number(x):
    if isinstance(x, float) and not math.isfinite(x):
        return fmt(x)
    return x


def reports_to_json(reports) -> str:
    rows = [{k: _json_number(v) for k, v in r.to_dict().items()} for r in reports]
    return json.dumps(rows, indent=2)


def reports_from_json(text: str) -> list[BoundReport]:
    out = []
    for row in json.loads(text):
        for key in ("lhs", "rhs", "slack", "tolerance"):
            row[key] = float(row[key])
        out.append(BoundReport(**row))
    return out


def all_hold(reports) -> bool:
    return all(r.holds for r in reports)
