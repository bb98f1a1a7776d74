"""Tabular report documents and their CSV / JSON encodings.

Floats are rendered with 12 significant digits (``format(x, ".12g")``),
independently of locale; arbitrary-precision integers travel as decimal
strings; missing cells are empty in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

SIG_DIGITS = 12


class ExactInt(int):
    """Integer serialised as a decimal string (survives JSON/CSV round-trips)."""


@dataclass
class ReportDocument:
    columns: Sequence[str]
    metadata: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "metadata": self.metadata,
            "rows": [{c: _json_cell(row.get(c)) for c in self.columns} for row in self.rows],
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown output format {fmt!r}")


def format_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, f".{SIG_DIGITS}g")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _json_cell(value: Any) -> Any:
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, ExactInt):
        return str(value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return format_float(value)
        return float(format_float(value))
    return value
