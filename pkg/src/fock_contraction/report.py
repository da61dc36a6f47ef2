"""Deterministic CSV / JSON serialization for verification reports and
table streams."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

import numpy as np

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
EXPLORATORY = "EXPLORATORY"
STATUSES = (PASS, FAIL, INCONCLUSIVE, EXPLORATORY)

SIG_DIGITS = 12


def _plain(x: Any) -> Any:
    # numpy scalars to their Python counterparts
    return x.item() if isinstance(x, np.generic) else x


def fmt_number(x: Any) -> str:
    """12 significant digits; booleans and None get fixed spellings."""
    x = _plain(x)
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, f".{SIG_DIGITS}g")
    return str(x)


def json_value(x: Any) -> Any:
    x = _plain(x)
    if isinstance(x, float) and math.isfinite(x):
        return float(format(x, f".{SIG_DIGITS}g"))
    if isinstance(x, float):
        return fmt_number(x)
    return x


def _csv_field(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


@dataclass(frozen=True)
class ReportItem:
    check_id: str
    measured: Any
    expected: Any
    tolerance: Any
    status: str
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")


@dataclass
class VerificationReport:
    header: dict
    items: list = field(default_factory=list)
    stamp: Optional[str] = None

    SCHEMA = "verify/1"
    COLUMNS = ("check_id", "measured", "expected", "tolerance", "status", "note")

    def add(self, item: ReportItem) -> None:
        self.items.append(item)

    def sorted_items(self) -> list:
        return sorted(self.items, key=lambda it: it.check_id)

    def counts(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for it in self.items:
            out[it.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if any(it.status == FAIL for it in self.items) else 0

    def to_csv(self) -> str:
        lines = [f"# schema: {self.SCHEMA}"]
        for key in sorted(self.header):
            lines.append(f"# {key}: {self.header[key]}")
        if self.stamp:
            lines.append(f"# timestamp: {self.stamp}")
        lines.append(",".join(self.COLUMNS))
        for it in self.sorted_items():
            row = [it.check_id, fmt_number(it.measured), fmt_number(it.expected),
                   fmt_number(it.tolerance), it.status, it.note]
            lines.append(",".join(_csv_field(c) for c in row))
        counts = self.counts()
        lines.append("# summary: " + " ".join(f"{k}={counts[k]}" for k in STATUSES)
                     + f" exit_code={self.exit_code}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "schema": self.SCHEMA,
            "header": dict(self.header),
            "items": [{c: json_value(getattr(it, c)) for c in self.COLUMNS}
                      for it in self.sorted_items()],
            "summary": {**self.counts(), "exit_code": self.exit_code},
        }
        if self.stamp:
            doc["timestamp"] = self.stamp
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def render(self, fmt: str) -> str:
        return self.to_json() if fmt == "json" else self.to_csv()


def render_table(schema: str, columns: Sequence[str], rows: Iterable[Sequence[Any]],
                 fmt: str, header: Optional[dict] = None) -> str:
    """One CSV row (or JSON object) per table row, order preserved."""
    rows = list(rows)
    header = header or {}
    if fmt == "json":
        doc = {
            "schema": schema,
            "header": dict(header),
            "rows": [{c: json_value(v) for c, v in zip(columns, row)} for row in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    lines = [f"# schema: {schema}"]
    for key in sorted(header):
        lines.append(f"# {key}: {header[key]}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_csv_field(fmt_number(v)) for v in row))
    return "\n".join(lines) + "\n"
