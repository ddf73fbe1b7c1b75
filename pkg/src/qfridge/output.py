"""Deterministic CSV tables and JSON run reports."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np


def format_cell(value: Any) -> str:
    """Locale-independent text for one CSV cell; floats round-trip exactly."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value) + 0.0)  # no negative zero
    return str(value)


@dataclass
class Table:
    columns: Sequence[str]
    rows: list[Sequence[Any]]

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def write_csv(path: str | Path, table: Table) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_cell(v) for v in row])
    return path


def jsonable(obj: Any) -> Any:
    """Plain JSON types; non-finite floats become strings so the output stays valid JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else repr(value)
    return obj


@dataclass
class RunReport:
    command: str
    version: str
    config: dict
    results: dict
    audit: dict
    # excluded from reproducibility comparisons
    metadata: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return jsonable({"command": self.command, "version": self.version,
                         "config": self.config, "results": self.results, "audit": self.audit})

    def to_dict(self) -> dict:
        return {**self.payload(), "metadata": jsonable(self.metadata)}


def write_report(path: str | Path, report: RunReport) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
