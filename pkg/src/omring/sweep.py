"""Serializable result tables shared by sweeps and the command-line tool."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["SweepTable", "format_cell"]


def format_cell(value) -> str:
    """Deterministic text form of a table cell (shortest float round-trip)."""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


@dataclass(frozen=True)
class SweepTable:
    """Column-named rows plus self-describing metadata.

    Rows may hold floats or strings; metadata is emitted as ``# key = value``
    header lines in CSV and as a mapping in JSON.  Output is deterministic for
    identical inputs (no timestamps, stable ordering, round-trip floats).
    """

    columns: tuple[str, ...]
    rows: list[tuple]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row of width {len(row)} does not match {len(self.columns)} columns"
                )

    def to_csv(self) -> str:
        lines = [f"# {key} = {value}" for key, value in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(format_cell(cell) for cell in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "metadata": dict(self.metadata),
            "columns": list(self.columns),
            "rows": [[cell if isinstance(cell, str) else float(cell) for cell in row]
                     for row in self.rows],
        }
        return json.dumps(payload, indent=2) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = self.to_csv() if fmt == "csv" else self.to_json()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
