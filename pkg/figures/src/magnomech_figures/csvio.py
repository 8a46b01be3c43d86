"""Reading the sweep/trace CSV schema ('#' lines are provenance comments)."""

from __future__ import annotations

import csv
import math


class SchemaError(ValueError):
    """The CSV does not carry the columns a panel needs."""


def _convert(cell: str):
    low = cell.strip().lower()
    if low == "true":
        return True
    if low == "false":
        return False
    try:
        return float(cell)
    except ValueError:
        return cell.strip()


def read_table(path):
    """Return (columns, rows); rows hold floats/bools/strings, 'nan' -> NaN."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    try:
        columns = next(reader)
    except StopIteration:
        raise SchemaError(f"{path}: empty file, no header row") from None
    columns = [c.strip() for c in columns]
    rows = [[_convert(cell) for cell in row] for row in reader if row]
    return columns, rows


def require_columns(columns, needed, path):
    missing = [c for c in needed if c not in columns]
    if missing:
        raise SchemaError(
            f"{path}: missing column(s) {missing}; expected {list(needed)}, "
            f"found {columns}"
        )
    return [columns.index(c) for c in needed]


def column(rows, idx):
    """One column as floats; non-numeric cells become NaN."""
    out = []
    for row in rows:
        v = row[idx]
        out.append(v if isinstance(v, float) else math.nan)
    return out
