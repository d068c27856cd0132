"""CSV readers and writers for sampled distributions and time series.

Floats are written with 17 significant digits so every double round-trips.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, Sequence

__all__ = [
    "SchemaError",
    "H_COLUMNS",
    "TOMO_COLUMNS",
    "MEANS_COLUMNS",
    "FRAME_COLUMNS",
    "format_float",
    "write_csv",
    "read_csv",
]

H_COLUMNS = ("x", "y", "theta", "w")
TOMO_COLUMNS = ("m", "alpha", "beta", "w")
MEANS_COLUMNS = ("t", "Sx", "Sy", "Sz")
FRAME_COLUMNS = ("t", "x", "y", "theta", "w")


class SchemaError(ValueError):
    pass


def format_float(value: float) -> str:
    return "%.17g" % value


def write_csv(columns: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_float(float(v)) for v in row])
    return buf.getvalue()


def read_csv(text: str, columns: Sequence[str]) -> list[dict[str, float]]:
    """Parse CSV text whose header must be exactly ``columns``."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty CSV input") from None
    if tuple(h.strip() for h in header) != tuple(columns):
        raise SchemaError(f"expected header {','.join(columns)}, got {','.join(header)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(columns):
            raise SchemaError(f"line {lineno}: expected {len(columns)} fields, got {len(row)}")
        try:
            records.append({c: float(v) for c, v in zip(columns, row)})
        except ValueError as exc:
            raise SchemaError(f"line {lineno}: {exc}") from exc
    return records
