"""CSV ingestion and emission.

Two file schemas, both UTF-8 with '.' decimals:

* censored samples: header exactly ``z,delta``, one observation per row;
* raw survival records: header exactly ``start,end,status`` with ISO-8601
  dates and status ``D`` (dead) or ``A`` (alive), converted to censored
  observations by :func:`derive_survival`.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CsvFormatError",
    "read_censored_csv",
    "write_censored_csv",
    "read_raw_records",
    "derive_survival",
    "fmt",
]

CENSORED_HEADER = ["z", "delta"]
RAW_HEADER = ["start", "end", "status"]


class CsvFormatError(ValueError):
    """A CSV file does not match the expected schema."""


def fmt(value) -> str:
    """Render a value for CSV output: 6 significant digits, '' for missing."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return ""
    return f"{value:.6g}"


def _check_header(row, expected, path):
    if row is None or [c.strip() for c in row] != expected:
        raise CsvFormatError(f"{path}: expected header {','.join(expected)!r}, got {row!r}")


def read_censored_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a ``z,delta`` file into (z, delta) arrays."""
    z: list[float] = []
    delta: list[int] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(next(reader, None), CENSORED_HEADER, path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise CsvFormatError(f"{path}: line {lineno}: expected 2 fields, got {len(row)}")
            try:
                value = float(row[0])
            except ValueError:
                raise CsvFormatError(f"{path}: line {lineno}, field z: not a number: {row[0]!r}") from None
            if not math.isfinite(value) or value <= 0:
                raise CsvFormatError(f"{path}: line {lineno}, field z: must be finite and > 0, got {row[0]!r}")
            if row[1].strip() not in ("0", "1"):
                raise CsvFormatError(f"{path}: line {lineno}, field delta: must be 0 or 1, got {row[1]!r}")
            z.append(value)
            delta.append(int(row[1]))
    if not z:
        raise CsvFormatError(f"{path}: no data rows")
    return np.asarray(z), np.asarray(delta, dtype=np.int64)


def write_censored_csv(path_or_file, z, delta) -> None:
    """Write (z, delta) as a ``z,delta`` file; round-trips exactly."""
    z = np.asarray(z, dtype=float)
    delta = np.asarray(delta, dtype=np.int64)

    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CENSORED_HEADER)
        for zi, di in zip(z, delta):
            writer.writerow([repr(float(zi)), int(di)])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            _write(fh)


def read_raw_records(path) -> list[tuple[dt.date, dt.date, str]]:
    """Read a ``start,end,status`` file of ISO dates and D/A status flags."""
    records: list[tuple[dt.date, dt.date, str]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(next(reader, None), RAW_HEADER, path)
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise CsvFormatError(f"{path}: line {lineno}: expected 3 fields, got {len(row)}")
            dates = []
            for field, cell in zip(("start", "end"), row[:2]):
                try:
                    dates.append(dt.date.fromisoformat(cell.strip()))
                except ValueError:
                    raise CsvFormatError(
                        f"{path}: line {lineno}, field {field}: not an ISO date: {cell!r}"
                    ) from None
            status = row[2].strip()
            if status not in ("D", "A"):
                raise CsvFormatError(f"{path}: line {lineno}, field status: must be D or A, got {row[2]!r}")
            if dates[1] < dates[0]:
                raise CsvFormatError(f"{path}: line {lineno}: end date precedes start date")
            records.append((dates[0], dates[1], status))
    if not records:
        raise CsvFormatError(f"{path}: no data rows")
    return records


def derive_survival(records: Iterable[Sequence]) -> tuple[np.ndarray, np.ndarray]:
    """Turn (start, end, status) records into censored observations.

    The survival time is the day count from start to end plus one (so
    same-day events still yield a positive time); delta is 1 for status
    ``D`` and 0 for ``A``.
    """
    z: list[float] = []
    delta: list[int] = []
    for start, end, status in records:
        if end < start:
            raise ValueError(f"end date {end} precedes start date {start}")
        if status not in ("D", "A"):
            raise ValueError(f"unknown status {status!r} (expected D or A)")
        z.append(float((end - start).days + 1))
        delta.append(1 if status == "D" else 0)
    return np.asarray(z), np.asarray(delta, dtype=np.int64)
