"""CSV ingestion and dataset loading."""

from __future__ import annotations

import csv
import hashlib
import math
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..errors import ConfigError, EmptyFile, ParseError, UnknownDataset
from ..prompts import data_file, dataset_registry
from ..series import TimeSeries


def file_sha256(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _timestamps(raw: list[str], column: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in raw])
    except ValueError:
        pass
    out = []
    for i, v in enumerate(raw):
        try:
            out.append(np.datetime64(v.strip()))
        except ValueError:
            raise ParseError(i + 1, column, f"cannot read timestamp {v!r}") from None
    try:
        return np.array(out, dtype="datetime64")
    except (TypeError, ValueError):
        raise ParseError(1, column, "timestamps mix incompatible units") from None


def ingest_csv(path: Union[str, Path], value_column: Optional[str] = None,
               timestamp_column: Optional[str] = None, key: Optional[str] = None,
               period: Optional[int] = None) -> TimeSeries:
    """Read one numeric column of a CSV file into a TimeSeries.

    The dataset key defaults to the file stem; when it names a bundled
    registry entry, that entry supplies the period and default columns.
    Rows are numbered from 1 for the first data row.
    """
    path = Path(path)
    key = key or path.stem
    meta = dataset_registry().get(key.lower(), {})
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    while rows and not any(c.strip() for c in rows[-1]):
        rows.pop()
    if not rows:
        raise EmptyFile(f"{path} is empty")
    header, body = [h.strip() for h in rows[0]], rows[1:]
    if not body:
        raise EmptyFile(f"{path} has a header but no data rows")

    value_column = value_column or meta.get("value_column")
    if value_column is None:
        others = [h for h in header if h != (timestamp_column or meta.get("timestamp_column"))]
        if len(others) != 1:
            raise ConfigError(f"cannot guess the value column among {header}")
        value_column = others[0]
    if timestamp_column is None and meta.get("timestamp_column") in header:
        timestamp_column = meta["timestamp_column"]
    for col in (value_column, timestamp_column):
        if col is not None and col not in header:
            raise ConfigError(f"column {col!r} not in {header}")

    vi = header.index(value_column)
    values, stamps = [], []
    for r, row in enumerate(body, start=1):
        cell = row[vi].strip() if vi < len(row) else ""
        try:
            v = float(cell)
        except ValueError:
            raise ParseError(r, value_column, f"cannot read {cell!r} as a number") from None
        if not math.isfinite(v):
            raise ParseError(r, value_column, f"non-finite value {cell!r}")
        values.append(v)
        if timestamp_column is not None:
            ti = header.index(timestamp_column)
            stamps.append(row[ti] if ti < len(row) else "")
    ts_arr = _timestamps(stamps, timestamp_column) if timestamp_column is not None else None

    if period is None:
        period = meta.get("period")
    if period is not None and not 2 <= period <= len(values) // 2:
        period = None
    return TimeSeries(values, ts_arr, period, meta.get("key", key))


def load_bundled(key: str) -> tuple[TimeSeries, str]:
    """A dataset shipped with the package, plus the sha256 of its file."""
    meta = dataset_registry().get(key.lower())
    if meta is None or "file" not in meta:
        raise UnknownDataset(key)
    resource = data_file(meta["file"])
    with resources.as_file(resource) as p:
        return ingest_csv(p, key=meta["key"]), file_sha256(p)


def bundled_datasets() -> list[str]:
    return [m["key"] for m in dataset_registry().values() if "file" in m]
