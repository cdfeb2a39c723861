"""Schema-validated readers for the toolkit's serialized artifacts.

Each reader checks the columns (or JSON keys) it needs and raises
SchemaError naming the first missing one; rendering code never touches a
file directly. Values are passed through verbatim — no metric is ever
recomputed here.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """An input file does not match the expected artifact schema."""

    def __init__(self, path, message: str):
        self.path = Path(path)
        self.message = message
        super().__init__(f"{self.path}: {message}")


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="") as handle:
            rows = [row for row in csv.reader(handle) if row]
    except OSError:
        raise
    if not rows:
        raise SchemaError(path, "empty file")
    return rows[0], rows[1:]


def _column_index(path: Path, header: list[str], name: str) -> int:
    try:
        return header.index(name)
    except ValueError:
        raise SchemaError(path, f"missing column {name!r}") from None


def _parse_float(path: Path, line: int, token: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SchemaError(path, f"line {line}: not a number: {token!r}") from None


def read_spectrum_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read one spectrum file: returns (edges, fluence).

    The file lists one energy-group bound per row with the fluence of the
    group it closes; the single row without a fluence value is the floor of
    the grid. edges has one more entry than fluence and ascends.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    bound_col = _column_index(path, header, "group_upper_bound_MeV")
    fluence_col = _column_index(path, header, "fluence")
    bounds, fluence, floors = [], [], []
    for i, row in enumerate(rows, start=2):
        bound = _parse_float(path, i, row[bound_col])
        token = row[fluence_col].strip() if fluence_col < len(row) else ""
        if token:
            bounds.append(bound)
            fluence.append(_parse_float(path, i, token))
        else:
            floors.append(bound)
    if len(floors) != 1:
        raise SchemaError(path, f"expected exactly one floor row (no fluence), found {len(floors)}")
    if not fluence:
        raise SchemaError(path, "no fluence rows")
    edges = np.asarray(floors + bounds, dtype=np.float64)
    if not np.all(np.diff(edges) > 0):
        raise SchemaError(path, "group bounds must ascend from the floor row")
    return edges, np.asarray(fluence, dtype=np.float64)


def read_landscape_csv(path) -> dict:
    """Read a static landscape scan: {'qs': array, 'kinds': {name: {'raw', 'norm'}}}.

    Fitness kinds are discovered from the '<kind>_norm' columns; each must
    have a matching '<kind>_raw' column.
    """
    path = Path(path)
    header, rows = _read_rows(path)
    qs_col = _column_index(path, header, "qs")
    kinds = [name[: -len("_norm")] for name in header if name.endswith("_norm")]
    if not kinds:
        raise SchemaError(path, "missing column '<kind>_norm' (no fitness columns)")
    columns = {
        kind: (_column_index(path, header, f"{kind}_raw"), _column_index(path, header, f"{kind}_norm"))
        for kind in kinds
    }
    table = [
        [_parse_float(path, i, token) for token in row] for i, row in enumerate(rows, start=2)
    ]
    data = np.asarray(table, dtype=np.float64).reshape(len(table), len(header))
    return {
        "qs": data[:, qs_col],
        "kinds": {
            kind: {"raw": data[:, raw_col], "norm": data[:, norm_col]}
            for kind, (raw_col, norm_col) in columns.items()
        },
    }


def read_dynamic_csv(path) -> dict:
    """Read a per-generation sampling file: arrays for generation, rank,
    fitness, and qs."""
    path = Path(path)
    header, rows = _read_rows(path)
    indexes = {name: _column_index(path, header, name) for name in ("generation", "rank", "fitness", "qs")}
    out = {name: [] for name in indexes}
    for i, row in enumerate(rows, start=2):
        for name, col in indexes.items():
            out[name].append(_parse_float(path, i, row[col]))
    return {name: np.asarray(values, dtype=np.float64) for name, values in out.items()}


def read_benchmark_summary(path) -> dict:
    """Read a benchmark summary (summary.json, or a directory holding one).

    Returns the parsed payload after checking every cell carries the keys
    the bar figures need; the nested statistics are used verbatim.
    """
    path = Path(path)
    if path.is_dir():
        path = path / "summary.json"
    with open(path) as handle:
        try:
            payload = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(path, f"invalid JSON: {exc}") from None
    if not isinstance(payload, dict) or "cells" not in payload:
        raise SchemaError(path, "missing key 'cells'")
    cells = payload["cells"]
    if not isinstance(cells, list) or not cells:
        raise SchemaError(path, "'cells' must be a non-empty list")
    for i, cell in enumerate(cells):
        for key in ("spectrum", "algorithm", "fitness"):
            if key not in cell:
                raise SchemaError(path, f"cells[{i}]: missing key {key!r}")
        stats = cell.get("qs_history_best")
        if not isinstance(stats, dict):
            raise SchemaError(path, f"cells[{i}]: missing key 'qs_history_best'")
        for key in ("mean", "stddev"):
            if key not in stats:
                raise SchemaError(path, f"cells[{i}]: missing key 'qs_history_best.{key}'")
    return payload
