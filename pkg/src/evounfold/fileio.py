"""CSV/JSON serialization for problems and experiment artifacts.

Every number is written with 17 significant digits so that float64 values
survive a write/read round trip bit-faithfully.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import DetectorCounts, EnergyGrid, ResponseMatrix, Spectrum


class FileFormatError(ValueError):
    """Parse or validation failure, pointing at the offending file and line."""

    def __init__(self, path, line: int, message: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_float(token: str, path, line: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise FileFormatError(path, line, f"expected a number for {what}, got {token!r}") from None


# -- response matrix ---------------------------------------------------------

def write_response(path, response: ResponseMatrix) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(f"# response m={response.rows} n={response.cols}\n")
        writer = csv.writer(fh)
        for row in response.values:
            writer.writerow([fmt(v) for v in row])


def read_response(path) -> ResponseMatrix:
    path = Path(path)
    with path.open(newline="") as fh:
        header = fh.readline().strip()
        parts = header.split()
        if (
            len(parts) != 4
            or parts[0] != "#"
            or parts[1] != "response"
            or not parts[2].startswith("m=")
            or not parts[3].startswith("n=")
        ):
            raise FileFormatError(path, 1, f"expected header '# response m=<m> n=<n>', got {header!r}")
        try:
            m = int(parts[2][2:])
            n = int(parts[3][2:])
        except ValueError:
            raise FileFormatError(path, 1, f"bad m/n in header {header!r}") from None
        rows = []
        for lineno, row in enumerate(csv.reader(fh), start=2):
            if not row:
                continue
            if len(row) != n:
                raise FileFormatError(path, lineno, f"expected {n} values, got {len(row)}")
            rows.append([_parse_float(tok, path, lineno, "a response entry") for tok in row])
    if len(rows) != m:
        raise FileFormatError(path, len(rows) + 1, f"expected {m} data rows, got {len(rows)}")
    try:
        return ResponseMatrix(np.array(rows))
    except ValueError as exc:
        raise FileFormatError(path, 1, str(exc)) from None


# -- spectrum ----------------------------------------------------------------

def write_spectrum(path, spectrum: Spectrum) -> None:
    path = Path(path)
    bounds = spectrum.grid.boundaries
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group_upper_bound_MeV", "fluence"])
        writer.writerow([fmt(bounds[0]), ""])  # grid floor carries no fluence
        for upper, phi in zip(bounds[1:], spectrum.fluence):
            writer.writerow([fmt(upper), fmt(phi)])


def read_spectrum(path) -> Spectrum:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError(path, 1, "empty spectrum file") from None
        if [h.strip() for h in header] != ["group_upper_bound_MeV", "fluence"]:
            raise FileFormatError(path, 1, f"expected header 'group_upper_bound_MeV,fluence', got {header!r}")
        bounds: list[float] = []
        fluence: list[float] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise FileFormatError(path, lineno, f"expected 2 columns, got {len(row)}")
            bounds.append(_parse_float(row[0], path, lineno, "an energy boundary"))
            if lineno == 2:
                if row[1].strip():
                    raise FileFormatError(path, lineno, "grid-floor row must leave fluence empty")
            else:
                fluence.append(_parse_float(row[1], path, lineno, "a fluence value"))
    if len(bounds) < 2:
        raise FileFormatError(path, 2, "spectrum needs a floor row plus at least one group row")
    try:
        return Spectrum(EnergyGrid(np.array(bounds)), np.array(fluence))
    except ValueError as exc:
        raise FileFormatError(path, 2, str(exc)) from None


# -- counts ------------------------------------------------------------------

def write_counts(path, counts: DetectorCounts) -> None:
    Path(path).write_text("".join(fmt(v) + "\n" for v in counts.values))


def read_counts(path) -> DetectorCounts:
    path = Path(path)
    values = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        values.append(_parse_float(token, path, lineno, "a count"))
    if not values:
        raise FileFormatError(path, 1, "counts file is empty")
    try:
        return DetectorCounts(np.array(values))
    except ValueError as exc:
        raise FileFormatError(path, 1, str(exc)) from None


# -- run artifacts -----------------------------------------------------------

def write_trace_csv(path, trace) -> None:
    """Per-iteration history-best fitness and quality factor."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "best_fitness", "best_qs"])
        for it in range(trace.iterations):
            writer.writerow(
                [it + 1, fmt(trace.hist_best_fitness[it]), fmt(trace.hist_best_qs[it])]
            )


def write_cell_csv(path, summary) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "qs_history_best", "qs_last_best", "qs_initial", "p1_history_best"])
        rows = zip(
            summary.qs_history_best,
            summary.qs_last_best,
            summary.qs_initial,
            summary.p1_history_best,
        )
        for run, (qh, ql, qi, p1) in enumerate(rows):
            writer.writerow([run, fmt(qh), fmt(ql), fmt(qi), fmt(p1)])


def read_cell_csv(path, algorithm: str, fitness_kind: str, spectrum: str):
    from .metrics import RunSummary

    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FileFormatError(path, 1, "empty cell file") from None
        expected = ["run", "qs_history_best", "qs_last_best", "qs_initial", "p1_history_best"]
        if header != expected:
            raise FileFormatError(path, 1, f"expected header {expected}, got {header}")
        summary = RunSummary(algorithm, fitness_kind, spectrum, [], [], [], [])
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise FileFormatError(path, lineno, f"expected 5 columns, got {len(row)}")
            summary.qs_history_best.append(_parse_float(row[1], path, lineno, "qs_history_best"))
            summary.qs_last_best.append(_parse_float(row[2], path, lineno, "qs_last_best"))
            summary.qs_initial.append(_parse_float(row[3], path, lineno, "qs_initial"))
            summary.p1_history_best.append(_parse_float(row[4], path, lineno, "p1_history_best"))
    if not summary.qs_history_best:
        raise FileFormatError(path, 2, "cell file holds no runs")
    return summary


def write_landscape_csv(path, scan) -> None:
    path = Path(path)
    kinds = list(scan.kinds)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["qs"] + [f"{k}_raw" for k in kinds] + [f"{k}_norm" for k in kinds])
        for i in range(len(scan)):
            row = [fmt(scan.qs[i])]
            row += [fmt(scan.raw_fitness[k][i]) for k in kinds]
            row += [fmt(scan.normalized_fitness[k][i]) for k in kinds]
            writer.writerow(row)


def write_dynamic_csv(path, records) -> None:
    """records: iterable of (generation, rank, fitness, qs)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["generation", "rank", "fitness", "qs"])
        for gen, rank, fitness, qs_value in records:
            writer.writerow([gen, rank, fmt(fitness), fmt(qs_value)])


def write_summary_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_summary_json(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
