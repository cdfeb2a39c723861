"""Figure builders: one per figure kind, all deterministic.

Every builder consumes already-parsed artifact data from readers.py and
returns a matplotlib Figure with a fixed style, so rendering the same
inputs twice produces byte-identical image files. Displayed numbers are the
input values verbatim; the only transforms are the documented axes (log
energy scale, min-max fitness normalization for the dynamic figure).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt
import numpy as np

from .readers import (
    SchemaError,
    read_benchmark_summary,
    read_dynamic_csv,
    read_landscape_csv,
    read_spectrum_csv,
)

FIGURE_KINDS = ("spectra", "static-landscape", "dynamic-landscape", "ga-bars", "dea-bars")

_DPI = 150
_ALGO_COLORS = {"ga": "#4c72b0", "dea": "#55a868"}
_SCATTER_COLOR = "#1f77b4"


@dataclass(frozen=True)
class FigureRequest:
    """What to draw, from which artifacts, into which image file."""

    figure: str
    inputs: tuple[Path, ...]
    output: Path

    def __post_init__(self):
        if self.figure not in FIGURE_KINDS:
            raise ValueError(f"figure must be one of {FIGURE_KINDS}, got {self.figure!r}")
        if not self.inputs:
            raise ValueError("at least one input path is required")


def _spectrum_files(inputs: tuple[Path, ...]) -> list[Path]:
    files: list[Path] = []
    for path in inputs:
        if path.is_dir():
            files.extend(sorted(path.glob("*.spectrum.csv")))
        else:
            files.append(path)
    if not files:
        raise SchemaError(inputs[0], "no *.spectrum.csv files found")
    return files


def spectra_figure(inputs: tuple[Path, ...]) -> plt.Figure:
    """Overlay every input spectrum as group-wise steps on a log energy axis."""
    fig, ax = plt.subplots(figsize=(8.0, 5.0))
    for path in _spectrum_files(inputs):
        edges, fluence = read_spectrum_csv(path)
        label = path.name[: -len(".spectrum.csv")] if path.name.endswith(".spectrum.csv") else path.stem
        ax.stairs(fluence, edges, label=label, linewidth=1.4)
    ax.set_xscale("log")
    ax.set_xlabel("energy group upper bound (MeV)")
    ax.set_ylabel("fluence per group")
    ax.set_title("Reference spectra")
    ax.legend(loc="best")
    fig.tight_layout()
    return fig


def static_landscape_figure(inputs: tuple[Path, ...]) -> plt.Figure:
    """One panel per fitness kind: quality factor against normalized fitness."""
    scan = read_landscape_csv(inputs[0])
    kinds = list(scan["kinds"])
    ncols = min(4, len(kinds))
    nrows = math.ceil(len(kinds) / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.1 * ncols, 2.8 * nrows), sharex=True, squeeze=False
    )
    for ax, kind in zip(axes.flat, kinds):
        ax.scatter(
            scan["kinds"][kind]["norm"], scan["qs"], s=4, alpha=0.35, linewidths=0,
            color=_SCATTER_COLOR,
        )
        ax.set_title(kind)
        ax.set_xlim(-0.02, 1.02)
    for ax in axes.flat[len(kinds):]:
        ax.set_axis_off()
    fig.supxlabel("normalized fitness")
    fig.supylabel("Qs (%)")
    fig.tight_layout()
    return fig


def dynamic_landscape_figure(inputs: tuple[Path, ...]) -> plt.Figure:
    """Per-generation sampled individuals: quality factor against min-max
    normalized fitness, colored by generation."""
    records = read_dynamic_csv(inputs[0])
    fitness = records["fitness"]
    span = fitness.max() - fitness.min()
    normalized = (fitness - fitness.min()) / span if span > 0 else np.full_like(fitness, 0.5)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    points = ax.scatter(
        normalized, records["qs"], c=records["generation"], cmap="viridis", s=8,
        linewidths=0,
    )
    fig.colorbar(points, ax=ax, label="generation")
    ax.set_xlim(-0.02, 1.02)
    ax.set_xlabel("normalized fitness")
    ax.set_ylabel("Qs (%)")
    ax.set_title("Population samples during evolution")
    fig.tight_layout()
    return fig


def bars_figure(inputs: tuple[Path, ...], algorithm: str) -> plt.Figure:
    """History-best quality factor per fitness kind, one panel per spectrum:
    bar = stored mean, whisker = stored stddev, for one algorithm."""
    payload = read_benchmark_summary(inputs[0])
    cells = [cell for cell in payload["cells"] if cell["algorithm"] == algorithm]
    if not cells:
        raise SchemaError(inputs[0], f"no cells for algorithm {algorithm!r}")
    spectra = list(dict.fromkeys(cell["spectrum"] for cell in cells))
    kinds = list(dict.fromkeys(cell["fitness"] for cell in cells))
    by_key = {(cell["spectrum"], cell["fitness"]): cell["qs_history_best"] for cell in cells}
    fig, axes = plt.subplots(
        1, len(spectra), figsize=(1.0 + 3.4 * len(spectra), 4.2), sharey=True, squeeze=False
    )
    for ax, spectrum in zip(axes.flat, spectra):
        stats = [by_key[(spectrum, kind)] for kind in kinds]
        ax.bar(
            np.arange(len(kinds)),
            [s["mean"] for s in stats],
            yerr=[s["stddev"] for s in stats],
            capsize=3,
            color=_ALGO_COLORS.get(algorithm, "#777777"),
        )
        ax.set_xticks(np.arange(len(kinds)))
        ax.set_xticklabels(kinds)
        ax.set_title(spectrum)
    axes.flat[0].set_ylabel("Qs (%)")
    fig.suptitle(f"{algorithm.upper()}: history-best Qs (mean ± stddev)")
    fig.tight_layout()
    return fig


_BUILDERS = {
    "spectra": spectra_figure,
    "static-landscape": static_landscape_figure,
    "dynamic-landscape": dynamic_landscape_figure,
    "ga-bars": lambda inputs: bars_figure(inputs, "ga"),
    "dea-bars": lambda inputs: bars_figure(inputs, "dea"),
}


def build_figure(request: FigureRequest) -> plt.Figure:
    return _BUILDERS[request.figure](request.inputs)


def render(request: FigureRequest) -> Path:
    """Build the requested figure and write it to the output path."""
    fig = build_figure(request)
    try:
        fig.savefig(request.output, dpi=_DPI)
    finally:
        plt.close(fig)
    return request.output
