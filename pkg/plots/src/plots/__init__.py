"""Offline figure rendering for spectrum-unfolding result artifacts.

Reads the CSV/JSON files written by the unfolding toolkit's CLI and renders
them as images; never recomputes a metric and never calls a solver.
"""

from .figures import FIGURE_KINDS, FigureRequest, build_figure, render
from .readers import (
    SchemaError,
    read_benchmark_summary,
    read_dynamic_csv,
    read_landscape_csv,
    read_spectrum_csv,
)

__all__ = [
    "FIGURE_KINDS",
    "FigureRequest",
    "SchemaError",
    "build_figure",
    "read_benchmark_summary",
    "read_dynamic_csv",
    "read_landscape_csv",
    "read_spectrum_csv",
    "render",
]
