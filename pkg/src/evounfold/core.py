"""Domain types for the discrete unfolding problem.

The measurement model is C = R @ phi: an m-vector of detector counts
produced by an m x n response matrix acting on an n-group fluence
spectrum, with m << n in any realistic geometry.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FloatArray = np.ndarray

DEFAULT_ENERGY_MIN_MEV = 1e-9
DEFAULT_ENERGY_MAX_MEV = 15.8
DEFAULT_GROUP_COUNT = 53


def _as_locked_array(values, name: str, ndim: int) -> FloatArray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EnergyGrid:
    """Strictly increasing group boundaries in MeV; n groups need n+1 boundaries."""

    boundaries: FloatArray

    def __post_init__(self):
        arr = _as_locked_array(self.boundaries, "boundaries", 1)
        if arr.size < 2:
            raise ValueError("boundaries needs at least 2 entries (one group)")
        if not np.all(np.isfinite(arr)):
            raise ValueError("boundaries must be finite")
        if not np.all(arr > 0.0):
            raise ValueError("boundaries must all be > 0")
        if not np.all(np.diff(arr) > 0.0):
            raise ValueError("boundaries must be strictly increasing")
        object.__setattr__(self, "boundaries", arr)

    @classmethod
    def default(
        cls,
        n_groups: int = DEFAULT_GROUP_COUNT,
        e_min: float = DEFAULT_ENERGY_MIN_MEV,
        e_max: float = DEFAULT_ENERGY_MAX_MEV,
    ) -> "EnergyGrid":
        """Log-spaced grid; the stand-in when no boundaries are supplied."""
        if n_groups < 1:
            raise ValueError("n_groups must be >= 1")
        bounds = np.logspace(np.log10(e_min), np.log10(e_max), n_groups + 1)
        return cls(bounds)

    @property
    def n_groups(self) -> int:
        return self.boundaries.size - 1

    def log_midpoints(self) -> FloatArray:
        """Group centers in log10(E); the natural axis for spectrum shapes."""
        logb = np.log10(self.boundaries)
        return 0.5 * (logb[:-1] + logb[1:])

    def same_as(self, other: "EnergyGrid") -> bool:
        return self.boundaries.shape == other.boundaries.shape and bool(
            np.array_equal(self.boundaries, other.boundaries)
        )


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Per-group neutron fluence on an energy grid (arbitrary fluence units)."""

    grid: EnergyGrid
    fluence: FloatArray

    def __post_init__(self):
        arr = _as_locked_array(self.fluence, "fluence", 1)
        if arr.size != self.grid.n_groups:
            raise ValueError(
                f"fluence has {arr.size} entries but grid has {self.grid.n_groups} groups"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("fluence must be finite")
        if np.any(arr < 0.0):
            raise ValueError("fluence must be non-negative")
        object.__setattr__(self, "fluence", arr)

    @property
    def n_groups(self) -> int:
        return self.fluence.size


@dataclass(frozen=True, eq=False)
class ResponseMatrix:
    """m x n detector response; rows are detection units, columns energy groups.

    Rejected at construction: any all-zero row (a detector that sees
    nothing) or all-zero column (an energy group no detector constrains).
    """

    values: FloatArray

    def __post_init__(self):
        arr = _as_locked_array(self.values, "response values", 2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("response entries must be finite")
        if np.any(arr < 0.0):
            raise ValueError("response entries must be non-negative")
        positive = arr > 0.0
        dead_rows = np.where(~positive.any(axis=1))[0]
        if dead_rows.size:
            raise ValueError(f"response row {dead_rows[0]} has no positive entry")
        dead_cols = np.where(~positive.any(axis=0))[0]
        if dead_cols.size:
            raise ValueError(f"response column {dead_cols[0]} has no positive entry")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class DetectorCounts:
    """Detector readings C_j; strictly positive because every fitness
    function divides by them."""

    values: FloatArray

    def __post_init__(self):
        arr = _as_locked_array(self.values, "counts", 1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("counts must be finite")
        if np.any(arr <= 0.0):
            raise ValueError("counts must be strictly positive")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


def derive_bounds(response: ResponseMatrix, counts: DetectorCounts) -> FloatArray:
    """Per-gene search bound b_i = min over detectors j with R_ji > 0 of C_j / R_ji.

    Any larger value for gene i alone would overshoot some detector, so
    this is the tightest box that keeps every single-gene candidate feasible.
    """
    if len(counts) != response.rows:
        raise ValueError(
            f"counts has {len(counts)} entries but response has {response.rows} rows"
        )
    r = response.values
    with np.errstate(divide="ignore"):
        ratios = np.where(r > 0.0, counts.values[:, None] / np.where(r > 0.0, r, 1.0), np.inf)
    bounds = ratios.min(axis=0)
    bounds.setflags(write=False)
    return bounds


@dataclass(frozen=True, eq=False)
class UnfoldProblem:
    """Counts plus response matrix, with the derived per-gene bounds attached."""

    response: ResponseMatrix
    counts: DetectorCounts
    bounds: FloatArray = field(init=False)

    def __post_init__(self):
        if len(self.counts) != self.response.rows:
            raise ValueError(
                f"counts has {len(self.counts)} entries but response has "
                f"{self.response.rows} rows"
            )
        object.__setattr__(self, "bounds", derive_bounds(self.response, self.counts))

    @property
    def n_detectors(self) -> int:
        return self.response.rows

    @property
    def n_groups(self) -> int:
        return self.response.cols
