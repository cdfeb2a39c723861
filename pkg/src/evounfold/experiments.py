"""Experiment harness: static landscape scans, dynamic population sampling,
multi-run benchmark grids, and a synthetic problem generator.

All procedures are deterministic given their seeds; the benchmark writes one
file per cell so interrupted grids resume without recomputation.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fileio
from .core import (
    DEFAULT_GROUP_COUNT,
    DetectorCounts,
    EnergyGrid,
    FloatArray,
    ResponseMatrix,
    Spectrum,
    UnfoldProblem,
)
from .dea import DeaConfig, run_dea
from .fitness import (
    FITNESS_KINDS,
    FitnessFunction,
    FitnessParams,
    PopulationContext,
    _penalties_batch,
    penalty_p1,
    residual_scores_batch,
    scores_from_parts,
)
from .forward import NoiseSpec, convolve, make_problem
from .ga import GaConfig, run_ga
from .metrics import RunSummary, normalize_fitness, qs_batch, summarize

ALGORITHMS = ("ga", "dea")
SYNTHETIC_SHAPES = (
    "single-gaussian-in-lethargy",
    "double-peak",
    "flat",
    "thermal-plus-fast",
)

# offset stride separating the per-spectrum noise seeds from the per-run
# solver seeds, so the two streams never collide for realistic seed choices
_NOISE_SEED_STRIDE = 1_000_003


# -- synthetic problems ------------------------------------------------------

@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a reference spectrum: shape family, smoothness target, seed.

    target_p1 is the desired sum of squared first differences; the generated
    spectrum is rescaled to hit it exactly (scaling a spectrum by c scales
    p1 by c^2, so the match is closed-form).
    """

    shape: str
    target_p1: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.shape not in SYNTHETIC_SHAPES:
            raise ValueError(f"shape must be one of {SYNTHETIC_SHAPES}, got {self.shape!r}")
        if not np.isfinite(self.target_p1) or self.target_p1 < 0.0:
            raise ValueError(f"target_p1 must be finite and >= 0, got {self.target_p1}")


def _bell(x: FloatArray, center: float, width: float) -> FloatArray:
    return np.exp(-0.5 * ((x - center) / width) ** 2)


def _base_shape(shape: str, x: FloatArray, rng: np.random.Generator) -> FloatArray:
    if shape == "flat":
        return np.ones_like(x)
    if shape == "single-gaussian-in-lethargy":
        center = rng.uniform(0.35, 0.65)
        width = rng.uniform(0.10, 0.18)
        return _bell(x, center, width) + 1e-3
    if shape == "double-peak":
        thermal = _bell(x, rng.uniform(0.12, 0.20), rng.uniform(0.05, 0.08))
        fast = rng.uniform(0.7, 1.0) * _bell(x, rng.uniform(0.70, 0.80), rng.uniform(0.06, 0.09))
        return thermal + fast + 1e-3
    # thermal-plus-fast: a narrow low-energy peak under a broad fast shoulder
    thermal = _bell(x, rng.uniform(0.08, 0.14), rng.uniform(0.04, 0.06))
    fast = rng.uniform(0.5, 0.8) * _bell(x, rng.uniform(0.62, 0.72), rng.uniform(0.20, 0.28))
    return thermal + fast + 1e-3


def generate_synthetic(spec: SyntheticSpec, grid: EnergyGrid) -> Spectrum:
    """Nonnegative spectrum of the requested shape with p1 == target_p1.

    The flat shape has p1 = 0 identically, so it is the only one that can
    (and must) carry target_p1 = 0.
    """
    mid = grid.log_midpoints()
    span = mid[-1] - mid[0]
    x = (mid - mid[0]) / span if span > 0.0 else np.zeros_like(mid)
    rng = np.random.default_rng(spec.seed)
    base = _base_shape(spec.shape, x, rng)

    p1_base = penalty_p1(base)
    if spec.shape == "flat":
        if spec.target_p1 != 0.0:
            raise ValueError("the flat shape has p1 = 0; target_p1 must be 0")
        return Spectrum(grid, base)
    if spec.target_p1 == 0.0:
        raise ValueError("target_p1 = 0 is only reachable with the flat shape")
    scale = math.sqrt(spec.target_p1 / p1_base)
    return Spectrum(grid, base * scale)


def generate_synthetic_response(
    m: int, n: int, seed: int = 0, row_sum: float = 2.0
) -> ResponseMatrix:
    """m broad overlapping bell-shaped row kernels over n energy groups.

    Row width grows with the row index, mimicking detector spheres of
    increasing moderator size; a small floor keeps every entry positive so
    each column contributes to every detector. Every row is normalized to
    the same sum ``row_sum``, so a count is a common multiple of a weighted
    average of the fluence it sees. ``row_sum`` is a calibration constant:
    it sets the size of count residuals relative to candidate amplitudes,
    and the default of 2.0 keeps absolute-residual fitness terms comparable
    to the smoothness penalties on problems of this scale. Deterministic
    given seed.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not row_sum > 0:
        raise ValueError("row_sum must be positive")
    rng = np.random.default_rng(seed)
    x = (np.arange(n) + 0.5) / n
    centers = np.linspace(0.08, 0.92, m) + rng.uniform(-0.02, 0.02, m)
    widths = np.linspace(0.06, 0.45, m)
    rows = _bell(x[None, :], centers[:, None], widths[:, None]) + 1e-4
    rows *= row_sum / rows.sum(axis=1, keepdims=True)
    return ResponseMatrix(rows)


# -- spectrum library --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectrumLibrary:
    """Named reference spectra sharing one grid, plus the response matrix
    they are unfolded against."""

    response: ResponseMatrix
    spectra: dict[str, Spectrum]
    source: str = "synthetic"

    def __post_init__(self):
        if self.source not in ("file", "synthetic"):
            raise ValueError(f"source must be 'file' or 'synthetic', got {self.source!r}")
        if not self.spectra:
            raise ValueError("library needs at least one spectrum")
        for name in self.spectra:
            if not name or not all(c.isalnum() or c in "-_" for c in name):
                raise ValueError(f"spectrum name {name!r} is not filename-safe")
        grids = [s.grid for s in self.spectra.values()]
        if not all(g.same_as(grids[0]) for g in grids[1:]):
            raise ValueError("all spectra in a library must share one grid")
        if self.response.cols != grids[0].n_groups:
            raise ValueError(
                f"response has {self.response.cols} columns but spectra have "
                f"{grids[0].n_groups} groups"
            )

    @property
    def grid(self) -> EnergyGrid:
        return next(iter(self.spectra.values())).grid

    def names(self) -> tuple[str, ...]:
        return tuple(self.spectra)

    def get(self, name: str) -> Spectrum:
        if name not in self.spectra:
            raise ValueError(f"no spectrum {name!r}; library has {self.names()}")
        return self.spectra[name]

    @classmethod
    def synthetic_pair(cls, seed: int = 0, m: int = 15, n: int = DEFAULT_GROUP_COUNT):
        """Two-spectrum desk library: a rugged double peak (p1 = 1.2) and a
        smooth gaussian (p1 = 0.001)."""
        grid = EnergyGrid.default(n)
        return cls(
            response=generate_synthetic_response(m, n, seed),
            spectra={
                "spec1": generate_synthetic(SyntheticSpec("double-peak", 1.2, seed + 1), grid),
                "spec2": generate_synthetic(
                    SyntheticSpec("single-gaussian-in-lethargy", 0.001, seed + 2), grid
                ),
            },
            source="synthetic",
        )

    @classmethod
    def synthetic_ladder(cls, seed: int = 0, m: int = 15, n: int = DEFAULT_GROUP_COUNT):
        """Four-spectrum library walking the continuity ladder
        p1 = 1.2, 0.1, 0.01, 0.001."""
        grid = EnergyGrid.default(n)
        recipes = [
            ("spec1", "double-peak", 1.2),
            ("spec2", "thermal-plus-fast", 0.1),
            ("spec3", "single-gaussian-in-lethargy", 0.01),
            ("spec4", "single-gaussian-in-lethargy", 0.001),
        ]
        spectra = {
            name: generate_synthetic(SyntheticSpec(shape, p1, seed + 1 + i), grid)
            for i, (name, shape, p1) in enumerate(recipes)
        }
        return cls(
            response=generate_synthetic_response(m, n, seed),
            spectra=spectra,
            source="synthetic",
        )

    @classmethod
    def from_dir(cls, path) -> "SpectrumLibrary":
        """Load a library directory: either a synth.json manifest or a
        response.csv plus one or more <name>.spectrum.csv files."""
        path = Path(path)
        manifest = path / "synth.json"
        if manifest.exists():
            return cls._from_manifest(manifest)
        response_path = path / "response.csv"
        if not response_path.exists():
            raise fileio.FileFormatError(
                path, 0, "library directory needs response.csv or synth.json"
            )
        response = fileio.read_response(response_path)
        spectra = {}
        for spec_path in sorted(path.glob("*.spectrum.csv")):
            name = spec_path.name[: -len(".spectrum.csv")]
            spectra[name] = fileio.read_spectrum(spec_path)
        if not spectra:
            raise fileio.FileFormatError(path, 0, "library directory holds no *.spectrum.csv files")
        return cls(response=response, spectra=spectra, source="file")

    @classmethod
    def _from_manifest(cls, manifest: Path) -> "SpectrumLibrary":
        data = fileio.read_summary_json(manifest)
        try:
            m = int(data["m"])
            n = int(data["n"])
            seed = int(data.get("seed", 0))
            row_sum = float(data.get("row_sum", 2.0))
            entries = data["spectra"]
        except (KeyError, TypeError, ValueError) as exc:
            raise fileio.FileFormatError(manifest, 1, f"bad synth manifest: {exc}") from None
        grid = EnergyGrid.default(n)
        spectra = {}
        for i, entry in enumerate(entries):
            try:
                name = entry["name"]
                spec = SyntheticSpec(
                    entry["shape"], float(entry["target_p1"]), int(entry.get("seed", seed + 1 + i))
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise fileio.FileFormatError(manifest, 1, f"bad spectrum entry {i}: {exc}") from None
            spectra[name] = generate_synthetic(spec, grid)
        return cls(
            response=generate_synthetic_response(m, n, seed, row_sum),
            spectra=spectra,
            source="synthetic",
        )

    def write_dir(self, path) -> None:
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        fileio.write_response(path / "response.csv", self.response)
        for name, spectrum in self.spectra.items():
            fileio.write_spectrum(path / f"{name}.spectrum.csv", spectrum)


# -- static landscape --------------------------------------------------------

@dataclass(frozen=True)
class LandscapeSample:
    """One sampled candidate: its quality factor plus raw and min-max
    normalized fitness per function kind."""

    qs: float
    raw_fitness: dict[str, float]
    normalized_fitness: dict[str, float]


class LandscapeScan:
    """Column-wise store of LandscapeSamples (indexing yields row views)."""

    def __init__(self, kinds, qs_values, raw_fitness, normalized_fitness):
        self.kinds = tuple(kinds)
        self.qs = np.asarray(qs_values, dtype=np.float64)
        self.raw_fitness = {k: np.asarray(v, dtype=np.float64) for k, v in raw_fitness.items()}
        self.normalized_fitness = {
            k: np.asarray(v, dtype=np.float64) for k, v in normalized_fitness.items()
        }

    def __len__(self) -> int:
        return self.qs.size

    def __getitem__(self, i: int) -> LandscapeSample:
        return LandscapeSample(
            qs=float(self.qs[i]),
            raw_fitness={k: float(self.raw_fitness[k][i]) for k in self.kinds},
            normalized_fitness={k: float(self.normalized_fitness[k][i]) for k in self.kinds},
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def static_landscape(
    problem: UnfoldProblem,
    reference: Spectrum,
    sample_count: int = 200_000,
    fitness_kinds=FITNESS_KINDS,
    seed: int = 0,
    *,
    params: FitnessParams | None = None,
    center: Spectrum | None = None,
    radius: float = 1.0,
) -> LandscapeScan:
    """Score a large random population against every requested fitness.

    Samples are uniform in the box (0, b_i). With `center` given, sample k
    instead draws its own radius fraction r_k uniform in (0, radius] and is
    then uniform in [max(0, c_i - r_k*b_i), min(b_i, c_i + r_k*b_i)]; the
    batch thus grades from near-center to full-box candidates, mixing
    quality levels the way an evolving population would. Each fitness
    column is min-max normalized across the batch (a single sample
    normalizes to 0.5), and Qs is computed per sample against `reference`.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    kinds = tuple(fitness_kinds)
    for kind in kinds:
        if kind not in FITNESS_KINDS:
            raise ValueError(f"unknown fitness kind {kind!r}")
    params = params or FitnessParams()

    rng = np.random.default_rng(seed)
    bounds = problem.bounds
    if center is None:
        genes = rng.uniform(0.0, 1.0, size=(sample_count, bounds.size)) * bounds
    else:
        if not (0.0 < radius):
            raise ValueError("radius must be > 0")
        c = center.fluence if isinstance(center, Spectrum) else np.asarray(center, dtype=np.float64)
        if c.shape != bounds.shape:
            raise ValueError(f"center has {c.size} groups, problem has {bounds.size}")
        per_sample = radius * rng.uniform(0.0, 1.0, size=(sample_count, 1))
        lo = np.clip(c - per_sample * bounds, 0.0, None)
        hi = np.minimum(bounds, c + per_sample * bounds)
        lo = np.minimum(lo, hi)
        genes = lo + rng.uniform(0.0, 1.0, size=(sample_count, bounds.size)) * (hi - lo)

    recon = genes @ problem.response.values.T
    p1, p2 = _penalties_batch(genes)
    counts = problem.counts.values
    ctx = None
    if "f3" in kinds:
        ctx = PopulationContext(residual_scores_batch(problem, genes))

    raw = {}
    norm = {}
    for kind in kinds:
        values = scores_from_parts(
            kind, params, recon, counts, p1, p2, ctx if kind == "f3" else None
        )
        raw[kind] = values
        norm[kind] = normalize_fitness(values)
    return LandscapeScan(kinds, qs_batch(reference, genes), raw, norm)


# -- dynamic sampling --------------------------------------------------------

class DynamicSampler:
    """Observer that snapshots a slice of the population each generation.

    After every generation the population is ranked by fitness (best first)
    and `fraction` of it is extracted uniformly by rank, best to worst; each
    pick is recorded as (generation, rank, fitness, qs). The sampler only
    reads the population it is handed.
    """

    def __init__(self, reference: Spectrum, fraction: float = 0.1):
        if not (0.0 < fraction <= 1.0):
            raise ValueError(f"fraction must be in (0, 1], got {fraction}")
        self.reference = reference
        self.fraction = fraction
        self.records: list[tuple[int, int, float, float]] = []

    def sample_count(self, population_size: int) -> int:
        return max(1, math.ceil(self.fraction * population_size))

    def observer(self, iteration: int, genes: FloatArray, fitness: FloatArray) -> None:
        size = fitness.size
        k = self.sample_count(size)
        order = np.argsort(-fitness, kind="stable")
        ranks = (np.arange(k) * size) // k
        picked = order[ranks]
        qs_values = qs_batch(self.reference, genes[picked])
        for rank, idx, qs_value in zip(ranks, picked, qs_values):
            self.records.append((iteration + 1, int(rank), float(fitness[idx]), float(qs_value)))


def run_solver(
    algorithm: str,
    problem: UnfoldProblem,
    fitness_fn: FitnessFunction,
    config,
    reference: Spectrum | None = None,
    observer=None,
):
    """Dispatch one run to the matching solver, checking the config type."""
    if algorithm == "ga":
        if not isinstance(config, GaConfig):
            raise ValueError("algorithm 'ga' needs a GaConfig")
        return run_ga(problem, fitness_fn, config, reference=reference, observer=observer)
    if algorithm == "dea":
        if not isinstance(config, DeaConfig):
            raise ValueError("algorithm 'dea' needs a DeaConfig")
        return run_dea(problem, fitness_fn, config, reference=reference, observer=observer)
    raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")


def run_with_dynamic_sampling(
    problem: UnfoldProblem,
    fitness_fn: FitnessFunction,
    config,
    reference: Spectrum,
    algorithm: str = "ga",
    fraction: float = 0.1,
):
    """Run a solver with a DynamicSampler attached; returns (trace, sampler)."""
    sampler = DynamicSampler(reference, fraction)
    trace = run_solver(
        algorithm, problem, fitness_fn, config, reference=reference, observer=sampler.observer
    )
    return trace, sampler


# -- benchmark grid ----------------------------------------------------------

def _stats(values) -> dict[str, float]:
    arr = np.asarray(values, dtype=np.float64)
    return {
        "mean": float(arr.mean()),
        "median": float(np.median(arr)),
        "stddev": float(arr.std()),
        "min": float(arr.min()),
        "max": float(arr.max()),
    }


@dataclass
class BenchmarkResult:
    """Grid of per-cell summaries keyed (spectrum, algorithm, fitness kind),
    plus recorded errors for cells that failed."""

    summaries: dict[tuple[str, str, str], RunSummary]
    errors: dict[tuple[str, str, str], str]
    settings: dict

    def get(self, spectrum: str, algorithm: str, kind: str) -> RunSummary:
        key = (spectrum, algorithm, kind)
        if key not in self.summaries:
            raise ValueError(f"no summary for cell {key}")
        return self.summaries[key]

    def payload(self) -> dict:
        cells = []
        for (spectrum, algorithm, kind), summary in self.summaries.items():
            cells.append(
                {
                    "spectrum": spectrum,
                    "algorithm": algorithm,
                    "fitness": kind,
                    "runs": len(summary.qs_history_best),
                    "qs_history_best": _stats(summary.qs_history_best),
                    "qs_last_best": _stats(summary.qs_last_best),
                    "qs_initial": _stats(summary.qs_initial),
                    "p1_history_best": _stats(summary.p1_history_best),
                }
            )
        return {
            "settings": self.settings,
            "cells": cells,
            "errors": {"/".join(key): msg for key, msg in self.errors.items()},
        }


def _cell_name(spectrum: str, algorithm: str, kind: str) -> str:
    return f"{spectrum}_{algorithm}_{kind}"


def _make_config(algorithm: str, population_size: int, max_iterations: int, seed: int):
    if algorithm == "ga":
        return GaConfig(population_size=population_size, max_iterations=max_iterations, seed=seed)
    if algorithm == "dea":
        return DeaConfig(population_size=population_size, max_iterations=max_iterations, seed=seed)
    raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")


def benchmark_problem(
    library: SpectrumLibrary, name: str, base_seed: int = 0, noise_sigma: float = 0.05
) -> tuple[UnfoldProblem, Spectrum]:
    """The noisy problem a benchmark grid solves for the named spectrum.

    The noise seed is derived from base_seed and the spectrum's position in
    the library, so individual cells can be reproduced outside benchmark().
    """
    index = library.names().index(name)
    noise = NoiseSpec(
        relative_sigma=noise_sigma, seed=base_seed + _NOISE_SEED_STRIDE * (index + 1)
    )
    return make_problem(library.response, library.get(name), noise)


def _run_cell(args):
    (
        problem,
        reference,
        spectrum,
        algorithm,
        kind,
        runs_per_cell,
        base_seed,
        population_size,
        max_iterations,
    ) = args
    fn = FitnessFunction(kind)
    traces = []
    for run in range(runs_per_cell):
        config = _make_config(algorithm, population_size, max_iterations, base_seed + run)
        traces.append(run_solver(algorithm, problem, fn, config, reference=reference))
    summary = summarize(traces, reference, algorithm, kind, spectrum)
    return summary, traces


def benchmark(
    library: SpectrumLibrary,
    algorithms=ALGORITHMS,
    fitness_kinds=FITNESS_KINDS,
    runs_per_cell: int = 20,
    base_seed: int = 0,
    *,
    population_size: int = 200,
    max_iterations: int = 3000,
    noise_sigma: float = 0.05,
    out_dir=None,
    resume: bool = False,
    workers: int = 1,
) -> BenchmarkResult:
    """Run every (spectrum, algorithm, fitness) cell runs_per_cell times.

    Per spectrum, one noisy problem is synthesized (noise seed derived from
    base_seed and the spectrum's position) and shared by all its cells; run
    r in every cell uses solver seed base_seed + r, so GA and DEA start from
    identical populations. With out_dir set, each finished cell is persisted
    immediately (cells/<cell>.csv plus traces/<cell>_run<r>.csv) and a
    summary.json is written at the end; resume=True reloads complete cells
    instead of recomputing them. A failed cell is recorded under errors and
    the rest of the grid proceeds.
    """
    algorithms = tuple(algorithms)
    kinds = tuple(fitness_kinds)
    for algorithm in algorithms:
        if algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    for kind in kinds:
        if kind not in FITNESS_KINDS:
            raise ValueError(f"unknown fitness kind {kind!r}")
    if runs_per_cell < 1:
        raise ValueError("runs_per_cell must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if resume and out_dir is None:
        raise ValueError("resume needs an out_dir to resume from")

    out_path = Path(out_dir) if out_dir is not None else None
    if out_path is not None:
        (out_path / "cells").mkdir(parents=True, exist_ok=True)
        (out_path / "traces").mkdir(parents=True, exist_ok=True)

    problems = {
        name: benchmark_problem(library, name, base_seed, noise_sigma)
        for name in library.names()
    }

    summaries: dict[tuple[str, str, str], RunSummary] = {}
    errors: dict[tuple[str, str, str], str] = {}
    pending = []
    for spectrum in library.names():
        problem, reference = problems[spectrum]
        for algorithm in algorithms:
            for kind in kinds:
                key = (spectrum, algorithm, kind)
                if resume:
                    cell_path = out_path / "cells" / f"{_cell_name(*key)}.csv"
                    if cell_path.exists():
                        loaded = fileio.read_cell_csv(cell_path, algorithm, kind, spectrum)
                        if len(loaded.qs_history_best) == runs_per_cell:
                            summaries[key] = loaded
                            continue
                pending.append(
                    (
                        problem,
                        reference,
                        spectrum,
                        algorithm,
                        kind,
                        runs_per_cell,
                        base_seed,
                        population_size,
                        max_iterations,
                    )
                )

    def finish(key, summary, traces):
        summaries[key] = summary
        if out_path is not None:
            fileio.write_cell_csv(out_path / "cells" / f"{_cell_name(*key)}.csv", summary)
            for run, trace in enumerate(traces):
                fileio.write_trace_csv(
                    out_path / "traces" / f"{_cell_name(*key)}_run{run}.csv", trace
                )

    if workers > 1 and pending:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(args, pool.submit(_run_cell, args)) for args in pending]
            for args, future in futures:
                key = (args[2], args[3], args[4])
                try:
                    summary, traces = future.result()
                except Exception as exc:
                    errors[key] = f"{type(exc).__name__}: {exc}"
                else:
                    finish(key, summary, traces)
    else:
        for args in pending:
            key = (args[2], args[3], args[4])
            try:
                summary, traces = _run_cell(args)
            except Exception as exc:
                errors[key] = f"{type(exc).__name__}: {exc}"
            else:
                finish(key, summary, traces)

    ordered: dict[tuple[str, str, str], RunSummary] = {}
    for spectrum in library.names():
        for algorithm in algorithms:
            for kind in kinds:
                key = (spectrum, algorithm, kind)
                if key in summaries:
                    ordered[key] = summaries[key]

    settings = {
        "spectra": list(library.names()),
        "algorithms": list(algorithms),
        "fitness_kinds": list(kinds),
        "runs_per_cell": runs_per_cell,
        "base_seed": base_seed,
        "population_size": population_size,
        "max_iterations": max_iterations,
        "noise_sigma": noise_sigma,
    }
    result = BenchmarkResult(summaries=ordered, errors=errors, settings=settings)
    if out_path is not None:
        fileio.write_summary_json(out_path / "summary.json", result.payload())
    return result


def noise_free_problem(library: SpectrumLibrary, name: str) -> tuple[UnfoldProblem, Spectrum]:
    """Problem whose counts are exactly response @ reference (no noise)."""
    reference = library.get(name)
    counts = DetectorCounts(convolve(library.response, reference))
    return UnfoldProblem(library.response, counts), reference
