"""Evolutionary neutron-spectrum unfolding.

Solves the discretized inverse problem C = R @ phi with a real-coded
genetic algorithm and a differential evolution algorithm, scored by eight
interchangeable fitness functions, plus an experiment harness for landscape
scans and multi-run benchmarks.
"""

from .core import (
    DEFAULT_ENERGY_MAX_MEV,
    DEFAULT_ENERGY_MIN_MEV,
    DEFAULT_GROUP_COUNT,
    DetectorCounts,
    EnergyGrid,
    ResponseMatrix,
    Spectrum,
    UnfoldProblem,
    derive_bounds,
)
from .dea import MUTATION_SIGNS, DeaConfig, de_crossover, de_mutate, de_select, run_dea
from .experiments import (
    ALGORITHMS,
    SYNTHETIC_SHAPES,
    BenchmarkResult,
    DynamicSampler,
    LandscapeSample,
    LandscapeScan,
    SpectrumLibrary,
    SyntheticSpec,
    benchmark,
    benchmark_problem,
    generate_synthetic,
    generate_synthetic_response,
    noise_free_problem,
    run_solver,
    run_with_dynamic_sampling,
    static_landscape,
)
from .fileio import FileFormatError
from .fitness import (
    FITNESS_KINDS,
    FitnessFunction,
    FitnessParams,
    PopulationContext,
    evaluate,
    evaluate_batch,
    penalty_p1,
    penalty_p2,
    residual_score,
    residuals,
)
from .forward import NOISE_MODES, NoiseSpec, add_noise, convolve, make_problem
from .ga import (
    GaConfig,
    Individual,
    RunTrace,
    crossover,
    initialize,
    mutate,
    roulette_select,
    run_ga,
)
from .metrics import (
    QS_VARIANTS,
    RunSummary,
    normalize_fitness,
    population_stddev,
    qs,
    qs_batch,
    summarize,
)

__all__ = [
    "ALGORITHMS",
    "DEFAULT_ENERGY_MAX_MEV",
    "DEFAULT_ENERGY_MIN_MEV",
    "DEFAULT_GROUP_COUNT",
    "FITNESS_KINDS",
    "MUTATION_SIGNS",
    "NOISE_MODES",
    "QS_VARIANTS",
    "SYNTHETIC_SHAPES",
    "BenchmarkResult",
    "DeaConfig",
    "DetectorCounts",
    "DynamicSampler",
    "EnergyGrid",
    "FileFormatError",
    "FitnessFunction",
    "FitnessParams",
    "GaConfig",
    "Individual",
    "LandscapeSample",
    "LandscapeScan",
    "NoiseSpec",
    "PopulationContext",
    "ResponseMatrix",
    "RunSummary",
    "RunTrace",
    "Spectrum",
    "SpectrumLibrary",
    "SyntheticSpec",
    "UnfoldProblem",
    "add_noise",
    "benchmark",
    "benchmark_problem",
    "convolve",
    "crossover",
    "de_crossover",
    "de_mutate",
    "de_select",
    "derive_bounds",
    "evaluate",
    "evaluate_batch",
    "generate_synthetic",
    "generate_synthetic_response",
    "initialize",
    "make_problem",
    "mutate",
    "noise_free_problem",
    "normalize_fitness",
    "penalty_p1",
    "penalty_p2",
    "population_stddev",
    "qs",
    "qs_batch",
    "residual_score",
    "residuals",
    "roulette_select",
    "run_dea",
    "run_ga",
    "run_solver",
    "run_with_dynamic_sampling",
    "static_landscape",
    "summarize",
]

__version__ = "0.1.0"
