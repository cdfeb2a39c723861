"""Real-coded genetic algorithm: single-point mutation, whole arithmetic
crossover, roulette-wheel selection, history-best tracked outside the
population.

The generation pipeline is: parents + crossover children + mutants form a
candidate pool, the whole pool is scored, then roulette selection draws the
next population from it. There is deliberately no elitism inside the loop
(an optional flag adds it); losing good individuals between generations is
part of the behavior under study.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FloatArray, UnfoldProblem
from .fitness import (
    FitnessFunction,
    PopulationContext,
    evaluate_batch,
    residual_scores_batch,
)
from .metrics import qs

# floor added to roulette weights, scaled to the fitness range so that a
# zero-range population degenerates to uniform selection
_SELECTION_EPS_SCALE = 1e-9


@dataclass
class Individual:
    """A candidate fluence vector with its cached score (None = stale)."""

    genes: FloatArray
    fitness: float | None = None

    def copy(self) -> "Individual":
        return Individual(self.genes.copy(), self.fitness)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 200
    max_iterations: int = 3000
    mutation_prob: float = 0.1
    crossover_prob: float = 0.9
    seed: int = 0
    elitism: bool = False

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (0.0 <= self.mutation_prob <= 1.0):
            raise ValueError("mutation_prob must be in [0, 1]")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError("crossover_prob must be in [0, 1]")


@dataclass
class RunTrace:
    """Per-iteration record of one solver run.

    gen_best_fitness is the best score among candidates evaluated that
    generation; hist_best_fitness the score of the history-best individual
    (for f3 it is re-expressed against each generation's context, since f3
    values do not compare across generations — there the history best is
    tracked by lowest residual score instead of highest fitness).
    hist_best_qs is NaN unless a reference spectrum was supplied.
    """

    fitness_kind: str
    gen_best_fitness: FloatArray
    hist_best_fitness: FloatArray
    hist_best_qs: FloatArray
    fitness_quantiles: FloatArray  # (iterations, 5): min, q25, median, q75, max
    history_best: Individual
    last_best: Individual
    initial_best_genes: FloatArray
    initial_best_fitness: float
    initial_best_qs: float
    slot_fitness: FloatArray | None = None  # (iterations, N); filled by the DE solver

    @property
    def iterations(self) -> int:
        return self.gen_best_fitness.size


def _init_population(problem: UnfoldProblem, size: int, rng: np.random.Generator) -> FloatArray:
    return rng.uniform(0.0, 1.0, size=(size, problem.n_groups)) * problem.bounds


def initialize(problem: UnfoldProblem, config) -> FloatArray:
    """Random population, each gene uniform in (0, b_i); deterministic given
    config.seed. Works for either solver config."""
    rng = np.random.default_rng(config.seed)
    return _init_population(problem, config.population_size, rng)


def _mutate_genes(genes: FloatArray, bounds: FloatArray, rng: np.random.Generator) -> FloatArray:
    out = genes.copy()
    locus = int(rng.integers(genes.size))
    value = rng.uniform(0.0, bounds[locus])
    while value <= 0.0:  # keep the open interval exact
        value = rng.uniform(0.0, bounds[locus])
    out[locus] = value
    return out


def mutate(individual: Individual, problem: UnfoldProblem, rng: np.random.Generator) -> Individual:
    """Redraw exactly one locus uniformly inside (0, b_i)."""
    return Individual(_mutate_genes(individual.genes, problem.bounds, rng), None)


def _arith_crossover(
    a: FloatArray, b: FloatArray, rng: np.random.Generator
) -> tuple[FloatArray, FloatArray]:
    u = rng.uniform()
    return u * a + (1.0 - u) * b, (1.0 - u) * a + u * b


def crossover(
    p1: Individual, p2: Individual, rng: np.random.Generator
) -> tuple[Individual, Individual]:
    """Whole arithmetic crossover: one shared blend factor for all genes."""
    if p1.genes.size != p2.genes.size:
        raise ValueError("parents must have the same gene count")
    o1, o2 = _arith_crossover(p1.genes, p2.genes, rng)
    return Individual(o1, None), Individual(o2, None)


def _roulette_indices(
    fitness: FloatArray, count: int, rng: np.random.Generator
) -> np.ndarray:
    lo = float(fitness.min())
    hi = float(fitness.max())
    weights = fitness - lo + _SELECTION_EPS_SCALE * (hi - lo + 1.0)
    cum = np.cumsum(weights)
    draws = rng.uniform(0.0, cum[-1], size=count)
    return np.searchsorted(cum, draws, side="right").clip(max=fitness.size - 1)


def roulette_select(
    population: list[Individual], count: int, rng: np.random.Generator
) -> list[Individual]:
    """Sample with replacement, probability proportional to range-shifted
    fitness; all-equal fitness degenerates to uniform selection."""
    if not population:
        raise ValueError("cannot select from an empty population")
    if any(ind.fitness is None for ind in population):
        raise ValueError("roulette selection needs every fitness cached")
    fitness = np.array([ind.fitness for ind in population], dtype=np.float64)
    idx = _roulette_indices(fitness, count, rng)
    return [population[i].copy() for i in idx]


def _score_pool(
    fn: FitnessFunction, problem: UnfoldProblem, pool: FloatArray
) -> tuple[FloatArray, FloatArray | None]:
    """Fitness of every pool row; for f3 also the residual scores that
    built the population context."""
    if fn.kind == "f3":
        s = residual_scores_batch(problem, pool)
        ctx = PopulationContext(s)
        return evaluate_batch(fn, problem, pool, ctx), s
    return evaluate_batch(fn, problem, pool), None


def run_ga(
    problem: UnfoldProblem,
    fitness_fn: FitnessFunction,
    config: GaConfig,
    reference=None,
    observer=None,
) -> RunTrace:
    """Run the GA; deterministic given config.seed.

    reference, when given, is used only to annotate the trace with the
    history best's quality factor — it never influences the search.
    observer(iteration, genes, fitness) is called after each selection with
    the new population (read-only).
    """
    rng = np.random.default_rng(config.seed)
    n = problem.n_groups
    pop = _init_population(problem, config.population_size, rng)
    track_by_s = fitness_fn.kind == "f3"

    init_fit, init_s = _score_pool(fitness_fn, problem, pop)
    best_idx = int(np.argmin(init_s)) if track_by_s else int(np.argmax(init_fit))
    hist_genes = pop[best_idx].copy()
    hist_fit = float(init_fit[best_idx])
    hist_s = float(init_s[best_idx]) if track_by_s else np.nan
    initial_best_genes = hist_genes.copy()
    initial_best_fitness = hist_fit
    initial_best_qs = qs(reference, hist_genes) if reference is not None else np.nan

    iters = config.max_iterations
    gen_best = np.empty(iters)
    hist_best_fit = np.empty(iters)
    hist_best_qs = np.full(iters, np.nan)
    quantiles = np.empty((iters, 5))
    last_best = Individual(hist_genes.copy(), hist_fit)

    for it in range(iters):
        rows = [pop]
        # disjoint random pairs; each pair crosses with prob crossover_prob
        perm = rng.permutation(config.population_size)
        for k in range(config.population_size // 2):
            if rng.random() < config.crossover_prob:
                o1, o2 = _arith_crossover(pop[perm[2 * k]], pop[perm[2 * k + 1]], rng)
                rows.append(o1[None, :])
                rows.append(o2[None, :])
        for i in range(config.population_size):
            if rng.random() < config.mutation_prob:
                rows.append(_mutate_genes(pop[i], problem.bounds, rng)[None, :])
        pool = np.vstack(rows) if len(rows) > 1 else pop

        fit, s = _score_pool(fitness_fn, problem, pool)

        if track_by_s:
            cand = int(np.argmin(s))
            if float(s[cand]) < hist_s:
                hist_s = float(s[cand])
                hist_genes = pool[cand].copy()
            hist_fit = 2.0 * float(s.max()) - hist_s
        else:
            cand = int(np.argmax(fit))
            if float(fit[cand]) > hist_fit:
                hist_fit = float(fit[cand])
                hist_genes = pool[cand].copy()

        gen_best[it] = float(fit.max())
        hist_best_fit[it] = hist_fit
        if reference is not None:
            hist_best_qs[it] = qs(reference, hist_genes)
        quantiles[it] = np.quantile(fit, [0.0, 0.25, 0.5, 0.75, 1.0])

        best_pool_idx = int(np.argmax(fit))
        last_best = Individual(pool[best_pool_idx].copy(), float(fit[best_pool_idx]))

        selected = _roulette_indices(fit, config.population_size, rng)
        pop = pool[selected].copy()
        sel_fit = fit[selected].copy()
        if config.elitism:
            pop[0] = pool[best_pool_idx]
            sel_fit[0] = fit[best_pool_idx]
        if observer is not None:
            observer(it, pop, sel_fit)

    return RunTrace(
        fitness_kind=fitness_fn.kind,
        gen_best_fitness=gen_best,
        hist_best_fitness=hist_best_fit,
        hist_best_qs=hist_best_qs,
        fitness_quantiles=quantiles,
        history_best=Individual(hist_genes, hist_fit),
        last_best=last_best,
        initial_best_genes=initial_best_genes,
        initial_best_fitness=initial_best_fitness,
        initial_best_qs=initial_best_qs,
    )
