"""Differential evolution: rand/1 mutation, binomial crossover, greedy
one-to-one selection.

The mutation formula is printed in its source with a plus sign between the
two difference donors; standard DE uses the difference and a sum drifts the
population out of its box, so the difference is the default and the printed
sum stays available as mutation_sign="sum" for fidelity experiments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FloatArray, UnfoldProblem
from .fitness import FitnessFunction, PopulationContext, evaluate_batch, residual_scores_batch
from .ga import Individual, RunTrace, _init_population
from .metrics import qs

MUTATION_SIGNS = ("difference", "sum")


@dataclass(frozen=True)
class DeaConfig:
    population_size: int = 200
    max_iterations: int = 3000
    scale_factor: float = 0.5
    crossover_prob: float = 0.9
    seed: int = 0
    mutation_sign: str = "difference"
    force_crossover_gene: bool = True

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4 (three donors plus the target)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (0.0 < self.scale_factor < 2.0):
            raise ValueError("scale_factor must be in (0, 2)")
        if not (0.0 <= self.crossover_prob <= 1.0):
            raise ValueError("crossover_prob must be in [0, 1]")
        if self.mutation_sign not in MUTATION_SIGNS:
            raise ValueError(f"mutation_sign must be one of {MUTATION_SIGNS}")


def _donor_indices(size: int, target: int, rng: np.random.Generator) -> tuple[int, int, int]:
    picks: list[int] = []
    while len(picks) < 3:
        c = int(rng.integers(size))
        if c != target and c not in picks:
            picks.append(c)
    return picks[0], picks[1], picks[2]


def de_mutate(
    population: FloatArray,
    target_index: int,
    bounds: FloatArray,
    config: DeaConfig,
    rng: np.random.Generator,
) -> FloatArray:
    """Temporary individual x1 + F*(x2 - x3) from three donors that are
    mutually distinct and distinct from the target; clamped into [0, b]."""
    population = np.asarray(population, dtype=np.float64)
    if population.shape[0] < 4:
        raise ValueError("population must hold at least 4 individuals")
    i1, i2, i3 = _donor_indices(population.shape[0], target_index, rng)
    if config.mutation_sign == "difference":
        tem = population[i1] + config.scale_factor * (population[i2] - population[i3])
    else:
        tem = population[i1] + config.scale_factor * (population[i2] + population[i3])
    return np.clip(tem, 0.0, bounds)


def de_crossover(
    target: FloatArray,
    temporary: FloatArray,
    pc: float,
    rng: np.random.Generator,
    force_gene: bool = True,
) -> FloatArray:
    """Binomial crossover: each gene comes from the temporary when u < pc.

    With force_gene (default) one uniformly chosen gene is always taken
    from the temporary so the offspring never clones the target; switch it
    off for the strict as-printed rule.
    """
    target = np.asarray(target, dtype=np.float64)
    temporary = np.asarray(temporary, dtype=np.float64)
    if target.shape != temporary.shape:
        raise ValueError("target and temporary must have the same length")
    mask = rng.random(target.size) < pc
    offspring = np.where(mask, temporary, target)
    if force_gene:
        j = int(rng.integers(target.size))
        offspring[j] = temporary[j]
    return offspring


def de_select(target: Individual, offspring: Individual) -> Individual:
    """Greedy one-to-one selection: the offspring must be strictly fitter
    to displace the target; ties keep the target."""
    if target.fitness is None or offspring.fitness is None:
        raise ValueError("both individuals must carry a cached fitness")
    return offspring if offspring.fitness > target.fitness else target


def run_dea(
    problem: UnfoldProblem,
    fitness_fn: FitnessFunction,
    config: DeaConfig,
    reference=None,
    observer=None,
) -> RunTrace:
    """Run the DE solver; deterministic given config.seed.

    Initialization matches the GA's. For f3, target and offspring of one
    generation are scored against a shared context built from the
    pre-generation population plus all offspring, which reduces greedy
    selection to keeping the lower residual score.
    """
    rng = np.random.default_rng(config.seed)
    npop = config.population_size
    pop = _init_population(problem, npop, rng)
    track_by_s = fitness_fn.kind == "f3"

    if track_by_s:
        s_pop = residual_scores_batch(problem, pop)
        fit = 2.0 * float(s_pop.max()) - s_pop
    else:
        s_pop = None
        fit = evaluate_batch(fitness_fn, problem, pop)

    best_idx = int(np.argmin(s_pop)) if track_by_s else int(np.argmax(fit))
    hist_genes = pop[best_idx].copy()
    hist_fit = float(fit[best_idx])
    hist_s = float(s_pop[best_idx]) if track_by_s else np.nan
    initial_best_genes = hist_genes.copy()
    initial_best_fitness = hist_fit
    initial_best_qs = qs(reference, hist_genes) if reference is not None else np.nan

    iters = config.max_iterations
    gen_best = np.empty(iters)
    hist_best_fit = np.empty(iters)
    hist_best_qs = np.full(iters, np.nan)
    quantiles = np.empty((iters, 5))
    slot_fitness = np.empty((iters, npop))

    for it in range(iters):
        offspring = np.empty_like(pop)
        for slot in range(npop):
            tem = de_mutate(pop, slot, problem.bounds, config, rng)
            offspring[slot] = de_crossover(
                pop[slot], tem, config.crossover_prob, rng, config.force_crossover_gene
            )

        if track_by_s:
            s_off = residual_scores_batch(problem, offspring)
            shared_max = float(max(s_pop.max(), s_off.max()))
            fit = 2.0 * shared_max - s_pop
            off_fit = 2.0 * shared_max - s_off
        else:
            off_fit = evaluate_batch(fitness_fn, problem, offspring)

        take = off_fit > fit
        pop[take] = offspring[take]
        fit = np.where(take, off_fit, fit)
        if track_by_s:
            s_pop = np.where(take, s_off, s_pop)
            cand = int(np.argmin(s_pop))
            if float(s_pop[cand]) < hist_s:
                hist_s = float(s_pop[cand])
                hist_genes = pop[cand].copy()
            hist_fit = 2.0 * float(max(s_pop.max(), hist_s)) - hist_s
        else:
            cand = int(np.argmax(fit))
            if float(fit[cand]) > hist_fit:
                hist_fit = float(fit[cand])
                hist_genes = pop[cand].copy()

        gen_best[it] = float(fit.max())
        hist_best_fit[it] = hist_fit
        if reference is not None:
            hist_best_qs[it] = qs(reference, hist_genes)
        quantiles[it] = np.quantile(fit, [0.0, 0.25, 0.5, 0.75, 1.0])
        slot_fitness[it] = fit
        if observer is not None:
            observer(it, pop, fit)

    last_idx = int(np.argmax(fit))
    return RunTrace(
        fitness_kind=fitness_fn.kind,
        gen_best_fitness=gen_best,
        hist_best_fitness=hist_best_fit,
        hist_best_qs=hist_best_qs,
        fitness_quantiles=quantiles,
        history_best=Individual(hist_genes, hist_fit),
        last_best=Individual(pop[last_idx].copy(), float(fit[last_idx])),
        initial_best_genes=initial_best_genes,
        initial_best_fitness=initial_best_fitness,
        initial_best_qs=initial_best_qs,
        slot_fitness=slot_fitness,
    )
