"""The eight candidate-scoring functions and their shared sub-expressions.

All functions follow one contract: larger is fitter. Residual-style scores
(f2, f4, f7, f8) are reciprocals guarded by a small epsilon so an exact fit
stays finite; f5, written in the source material as a plain standard
deviation of count ratios, is inverted here for the same reason. f3 is the
odd one out: it scores an individual against the worst member of its own
population, so it needs a PopulationContext and its values are not
comparable across generations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FloatArray, Spectrum, UnfoldProblem
from .forward import convolve

FITNESS_KINDS = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8")


@dataclass(frozen=True)
class FitnessParams:
    """Constants of the scoring formulas; beta8 has no published value and
    defaults to the beta4/beta6 scale."""

    beta1: float = 0.1
    beta4: float = 100.0
    beta6: float = 100.0
    beta8: float = 100.0
    epsilon: float = 1e-12

    def __post_init__(self):
        for name in ("beta1", "beta4", "beta6", "beta8"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be > 0")


@dataclass(frozen=True)
class FitnessFunction:
    kind: str
    params: FitnessParams = field(default_factory=FitnessParams)

    def __post_init__(self):
        if self.kind not in FITNESS_KINDS:
            raise ValueError(f"kind must be one of {FITNESS_KINDS}, got {self.kind!r}")


@dataclass(frozen=True, eq=False)
class PopulationContext:
    """Residual scores S_k = sum_j (T_j/C_j)^2 of every individual in the
    current population; only f3 reads it."""

    residual_scores: FloatArray

    def __post_init__(self):
        arr = np.asarray(self.residual_scores, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("residual_scores must be a non-empty 1-d vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
            raise ValueError("residual_scores must be finite and >= 0")
        object.__setattr__(self, "residual_scores", arr)

    @property
    def max_score(self) -> float:
        return float(self.residual_scores.max())


def _fluence_of(candidate) -> FloatArray:
    if isinstance(candidate, Spectrum):
        return candidate.fluence
    arr = np.asarray(candidate, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("candidate must be a 1-d fluence vector")
    return arr


def residuals(problem: UnfoldProblem, candidate) -> FloatArray:
    """T_j = (reconstructed count)_j - C_j."""
    return convolve(problem.response, _fluence_of(candidate)) - problem.counts.values


def residual_score(problem: UnfoldProblem, candidate) -> float:
    """S = sum_j (T_j / C_j)^2, the shared chi-square-like residual."""
    t = residuals(problem, candidate)
    return float(np.sum((t / problem.counts.values) ** 2))


def residual_scores_batch(problem: UnfoldProblem, genes: FloatArray) -> FloatArray:
    """S for every row of an (N, n) gene matrix."""
    genes = np.asarray(genes, dtype=np.float64)
    recon = genes @ problem.response.values.T
    return np.sum(((recon - problem.counts.values) / problem.counts.values) ** 2, axis=1)


def penalty_p1(candidate) -> float:
    """Sum of squared first differences; small for smooth spectra."""
    phi = _fluence_of(candidate)
    if phi.size < 2:
        raise ValueError("first-difference penalty needs at least 2 groups")
    return float(np.sum(np.diff(phi) ** 2))


def penalty_p2(candidate) -> float:
    """Sum of squared second differences; zero on any linear ramp."""
    phi = _fluence_of(candidate)
    if phi.size < 3:
        raise ValueError("second-difference penalty needs at least 3 groups")
    return float(np.sum((phi[:-2] - 2.0 * phi[1:-1] + phi[2:]) ** 2))


def _penalties_batch(genes: FloatArray) -> tuple[FloatArray, FloatArray]:
    p1 = np.sum(np.diff(genes, axis=1) ** 2, axis=1)
    p2 = np.sum((genes[:, :-2] - 2.0 * genes[:, 1:-1] + genes[:, 2:]) ** 2, axis=1)
    return p1, p2


def scores_from_parts(
    kind: str,
    params: FitnessParams,
    reconstructed: FloatArray,
    counts: FloatArray,
    p1,
    p2,
    ctx: PopulationContext | None = None,
) -> FloatArray:
    """Evaluate one fitness formula from precomputed pieces.

    `reconstructed` is (N, m) for a batch of N candidates (or (m,) for one),
    `p1`/`p2` the matching penalty values. This is the single formula layer
    behind both evaluate() and evaluate_batch().
    """
    recon = np.atleast_2d(np.asarray(reconstructed, dtype=np.float64))
    c = np.asarray(counts, dtype=np.float64)
    t = recon - c
    p1 = np.atleast_1d(np.asarray(p1, dtype=np.float64))
    p2 = np.atleast_1d(np.asarray(p2, dtype=np.float64))
    eps = params.epsilon

    if kind == "f1":
        out = np.sum(params.beta1 - (t / (recon + c)) ** 2, axis=1)
    elif kind == "f2":
        s = np.sum((t / c) ** 2, axis=1)
        out = 1.0 / np.maximum(s, eps)
    elif kind == "f3":
        if ctx is None:
            raise ValueError("f3 needs a PopulationContext")
        s = np.sum((t / c) ** 2, axis=1)
        out = 2.0 * ctx.max_score - s
    elif kind == "f4":
        out = 1.0 / np.maximum(np.sum(t**2, axis=1) + params.beta4 * p1, eps)
    elif kind == "f5":
        spread = np.std(recon / c, axis=1)
        out = 1.0 / np.maximum(spread, eps)
    elif kind == "f6":
        out = params.beta6 - np.sum((t / c) ** 2, axis=1)
    elif kind == "f7":
        out = np.sqrt(np.sum(c**2) / np.maximum(np.sum(t**2, axis=1), eps))
    elif kind == "f8":
        s = np.sum((t / c) ** 2, axis=1)
        out = 1.0 / np.maximum(s + 0.5 * params.beta8 * (p1 + p2), eps)
    else:
        raise ValueError(f"unknown fitness kind {kind!r}")

    bad = ~np.isfinite(out)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(
            f"{kind} produced a non-finite value for candidate {i}: "
            f"residuals {t[i]}, p1 {p1[i % p1.size]}"
        )
    return out


def evaluate(
    fn: FitnessFunction,
    problem: UnfoldProblem,
    candidate,
    ctx: PopulationContext | None = None,
) -> float:
    """Score one candidate spectrum; larger is fitter."""
    phi = _fluence_of(candidate)
    recon = convolve(problem.response, phi)
    p1 = penalty_p1(phi) if phi.size >= 2 else 0.0
    p2 = penalty_p2(phi) if phi.size >= 3 else 0.0
    return float(
        scores_from_parts(fn.kind, fn.params, recon, problem.counts.values, p1, p2, ctx)[0]
    )


def evaluate_batch(
    fn: FitnessFunction,
    problem: UnfoldProblem,
    genes: FloatArray,
    ctx: PopulationContext | None = None,
) -> FloatArray:
    """Score every row of an (N, n) gene matrix in one pass."""
    genes = np.asarray(genes, dtype=np.float64)
    if genes.ndim != 2 or genes.shape[1] != problem.n_groups:
        raise ValueError(
            f"genes must be (N, {problem.n_groups}), got shape {genes.shape}"
        )
    recon = genes @ problem.response.values.T
    p1, p2 = _penalties_batch(genes)
    return scores_from_parts(fn.kind, fn.params, recon, problem.counts.values, p1, p2, ctx)
