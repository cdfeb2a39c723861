"""Solution quality scoring and cross-run summary statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FloatArray, Spectrum

QS_VARIANTS = ("calculated", "reference")


def _vec(x) -> FloatArray:
    if isinstance(x, Spectrum):
        return x.fluence
    return np.asarray(x, dtype=np.float64)


def qs(reference, calculated, variant: str = "calculated") -> float:
    """Percent shape distance 100 * sqrt(sum((ref - cal)^2) / sum(den^2)).

    The default denominator is the calculated spectrum, as the quality
    factor is printed in its source; variant="reference" normalizes by the
    reference instead. A perfect solution scores 0. An all-zero denominator
    spectrum scores inf (the limit of the ratio), or 0 if both spectra are
    identically zero, so degenerate candidates rank worst instead of
    aborting a run.
    """
    if variant not in QS_VARIANTS:
        raise ValueError(f"variant must be one of {QS_VARIANTS}, got {variant!r}")
    ref = _vec(reference)
    cal = _vec(calculated)
    if ref.shape != cal.shape:
        raise ValueError(f"length mismatch: reference {ref.shape} vs calculated {cal.shape}")
    den = cal if variant == "calculated" else ref
    den_sum = float(np.sum(den**2))
    num_sum = float(np.sum((ref - cal) ** 2))
    if den_sum == 0.0:
        return 0.0 if num_sum == 0.0 else float("inf")
    return 100.0 * float(np.sqrt(num_sum / den_sum))


def qs_batch(reference, genes: FloatArray, variant: str = "calculated") -> FloatArray:
    """qs() for every row of an (N, n) gene matrix."""
    if variant not in QS_VARIANTS:
        raise ValueError(f"variant must be one of {QS_VARIANTS}, got {variant!r}")
    ref = _vec(reference)
    genes = np.asarray(genes, dtype=np.float64)
    if genes.ndim != 2 or genes.shape[1] != ref.size:
        raise ValueError(f"genes must be (N, {ref.size}), got shape {genes.shape}")
    num = np.sum((genes - ref) ** 2, axis=1)
    if variant == "calculated":
        den = np.sum(genes**2, axis=1)
    else:
        den = np.full(num.shape, np.sum(ref**2))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 100.0 * np.sqrt(num / den)
    out = np.where(den == 0.0, np.where(num == 0.0, 0.0, np.inf), out)
    return out


def normalize_fitness(values) -> FloatArray:
    """Min-max map onto [0, 1]; a constant input maps to all 0.5."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty value list")
    if not np.all(np.isfinite(arr)):
        raise ValueError("cannot normalize non-finite values")
    lo, hi = float(arr.min()), float(arr.max())
    if hi == lo:
        return np.full_like(arr, 0.5)
    return (arr - lo) / (hi - lo)


def population_stddev(values) -> float:
    """Standard deviation with the divide-by-N convention used in all summaries."""
    return float(np.std(np.asarray(values, dtype=np.float64)))


@dataclass
class RunSummary:
    """Final quality of one (algorithm, fitness, spectrum) cell.

    qs_history_best is the source of truth; the statistics properties are
    recomputed from it on access. qs_last_best keeps the last-generation
    best alongside, which matters for f3 where history and last diverge.
    """

    algorithm: str
    fitness_kind: str
    spectrum: str
    qs_history_best: list[float]
    qs_last_best: list[float] = field(default_factory=list)
    qs_initial: list[float] = field(default_factory=list)
    p1_history_best: list[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.qs_history_best))

    @property
    def median(self) -> float:
        return float(np.median(self.qs_history_best))

    @property
    def stddev(self) -> float:
        return population_stddev(self.qs_history_best)

    @property
    def min(self) -> float:
        return float(np.min(self.qs_history_best))

    @property
    def max(self) -> float:
        return float(np.max(self.qs_history_best))

    def stats(self) -> dict[str, float]:
        return {
            "mean": self.mean,
            "median": self.median,
            "stddev": self.stddev,
            "min": self.min,
            "max": self.max,
        }


def summarize(
    runs,
    reference: Spectrum,
    algorithm: str = "",
    fitness_kind: str = "",
    spectrum: str = "",
) -> RunSummary:
    """Collapse independent run traces of one cell into a RunSummary."""
    from .fitness import penalty_p1

    if not runs:
        raise ValueError("summarize needs at least one run trace")
    summary = RunSummary(algorithm, fitness_kind, spectrum, [], [], [], [])
    for trace in runs:
        summary.qs_history_best.append(qs(reference, trace.history_best.genes))
        summary.qs_last_best.append(qs(reference, trace.last_best.genes))
        summary.qs_initial.append(
            trace.initial_best_qs
            if np.isfinite(trace.initial_best_qs)
            else qs(reference, trace.initial_best_genes)
        )
        summary.p1_history_best.append(penalty_p1(trace.history_best.genes))
    return summary
