"""Forward model: convolve a spectrum into counts and add measurement noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DetectorCounts, FloatArray, ResponseMatrix, Spectrum, UnfoldProblem

NOISE_MODES = ("relative", "absolute")

# counts perturbed to <= 0 are clamped to this fraction of the clean value
_CLAMP_FRACTION = 0.01


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian measurement noise.

    relative mode: each count is scaled by (1 + g_j), g_j ~ N(0, relative_sigma).
    absolute mode: one shared sigma of relative_sigma * mean(clean counts) is
    added to every detector.
    """

    relative_sigma: float = 0.05
    seed: int = 0
    mode: str = "relative"

    def __post_init__(self):
        if not (0.0 <= self.relative_sigma < 1.0):
            raise ValueError(f"relative_sigma must be in [0, 1), got {self.relative_sigma}")
        if self.mode not in NOISE_MODES:
            raise ValueError(f"mode must be one of {NOISE_MODES}, got {self.mode!r}")


def _fluence_of(spectrum) -> FloatArray:
    if isinstance(spectrum, Spectrum):
        return spectrum.fluence
    return np.asarray(spectrum, dtype=np.float64)


def convolve(response: ResponseMatrix, spectrum) -> FloatArray:
    """Noise-free counts: out_j = sum_i R_ji * phi_i."""
    phi = _fluence_of(spectrum)
    if phi.ndim != 1 or phi.size != response.cols:
        raise ValueError(
            f"spectrum has {phi.size} groups but response has {response.cols} columns"
        )
    return response.values @ phi


def add_noise(clean_counts, noise: NoiseSpec) -> DetectorCounts:
    """Perturb strictly positive clean counts; deterministic given noise.seed."""
    clean = np.asarray(clean_counts, dtype=np.float64)
    if clean.ndim != 1:
        raise ValueError("clean counts must be a 1-d vector")
    if not np.all(np.isfinite(clean)) or np.any(clean <= 0.0):
        raise ValueError("clean counts must be finite and strictly positive")
    rng = np.random.default_rng(noise.seed)
    if noise.mode == "relative":
        noisy = clean * (1.0 + rng.normal(0.0, noise.relative_sigma, clean.size))
    else:
        sigma = noise.relative_sigma * float(clean.mean())
        noisy = clean + rng.normal(0.0, sigma, clean.size)
    noisy = np.where(noisy <= 0.0, clean * _CLAMP_FRACTION, noisy)
    return DetectorCounts(noisy)


def make_problem(
    response: ResponseMatrix, reference: Spectrum, noise: NoiseSpec
) -> tuple[UnfoldProblem, Spectrum]:
    """Synthesize a problem instance from a reference spectrum.

    Returns the problem (noisy counts plus derived bounds) together with the
    reference spectrum, kept aside for quality scoring only.
    """
    clean = convolve(response, reference)
    counts = add_noise(clean, noise)
    return UnfoldProblem(response, counts), reference
