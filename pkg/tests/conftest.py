import numpy as np
import pytest

from evounfold import (
    DetectorCounts,
    EnergyGrid,
    ResponseMatrix,
    Spectrum,
    UnfoldProblem,
)


def random_problem(rng, m=5, n=8):
    """Small random problem with strictly positive response and counts."""
    response = ResponseMatrix(rng.uniform(0.1, 1.0, (m, n)))
    counts = DetectorCounts(rng.uniform(0.5, 2.0, m))
    return UnfoldProblem(response, counts)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_problem(rng):
    return random_problem(rng)


@pytest.fixture
def identity_problem():
    """5x5 identity response: counts equal the spectrum exactly."""
    response = ResponseMatrix(np.eye(5))
    counts = DetectorCounts(np.array([1.0, 2.0, 3.0, 4.0, 5.0]))
    return UnfoldProblem(response, counts)


@pytest.fixture
def small_grid():
    return EnergyGrid.default(8)


@pytest.fixture
def small_spectrum(small_grid):
    return Spectrum(small_grid, np.linspace(1.0, 2.0, 8))
