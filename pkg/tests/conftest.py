"""Shared fixtures and random-instance helpers."""

from pathlib import Path

import numpy as np
import pytest

from gmmot import Gaussian, validate_mixture

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def random_psd(rng, n, singular=False):
    """Random PSD matrix A^T A, optionally with a zeroed eigenvalue."""
    a = rng.standard_normal((n, n))
    m = a.T @ a
    if singular and n > 1:
        w, v = np.linalg.eigh(m)
        w[0] = 0.0
        m = v @ np.diag(w) @ v.T
    return (m + m.T) / 2.0


def random_gaussian(rng, n, mean_scale=2.0, singular=False) -> Gaussian:
    return Gaussian(
        mean_scale * rng.standard_normal(n), random_psd(rng, n, singular=singular)
    )


def random_mixture(rng, n, max_components=4, mean_scale=2.0):
    size = int(rng.integers(1, max_components + 1))
    weights = rng.uniform(0.2, 1.0, size=size)
    weights /= weights.sum()
    comps = [random_gaussian(rng, n, mean_scale=mean_scale) for _ in range(size)]
    return validate_mixture(weights, comps)
