import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def within_3_sigma(count: int, trials: int, p: float) -> bool:
    """Binomial count lies within three standard errors of ``trials * p``."""
    sigma = np.sqrt(trials * p * (1 - p))
    return abs(count - trials * p) <= 3 * sigma
