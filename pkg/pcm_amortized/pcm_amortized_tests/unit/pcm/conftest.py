import numpy as np
import pytest

from pcm_amortized.pcm import Dataset, split_indices


def quadratic_objective(X, U):
    return X[:, 0] ** 2 + (U[:, 0] - 0.3) ** 2


@pytest.fixture
def tiny_dataset():
    """60 samples of ``x^2 + (u - 0.3)^2`` on [-1, 1]^2."""
    rng = np.random.default_rng(3)
    X = rng.uniform(-1.0, 1.0, size=(60, 1))
    U = rng.uniform(-1.0, 1.0, size=(60, 1))
    train, valid, test = split_indices(60, (0.7, 0.2, 0.1), rng)
    return Dataset(X, U, quadratic_objective(X, U), train, valid, test)
