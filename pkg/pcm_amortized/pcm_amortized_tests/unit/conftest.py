import numpy as np
import pytest

from pcm_amortized.approximators import ModelKind, NetworkShape, init_network
from pcm_amortized.numerics import RngSeed
from pcm_amortized.solvers import Box


@pytest.fixture
def seed():
    return RngSeed(1234)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def small_shape():
    """Small 1-D shape used across approximator and solver tests."""
    return NetworkShape(x_dim=1, u_dim=1, num_terms=4, temperature=0.5, hidden=(6,), sub_hidden=(4,))


@pytest.fixture
def unit_box():
    return Box.uniform(-1.0, 1.0, 1)


@pytest.fixture
def plse_plus_net(small_shape, seed):
    return init_network(ModelKind.PLSE_PLUS, small_shape, seed)


@pytest.fixture
def eplse_model(small_shape, seed, unit_box):
    return init_network(ModelKind.EPLSE, small_shape, seed, u_box=unit_box)
