"""
Shared pytest fixtures
"""
import numpy as np
import pytest
from loguru import logger

from services.evaluation_service import SyntheticObjective, convex_spec
from services.surrogate_service import KernelParams, condition
from shared.schemas import RunConfig


@pytest.fixture(autouse=True)
def quiet_logs():
    logger.remove()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fixed_params():
    return KernelParams(log_lengthscale=np.log(0.7), log_signal_variance=0.0, log_noise_variance=np.log(1e-6))


@pytest.fixture
def small_gp(fixed_params):
    """GP conditioned on 12 samples of a smooth d=3 function"""
    rng = np.random.default_rng(7)
    X = rng.uniform(0.0, 1.0, size=(12, 3))
    y = np.sin(3.0 * X[:, 0]) + X[:, 1] ** 2 - 0.5 * X[:, 2]
    return condition(X, y, fixed_params)


@pytest.fixture
def convex_objective():
    return SyntheticObjective(convex_spec())


def tiny_config(**overrides) -> RunConfig:
    data = {
        "d": 2,
        "objective": {"family": "PowerSum", "weights": [1.0, 1.0], "exponents": [2.0, 2.0], "seed": 0},
        "T": 2,
        "I": 5,
        "K": 2,
        "N_init": 6,
        "C_pool": 20,
        "batch": 3,
        "seed": 11,
    }
    data.update(overrides)
    return RunConfig.model_validate(data)


@pytest.fixture
def make_config():
    return tiny_config


@pytest.fixture
def tiny_cfg():
    return tiny_config()
