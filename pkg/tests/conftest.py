import numpy as np
import pytest

from shiftsim import ToleranceConfig


@pytest.fixture
def tol() -> ToleranceConfig:
    return ToleranceConfig()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)
