import numpy as np
import pytest

from usdeg import phantoms


@pytest.fixture(scope="session")
def smooth64():
    return phantoms.smooth_phantom(64)


@pytest.fixture(scope="session")
def piecewise128():
    return phantoms.piecewise_phantom(128)


@pytest.fixture()
def rand_image():
    def make(seed: int, h: int = 16, w: int = 16) -> np.ndarray:
        return np.random.default_rng(seed).random((h, w))

    return make
