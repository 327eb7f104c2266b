import numpy as np
import pytest

from qeraser import ScreenGrid, SlitArray, make_slit_state, make_tagged_state, propagate_state

D, EPS, A = 5.0, 1.0, 50.0
OMEGA = EPS ** 2 + A ** 2 / EPS ** 2


@pytest.fixture
def slits():
    return SlitArray(3, D, EPS)


@pytest.fixture
def grid():
    return ScreenGrid(-120.0, 120.0, 4096)


@pytest.fixture
def pure(slits):
    return propagate_state(make_slit_state(slits), A)


@pytest.fixture
def tagged(slits):
    return propagate_state(make_tagged_state(slits), A)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
