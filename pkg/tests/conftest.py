import numpy as np
import pytest

from dbkit import resolve_model
from dbkit.models import from_zero_data


@pytest.fixture(scope="session")
def dim1():
    return resolve_model("dim1")


@pytest.fixture(scope="session")
def cheb2():
    return resolve_model("cheb2")


@pytest.fixture(scope="session")
def cheb5():
    return resolve_model("chebN:5")


@pytest.fixture(scope="session")
def sine21():
    zeros0 = list(range(-10, 11))
    zeros_half = [k + 0.5 for k in range(-10, 11)]
    return from_zero_data(zeros0, zeros_half, scale=1.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
