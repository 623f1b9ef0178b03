import math

import pytest

from crackdyn.crack_physics import NondimModel
from crackdyn.modal_solver import modal_basis

MID = math.pi / 2


@pytest.fixture(scope="session")
def uniform_model():
    return NondimModel()


@pytest.fixture(scope="session")
def mid_model():
    return NondimModel((MID,), (1.0,))


@pytest.fixture(scope="session")
def two_crack_model():
    return NondimModel((1.0, 2.2), (0.5, 2.0))


@pytest.fixture(scope="session")
def uniform_basis(uniform_model):
    return modal_basis(uniform_model, 10)


@pytest.fixture(scope="session")
def mid_basis(mid_model):
    return modal_basis(mid_model, 6)


@pytest.fixture(scope="session")
def two_crack_basis(two_crack_model):
    return modal_basis(two_crack_model, 8)
