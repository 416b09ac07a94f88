"""Shared fixtures."""

from pathlib import Path

import pytest

from rht.cohomology import LieAlgebra, chevalley_eilenberg
from rht.sasaki import BasicRing, build_model

CORPUS = Path(__file__).resolve().parent.parent / 'corpus'


@pytest.fixture
def corpus() -> Path:
    return CORPUS


@pytest.fixture(scope='session')
def h3():
    return LieAlgebra.heisenberg(1)


@pytest.fixture(scope='session')
def h5():
    return LieAlgebra.heisenberg(2)


@pytest.fixture(scope='session')
def ce_h3(h3):
    return chevalley_eilenberg(h3)


@pytest.fixture(scope='session')
def ce_h5(h5):
    return chevalley_eilenberg(h5)


@pytest.fixture(scope='session')
def model_h3():
    return build_model(BasicRing.heisenberg(1))


@pytest.fixture(scope='session')
def model_h5():
    return build_model(BasicRing.heisenberg(2))
