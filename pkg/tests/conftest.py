import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from slicealgebra import clifford_algebra


@pytest.fixture(scope="session")
def quaternions():
    return clifford_algebra(0, 2)


@pytest.fixture(scope="session")
def complex_algebra():
    return clifford_algebra(0, 1)


@pytest.fixture(scope="session")
def cl03():
    return clifford_algebra(0, 3)


@pytest.fixture(scope="session")
def cl11():
    return clifford_algebra(1, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
