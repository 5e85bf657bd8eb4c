"""
Shared fixtures for the Signed Qubit Entropy test suite
"""

import os
import sys

import numpy as np
import pytest

# Add parent directory to path to import app
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.services import (  # noqa: E402
    DualGeometryService,
    EntropyService,
    MaxEntSolver,
    OracleService,
    PhaseSpaceService,
)

INV_SQRT3 = 1.0 / np.sqrt(3.0)
DIAGONAL_STATE = (INV_SQRT3, INV_SQRT3, INV_SQRT3)

# q* for the state above: (1 + e_n . r) / 8
DIAGONAL_Q = np.array([
    1 + np.sqrt(3.0),
    1 + INV_SQRT3,
    1 + INV_SQRT3,
    1 - INV_SQRT3,
    1 + INV_SQRT3,
    1 - INV_SQRT3,
    1 - INV_SQRT3,
    1 - np.sqrt(3.0),
]) / 8.0


def random_ball(rng, count, radius=1.0):
    """Points drawn uniformly from the ball of the given radius in R^3."""
    directions = rng.standard_normal((count, 3))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    radii = radius * rng.random(count) ** (1.0 / 3.0)
    return directions * radii[:, None]


def random_directions(rng, count):
    d = rng.standard_normal((count, 3))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope='session')
def phase_space():
    return PhaseSpaceService()


@pytest.fixture(scope='session')
def entropy():
    return EntropyService()


@pytest.fixture(scope='session')
def solver():
    return MaxEntSolver()


@pytest.fixture(scope='session')
def geometry():
    return DualGeometryService()


@pytest.fixture(scope='session')
def oracle(solver, entropy):
    return OracleService(solver=solver, entropy=entropy)
