import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from phase_ring import DeformationData  # noqa: E402
from presentations import (  # noqa: E402
    even_sphere, free_algebra, ground_field, nc_torus, odd_sphere,
)


# Random property tests are seeded; override with --seed or TORIC_TEST_SEED.
def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        action="store",
        default=os.environ.get("TORIC_TEST_SEED", "20240917"),
        help="Seed for randomized property tests (defaults to env TORIC_TEST_SEED).",
    )


@pytest.fixture
def rng(pytestconfig):
    val = pytestconfig.getoption("--seed")
    try:
        return random.Random(int(val))
    except ValueError:
        return random.Random(val)


@pytest.fixture
def theta2():
    """Rank-2 deformation with theta = [[0,1],[-1,0]]."""
    return DeformationData.from_matrix([[0, 1], [-1, 0]])


@pytest.fixture
def theta1():
    """Rank 1: every bicharacter is trivial."""
    return DeformationData.commutative(1)


@pytest.fixture
def flat2():
    return DeformationData.commutative(2)


@pytest.fixture
def plane(theta2):
    """Quantum plane F_{(1,0),(0,1)}: y*x = q x*y."""
    return free_algebra(theta2, [("x", (1, 0)), ("y", (0, 1))])


@pytest.fixture
def line(theta1):
    """F_m on one generator of degree (1)."""
    return free_algebra(theta1, [("x", (1,))]).with_name("Fm")


@pytest.fixture
def field_k(theta1):
    return ground_field(theta1)


@pytest.fixture
def torus1(theta1):
    """Torus on one pair x, xs with xs*x = 1."""
    return nc_torus(theta1, [(1,)])


@pytest.fixture
def torus2(theta2):
    """Noncommutative 2-torus x1, xs1, x2, xs2."""
    return nc_torus(theta2, [(1, 0), (0, 1)])


@pytest.fixture
def sphere3(theta2):
    return odd_sphere(theta2, [(1, 0), (0, 1)])


@pytest.fixture
def sphere4(theta2):
    return even_sphere(theta2, [(1, 0), (0, 1)])


@pytest.fixture
def sphere2(theta1):
    """Even sphere on one pair: x, xs, z with xs*x + z^2 = 1."""
    return even_sphere(theta1, [(1,)])
