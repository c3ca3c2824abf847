import numpy as np
import pytest

from hilbert_clark.potential import PotentialContext
from hilbert_clark.sequences import WeightedNodeSet


@pytest.fixture
def two_point():
    return WeightedNodeSet.line([-1.0, 1.0], [1.0, 1.0])


@pytest.fixture
def single_node():
    return WeightedNodeSet.line([0.0], [1.0])


@pytest.fixture
def cube_roots():
    gamma = np.exp(2j * np.pi * np.arange(3) / 3)
    return WeightedNodeSet.circle(gamma, np.full(3, 2.0 / 3.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_line(rng, n):
    gamma = rng.uniform(-10.0, 10.0, n)
    v = 5.0 - rng.uniform(0.0, 5.0, n)
    return WeightedNodeSet.line(gamma, v)


def random_circle(rng, n):
    gamma = np.exp(1j * rng.uniform(0.0, 2 * np.pi, n))
    v = 5.0 - rng.uniform(0.0, 5.0, n)
    return WeightedNodeSet.circle(gamma, v)


def ctx(nodes):
    return PotentialContext(nodes)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one verdict line per acceptance criterion."""
    return request.config.stash.setdefault(_ACCEPTANCE_KEY, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
