import numpy as np
import pytest

from parkable import bodies
from parkable.geometry.body import convex_hull


@pytest.fixture(scope="session")
def cube():
    return bodies.cube()


@pytest.fixture(scope="session")
def cross():
    return bodies.cross_polytope()


@pytest.fixture(scope="session")
def ball():
    return bodies.ball(3)


@pytest.fixture(scope="session")
def ball2562():
    return bodies.ball(4)


@pytest.fixture(scope="session")
def ball162():
    return bodies.ball(2)


@pytest.fixture(scope="session")
def diag149():
    return bodies.ellipsoid(np.diag([1.0, 4.0, 9.0]))


@pytest.fixture(scope="session")
def square():
    return bodies.cube(dim=2)


@pytest.fixture(scope="session")
def triangle():
    return convex_hull([[0, 0], [1, 0], [0, 1]])


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
