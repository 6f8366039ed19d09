import numpy as np
import pytest

from korovkin import GridDomain, RealFunction

ACCEPTANCE_LINES = []


@pytest.fixture
def unit():
    return GridDomain.interval(0.0, 1.0, 101)


@pytest.fixture
def x():
    return RealFunction.projection(0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
