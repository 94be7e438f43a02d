import math

import numpy as np
import pytest

from lcsurf.fixtures import paper_example, twisted_revolution

TWO_PI = 2 * math.pi


@pytest.fixture(scope="session")
def surf():
    return paper_example()


@pytest.fixture(scope="session")
def twisted():
    return twisted_revolution()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
