import math

import pytest
from hypothesis import settings

from dyonlab.units import make_constants

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def quarter():
    """alpha = 1/4: e = 1/2, g0 = 1, phi_m0 = 4 pi, phi_e0 = 2 pi."""
    return make_constants(0.25)


@pytest.fixture
def codata():
    return make_constants()


TWO_PI = 2 * math.pi


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
