import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jacobi_needlets import JacobiParams

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PAIRS = [(0.0, 0.0), (0.5, 0.5), (2.0, 0.0), (-0.4, 0.3)]


@pytest.fixture(params=PAIRS, ids=lambda ab: f"a{ab[0]:g}_b{ab[1]:g}")
def params(request):
    return JacobiParams(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
