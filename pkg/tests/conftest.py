import numpy as np
import pytest

from rsum._backend import available_backends


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
