import functools

import pytest

from gradslip.moment_core import build_system
from gradslip.couette import build_couette


@functools.lru_cache(maxsize=None)
def system(M):
    return build_system(M)


@functools.lru_cache(maxsize=None)
def couette(M, chi=1.0):
    return build_couette(M, chi)


@pytest.fixture
def sys_of():
    return system


@pytest.fixture
def couette_of():
    return couette


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
