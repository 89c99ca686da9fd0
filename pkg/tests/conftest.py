import numpy as np
import pytest

from freespec.freesets import commuting_context, example_context_s2, pseudo_ellipse_context

ACCEPTANCE_LINES = []


@pytest.fixture(params=["s1", "s2"])
def ctx(request):
    return pseudo_ellipse_context() if request.param == "s1" else example_context_s2()


@pytest.fixture
def ctx1():
    return pseudo_ellipse_context()


@pytest.fixture
def ctx2():
    return example_context_s2()


@pytest.fixture
def ctx_commuting():
    return commuting_context()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
