import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from zetapprox.pipeline import build_context, fit_family  # noqa: E402
from zetapprox.regions import build_sets  # noqa: E402
from zetapprox.zeta import find_zero_ordinates  # noqa: E402


@pytest.fixture(scope="session")
def zero_table():
    return find_zero_ordinates(50.0)


@pytest.fixture(scope="session")
def sets(zero_table):
    """index -> (params, Q, classification, K, fattened K)."""
    return {i: build_sets(i, zero_table) for i in (1, 2, 3, 4)}


@pytest.fixture(scope="session")
def ctx1():
    return build_context(1)


@pytest.fixture(scope="session")
def fit_P1(ctx1):
    return fit_family(ctx1, "algebraic", 128)


@pytest.fixture(scope="session")
def fit_D1(ctx1):
    return fit_family(ctx1, "dirichlet", 400)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
