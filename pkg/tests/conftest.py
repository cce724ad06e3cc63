import numpy as np
import pytest

from fracphase.hermite import HermiteExpansion
from fracphase.signal import Grid


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def default_grid():
    return Grid.symmetric(12.0, 1024)


@pytest.fixture(scope="session")
def wide_grid():
    # room for dilated and sheared states
    return Grid.symmetric(16.0, 1024)


def random_expansion(rng, max_index):
    c = rng.normal(size=max_index + 1) + 1j * rng.normal(size=max_index + 1)
    return HermiteExpansion(c / np.linalg.norm(c))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance check")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
