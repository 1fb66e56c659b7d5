import numpy as np
import pytest

from uwofdm.config import SystemConfig, default_80211a_like
from uwofdm.generator import build_generator


@pytest.fixture(scope="session")
def cfg():
    return default_80211a_like()


@pytest.fixture(scope="session")
def gen(cfg):
    return build_generator(cfg)


@pytest.fixture(scope="session")
def small_cfg():
    # N=8, N_u=N_r=2, no zero carriers
    return SystemConfig(n_total=8, n_uw=2, n_red=2, n_data=6,
                        zero_carrier_indices=(), redundant_carrier_indices=(2, 6))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
