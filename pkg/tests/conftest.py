import numpy as np
import pytest

from maoutage import scenarios
from maoutage.config import Region, SystemConfig
from maoutage.optimizer import random_layout


@pytest.fixture(scope="session")
def downlink():
    return scenarios.downlink_config()


@pytest.fixture(scope="session")
def cdf_cfg():
    return scenarios.cdf_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def layouts(downlink):
    gen = np.random.default_rng(7)
    return [random_layout(downlink, gen) for _ in range(100)]


def single_user_cfg(num_antennas=4, rician_k=15.0, power=10.0, beta=1e-9, noise=1e-9, angle=0.4):
    return SystemConfig(num_antennas, 1, power, beta, rician_k, noise, angle, angle, 0.2,
                        tuple(Region(k, k + 0.5, 0, 0.5) for k in range(num_antennas)))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
