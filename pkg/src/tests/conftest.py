"""
Shared test fixtures and configuration for cloudrain tests.

This module provides common fixtures, small particle configurations and the
``--run-slow`` option gating the long Monte Carlo checks.
"""

import numpy as np
import pytest

from cloudrain.consts import brownian_sweep_dt, brownian_sweep_table
from cloudrain.core import make_generator, volume_from_radius
from cloudrain.types import Domain, ParticleSet, SimConfig, SweepRow


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run slow Monte Carlo acceptance tests",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running Monte Carlo test")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def test_config():
    """Provide test configuration constants."""
    return {
        "seed": 20240611,
        "half_width": 2.0,
        "rain_radius": 0.0004,
    }


@pytest.fixture
def domain():
    return Domain()


@pytest.fixture
def rng():
    return make_generator(12345)


@pytest.fixture
def small_config():
    """Fast configuration: few particles, few epochs, Brownian motion only."""
    return SimConfig(n_particles=50, max_epochs=20)


@pytest.fixture
def random_particles():
    """200 particles with random positions and radii in [0.01, 0.05]."""
    gen = make_generator(7)
    positions = gen.uniform(-2.0, 2.0, size=(200, 2))
    volumes = volume_from_radius(gen.uniform(0.01, 0.05, size=200))
    return ParticleSet.from_arrays(positions, volumes)


@pytest.fixture
def overlapping_pair():
    """Two touching particles whose combined volume exceeds one raindrop."""
    v = 0.6 * volume_from_radius(0.0004)
    return ParticleSet.from_arrays(np.zeros((2, 2)), [v, v])


@pytest.fixture
def brownian_rows():
    """The reference Brownian sweep as SweepRows."""
    return [
        SweepRow(
            value=sigma,
            mean_epoch=epoch,
            mean_time=epoch * brownian_sweep_dt,
            std_dev=std,
            n_replicas=10,
        )
        for sigma, epoch, std in brownian_sweep_table
    ]
