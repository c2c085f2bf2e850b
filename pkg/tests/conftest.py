"""
Shared fixtures for the imaging test suite
"""

import os

# Keep test runs from writing logs/music.log
os.environ.setdefault('LOG_FILE', '')

import numpy as np
import pytest
from scipy import integrate

from src.core.geometry import discretize_curve, gamma1, sample_directions
from src.imaging.grid import ImageGrid
from src.utils.config import SceneConfig

WAVELENGTH = 0.4
OMEGA = 2.0 * np.pi / WAVELENGTH


def bessel_oracle(p: int, x: float) -> float:
    """J_p(x) = (1/pi) int_0^pi cos(p tau - x sin tau) dtau"""
    value, _ = integrate.quad(lambda tau: np.cos(p * tau - x * np.sin(tau)), 0.0, np.pi,
                              epsabs=1e-14, epsrel=1e-14, limit=200)
    return value / np.pi


@pytest.fixture
def omega():
    return OMEGA


@pytest.fixture
def dirs24():
    return sample_directions(24)


@pytest.fixture
def dirs128():
    return sample_directions(128)


@pytest.fixture(scope='session')
def gamma1_geometry():
    return discretize_curve(gamma1(), WAVELENGTH / 2.0)


@pytest.fixture
def square_grid():
    return ImageGrid((-1.0, 1.0), (-1.0, 1.0), 41, 41)


@pytest.fixture
def full_grid():
    return ImageGrid((-1.0, 1.0), (-1.0, 1.0), 128, 128)


@pytest.fixture
def small_scene():
    """gamma1 permittivity scene on a coarse grid"""
    cfg = SceneConfig.from_preset('gamma1-eps')
    cfg.grid.nx = 48
    cfg.grid.ny = 48
    return cfg
