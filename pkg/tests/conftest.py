import numpy as np
import pytest

from lognls.gausson import GaussonParams, gausson_field
from lognls.grid import Field, make_grid


@pytest.fixture(scope="session")
def grid1():
    return make_grid(1, 12.0, 256)


@pytest.fixture(scope="session")
def grid2():
    return make_grid(2, 10.0, 128)


@pytest.fixture(scope="session")
def phi0(grid1):
    return gausson_field(GaussonParams(0.0, 1), grid1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_field(grid, rng, band_limit=3.0, width=2.0):
    """Band-limited complex noise under a centered Gaussian envelope."""
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs[grid.k_sq > band_limit**2] = 0
    noise = np.fft.ifftn(coeffs)
    noise /= np.abs(noise).max()
    return Field(grid, np.exp(-grid.radius_sq / (2 * width**2)) * noise)
