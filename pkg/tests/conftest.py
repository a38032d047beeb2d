"""Shared fixtures: grids, catalog signals, and the expensive measurement
vectors / factorizations are computed once per session."""

import numpy as np
import pytest

import liftphase as lp


@pytest.fixture(scope="session")
def grid():
    return lp.paper_grid()


@pytest.fixture(scope="session")
def window():
    return lp.get_window("gaussian")


@pytest.fixture(scope="session")
def gaussian():
    return lp.get_signal("gaussian")


@pytest.fixture(scope="session")
def modulated():
    return lp.get_signal("modulated")


@pytest.fixture(scope="session")
def b_quad(grid, window, gaussian, modulated):
    """Quadrature measurement vectors for both catalog signals."""
    return {
        "gaussian": lp.measure(gaussian, window, grid, method="quadrature"),
        "modulated": lp.measure(modulated, window, grid, method="quadrature"),
    }


@pytest.fixture(scope="session")
def b_quad_rotated(grid, window, gaussian):
    """Quadrature measurements of the globally phase-rotated first signal."""
    rotated = lp.phase_rotated(gaussian, 0.7)
    return lp.measure(rotated, window, grid, method="quadrature")


@pytest.fixture(scope="session")
def b_series(grid, window, gaussian, modulated):
    return {
        "gaussian": lp.measure(gaussian, window, grid, method="series"),
        "modulated": lp.measure(modulated, window, grid, method="series"),
    }


@pytest.fixture(scope="session")
def paper_system(grid, window):
    """Assembled lifted system for the bundled grid, SVD cached."""
    return lp.cached_system(window, grid)


@pytest.fixture(scope="session")
def small_setup(window):
    """Small grid (N=21, K=7, delta=3) for oracle-scale tests."""
    grid = lp.half_integer_grid(21, 7, 0.5 / 7.0, 3)
    system = lp.cached_system(window, grid)
    return grid, system


def random_banded_hermitian(n, half_width, rng):
    """Random structurally Hermitian banded matrix."""
    dense = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    dense = 0.5 * (dense + dense.conj().T)
    return lp.BandedMatrix.from_dense(dense, half_width, hermitian=True)


def random_lattice_vector(n, rng, min_mag=0.1):
    """Random complex vector with magnitudes bounded away from zero."""
    mags = rng.uniform(min_mag, 1.0, n)
    phases = np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
    return mags * phases


def rank_one_banded(vec, half_width):
    """Band restriction of the outer product vec vec*."""
    return lp.BandedMatrix.from_dense(
        np.outer(vec, np.conj(vec)), half_width, hermitian=True)


def align_phase(candidate, reference):
    """Rotate candidate by the best global phase toward reference."""
    corr = np.vdot(candidate, reference)
    if corr == 0:
        return candidate
    return candidate * np.exp(1j * np.angle(corr))
