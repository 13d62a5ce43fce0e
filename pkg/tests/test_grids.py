import numpy as np
import pytest

from planardirac.errors import ConfigError
from planardirac.grids import (
    GridSpec,
    ScalarField,
    SpinorField,
    bump_window,
    gaussian_spinor,
    random_band_limited_spinor,
    spectral_derivative,
)


@pytest.fixture
def grid():
    return GridSpec(n=64, length=10.0)


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec(n=48, length=10.0)  # not a power of two
    with pytest.raises(ConfigError):
        GridSpec(n=4, length=10.0)
    with pytest.raises(ConfigError):
        GridSpec(n=64, length=-1.0)


def test_single_mode_derivative_exact(grid):
    x, _ = grid.xy
    k = 2 * np.pi / grid.length
    f = np.sin(k * x).astype(complex)
    df = spectral_derivative(f, grid, 0)
    exact = k * np.cos(k * x)
    assert np.max(np.abs(df - exact)) <= 1e-12 * np.max(np.abs(exact))


def test_constant_derivative_is_zero(grid):
    f = np.full((grid.n, grid.n), 3.7, dtype=complex)
    for axis in (0, 1):
        assert np.max(np.abs(spectral_derivative(f, grid, axis))) < 1e-13


def test_gaussian_derivative_matches_analytic():
    # width >= 8h keeps the Gaussian band-limited; the box must also be
    # wide enough (L/2 >= 6 sigma) that periodization tails are negligible
    grid = GridSpec(n=128, length=10.0)
    sigma = 8 * grid.h
    x, y = grid.xy
    f = np.exp(-(x**2 + y**2) / (2 * sigma**2)).astype(complex)
    df = spectral_derivative(f, grid, 0)
    exact = -(x / sigma**2) * f
    assert np.max(np.abs(df - exact)) <= 1e-8


def test_derivative_shape_and_axis_guards(grid):
    with pytest.raises(ConfigError):
        spectral_derivative(np.zeros((32, 32), dtype=complex), grid, 0)
    with pytest.raises(ConfigError):
        spectral_derivative(np.zeros((64, 64), dtype=complex), grid, 2)


def test_bump_window_exact_plateaus():
    u = np.linspace(-6, 6, 2001)
    w = bump_window(u, 2.0, 4.0)
    assert np.all(w[np.abs(u) <= 2.0] == 1.0)
    assert np.all(w[np.abs(u) >= 4.0] == 0.0)
    assert np.all((w >= 0) & (w <= 1))
    assert np.all(np.diff(w[(u >= 2.0) & (u <= 4.0)]) <= 1e-12)


def test_spinor_norm_and_dot(grid):
    psi = gaussian_spinor(grid, sigma=0.8)
    n2 = psi.dot(psi).real
    assert n2 == pytest.approx(psi.norm() ** 2, rel=1e-12)


def test_band_limited_spinor_is_unit_norm(grid):
    rng = np.random.default_rng(11)
    psi = random_band_limited_spinor(grid, rng)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)


def test_field_shape_guards(grid):
    with pytest.raises(ConfigError):
        SpinorField(np.zeros((2, 32, 32), dtype=complex), grid)
    with pytest.raises(ConfigError):
        ScalarField(np.zeros((32, 32)), grid)
    bad = np.zeros((2, 64, 64), dtype=complex)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ConfigError):
        SpinorField(bad, grid)
