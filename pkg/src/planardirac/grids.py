"""Periodic 2-D grids, spinor/scalar fields and spectral derivatives.

The box is [-L/2, L/2)^2 sampled on n points per side (n a power of two)
with periodic identification of opposite edges. Derivatives are Fourier
derivatives: exact for band-limited fields, so operator-identity residuals
are limited only by field smoothness, and the first-order Dirac operator
has no spurious lattice branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """n x n periodic box of side `length`, spacing h = length / n."""

    n: int
    length: float

    def __post_init__(self):
        if not _is_power_of_two(self.n) or self.n < 8:
            raise ConfigError(f"grid size must be a power of two >= 8, got {self.n}")
        if self.length <= 0:
            raise ConfigError(f"box length must be positive, got {self.length}")

    @property
    def h(self) -> float:
        return self.length / self.n

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.length / 2 + self.h * np.arange(self.n)

    @cached_property
    def xy(self) -> tuple:
        x, y = np.meshgrid(self.axis, self.axis, indexing="ij")
        return x, y

    @cached_property
    def r(self) -> np.ndarray:
        x, y = self.xy
        return np.hypot(x, y)

    @cached_property
    def wavenumbers(self) -> tuple:
        k = 2 * np.pi * np.fft.fftfreq(self.n, d=self.h)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        return kx, ky


def spectral_derivative(values: np.ndarray, grid: GridSpec, axis: int) -> np.ndarray:
    """Fourier derivative along axis 0 (x) or 1 (y) of an (n, n) array."""
    if values.shape[-2:] != (grid.n, grid.n):
        raise ConfigError(
            f"field shape {values.shape} does not match grid n={grid.n}"
        )
    if axis not in (0, 1):
        raise ConfigError(f"axis must be 0 or 1, got {axis}")
    k = grid.wavenumbers[axis]
    return np.fft.ifft2(1j * k * np.fft.fft2(values))


@dataclass(frozen=True)
class ScalarField:
    """Real scalar sampled on the grid."""

    values: np.ndarray  # (n, n) real
    grid: GridSpec

    def __post_init__(self):
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ConfigError("scalar field shape does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("scalar field contains non-finite entries")

    def gradient(self) -> tuple:
        dx = spectral_derivative(self.values.astype(complex), self.grid, 0).real
        dy = spectral_derivative(self.values.astype(complex), self.grid, 1).real
        return dx, dy


@dataclass(frozen=True)
class SpinorField:
    """Two-component complex field on the grid, stored as a (2, n, n) array."""

    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        if self.values.shape != (2, self.grid.n, self.grid.n):
            raise ConfigError("spinor field shape must be (2, n, n)")
        if not np.all(np.isfinite(self.values)):
            raise ConfigError("spinor field contains non-finite entries")

    def norm(self) -> float:
        h = self.grid.h
        return float(np.sqrt(h * h * np.sum(np.abs(self.values) ** 2)))

    def dot(self, other: "SpinorField") -> complex:
        h = self.grid.h
        return complex(h * h * np.vdot(self.values, other.values))

    def density(self) -> np.ndarray:
        return np.abs(self.values[0]) ** 2 + np.abs(self.values[1]) ** 2

    def derivative(self, axis: int) -> "SpinorField":
        return SpinorField(spectral_derivative(self.values, self.grid, axis), self.grid)

    def __add__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.values + other.values, self.grid)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        return SpinorField(self.values - other.values, self.grid)

    def scale(self, c) -> "SpinorField":
        return SpinorField(c * self.values, self.grid)


def _ramp(t: np.ndarray) -> np.ndarray:
    """Polynomial ramp, exactly 0 for t <= 0 and exactly 1 for t >= 1.

    The cubic smoothstep composed four times vanishes to 16th order at
    both plateaus; its spectral leakage on a 128-point axis is ~1e-11,
    measured as the interior error of the Fourier derivative of x*w(x).
    """
    t = np.clip(t, 0.0, 1.0)
    for _ in range(4):
        t = t * t * (3.0 - 2.0 * t)
    return t


def bump_window(u: np.ndarray, flat: float, zero: float) -> np.ndarray:
    """Smooth compactly supported window of |u|.

    Exactly 1 for |u| <= flat, exactly 0 for |u| >= zero, with a
    high-order-flat polynomial transition, so spectral derivatives of
    windowed profiles stay accurate. The transition needs >= ~10 grid
    points to be resolved; on coarser grids residuals grow accordingly.
    """
    if not 0 < flat < zero:
        raise ConfigError("window needs 0 < flat < zero")
    return 1.0 - _ramp((np.abs(u) - flat) / (zero - flat))


def gaussian_spinor(
    grid: GridSpec,
    sigma: float,
    weights: tuple = (1.0, 0.4),
    phase: tuple = (0.9, -0.5),
) -> SpinorField:
    """The standard localized test spinor: a centered Gaussian envelope with
    a plane-wave phase on the lower component to keep it generic."""
    x, y = grid.xy
    env = np.exp(-(x**2 + y**2) / (2 * sigma**2))
    upper = weights[0] * env
    lower = weights[1] * env * np.exp(1j * (phase[0] * x + phase[1] * y))
    return SpinorField(np.stack([upper.astype(complex), lower]), grid)


def random_band_limited_spinor(
    grid: GridSpec, rng: np.random.Generator, k_fraction: float = 0.33
) -> SpinorField:
    """Random spinor whose spectrum is confined to |k| <= k_fraction * k_max,
    so spectral derivatives of it are exact to rounding."""
    kx, ky = grid.wavenumbers
    k_max = np.pi / grid.h
    mask = (np.abs(kx) <= k_fraction * k_max) & (np.abs(ky) <= k_fraction * k_max)
    comps = []
    for _ in range(2):
        spec = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal(
            (grid.n, grid.n)
        )
        comps.append(np.fft.ifft2(spec * mask))
    psi = SpinorField(np.stack(comps), grid)
    return psi.scale(1.0 / psi.norm())
