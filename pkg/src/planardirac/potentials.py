"""Interaction profiles and the full potential configuration.

A PotentialConfig carries the base mass m0 together with three radial (or
Cartesian) profiles: the scalar S entering the mass as m(r) = m0 + S(r),
the time component A0 of the vector potential, and the rotated planar
vector coupling of magnitude a(r) directed along r-hat (the oscillator
coupling a = m0 w r is the canonical confining case).

Profile evaluation comes in two flavours: `radial(r, m0)` for the reduced
one-dimensional problem and `planar(grid, m0)` for grid operators. The
Cartesian `linear-x` profile exists for the operator-ordering experiments;
it is periodized with a smooth compactly supported window and is rejected
by rotationally symmetric consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import ConfigError
from .grids import GridSpec, bump_window

# Window geometry for periodizing non-decaying Cartesian profiles: flat out
# to WINDOW_FLAT * L, exactly zero beyond WINDOW_ZERO * L (seam at 0.5 * L).
# Identities on windowed profiles are asserted inside the flat region only.
WINDOW_FLAT = 0.25
WINDOW_ZERO = 0.47


@dataclass(frozen=True)
class Constant:
    value: float = 0.0

    radial_ok = True

    def radial(self, r, m0):
        return np.full_like(np.asarray(r, dtype=float), self.value)

    def planar(self, grid: GridSpec, m0):
        return np.full((grid.n, grid.n), self.value)

    def negated(self):
        return Constant(-self.value)

    def is_zero(self):
        return self.value == 0.0


@dataclass(frozen=True)
class Linear:
    """Radially linear profile slope * r (the confining family)."""

    slope: float

    radial_ok = True

    def radial(self, r, m0):
        return self.slope * np.asarray(r, dtype=float)

    def planar(self, grid: GridSpec, m0):
        return self.slope * grid.r

    def negated(self):
        return Linear(-self.slope)

    def is_zero(self):
        return self.slope == 0.0


@dataclass(frozen=True)
class Oscillator:
    """a(r) = m0 * omega * r, the planar oscillator coupling."""

    omega: float

    radial_ok = True

    def radial(self, r, m0):
        return m0 * self.omega * np.asarray(r, dtype=float)

    def planar(self, grid: GridSpec, m0):
        return m0 * self.omega * grid.r

    def negated(self):
        return Oscillator(-self.omega)

    def is_zero(self):
        return self.omega == 0.0


@dataclass(frozen=True)
class LinearX:
    """Cartesian profile slope * x, smoothly windowed onto the periodic box.

    Not rotationally symmetric: radial consumers reject it.
    """

    slope: float

    radial_ok = False

    def radial(self, r, m0):
        raise ConfigError("linear-x profile is not rotationally symmetric")

    def planar(self, grid: GridSpec, m0):
        x = grid.xy[0]
        w = bump_window(x, WINDOW_FLAT * grid.length, WINDOW_ZERO * grid.length)
        return self.slope * x * w

    def negated(self):
        return LinearX(-self.slope)

    def is_zero(self):
        return self.slope == 0.0


@dataclass(frozen=True)
class Coulomb:
    """strength / r with an explicit core-regularization radius r_core > 0."""

    strength: float
    r_core: float

    radial_ok = True

    def __post_init__(self):
        if self.r_core <= 0:
            raise ConfigError("coulomb profile requires r_core > 0")

    def radial(self, r, m0):
        r = np.asarray(r, dtype=float)
        return self.strength / np.maximum(r, self.r_core)

    def planar(self, grid: GridSpec, m0):
        return self.strength / np.maximum(grid.r, self.r_core)

    def negated(self):
        return Coulomb(-self.strength, self.r_core)

    def is_zero(self):
        return self.strength == 0.0


@lru_cache(maxsize=64)
def _natural_spline(rs: tuple, values: tuple):
    """Second derivatives of the natural cubic spline through the table."""
    rs_arr = np.asarray(rs, dtype=float)
    vs = np.asarray(values, dtype=float)
    n = len(rs_arr)
    h = np.diff(rs_arr)
    m2 = np.zeros(n)
    if n > 2:
        a = np.zeros((n - 2, n - 2))
        rhs = np.zeros(n - 2)
        for i in range(1, n - 1):
            j = i - 1
            a[j, j] = 2 * (h[i - 1] + h[i])
            if j > 0:
                a[j, j - 1] = h[i - 1]
            if j < n - 3:
                a[j, j + 1] = h[i]
            rhs[j] = 6 * ((vs[i + 1] - vs[i]) / h[i] - (vs[i] - vs[i - 1]) / h[i - 1])
        m2[1:-1] = np.linalg.solve(a, rhs)
    return rs_arr, vs, m2


@dataclass(frozen=True)
class Tabulated:
    """Radial profile given by samples (r_i, v_i).

    Evaluated with a natural cubic spline (clamped flat outside the table)
    so spectrally differentiated fields built from it stay smooth; linear
    interpolation kinks would dominate identity residuals.
    """

    rs: tuple
    values: tuple

    radial_ok = True

    def __post_init__(self):
        if len(self.rs) != len(self.values) or len(self.rs) < 2:
            raise ConfigError("tabulated profile needs matching r and value lists")
        if any(b <= a for a, b in zip(self.rs, self.rs[1:])):
            raise ConfigError("tabulated radii must be strictly increasing")

    def _spline(self):
        return _natural_spline(tuple(self.rs), tuple(self.values))

    def radial(self, r, m0):
        return self._eval(np.asarray(r, dtype=float))

    def planar(self, grid: GridSpec, m0):
        return self._eval(grid.r)

    def _eval(self, r):
        rs, vs, m2 = self._spline()
        r_cl = np.clip(r, rs[0], rs[-1])
        idx = np.clip(np.searchsorted(rs, r_cl) - 1, 0, len(rs) - 2)
        h = rs[idx + 1] - rs[idx]
        t = (r_cl - rs[idx]) / h
        return (
            (1 - t) * vs[idx]
            + t * vs[idx + 1]
            + h * h / 6.0 * ((1 - t) ** 3 - (1 - t)) * m2[idx]
            + h * h / 6.0 * (t**3 - t) * m2[idx + 1]
        )

    def negated(self):
        return Tabulated(self.rs, tuple(-v for v in self.values))

    def is_zero(self):
        return all(v == 0.0 for v in self.values)


Profile = Union[Constant, Linear, LinearX, Oscillator, Coulomb, Tabulated]

_PROFILE_KINDS = {
    "constant": (Constant, ("value",)),
    "linear": (Linear, ("slope",)),
    "linear-x": (LinearX, ("slope",)),
    "oscillator": (Oscillator, ("omega",)),
    "coulomb": (Coulomb, ("strength", "r_core")),
    "tabulated": (Tabulated, ("rs", "values")),
}


def profile_from_dict(spec: dict) -> Profile:
    """Strict profile parser: {"kind": name, ...params}; unknown keys rejected."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"profile spec must be a dict with a 'kind' key, got {spec!r}")
    kind = spec["kind"]
    if kind not in _PROFILE_KINDS:
        raise ConfigError(
            f"unknown profile kind {kind!r}; known: {sorted(_PROFILE_KINDS)}"
        )
    cls, params = _PROFILE_KINDS[kind]
    extra = set(spec) - {"kind", *params}
    if extra:
        raise ConfigError(f"unknown profile keys for {kind!r}: {sorted(extra)}")
    missing = [p for p in params if p not in spec]
    if missing:
        raise ConfigError(f"profile {kind!r} missing keys: {missing}")
    kwargs = {p: spec[p] for p in params}
    if kind == "tabulated":
        kwargs = {"rs": tuple(kwargs["rs"]), "values": tuple(kwargs["values"])}
    return cls(**kwargs)


@dataclass(frozen=True)
class PotentialConfig:
    """Base mass plus the three interaction profiles (S, A0, a)."""

    m0: float
    S: Profile = Constant(0.0)
    A0: Profile = Constant(0.0)
    a: Profile = Constant(0.0)

    def __post_init__(self):
        if self.m0 <= 0:
            raise ConfigError(f"base mass must be positive, got {self.m0}")

    @property
    def is_radial(self) -> bool:
        return all(p.radial_ok for p in (self.S, self.A0, self.a))

    @property
    def is_free(self) -> bool:
        return all(p.is_zero() for p in (self.S, self.A0, self.a))

    @property
    def a_is_confining(self) -> bool:
        """True when the vector coupling grows without bound (needs box conditioning)."""
        return isinstance(self.a, (Oscillator, Linear)) and not self.a.is_zero()

    def mass_radial(self, r):
        return self.m0 + self.S.radial(r, self.m0)

    def flipped_vector(self) -> "PotentialConfig":
        """Same config with a -> -a (the partner under the representation flip)."""
        return PotentialConfig(self.m0, self.S, self.A0, self.a.negated())

    def planar_fields(self, grid: GridSpec) -> dict:
        """Sampled mass, A0 and vector components a1, a2 = a(r) * r-hat."""
        x, y = grid.xy
        r = grid.r
        mass = self.m0 + self.S.planar(grid, self.m0)
        a0 = self.A0.planar(grid, self.m0)
        a_mag = self.a.planar(grid, self.m0)
        with np.errstate(invalid="ignore", divide="ignore"):
            a1 = np.where(r > 0, a_mag * x / np.maximum(r, 1e-300), 0.0)
            a2 = np.where(r > 0, a_mag * y / np.maximum(r, 1e-300), 0.0)
        return {"mass": mass, "A0": a0, "a1": a1, "a2": a2}


def free_config(m0: float = 1.0) -> PotentialConfig:
    return PotentialConfig(m0=m0)


def oscillator_config(m0: float = 1.0, omega: float = 0.1) -> PotentialConfig:
    return PotentialConfig(m0=m0, a=Oscillator(omega))
