"""Grid realizations of the first-order and quadratic Dirac operators.

The stationary first-order operator acting on two-component fields is

    H = A0 + sigma.p - i s sigma.(sigma_3 a) + sigma_3 (m0 + S),

with sigma = (sigma_1, s sigma_2) and p = -i grad. Expanding the matrix
products gives the component form used below,

    (H psi)_u = A0 u - i dv/dx - s dv/dy + (a2 + i s a1) v + m u
    (H psi)_v = A0 v - i du/dx + s du/dy + (a2 - i s a1) u - m v,

which is Hermitian for real A0, a and S.

The quadratic operators compose the stationary first-order factors
G(+-) = gamma^mu p_mu +- m(r) with p_0 -> E and p_j = i d_j: the naive
product G(-) G(+) differs from the mass-weighted form G(-) (1/m) G(+) by
the commutator defect i gamma^j (d_j m), because the momentum operator
differentiates the position-dependent mass. Both operators, the defect
field, and an independent prediction of their discrepancy live here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError
from .exact import Representation, as_rep
from .grids import GridSpec, ScalarField, SpinorField, spectral_derivative
from .potentials import PotentialConfig, WINDOW_FLAT

#: Relative positivity floor for the mass in the weighted quadratic operator.
MASS_FLOOR = 1e-6


def _dx(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    return spectral_derivative(values, grid, 0)


def _dy(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    return spectral_derivative(values, grid, 1)


def apply_hamiltonian_fields(
    values: np.ndarray, grid: GridSpec, fields: dict, s: int
) -> np.ndarray:
    """Apply the first-order H given sampled fields {mass, A0, a1, a2}.

    One batched forward transform serves both spinor components and both
    derivative directions (this is the hot loop of the grid eigensolver).
    """
    u, v = values[0], values[1]
    kx, ky = grid.wavenumbers
    spec = np.fft.fft2(values)
    d_x = np.fft.ifft2(1j * kx * spec)
    d_y = np.fft.ifft2(1j * ky * spec)
    du_x, dv_x = d_x[0], d_x[1]
    du_y, dv_y = d_y[0], d_y[1]
    a0, mass = fields["A0"], fields["mass"]
    a1, a2 = fields["a1"], fields["a2"]
    hu = a0 * u - 1j * dv_x - s * dv_y + (a2 + 1j * s * a1) * v + mass * u
    hv = a0 * v - 1j * du_x + s * du_y + (a2 - 1j * s * a1) * u - mass * v
    return np.stack([hu, hv])


def apply_first_order(
    psi: SpinorField, config: PotentialConfig, rep: Representation | int
) -> SpinorField:
    """H psi for the stationary first-order operator of the given config."""
    rep = as_rep(rep)
    fields = config.planar_fields(psi.grid)
    return SpinorField(
        apply_hamiltonian_fields(psi.values, psi.grid, fields, rep.s), psi.grid
    )


def free_dispersion(m0: float, kx: float, ky: float) -> float:
    """Positive-branch plane-wave eigenvalue sqrt(m0^2 + |k|^2) of the symbol."""
    return float(np.sqrt(m0 * m0 + kx * kx + ky * ky))


def plane_wave_eigenspinor(
    grid: GridSpec, m0: float, kx: float, ky: float, s: int, branch: int = +1
) -> SpinorField:
    """Exact eigenspinor of the free operator at a grid momentum (kx, ky).

    The 2x2 symbol sigma_1 k1 + s sigma_2 k2 + sigma_3 m0 has eigenvectors
    (m0 + w, k1 + i s k2) for the +w branch, w = sqrt(m0^2 + |k|^2).
    """
    w = free_dispersion(m0, kx, ky)
    if branch == +1:
        spinor = np.array([m0 + w, kx + 1j * s * ky])
    else:
        spinor = np.array([-(kx - 1j * s * ky), m0 + w])
    spinor = spinor / np.linalg.norm(spinor)
    x, y = grid.xy
    wave = np.exp(1j * (kx * x + ky * y))
    return SpinorField(np.stack([spinor[0] * wave, spinor[1] * wave]), grid)


def _check_same_grid(psi: SpinorField, mass: ScalarField):
    if psi.grid != mass.grid:
        raise ConfigError("spinor and mass fields live on different grids")


def _first_order_factor(
    values: np.ndarray, grid: GridSpec, mass: np.ndarray, energy: float, s: int, sign: int
) -> np.ndarray:
    """(gamma^mu p_mu + sign * m) with the stationary reduction p_0 -> E."""
    u, v = values[0], values[1]
    out_u = energy * u + 1j * _dx(v, grid) + s * _dy(v, grid) + sign * mass * u
    out_v = -energy * v - 1j * _dx(u, grid) + s * _dy(u, grid) + sign * mass * v
    return np.stack([out_u, out_v])


def apply_quadratic_incorrect(
    psi: SpinorField, mass: ScalarField, energy: float, rep: Representation | int
) -> SpinorField:
    """Naive product of the two first-order factors, no mass weighting.

    Equals (E^2 - |p|^2 - m^2) + i gamma^j (d_j m) as an operator; the
    derivative term is exactly what dropping the operator ordering loses.
    """
    _check_same_grid(psi, mass)
    rep = as_rep(rep)
    m = mass.values
    chi = _first_order_factor(psi.values, psi.grid, m, energy, rep.s, +1)
    out = _first_order_factor(chi, psi.grid, m, energy, rep.s, -1)
    return SpinorField(out, psi.grid)


def apply_quadratic_correct(
    psi: SpinorField, mass: ScalarField, energy: float, rep: Representation | int
) -> SpinorField:
    """Mass-weighted composition: left factor, pointwise 1/m, right factor.

    The mass must stay above MASS_FLOOR * min over the grid of |m|; the
    weighted form is undefined where m crosses zero and such inputs are
    refused rather than regularized.
    """
    _check_same_grid(psi, mass)
    rep = as_rep(rep)
    m = mass.values
    floor = MASS_FLOOR * max(abs(float(m.max())), 1.0)
    if float(m.min()) < floor:
        raise DomainError(
            f"mass field reaches {m.min():.3e}, below the positivity floor {floor:.3e}"
        )
    chi = _first_order_factor(psi.values, psi.grid, m, energy, rep.s, +1)
    out = _first_order_factor(chi / m, psi.grid, m, energy, rep.s, -1)
    return SpinorField(out, psi.grid)


@dataclass(frozen=True)
class DefectField:
    """Per-site 2x2 matrix i gamma^j (d_j m), stored as a (2, 2, n, n) array."""

    values: np.ndarray
    grid: GridSpec

    def apply(self, psi: SpinorField) -> SpinorField:
        d = self.values
        u, v = psi.values[0], psi.values[1]
        return SpinorField(
            np.stack([d[0, 0] * u + d[0, 1] * v, d[1, 0] * u + d[1, 1] * v]), psi.grid
        )

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


def commutator_defect(mass: ScalarField, rep: Representation | int) -> DefectField:
    """The operator-ordering defect i gamma^1 (dm/dx) + i gamma^2 (dm/dy).

    With i gamma^1 = [[0, i], [-i, 0]] and i gamma^2 = s sigma_1 this is
    off-diagonal: upper right i m_x + s m_y, lower left -i m_x + s m_y.
    """
    s = as_rep(rep).s
    m_x, m_y = mass.gradient()
    n = mass.grid.n
    d = np.zeros((2, 2, n, n), dtype=complex)
    d[0, 1] = 1j * m_x + s * m_y
    d[1, 0] = -1j * m_x + s * m_y
    return DefectField(d, mass.grid)


def _laplacian(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    kx, ky = grid.wavenumbers
    k2 = kx * kx + ky * ky
    return np.fft.ifft2(-k2 * np.fft.fft2(values))


def expansion_closed_form(
    psi: SpinorField, mass: ScalarField, energy: float, rep: Representation | int
) -> SpinorField:
    """(E^2 - |p|^2 - m^2) psi + i gamma^j (d_j m) psi, the expanded form."""
    m = mass.values
    lap = np.stack([_laplacian(psi.values[0], psi.grid), _laplacian(psi.values[1], psi.grid)])
    scalar = (energy * energy - m * m) * psi.values + lap
    defect = commutator_defect(mass, rep).apply(psi)
    return SpinorField(scalar + defect.values, psi.grid)


def interior_mask(grid: GridSpec) -> np.ndarray:
    """The window-interior region |x| <= WINDOW_FLAT * L where periodization
    windows are identically one; identity residuals are asserted there."""
    x = grid.xy[0]
    return np.abs(x) <= WINDOW_FLAT * grid.length


def verify_expansion(
    psi: SpinorField,
    mass: ScalarField,
    energy: float,
    rep: Representation | int,
    mask: np.ndarray | None = None,
) -> float:
    """Relative residual of the expansion identity, restricted to `mask`."""
    composed = apply_quadratic_incorrect(psi, mass, energy, rep)
    closed = expansion_closed_form(psi, mass, energy, rep)
    res = composed.values - closed.values
    if mask is not None:
        res = res * mask
    return float(np.linalg.norm(res) / (np.linalg.norm(psi.values) + 1e-300))


def defect_discrepancy(
    psi: SpinorField, mass: ScalarField, energy: float, rep: Representation | int
) -> dict:
    """Measured vs predicted mismatch between the weighted and naive forms.

    measured  = || m * Eq_weighted(psi) - Eq_naive(psi) || / ||psi||
    predicted = || (1/m) D (gamma p + m) psi || / ||psi||

    where D is the commutator-defect field. The prediction follows from
    m G(-) (1/m) chi = G(-) chi - (1/m) D chi and never composes the two
    quadratic operators, so agreement checks both code paths at once.
    """
    _check_same_grid(psi, mass)
    rep = as_rep(rep)
    m = mass.values
    norm = np.linalg.norm(psi.values)
    weighted = apply_quadratic_correct(psi, mass, energy, rep)
    naive = apply_quadratic_incorrect(psi, mass, energy, rep)
    measured = np.linalg.norm(m * weighted.values - naive.values) / norm

    chi = _first_order_factor(psi.values, psi.grid, m, energy, rep.s, +1)
    dchi = commutator_defect(mass, rep).apply(SpinorField(chi, psi.grid))
    predicted = np.linalg.norm(dchi.values / m) / norm
    return {"measured": float(measured), "predicted": float(predicted)}


@dataclass(frozen=True)
class DefectSweep:
    lambdas: tuple
    measured: tuple
    predicted: tuple
    slope_measured: float
    slope_predicted: float

    @property
    def slope_relative_error(self) -> float:
        return abs(self.slope_measured - self.slope_predicted) / abs(self.slope_predicted)


def linear_mass_field(grid: GridSpec, m0: float, lam: float) -> ScalarField:
    """m = m0 + lam * x, windowed onto the periodic box."""
    from .potentials import LinearX

    return ScalarField(m0 + LinearX(lam).planar(grid, m0), grid)


def defect_sweep(
    psi: SpinorField,
    m0: float,
    lambdas: tuple,
    energy: float,
    rep: Representation | int,
) -> DefectSweep:
    """Discrepancy norms over a slope sweep, with origin-constrained fits.

    Both series scale linearly in the mass slope; the fitted slopes must
    agree because the discrepancy operator is exactly the weighted defect.
    """
    measured, predicted = [], []
    for lam in lambdas:
        mass = linear_mass_field(psi.grid, m0, lam)
        d = defect_discrepancy(psi, mass, energy, rep)
        measured.append(d["measured"])
        predicted.append(d["predicted"])
    lam2 = sum(l * l for l in lambdas)
    slope_m = sum(l * d for l, d in zip(lambdas, measured)) / lam2
    slope_p = sum(l * d for l, d in zip(lambdas, predicted)) / lam2
    return DefectSweep(
        tuple(lambdas), tuple(measured), tuple(predicted), float(slope_m), float(slope_p)
    )


def hermiticity_residual(
    config: PotentialConfig,
    grid: GridSpec,
    rep: Representation | int,
    rng: np.random.Generator,
    trials: int = 4,
) -> float:
    """max |<u, Hv> - <Hu, v>| / (||u|| ||v||) over random band-limited pairs."""
    from .grids import random_band_limited_spinor

    rep = as_rep(rep)
    fields = config.planar_fields(grid)
    worst = 0.0
    for _ in range(trials):
        u = random_band_limited_spinor(grid, rng)
        v = random_band_limited_spinor(grid, rng)
        hu = apply_hamiltonian_fields(u.values, grid, fields, rep.s)
        hv = apply_hamiltonian_fields(v.values, grid, fields, rep.s)
        lhs = np.vdot(u.values, hv)
        rhs = np.vdot(hu, v.values)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)
