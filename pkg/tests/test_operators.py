import numpy as np
import pytest

from planardirac.errors import ConfigError, DomainError
from planardirac.exact import REP_MINUS, REP_PLUS
from planardirac.grids import GridSpec, ScalarField, gaussian_spinor, random_band_limited_spinor
from planardirac.operators import (
    apply_first_order,
    apply_quadratic_correct,
    apply_quadratic_incorrect,
    commutator_defect,
    defect_discrepancy,
    defect_sweep,
    expansion_closed_form,
    free_dispersion,
    hermiticity_residual,
    interior_mask,
    linear_mass_field,
    plane_wave_eigenspinor,
    verify_expansion,
)
from planardirac.potentials import Constant, PotentialConfig, free_config

GRID = GridSpec(n=64, length=10.0)
# identity tests need the window transition well resolved
GRID128 = GridSpec(n=128, length=10.0)


def _grid_momentum(j1, j2):
    k = 2 * np.pi / GRID.length
    return j1 * k, j2 * k


@pytest.mark.parametrize("s", [+1, -1])
@pytest.mark.parametrize("j1,j2,branch", [(0, 0, +1), (3, -2, +1), (1, 5, -1)])
def test_free_plane_wave_dispersion(s, j1, j2, branch):
    # independent oracle: the 2x2 symbol diagonalizes analytically
    m0 = 1.3
    kx, ky = _grid_momentum(j1, j2)
    psi = plane_wave_eigenspinor(GRID, m0, kx, ky, s, branch)
    hpsi = apply_first_order(psi, free_config(m0), s)
    expected = branch * free_dispersion(m0, kx, ky)
    residual = np.max(np.abs(hpsi.values - expected * psi.values))
    assert residual < 1e-12 * abs(expected)


def test_rest_energy():
    m0 = 0.7
    psi = plane_wave_eigenspinor(GRID, m0, 0.0, 0.0, +1)
    hpsi = apply_first_order(psi, free_config(m0), +1)
    assert np.max(np.abs(hpsi.values - m0 * psi.values)) < 1e-13


@pytest.mark.parametrize("s", [+1, -1])
def test_hermiticity_with_all_couplings(s):
    from planardirac.potentials import Oscillator, Tabulated

    config = PotentialConfig(
        m0=1.0,
        S=Tabulated(rs=(0.0, 3.0, 8.0), values=(0.2, -0.1, 0.05)),
        A0=Constant(0.4),
        a=Oscillator(0.3),
    )
    rng = np.random.default_rng(5)
    res = hermiticity_residual(config, GRID, s, rng)
    assert res <= 1e-10


def test_constant_mass_quadratic_closed_form():
    rng = np.random.default_rng(3)
    psi = random_band_limited_spinor(GRID, rng)
    mass = ScalarField(np.full((GRID.n, GRID.n), 1.2), GRID)
    e = 0.9
    out = apply_quadratic_incorrect(psi, mass, e, REP_PLUS)
    closed = expansion_closed_form(psi, mass, e, REP_PLUS)
    assert np.linalg.norm(out.values - closed.values) <= 1e-10 * np.linalg.norm(psi.values)


def test_plane_wave_on_shell_annihilated():
    # (gamma p - m)(gamma p + m) psi = (E^2 - m^2 - |k|^2) psi = 0 on shell
    m0 = 1.0
    kx, ky = _grid_momentum(2, 1)
    psi = plane_wave_eigenspinor(GRID, m0, kx, ky, +1)
    e = free_dispersion(m0, kx, ky)
    mass = ScalarField(np.full((GRID.n, GRID.n), m0), GRID)
    out = apply_quadratic_incorrect(psi, mass, e, REP_PLUS)
    assert np.linalg.norm(out.values) <= 1e-10 * np.linalg.norm(psi.values)


@pytest.mark.parametrize("s", [+1, -1])
def test_expansion_identity_windowed_linear_mass(s):
    psi = gaussian_spinor(GRID128, sigma=0.8)
    mass = linear_mass_field(GRID128, m0=1.0, lam=0.2)
    res = verify_expansion(psi, mass, energy=1.0, rep=s, mask=interior_mask(GRID128))
    assert res <= 1e-8


def test_expansion_identity_tabulated_radial_mass():
    from planardirac.grids import bump_window
    from planardirac.potentials import Tabulated

    psi = gaussian_spinor(GRID128, sigma=0.8)
    # dense table of a compactly supported smooth bump: flat at the origin
    # (the r-field has a cone there) and reaching zero with zero slope
    rs = np.linspace(0.0, 4.2, 65)
    vals = 0.3 * bump_window(rs, 1.2, 3.6)
    prof = Tabulated(rs=tuple(rs), values=tuple(vals))
    mass = ScalarField(1.0 + prof.planar(GRID128, 1.0), GRID128)
    res = verify_expansion(psi, mass, energy=1.0, rep=+1, mask=interior_mask(GRID128))
    # spline-interpolated tables are C^2 only; looser contract
    assert res <= 1e-6


def test_constant_mass_degeneracy():
    rng = np.random.default_rng(17)
    mass = ScalarField(np.full((GRID.n, GRID.n), 1.4), GRID)
    for _ in range(10):
        psi = random_band_limited_spinor(GRID, rng)
        weighted = apply_quadratic_correct(psi, mass, 1.1, REP_MINUS)
        naive = apply_quadratic_incorrect(psi, mass, 1.1, REP_MINUS)
        diff = mass.values * weighted.values - naive.values
        assert np.linalg.norm(diff) <= 1e-10 * np.linalg.norm(psi.values)


def test_mass_floor_guard():
    psi = gaussian_spinor(GRID, sigma=0.8)
    x, _ = GRID.xy
    mass = ScalarField(1.0 + 0.21 * x, GRID)  # crosses zero near the left edge
    with pytest.raises(DomainError):
        apply_quadratic_correct(psi, mass, 1.0, REP_PLUS)


def test_defect_field_constant_mass_vanishes():
    mass = ScalarField(np.full((GRID.n, GRID.n), 2.0), GRID)
    assert commutator_defect(mass, +1).max_abs() < 1e-12


@pytest.mark.parametrize("s", [+1, -1])
def test_defect_field_linear_mass_interior(s):
    lam = 0.1
    mass = linear_mass_field(GRID128, m0=1.0, lam=lam)
    d = commutator_defect(mass, s)
    mask = interior_mask(GRID128)
    # i gamma^1 * lam: upper-right = i*lam, lower-left = -i*lam
    assert np.max(np.abs(d.values[0, 1][mask] - 1j * lam)) <= 1e-8
    assert np.max(np.abs(d.values[1, 0][mask] + 1j * lam)) <= 1e-8
    assert np.max(np.abs(d.values[0, 0])) == 0.0


@pytest.mark.parametrize("s", [+1, -1])
def test_defect_tangent_to_mass_gradient(s):
    # D = -m_x sigma_2 + s m_y sigma_1 pointwise
    from planardirac.potentials import Tabulated

    prof = Tabulated(rs=(0.0, 1.5, 3.0, 8.0), values=(0.4, 0.2, 0.05, 0.0))
    mass = ScalarField(1.0 + prof.planar(GRID, 1.0), GRID)
    d = commutator_defect(mass, s)
    m_x, m_y = mass.gradient()
    s1 = np.array([[0, 1], [1, 0]])
    s2 = np.array([[0, -1j], [1j, 0]])
    built = (
        -m_x[None, None] * s2[:, :, None, None] + s * m_y[None, None] * s1[:, :, None, None]
    )
    assert np.max(np.abs(d.values - built)) <= 1e-12


def test_defect_discrepancy_measured_matches_prediction():
    psi = gaussian_spinor(GRID128, sigma=0.8)
    mass = linear_mass_field(GRID128, m0=1.0, lam=0.1)
    d = defect_discrepancy(psi, mass, 1.0, REP_PLUS)
    assert d["measured"] > 1e-3  # genuinely nonzero
    assert d["measured"] == pytest.approx(d["predicted"], rel=1e-6)


@pytest.mark.parametrize("s", [+1, -1])
def test_defect_sweep_slope(s):
    psi = gaussian_spinor(GRID128, sigma=0.8)
    sweep = defect_sweep(psi, m0=1.0, lambdas=(0.05, 0.1, 0.2), energy=1.0, rep=s)
    assert sweep.slope_relative_error <= 0.05
    assert sweep.measured[0] < sweep.measured[1] < sweep.measured[2]


def test_shift_equivariance_constant_config():
    # translation-invariant config: H commutes with grid translations
    config = PotentialConfig(m0=1.0, S=Constant(0.3), A0=Constant(-0.2))
    rng = np.random.default_rng(23)
    psi = random_band_limited_spinor(GRID, rng)
    h_psi = apply_first_order(psi, config, +1)
    rolled = type(psi)(np.roll(psi.values, (5, -3), axis=(1, 2)), GRID)
    h_rolled = apply_first_order(rolled, config, +1)
    assert np.max(
        np.abs(h_rolled.values - np.roll(h_psi.values, (5, -3), axis=(1, 2)))
    ) <= 1e-10


def test_mismatched_grids_rejected():
    other = GridSpec(n=32, length=10.0)
    psi = gaussian_spinor(GRID, sigma=0.8)
    mass = ScalarField(np.ones((other.n, other.n)), other)
    with pytest.raises(ConfigError):
        apply_quadratic_incorrect(psi, mass, 1.0, +1)
