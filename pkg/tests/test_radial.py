import numpy as np
import pytest

from planardirac.errors import ConfigError, DomainError
from planardirac.exact import as_rep
from planardirac.potentials import (
    Constant,
    Coulomb,
    LinearX,
    PotentialConfig,
    free_config,
    oscillator_config,
)
from planardirac.radial import (
    RadialChannel,
    integrate,
    match_eigenvalue,
    reduce_to_radial,
    s_dependence_report,
    scan_channels,
    scan_spectrum,
    stability_check,
)

OSC = oscillator_config(1.0, 0.1)
CHANNELS = [
    RadialChannel(l, as_rep(s))
    for (l, s) in [(0, 1), (1, 1), (-1, 1), (2, 1), (0, -1), (-1, -1), (-2, -1)]
]


def osc_levels(l, s, omega=0.1, m0=1.0, e_max=1.5):
    """Closed-form planar Dirac-oscillator levels,
    E^2 = m0^2 + 2 m0 w (2n + |l| + 1 - l - s).

    Derived by decoupling the radial system into a 2-D radial oscillator
    equation; independently confirmed by the grid oracle (oracle tests).
    """
    out = []
    for n in range(40):
        e2 = m0 * m0 + 2 * m0 * omega * (2 * n + abs(l) + 1 - l - s)
        if np.sqrt(e2) < e_max:
            out.append(np.sqrt(e2))
    return out


@pytest.fixture(scope="module")
def osc_scan():
    return {
        (r.channel.l, r.channel.s): r
        for r in scan_channels(OSC, CHANNELS, (0.02, 1.5))
    }


def test_reduce_requires_radial_config():
    cfg = PotentialConfig(m0=1.0, S=LinearX(0.1))
    with pytest.raises(ConfigError):
        reduce_to_radial(cfg, RadialChannel(0, as_rep(+1)))


def test_channel_l_cap():
    with pytest.raises(ConfigError):
        RadialChannel(9, as_rep(+1))


def test_rest_solution_constant_f():
    # free, E = m0, l = 0: f stays constant, g stays zero
    system = reduce_to_radial(free_config(1.0), RadialChannel(0, as_rep(+1)))
    state = integrate(system, 1.0, "outward", r_max=30.0, r_match=10.0)
    assert state.node_count == 0
    assert np.max(np.abs(state.f - state.f[0])) <= 1e-8 * abs(state.f[0])
    assert np.max(np.abs(state.g)) <= 1e-12


def test_oscillator_inward_is_gaussian_enveloped():
    system = reduce_to_radial(OSC, RadialChannel(0, as_rep(+1)))
    state = integrate(system, 1.1, "inward", r_max=30.0, r_match=6.0)
    # log |u(r)| tracks m w (rmax^2 - r^2)/2 on the way in
    sel = state.r < 25.0
    log_env = np.log(np.hypot(state.f[sel], state.g[sel])) + 0.0
    expect = 0.05 * (30.0**2 - state.r[sel] ** 2)
    drift = (log_env - expect) - (log_env[0] - expect[0])
    assert np.max(np.abs(drift)) <= 0.15 * np.max(expect)


def test_free_particle_has_no_bound_states():
    res = scan_spectrum(
        free_config(1.0), RadialChannel(0, as_rep(+1)), (0.02, 0.95), r_max=40.0
    )
    assert res.energies == ()


def test_match_eigenvalue_no_sign_change_returns_none():
    system = reduce_to_radial(free_config(1.0), RadialChannel(0, as_rep(+1)))
    assert match_eigenvalue(system, (0.3, 0.6), r_max=40.0) is None


def test_match_eigenvalue_refines_inside_bracket():
    system = reduce_to_radial(OSC, RadialChannel(-1, as_rep(+1)))
    e = match_eigenvalue(system, (1.15, 1.21), r_max=32.0)
    assert e == pytest.approx(np.sqrt(1.4), abs=1e-9)


@pytest.mark.parametrize("l,s", [(c.l, c.s) for c in CHANNELS])
def test_oscillator_channels_match_closed_form(osc_scan, l, s):
    res = osc_scan[(l, s)]
    expected = osc_levels(l, s)
    assert len(res.energies) == len(expected)
    assert np.allclose(res.energies, expected, rtol=0, atol=2e-9)
    # node theorem: consecutive levels gain exactly one node
    assert list(res.nodes) == list(range(len(res.energies)))


def test_normalizability_tails(osc_scan):
    res = osc_scan[(0, 1)]
    assert res.energies
    for tail in res.meta["norm_tails"]:
        assert tail < 1e-8


def test_rmax_doubling_stability(osc_scan):
    results = [osc_scan[(0, 1)], osc_scan[(-1, -1)]]
    assert stability_check(OSC, results, factor=2.0) <= 1e-8


def test_triple_flip_symmetry_exact_coefficients():
    # the radial systems for (l, s, a) and (-l, -s, -a) are identical maps
    rng = np.random.default_rng(2)
    flipped = OSC.flipped_vector()
    for l, s in [(1, +1), (-2, +1), (0, -1)]:
        sys_a = reduce_to_radial(OSC, RadialChannel(l, as_rep(s)))
        sys_b = reduce_to_radial(flipped, RadialChannel(-l, as_rep(-s)))
        for _ in range(20):
            r = float(rng.uniform(0.05, 25.0))
            e = float(rng.uniform(-2.0, 2.0))
            assert np.allclose(
                sys_a.matrix(r, e), sys_b.matrix(r, e), rtol=0, atol=1e-15
            )


def test_triple_flip_symmetry_spectra(osc_scan):
    plus = osc_scan[(1, 1)]
    minus = scan_spectrum(
        OSC.flipped_vector(), RadialChannel(-1, as_rep(-1)), (0.02, 1.5)
    )
    assert len(plus.energies) == len(minus.energies) > 0
    assert np.max(np.abs(np.array(plus.energies) - np.array(minus.energies))) <= 1e-8


def test_naive_flip_is_not_a_symmetry(osc_scan):
    # same a, (l, s) -> (-l, -s): spectra genuinely differ for the oscillator
    plus = osc_scan[(1, 1)]
    minus = osc_scan[(-1, -1)]
    assert plus.energies[0] == pytest.approx(1.0, abs=1e-9)
    assert abs(minus.energies[0] - plus.energies[0]) > 0.1


def test_s_dependence_report():
    rep = s_dependence_report(OSC, l=1, e_range=(0.02, 1.4), n_levels=3)
    assert rep.compared_levels >= 1
    assert rep.max_deviation > 0.01
    assert rep.plus.energies[0] == pytest.approx(1.0, abs=1e-9)
    assert rep.minus.energies[0] == pytest.approx(np.sqrt(1.4), abs=1e-8)


def test_overcritical_coulomb_rejected():
    # strength beyond the centrifugal protection gives complex indices
    cfg = PotentialConfig(m0=1.0, A0=Coulomb(strength=-2.0, r_core=1e-12))
    with pytest.raises(DomainError):
        scan_spectrum(cfg, RadialChannel(0, as_rep(+1)), (0.3, 0.9), r_max=30.0)


def test_scalar_only_config_has_naive_flip_symmetry():
    # with a = 0 the (l, s) -> (-l, -s) map is exact at the coefficient level
    cfg = PotentialConfig(m0=1.0, S=Constant(0.2))
    sys_a = reduce_to_radial(cfg, RadialChannel(2, as_rep(+1)))
    sys_b = reduce_to_radial(cfg, RadialChannel(-2, as_rep(-1)))
    rng = np.random.default_rng(4)
    for _ in range(20):
        r = float(rng.uniform(0.05, 25.0))
        e = float(rng.uniform(-2.0, 2.0))
        assert np.allclose(sys_a.matrix(r, e), sys_b.matrix(r, e), rtol=0, atol=1e-15)
