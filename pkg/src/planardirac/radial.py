"""Radial reduction and shooting solver for rotationally symmetric configs.

Separation ansatz. In polar coordinates the stationary planar operator
closes on two-component channels

    Psi = e^{-iEt} ( f(r) e^{i l theta},  i g(r) e^{i (l+s) theta} ),

with integer l and s the representation sign; the off-diagonal parts of
the operator shift the angular phase by exactly +-s, which forces the
lower component's quantum number to l + s. Substituting the ansatz and
collecting components gives the real first-order system u' = M(r; E) u,
u = (f, g), with

    f' = ( s l / r - s a(r) ) f - ( E - A0 + m0 + S ) g
    g' = ( E - A0 - m0 - S ) f - ( s (l+s) / r - s a(r) ) g.

This reduction is treated as hypothesis, not gospel: its correctness is
established by cross-validating channel spectra against the independent
2-D grid eigensolver (see the oracle module and the acceptance suite).

Useful exact facts used by the solver and its tests:

* the system for (l, s, a) is coefficient-identical to the system for
  (-l, -s, -a), so those channel spectra agree exactly; the naive pair
  (l, s) -> (-l, -s) at fixed a is NOT a symmetry unless a = 0;
* at the origin the indicial matrix has trace -1 and eigenvalues
  alpha_reg > alpha_irr; the regular branch behaves like r^{alpha_reg}
  and outward integration of it is self-stabilizing;
* bound eigenvalues are roots of the matching Wronskian
  W(E) = f_out g_in - f_in g_out at a matching radius, evaluated with
  both integrations run in their stable directions (outward from the
  origin, inward from the far wall; the inward sweep is stable at any
  depth, the outward one must not run far past the turning point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError, NonConvergenceError
from .exact import Representation, as_rep
from .potentials import Constant, Coulomb, Linear, Oscillator, PotentialConfig

__all__ = [
    "RadialChannel",
    "RadialSystem",
    "RadialState",
    "SpectrumResult",
    "SDependenceReport",
    "reduce_to_radial",
    "integrate",
    "match_eigenvalue",
    "scan_spectrum",
    "scan_channels",
    "s_dependence_report",
    "stability_check",
    "default_r_max",
]

#: default scan step in units of m0
DEFAULT_SCAN_STEP = 0.005
#: default local error target per accepted step (relative)
DEFAULT_RTOL = 1e-10
#: overflow guard: rescale a column when its amplitude passes this
RESCALE_AT = 1e100

L_MAX = 8


@dataclass(frozen=True)
class RadialChannel:
    l: int
    rep: Representation

    def __post_init__(self):
        if abs(self.l) > L_MAX:
            raise ConfigError(f"|l| <= {L_MAX}, got l={self.l}")

    @property
    def s(self) -> int:
        return self.rep.s


def _scalar_fn(profile, m0: float) -> Callable[[float], float]:
    """Plain-float evaluator for a radial profile (hot path of the RHS)."""
    if isinstance(profile, Constant):
        c = float(profile.value)
        return lambda r: c
    if isinstance(profile, Linear):
        c = float(profile.slope)
        return lambda r: c * r
    if isinstance(profile, Oscillator):
        c = float(m0 * profile.omega)
        return lambda r: c * r
    if isinstance(profile, Coulomb):
        q = float(profile.strength)
        rc = float(profile.r_core)
        return lambda r: q / (r if r > rc else rc)
    return lambda r: float(profile.radial(r, m0))


@dataclass(frozen=True)
class RadialSystem:
    """Coefficient data for u' = M(r; E) u in one channel."""

    channel: RadialChannel
    config: PotentialConfig

    def coefficients(self, r: float):
        """Profile values (a, A0, m) at radius r."""
        cfg = self.config
        return (
            float(cfg.a.radial(r, cfg.m0)),
            float(cfg.A0.radial(r, cfg.m0)),
            float(cfg.mass_radial(r)),
        )

    def matrix(self, r: float, energy: float) -> np.ndarray:
        s, l = self.channel.s, self.channel.l
        a, a0, m = self.coefficients(r)
        return np.array(
            [
                [s * l / r - s * a, -(energy - a0 + m)],
                [energy - a0 - m, -(s * (l + s) / r - s * a)],
            ]
        )


def reduce_to_radial(config: PotentialConfig, channel: RadialChannel) -> RadialSystem:
    if not config.is_radial:
        raise ConfigError("radial reduction requires a rotationally symmetric config")
    return RadialSystem(channel=channel, config=config)


# ---------------------------------------------------------------------------
# batched integration engine
# ---------------------------------------------------------------------------


class _Columns:
    """Flat batch of (l, s, E) shooting columns sharing one config."""

    def __init__(self, config: PotentialConfig, ls, ss, es):
        self.config = config
        self.l = np.asarray(ls, dtype=float)
        self.s = np.asarray(ss, dtype=float)
        self.E = np.asarray(es, dtype=float)
        self.sl = self.s * self.l
        self.slps = self.s * (self.l + self.s)
        self.size = len(self.E)
        self.a_fn = _scalar_fn(config.a, config.m0)
        self.a0_fn = _scalar_fn(config.A0, config.m0)
        s_fn = _scalar_fn(config.S, config.m0)
        m0 = config.m0
        self.m_fn = lambda r: m0 + s_fn(r)

    def local_matrix_parts(self, r: float):
        """M11, M12, M21, M22 arrays at radius r (seeds and turning points)."""
        a = self.a_fn(r)
        a0 = self.a0_fn(r)
        m = self.m_fn(r)
        m11 = self.sl / r - self.s * a
        m22 = -self.slps / r + self.s * a
        m12 = (a0 - m) - self.E
        m21 = self.E - (a0 + m)
        return m11, m12, m21, m22


@dataclass
class _Snapshot:
    f: np.ndarray
    g: np.ndarray
    log_scale: np.ndarray
    nodes: np.ndarray
    norm2: np.ndarray
    tail2: np.ndarray


@dataclass
class _RunResult:
    f: np.ndarray
    g: np.ndarray
    log_scale: np.ndarray
    nodes: np.ndarray
    norm2: np.ndarray
    tail2: np.ndarray
    captures: dict
    trajectory: Optional[list]


# Cash-Karp 5(4) coefficients, unrolled below
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 3 / 10, -9 / 10, 6 / 5
_A51, _A52, _A53, _A54 = -11 / 54, 5 / 2, -70 / 27, 35 / 27
_A61, _A62, _A63, _A64, _A65 = (
    1631 / 55296,
    175 / 512,
    575 / 13824,
    44275 / 110592,
    253 / 4096,
)
_C2, _C3, _C4, _C5, _C6 = 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8
_B1, _B3, _B4, _B6 = 37 / 378, 250 / 621, 125 / 594, 512 / 1771
_E1, _E3, _E4, _E5, _E6 = (
    37 / 378 - 2825 / 27648,
    250 / 621 - 18575 / 48384,
    125 / 594 - 13525 / 55296,
    -277 / 14336,
    512 / 1771 - 1 / 4,
)


def _integrate_columns(
    cols: _Columns,
    u0: np.ndarray,
    r_start: float,
    r_end: float,
    rtol: float,
    stations: Sequence = (),
    count_nodes: bool = False,
    accumulate_norm: bool = False,
    tail_start: Optional[float] = None,
    record: bool = False,
) -> _RunResult:
    """Adaptive Cash-Karp sweep of the whole batch from r_start to r_end.

    The step size is shared across the batch (the controller uses the worst
    column) and is clipped so the sweep lands exactly on every station
    radius, where a full snapshot (state, node counts, norm accumulators)
    of the station's columns is captured. Columns are rescaled individually
    when they threaten overflow; all accumulators track the rescaling.
    """
    direction = 1.0 if r_end >= r_start else -1.0
    span = abs(r_end - r_start)
    if span <= 0:
        raise ConfigError("empty integration interval")
    stations = sorted(stations, key=lambda sc: sc[0], reverse=direction < 0)
    for s_r, _ in stations:
        if not (min(r_start, r_end) - 1e-9 <= s_r <= max(r_start, r_end) + 1e-9):
            raise ConfigError(f"station {s_r} outside the integration interval")

    f = u0[0].astype(float).copy()
    g = u0[1].astype(float).copy()
    log_scale = np.zeros(cols.size)
    nodes = np.zeros(cols.size, dtype=int)
    norm2 = np.zeros(cols.size)
    tail2 = np.zeros(cols.size)
    captures: dict = {}
    trajectory: Optional[list] = [] if record else None
    if record and cols.size > 8:
        raise ConfigError("trajectory recording is limited to small batches")

    sl, slps, s_arr, E = cols.sl, cols.slps, cols.s, cols.E
    a_fn, a0_fn, m_fn = cols.a_fn, cols.a0_fn, cols.m_fn

    def rhs(r, f, g):
        a = a_fn(r)
        a0 = a0_fn(r)
        m = m_fn(r)
        inv_r = 1.0 / r
        df = (sl * inv_r - s_arr * a) * f - ((E - a0) + m) * g
        dg = ((E - a0) - m) * f - (slps * inv_r - s_arr * a) * g
        return df, dg

    r = r_start
    dr = direction * max(span * 1e-8, min(abs(r_start) * 0.1, span / 16) or span * 1e-8)
    dr_min = span * 1e-14
    dr_max = span / 8
    station_idx = 0
    f_sign = np.sign(f)
    if record:
        trajectory.append((r, f.copy(), g.copy(), log_scale.copy()))

    max_steps = 2_000_000
    for _ in range(max_steps):
        remaining = r_end - r
        if direction * remaining <= 1e-13 * span:
            break
        dr = direction * min(abs(dr), dr_max)
        if abs(dr) > abs(remaining):
            dr = remaining
        if station_idx < len(stations):
            to_station = stations[station_idx][0] - r
            if direction * to_station > 1e-13 * span and abs(dr) > abs(to_station):
                dr = to_station

        k1f, k1g = rhs(r, f, g)
        k2f, k2g = rhs(r + _C2 * dr, f + dr * (_A21 * k1f), g + dr * (_A21 * k1g))
        k3f, k3g = rhs(
            r + _C3 * dr,
            f + dr * (_A31 * k1f + _A32 * k2f),
            g + dr * (_A31 * k1g + _A32 * k2g),
        )
        k4f, k4g = rhs(
            r + _C4 * dr,
            f + dr * (_A41 * k1f + _A42 * k2f + _A43 * k3f),
            g + dr * (_A41 * k1g + _A42 * k2g + _A43 * k3g),
        )
        k5f, k5g = rhs(
            r + _C5 * dr,
            f + dr * (_A51 * k1f + _A52 * k2f + _A53 * k3f + _A54 * k4f),
            g + dr * (_A51 * k1g + _A52 * k2g + _A53 * k3g + _A54 * k4g),
        )
        k6f, k6g = rhs(
            r + _C6 * dr,
            f + dr * (_A61 * k1f + _A62 * k2f + _A63 * k3f + _A64 * k4f + _A65 * k5f),
            g + dr * (_A61 * k1g + _A62 * k2g + _A63 * k3g + _A64 * k4g + _A65 * k5g),
        )
        f5 = f + dr * (_B1 * k1f + _B3 * k3f + _B4 * k4f + _B6 * k6f)
        g5 = g + dr * (_B1 * k1g + _B3 * k3g + _B4 * k4g + _B6 * k6g)
        ef = dr * (_E1 * k1f + _E3 * k3f + _E4 * k4f + _E5 * k5f + _E6 * k6f)
        eg = dr * (_E1 * k1g + _E3 * k3g + _E4 * k4g + _E5 * k5g + _E6 * k6g)

        mag = np.maximum(
            np.maximum(np.abs(f), np.abs(g)), np.maximum(np.abs(f5), np.abs(g5))
        )
        scale = rtol * mag + 1e-280
        err_ratio = float(
            np.max(np.maximum(np.abs(ef), np.abs(eg)) / scale)
        )

        if err_ratio <= 1.0 or abs(dr) <= dr_min * 1.0001:
            r_new = r + dr
            if accumulate_norm:
                w_old = (f * f + g * g) * abs(r)
                w_new = (f5 * f5 + g5 * g5) * abs(r_new)
                piece = 0.5 * abs(dr) * (w_old + w_new)
                norm2 += piece
                if tail_start is not None and min(abs(r), abs(r_new)) >= tail_start:
                    tail2 += piece
            f, g = f5, g5
            r = r_new
            if count_nodes:
                new_sign = np.sign(f)
                nodes += ((new_sign * f_sign) < 0).astype(int)
                f_sign = np.where(new_sign != 0, new_sign, f_sign)
            mx = np.maximum(np.abs(f), np.abs(g))
            if float(np.max(mx)) > RESCALE_AT:
                big = mx > RESCALE_AT
                c = np.where(big, mx, 1.0)
                f = f / c
                g = g / c
                log_scale += np.log(c)
                c2 = c * c
                norm2 /= c2
                tail2 /= c2
            if record:
                trajectory.append((r, f.copy(), g.copy(), log_scale.copy()))
            while station_idx < len(stations) and abs(
                r - stations[station_idx][0]
            ) <= 1e-12 * max(1.0, abs(r)):
                s_r, s_cols = stations[station_idx]
                captures[s_r] = _Snapshot(
                    f[s_cols].copy(),
                    g[s_cols].copy(),
                    log_scale[s_cols].copy(),
                    nodes[s_cols].copy(),
                    norm2[s_cols].copy(),
                    tail2[s_cols].copy(),
                )
                station_idx += 1
            if err_ratio > 0:
                dr = dr * min(5.0, max(0.2, 0.9 * err_ratio**-0.2))
            else:
                dr = dr * 5.0  # exactly solvable segment: open up
        else:
            dr = dr * max(0.1, 0.9 * err_ratio**-0.25)
            if abs(dr) < dr_min:
                raise NonConvergenceError(
                    f"radial integrator stalled at r={r:.6g} (step {abs(dr):.3g})"
                )
    else:
        raise NonConvergenceError("radial integrator exceeded its step budget")

    while station_idx < len(stations):
        s_r, s_cols = stations[station_idx]
        if abs(r - s_r) <= 1e-9 * max(1.0, abs(r)):
            captures[s_r] = _Snapshot(
                f[s_cols].copy(),
                g[s_cols].copy(),
                log_scale[s_cols].copy(),
                nodes[s_cols].copy(),
                norm2[s_cols].copy(),
                tail2[s_cols].copy(),
            )
            station_idx += 1
        else:
            raise NonConvergenceError(f"integration finished before station {s_r}")
    return _RunResult(f, g, log_scale, nodes, norm2, tail2, captures, trajectory)


# ---------------------------------------------------------------------------
# seeds and matching machinery
# ---------------------------------------------------------------------------


def _indicial_data(cols: _Columns, r_ref: float):
    """Indicial matrix at r -> 0 and the regular-branch seed vectors.

    r * M(r) tends to [[sl - s q_a, q_0 - q_S], [-q_0 - q_S, -s(l+s) + s q_a]]
    where q_x are the 1/r residues of the profiles; regular profiles give
    the diagonal matrix diag(sl, -s(l+s)). The regular branch takes the
    larger eigenvalue; it must be real and > -1 for a normalizable state.
    """
    cfg = cols.config
    r0 = 1e-9 * r_ref
    qs = []
    for rr in (r0, 2 * r0):
        qa = rr * float(cfg.a.radial(rr, cfg.m0))
        q0 = rr * float(cfg.A0.radial(rr, cfg.m0))
        qS = rr * float(cfg.S.radial(rr, cfg.m0))
        qs.append((qa, q0, qS))
    drift = max(abs(x - y) for x, y in zip(qs[0], qs[1]))
    if drift > 1e-6 * (1 + max(abs(v) for v in qs[0])):
        raise DomainError(
            "profile is more singular than 1/r at the origin; no Frobenius start"
        )
    qa, q0, qS = qs[0]
    m11 = cols.sl - cols.s * qa
    m22 = -cols.slps + cols.s * qa
    m12 = np.full(cols.size, q0 - qS)
    m21 = np.full(cols.size, -q0 - qS)
    tr = m11 + m22  # always -1
    disc = 0.25 * (m11 - m22) ** 2 + m12 * m21
    if np.any(disc < 0):
        raise DomainError(
            "complex Frobenius indices at the origin (fall to the center); "
            "the profile is too singular for a normalizable regular solution"
        )
    root = np.sqrt(disc)
    alpha_reg = 0.5 * tr + root
    alpha_irr = 0.5 * tr - root
    if np.any(alpha_reg <= -1 + 1e-12):
        raise DomainError(
            "regular Frobenius exponent <= -1: the regular solution is not "
            "normalizable at the origin"
        )
    # columns of (M - alpha_irr I) span the regular eigenspace
    c1 = np.stack([m11 - alpha_irr, m21])
    c2 = np.stack([m12, m22 - alpha_irr])
    n1 = np.linalg.norm(c1, axis=0)
    n2 = np.linalg.norm(c2, axis=0)
    v = np.where(n1 >= n2, c1, c2)
    nv = np.linalg.norm(v, axis=0)
    degenerate = nv < 1e-12
    if np.any(degenerate):
        v = np.where(degenerate, np.stack([np.ones(cols.size), np.zeros(cols.size)]), v)
        nv = np.linalg.norm(v, axis=0)
    return alpha_reg, v / nv


def _inward_seed(cols: _Columns, r_max: float):
    """Decaying-direction eigenvector of M(r_max; E) per column.

    Columns whose local eigenvalues are complex (locally oscillatory at
    r_max, i.e. not in a spectral gap) are flagged invalid.
    """
    m11, m12, m21, m22 = cols.local_matrix_parts(r_max)
    tr = m11 + m22
    disc = 0.25 * (m11 - m22) ** 2 + m12 * m21
    valid = disc > 0
    root = np.sqrt(np.where(valid, disc, 0.0))
    mu_plus = 0.5 * tr + root
    c1 = np.stack([m11 - mu_plus, m21])
    c2 = np.stack([m12, m22 - mu_plus])
    n1 = np.linalg.norm(c1, axis=0)
    n2 = np.linalg.norm(c2, axis=0)
    v = np.where(n1 >= n2, c1, c2)
    nv = np.maximum(np.linalg.norm(v, axis=0), 1e-300)
    return v / nv, valid


def _matching_radii(cols: _Columns, r_min: float, r_max: float) -> np.ndarray:
    """Matching radius per column: the outermost locally oscillatory radius
    (det M > 1/(4 r^2)), or the least-forbidden radius when no oscillatory
    region exists, clipped away from both endpoints."""
    rs = np.linspace(max(r_min * 50, 2e-3 * r_max), 0.9 * r_max, 1200)
    best = np.full(cols.size, np.nan)
    best_q = np.full(cols.size, -np.inf)
    outermost = np.zeros(cols.size)
    for r in rs:
        m11, m12, m21, m22 = cols.local_matrix_parts(float(r))
        det = m11 * m22 - m12 * m21
        q = det - 1.0 / (4 * r * r)
        outermost = np.where(q > 0, r, outermost)
        better = q > best_q
        best_q = np.where(better, q, best_q)
        best = np.where(better, r, best)
    r_match = np.where(outermost > 0, outermost, best)
    return np.clip(r_match, 0.04 * r_max, 0.6 * r_max)


def _wronskians(
    cols: _Columns, r_match: np.ndarray, r_min: float, r_max: float, rtol: float
) -> np.ndarray:
    """Normalized matching Wronskian per column; NaN where no bound state
    can decay at r_max."""
    uniq, inverse = np.unique(r_match, return_inverse=True)
    stations = [(float(uniq[k]), np.nonzero(inverse == k)[0]) for k in range(len(uniq))]
    _, v_out = _indicial_data(cols, r_max)
    out = _integrate_columns(cols, v_out, r_min, float(uniq[-1]), rtol, stations=stations)
    v_in, valid = _inward_seed(cols, r_max)
    inn = _integrate_columns(cols, v_in, r_max, float(uniq[0]), rtol, stations=stations)
    w = np.full(cols.size, np.nan)
    for s_r, s_cols in stations:
        so = out.captures[s_r]
        si = inn.captures[s_r]
        no = np.maximum(np.hypot(so.f, so.g), 1e-300)
        ni = np.maximum(np.hypot(si.f, si.g), 1e-300)
        w[s_cols] = (so.f * si.g - si.f * so.g) / (no * ni)
    w[~valid] = np.nan
    return w


# ---------------------------------------------------------------------------
# public results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialState:
    r: np.ndarray
    f: np.ndarray
    g: np.ndarray
    node_count: int


@dataclass(frozen=True)
class SpectrumResult:
    channel: RadialChannel
    energies: tuple
    method: str
    nodes: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        es = self.energies
        if any(b <= a for a, b in zip(es, es[1:])):
            raise ConfigError("energies must be strictly increasing")


@dataclass(frozen=True)
class SDependenceReport:
    l: int
    plus: SpectrumResult
    minus: SpectrumResult
    max_deviation: float
    compared_levels: int


def integrate(
    system: RadialSystem,
    energy: float,
    direction: str,
    r_max: float,
    rtol: float = DEFAULT_RTOL,
    r_match: Optional[float] = None,
) -> RadialState:
    """Single-channel trajectory on the stable leg ('outward' or 'inward')."""
    if direction not in ("outward", "inward"):
        raise ConfigError("direction must be 'outward' or 'inward'")
    cols = _Columns(
        system.config,
        np.array([system.channel.l]),
        np.array([system.channel.s]),
        np.array([energy]),
    )
    r_min = 1e-6 * r_max
    if r_match is None:
        r_match = float(_matching_radii(cols, r_min, r_max)[0])
    if direction == "outward":
        _, v = _indicial_data(cols, r_max)
        res = _integrate_columns(
            cols, v, r_min, r_match, rtol, count_nodes=True, record=True
        )
    else:
        v, valid = _inward_seed(cols, r_max)
        if not valid[0]:
            raise DomainError(
                "no decaying solution at r_max: energy lies outside the local gap"
            )
        res = _integrate_columns(
            cols, v, r_max, r_match, rtol, count_nodes=True, record=True
        )
    rs = np.array([p[0] for p in res.trajectory])
    fs = np.array([p[1][0] for p in res.trajectory])
    gs = np.array([p[2][0] for p in res.trajectory])
    return RadialState(rs, fs, gs, int(res.nodes[0]))


def _refine_brackets(
    config: PotentialConfig,
    brackets: list,
    r_min: float,
    r_max: float,
    rtol: float,
    max_iter: int = 60,
):
    """Bracket refinement, batched over brackets: bisection to isolate the
    root, then secant steps with bisection fallback. Each bracket entry is
    (l, s, e_lo, e_hi, r_match); the matching radius is frozen per bracket
    so W stays continuous in E within the bracket.
    """
    if not brackets:
        return []
    ls = np.array([b[0] for b in brackets], dtype=float)
    ss = np.array([b[1] for b in brackets], dtype=float)
    lo = np.array([b[2] for b in brackets])
    hi = np.array([b[3] for b in brackets])
    rm = np.array([b[4] for b in brackets])

    # endpoint Wronskians under the frozen matching radii; an exact zero at
    # an endpoint is a root sitting on the scan grid and must survive
    cols_ends = _Columns(config, np.tile(ls, 2), np.tile(ss, 2), np.concatenate([lo, hi]))
    w_ends = _wronskians(cols_ends, np.tile(rm, 2), r_min, r_max, rtol)
    wlo, whi = w_ends[: len(brackets)], w_ends[len(brackets):]
    wlo = np.where((wlo == 0.0) & (whi != 0.0), -whi, wlo)
    whi = np.where((whi == 0.0) & (wlo != 0.0), -wlo, whi)
    both_zero = (wlo == 0.0) & (whi == 0.0)
    wlo = np.where(both_zero, -1.0, wlo)
    whi = np.where(both_zero, 1.0, whi)
    keep = np.isfinite(wlo) & np.isfinite(whi) & (np.sign(wlo) * np.sign(whi) < 0)
    if not np.all(keep):
        ls, ss, lo, hi, wlo, whi, rm = (
            arr[keep] for arr in (ls, ss, lo, hi, wlo, whi, rm)
        )
    if len(lo) == 0:
        return []

    n_bisect = 10
    for it in range(max_iter):
        width = hi - lo
        tol_e = 1e-13 * np.maximum(1.0, np.abs(hi))
        if float(np.max(width - tol_e)) <= 0:
            break
        if it < n_bisect:
            cand = 0.5 * (lo + hi)
        else:
            denom = whi - wlo
            safe = np.abs(denom) > 1e-300
            cand = np.where(
                safe, (lo * whi - hi * wlo) / np.where(safe, denom, 1.0), 0.5 * (lo + hi)
            )
            # keep the secant candidate strictly inside, else bisect
            margin = 0.05 * width
            bad = (cand <= lo + 0.0) | (cand >= hi - 0.0) | ~np.isfinite(cand)
            near_edge = (cand < lo + margin * 0.01) | (cand > hi - margin * 0.01)
            cand = np.where(bad, 0.5 * (lo + hi), cand)
            cand = np.where(near_edge & ~bad, np.clip(cand, lo + 0.25 * width, hi - 0.25 * width), cand)
        cols = _Columns(config, ls, ss, cand)
        wm = _wronskians(cols, rm, r_min, r_max, rtol)
        went_low = (np.sign(wm) == np.sign(wlo)) & np.isfinite(wm)
        lo = np.where(went_low, cand, lo)
        wlo = np.where(went_low, wm, wlo)
        hi = np.where(went_low, hi, cand)
        whi = np.where(went_low, whi, wm)

    denom = whi - wlo
    safe = np.abs(denom) > 1e-300
    e_star = np.where(safe, (lo * whi - hi * wlo) / np.where(safe, denom, 1.0), 0.5 * (lo + hi))
    e_star = np.clip(e_star, lo, hi)
    return [
        (int(ls[i]), int(ss[i]), float(e_star[i]), float(rm[i])) for i in range(len(lo))
    ]


def default_r_max(config: PotentialConfig, e_max: float) -> float:
    """Box radius: outer turning point of the scan window plus a decay margin
    deep enough that truncation shifts sit far below the 1e-8 stability bar."""
    if isinstance(config.a, (Oscillator, Linear)) and not config.a.is_zero():
        if isinstance(config.a, Oscillator):
            slope = abs(config.m0 * config.a.omega)
        else:
            slope = abs(config.a.slope)
        sigma = 1.0 / math.sqrt(slope)
        r_turn = math.sqrt(max(e_max * e_max - config.m0**2, 0.0)) / slope
        return r_turn + 6.5 * sigma
    return 40.0 / config.m0


def scan_channels(
    config: PotentialConfig,
    channels: Sequence[RadialChannel],
    e_range: tuple,
    n_levels: Optional[int] = None,
    de: Optional[float] = None,
    r_max: Optional[float] = None,
    rtol: float = DEFAULT_RTOL,
) -> list:
    """Shooting spectra for several channels of one config in one batch.

    Scans W(E) on a uniform grid per channel, refines every sign-change
    bracket, then rebuilds each eigenstate once for node counts and the
    normalizability check. All stages are batched across channels.
    """
    if not config.is_radial:
        raise ConfigError("shooting requires a rotationally symmetric config")
    e_lo, e_hi = e_range
    if not (e_hi > e_lo):
        raise ConfigError("empty energy range")
    de = de if de is not None else DEFAULT_SCAN_STEP * config.m0
    r_max = r_max if r_max is not None else default_r_max(config, max(abs(e_lo), abs(e_hi)))
    r_min = 1e-6 * r_max

    n_e = max(2, int(round((e_hi - e_lo) / de)) + 1)
    e_grid = np.linspace(e_lo, e_hi, n_e)
    ls, ss, es = [], [], []
    for ch in channels:
        ls.extend([ch.l] * n_e)
        ss.extend([ch.s] * n_e)
        es.extend(e_grid.tolist())
    cols = _Columns(config, np.array(ls), np.array(ss), np.array(es))
    r_match = _matching_radii(cols, r_min, r_max)
    w = _wronskians(cols, r_match, r_min, r_max, rtol)

    brackets = []
    for idx, ch in enumerate(channels):
        sl_ = slice(idx * n_e, (idx + 1) * n_e)
        w_ch = w[sl_]
        rm_ch = r_match[sl_]
        half = 0.5 * (e_grid[1] - e_grid[0])
        for i in range(n_e):
            w0 = w_ch[i]
            if not np.isfinite(w0):
                continue
            if w0 == 0.0:
                # grid point sits exactly on a root; bracket around it
                brackets.append(
                    (ch.l, ch.s, float(e_grid[i] - half), float(e_grid[i] + half), float(rm_ch[i]))
                )
                continue
            if i + 1 >= n_e:
                continue
            w1 = w_ch[i + 1]
            if not np.isfinite(w1) or w1 == 0.0:
                continue
            if w0 * w1 < 0:
                brackets.append(
                    (
                        ch.l,
                        ch.s,
                        float(e_grid[i]),
                        float(e_grid[i + 1]),
                        float(0.5 * (rm_ch[i] + rm_ch[i + 1])),
                    )
                )

    roots = _refine_brackets(config, brackets, r_min, r_max, rtol)
    diag = _state_diagnostics_batch(config, roots, r_max, rtol)

    results = []
    for ch in channels:
        mine = [
            (root, d)
            for root, d in zip(roots, diag)
            if root[0] == ch.l and root[1] == ch.s
        ]
        mine.sort(key=lambda t: t[0][2])
        energies, nodes, tails = [], [], []
        for (_, _, e_star, _), (n_c, tail) in mine:
            if energies and e_star - energies[-1] <= 1e-10 * max(1.0, abs(e_star)):
                continue
            energies.append(e_star)
            nodes.append(n_c)
            tails.append(tail)
        if n_levels is not None:
            energies = energies[:n_levels]
            nodes = nodes[:n_levels]
            tails = tails[:n_levels]
        results.append(
            SpectrumResult(
                channel=ch,
                energies=tuple(energies),
                method="shooting",
                nodes=tuple(nodes),
                meta={
                    "r_max": r_max,
                    "de": de,
                    "rtol": rtol,
                    "e_range": (e_lo, e_hi),
                    "norm_tails": tuple(tails),
                },
            )
        )
    return results


def _state_diagnostics_batch(config, roots, r_max, rtol):
    """Node counts and norm tail fractions for refined roots, one batched
    outward + inward sweep with per-root snapshot stations."""
    if not roots:
        return []
    ls = np.array([r[0] for r in roots], dtype=float)
    ss = np.array([r[1] for r in roots], dtype=float)
    es = np.array([r[2] for r in roots])
    rms = np.array([r[3] for r in roots])
    cols = _Columns(config, ls, ss, es)
    r_min = 1e-6 * r_max
    uniq, inverse = np.unique(rms, return_inverse=True)
    stations = [(float(uniq[k]), np.nonzero(inverse == k)[0]) for k in range(len(uniq))]
    _, v_out = _indicial_data(cols, r_max)
    out = _integrate_columns(
        cols,
        v_out,
        r_min,
        float(uniq[-1]),
        rtol,
        stations=stations,
        count_nodes=True,
        accumulate_norm=True,
    )
    v_in, valid = _inward_seed(cols, r_max)
    inn = _integrate_columns(
        cols,
        v_in,
        r_max,
        float(uniq[0]),
        rtol,
        stations=stations,
        count_nodes=True,
        accumulate_norm=True,
        tail_start=0.9 * r_max,
    )
    diag = [None] * len(roots)
    for s_r, s_cols in stations:
        so = out.captures[s_r]
        si = inn.captures[s_r]
        for j, col in enumerate(s_cols):
            if not valid[col]:
                diag[col] = (-1, float("nan"))
                continue
            uo = np.array([so.f[j], so.g[j]])
            ui = np.array([si.f[j], si.g[j]])
            denom = float(ui @ ui)
            lam = float(uo @ ui) / denom if denom > 0 else 1.0
            splice_flip = 1 if uo[0] * (lam * ui[0]) < 0 else 0
            n_total = int(so.nodes[j] + si.nodes[j] + splice_flip)
            total = float(so.norm2[j]) + lam * lam * float(si.norm2[j])
            tail = lam * lam * float(si.tail2[j]) / total if total > 0 else float("nan")
            diag[col] = (n_total, tail)
    return diag


def scan_spectrum(
    config: PotentialConfig,
    channel: RadialChannel,
    e_range: tuple,
    n_levels: Optional[int] = None,
    de: Optional[float] = None,
    r_max: Optional[float] = None,
    rtol: float = DEFAULT_RTOL,
) -> SpectrumResult:
    return scan_channels(config, [channel], e_range, n_levels, de, r_max, rtol)[0]


def match_eigenvalue(
    system: RadialSystem,
    bracket: tuple,
    r_max: float,
    rtol: float = DEFAULT_RTOL,
) -> Optional[float]:
    """Refine one eigenvalue inside (e_lo, e_hi); None when W does not
    change sign over the bracket."""
    e_lo, e_hi = bracket
    cols_mid = _Columns(
        system.config,
        np.array([system.channel.l]),
        np.array([system.channel.s]),
        np.array([0.5 * (e_lo + e_hi)]),
    )
    r_min = 1e-6 * r_max
    rm = float(_matching_radii(cols_mid, r_min, r_max)[0])
    roots = _refine_brackets(
        system.config,
        [(system.channel.l, system.channel.s, e_lo, e_hi, rm)],
        r_min,
        r_max,
        rtol,
    )
    return roots[0][2] if roots else None


def stability_check(
    config: PotentialConfig,
    results: Sequence[SpectrumResult],
    factor: float = 2.0,
    half_width: float = 1e-3,
    rtol: float = DEFAULT_RTOL,
) -> float:
    """Max |E(r_max) - E(factor * r_max)| over every found eigenvalue.

    Each root is re-refined in a narrow bracket with the box pushed out by
    `factor`; agreement bounds the truncation error of the original box.
    """
    if not results:
        return 0.0
    r_max2 = factor * max(r.meta["r_max"] for r in results)
    entries = []
    for res in results:
        for e in res.energies:
            entries.append((res.channel.l, res.channel.s, e))
    if not entries:
        return 0.0
    ls = np.array([x[0] for x in entries], dtype=float)
    ss = np.array([x[1] for x in entries], dtype=float)
    mids = np.array([x[2] for x in entries])
    cols = _Columns(config, ls, ss, mids)
    r_min = 1e-6 * r_max2
    rm = _matching_radii(cols, r_min, r_max2)
    packed = [
        (int(ls[i]), int(ss[i]), mids[i] - half_width, mids[i] + half_width, float(rm[i]))
        for i in range(len(entries))
    ]
    roots = _refine_brackets(cols.config, packed, r_min, r_max2, rtol)
    if len(roots) != len(entries):
        raise NonConvergenceError(
            "an eigenvalue failed to re-converge with the enlarged box"
        )
    return max(abs(r[2] - e0) for r, e0 in zip(roots, mids))


def s_dependence_report(
    config: PotentialConfig,
    l: int,
    e_range: tuple,
    n_levels: int,
    de: Optional[float] = None,
    r_max: Optional[float] = None,
    rtol: float = DEFAULT_RTOL,
) -> SDependenceReport:
    """Spectra of the (l, +1) and (l, -1) channels and their level-wise gap.

    A nonzero gap is the physical content of the representation choice:
    the two gamma-matrix sets produce different spectra for the same
    interaction profile.
    """
    chans = [RadialChannel(l, as_rep(+1)), RadialChannel(l, as_rep(-1))]
    plus, minus = scan_channels(config, chans, e_range, n_levels, de, r_max, rtol)
    n = min(len(plus.energies), len(minus.energies))
    if n == 0:
        dev = 0.0
    else:
        dev = max(abs(a - b) for a, b in zip(plus.energies[:n], minus.energies[:n]))
    return SDependenceReport(
        l=l, plus=plus, minus=minus, max_deviation=dev, compared_levels=n
    )
