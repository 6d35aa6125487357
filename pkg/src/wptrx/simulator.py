"""Time-domain engines and periodic steady-state solver.

Two engines share the switched-linear model from :mod:`wptrx.circuit`:

* ``integrate`` -- fixed-step 4th-order Runge-Kutta, the plain workhorse.
* an exact engine built on matrix exponentials of the augmented system
  (the sinusoidal source is absorbed as a two-state oscillator, so each
  mode is autonomous LTI and propagation is a matrix-vector product).

Mode boundaries are clocked by the ideal 50% complementary gating: at each
half-period the newly shorted capacitor is reset to zero and the energy
0.5*C'*v^2 it still held is booked as discarded (the non-ZVS figure of
merit).  Within a mode the ringing capacitor's voltage cannot swing below
zero: the switch body diode conducts and holds it there until the node
current reverses.  This unilateral hold is what produces the measured
zero-voltage turn-on away from full phase shift; it can be disabled
(``diode_hold=False``) to recover the idealized bilateral model that the
closed-form output law assumes.

The periodic steady state is the fixed point of the one-period map.  With
the diode inactive the map is affine (clamps are projections at fixed
times), so x0 solves the linear system (I - Phi) x0 = w; when diode events
engage, that solution seeds a damped Newton shooting iteration on the
event-detected map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .circuit import (
    IDX_I_L1,
    IDX_I_L2,
    IDX_V_C1,
    IDX_V_C2,
    IDX_V_O,
    Mode,
    ReceiverParams,
    StateVector,
    assemble_mode_dynamics,
    phase_value,
    source_current,
)
from .errors import ConvergenceError, ValidationError

# Dyadic event-location depth: events are resolved to half_period / 2**DEPTH,
# far below the float resolution of any state quantity.
_DEPTH = 44
_COARSE = 6  # first probe size: half_period / 2**_COARSE

DEFAULT_STEPS_PER_PERIOD = 1024

_OSC_C = 5  # augmented state: cos(2 pi fs t - 2 pi d)
_OSC_S = 6  # augmented state: sin(2 pi fs t - 2 pi d)


@dataclass
class Waveform:
    """Uniformly sampled multi-channel time series.

    Channels: i_l1, i_l2, v_c1, v_c2, v_o, i_ls and the derived
    v_ac = v_c1 - v_c2.  ``clamp_energy`` accumulates the energy discarded
    at mode boundaries over the samples' span.
    """

    t0: float
    dt: float
    channels: dict
    clamp_energy: float = 0.0

    def __post_init__(self):
        lengths = {len(v) for v in self.channels.values()}
        if len(lengths) != 1 or lengths.pop() < 2:
            raise ValidationError("all waveform channels need equal length >= 2")
        if not self.dt > 0:
            raise ValidationError("dt must be positive")
        if "v_ac" not in self.channels:
            self.channels["v_ac"] = self.channels["v_c1"] - self.channels["v_c2"]

    @property
    def n_samples(self) -> int:
        return len(self.channels["v_o"])

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_samples)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.channels[name]


@dataclass
class SteadyState:
    """Periodic orbit of the receiver at fixed phase shift.

    ``x0`` is the state at a mode-I entry boundary (v_c2 clamped), the
    waveform spans exactly one switching period, and ``residual`` is the
    relative fixed-point mismatch after one more period of propagation.
    """

    x0: StateVector
    waveform: Waveform
    residual: float
    v_c1_before_half_clamp: float = 0.0
    v_c2_before_full_clamp: float = 0.0
    clamp_energy_per_cycle: float = 0.0
    diode_hold: bool = True


@dataclass
class ZvsReport:
    """Capacitor voltages at the four switching instants.

    The turn-off instants are structurally zero (the capacitor was shorted
    by its own switch through the preceding half-period); the turn-on
    values are the ZVS figure of merit, and the discarded energy is
    0.5 * (C_AC + C_f) * (v_on1^2 + v_on2^2) per cycle.
    """

    v_at_s1_on: float
    v_at_s1_off: float
    v_at_s2_on: float
    v_at_s2_off: float
    discarded_energy_per_cycle: float
    v_c_peak: float


# ---------------------------------------------------------------------------
# propagator cache


@dataclass
class _ModeCache:
    mode: Mode
    ring: int            # index of the capacitor free to ring
    leg: int             # index of the leg current feeding that capacitor
    src_sign: float      # sign of i_ls in that capacitor's node current
    chains: dict = field(default_factory=dict)   # held -> [expm(A*half/2^j)]
    step_mats: dict = field(default_factory=dict)  # (n_sub, held) -> expm(A*dt)
    a_aug: dict = field(default_factory=dict)      # held -> 7x7 matrix


class _PropagatorCache:
    """Per-parameter matrix exponentials for both modes and substates."""

    def __init__(self, params: ReceiverParams):
        self.params = params
        self.half = 0.5 * params.ts
        self.omega = 2.0 * math.pi * params.fs
        self.modes = {}
        for mode in (Mode.MODE_I, Mode.MODE_II):
            dyn = assemble_mode_dynamics(params, mode)
            ring = mode.ringing_index
            leg = IDX_I_L1 if mode is Mode.MODE_I else IDX_I_L2
            src_sign = 1.0 if mode is Mode.MODE_I else -1.0
            mc = _ModeCache(mode=mode, ring=ring, leg=leg, src_sign=src_sign)
            for held in (False, True):
                a = np.zeros((7, 7))
                a[:5, :5] = dyn.a
                a[:5, _OSC_C] = dyn.b * params.i_ls_amp
                a[_OSC_C, _OSC_S] = -self.omega
                a[_OSC_S, _OSC_C] = self.omega
                if held:
                    a[ring, :] = 0.0
                mc.a_aug[held] = a
                mc.chains[held] = [
                    expm(a * (self.half / (1 << j))) for j in range(_DEPTH + 1)
                ]
            self.modes[mode] = mc

    def step_matrix(self, mode: Mode, held: bool, n_sub: int) -> np.ndarray:
        mc = self.modes[mode]
        key = (n_sub, held)
        if key not in mc.step_mats:
            mc.step_mats[key] = expm(mc.a_aug[held] * (self.half / n_sub))
        return mc.step_mats[key]


@lru_cache(maxsize=32)
def _get_cache(params: ReceiverParams) -> _PropagatorCache:
    return _PropagatorCache(params)


def _osc_state(d: float, t_frac: float) -> tuple[float, float]:
    """Oscillator components cos/sin of (2 pi t/Ts - 2 pi d)."""
    ang = 2.0 * math.pi * (t_frac - d)
    return math.cos(ang), math.sin(ang)


def _node_current(mc: _ModeCache, amp: float, x: np.ndarray) -> float:
    """Charging current of the ringing capacitor (diode monitor)."""
    return mc.src_sign * amp * x[_OSC_C] - x[mc.leg]


def _half_exact(cache, mc: _ModeCache, x: np.ndarray, diode_hold: bool):
    """Advance the augmented state across one half-period with diode events.

    Returns (x_end_preclamp, segments) where segments is a list of
    (tick_start, state_at_start, held) covering [0, 2**_DEPTH) ticks.
    """
    amp = cache.params.i_ls_amp
    if not diode_hold:
        seg = [(0, x.copy(), False)]
        return mc.chains[False][0] @ x, seg

    if x[mc.ring] < 0.0:
        x = x.copy()
        x[mc.ring] = 0.0
    held = x[mc.ring] <= 0.0 and _node_current(mc, amp, x) < 0.0

    total = 1 << _DEPTH
    p = 0
    segments = [(0, x.copy(), held)]
    while p < total:
        chain = mc.chains[held]
        advanced = False
        for m in range(_DEPTH - _COARSE, -1, -1):
            s = 1 << m
            if p + s > total:
                continue
            xt = chain[_DEPTH - m] @ x
            if held:
                crossed = _node_current(mc, amp, xt) > 0.0
            else:
                crossed = xt[mc.ring] < 0.0
            if not crossed:
                x = xt
                p += s
                advanced = True
                break
        if not advanced:
            # event inside one tick: land just past it and flip substate
            x = chain[_DEPTH] @ x
            p += 1
            held = not held
            if held:
                x[mc.ring] = 0.0
            segments.append((p, x.copy(), held))
            if len(segments) > 64:
                raise ConvergenceError("diode event chatter in exact propagation")
    return x, segments


def _advance_ticks(mc: _ModeCache, held: bool, x: np.ndarray, n_ticks: int) -> np.ndarray:
    """Propagate by an arbitrary tick count via the dyadic chain."""
    chain = mc.chains[held]
    m = 0
    while n_ticks:
        if n_ticks & 1:
            x = chain[_DEPTH - m] @ x
        n_ticks >>= 1
        m += 1
    return x


def _sample_half(cache, mc, segments, n_sub, out, out_off):
    """Fill n_sub uniform samples of the 5 states from an event segment list.

    Within a segment consecutive samples advance by the precomputed
    exponential of one sample interval; each segment entry re-aligns via
    the dyadic chain.
    """
    total = 1 << _DEPTH
    seg_i = 0
    x = None
    for j in range(n_sub):
        tick = (j * total) // n_sub
        realign = x is None
        while seg_i + 1 < len(segments) and segments[seg_i + 1][0] <= tick:
            seg_i += 1
            realign = True
        p0, x_seg, held = segments[seg_i]
        if realign:
            x = _advance_ticks(mc, held, x_seg, tick - p0)
            if x is x_seg:
                x = x_seg.copy()
        else:
            x = cache.step_matrix(mc.mode, held, n_sub) @ x
        if held:
            x[mc.ring] = 0.0
        out[out_off + j] = x[:5]
    return out


def _advance_period(cache, d: float, x5: np.ndarray, diode_hold: bool,
                    sample_n: int | None = None):
    """Propagate one full period from a mode-I entry state.

    Returns (x5_next, v_c1_pre_half, v_c2_pre_full, clamp_energy, samples),
    samples being an (sample_n, 5) array when requested.
    """
    params = cache.params
    cres = params.c_res
    x = np.empty(7)
    x[:5] = x5
    x[IDX_V_C2] = 0.0
    x[_OSC_C], x[_OSC_S] = _osc_state(d, 0.0)

    samples = np.empty((sample_n, 5)) if sample_n else None
    n_sub = sample_n // 2 if sample_n else 0

    mc1 = cache.modes[Mode.MODE_I]
    x, segs1 = _half_exact(cache, mc1, x, diode_hold)
    if sample_n:
        _sample_half(cache, mc1, segs1, n_sub, samples, 0)
    v1_pre = x[IDX_V_C1]
    energy = 0.5 * cres * v1_pre**2
    x[IDX_V_C1] = 0.0

    mc2 = cache.modes[Mode.MODE_II]
    x, segs2 = _half_exact(cache, mc2, x, diode_hold)
    if sample_n:
        _sample_half(cache, mc2, segs2, n_sub, samples, n_sub)
    v2_pre = x[IDX_V_C2]
    energy += 0.5 * cres * v2_pre**2
    x[IDX_V_C2] = 0.0

    return x[:5].copy(), v1_pre, v2_pre, energy, samples


# ---------------------------------------------------------------------------
# RK4 engine


def _rk4_step(a, b_amp, omega, d, x, t, h):
    def f(xx, tt):
        src = math.cos(omega * tt - 2.0 * math.pi * d)
        return a @ xx + b_amp * src

    k1 = f(x, t)
    k2 = f(x + 0.5 * h * k1, t + 0.5 * h)
    k3 = f(x + 0.5 * h * k2, t + 0.5 * h)
    k4 = f(x + h * k3, t + h)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(params: ReceiverParams, d, x0: StateVector, n_periods: int,
              steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
              diode_hold: bool = True) -> Waveform:
    """Fixed-step RK4 integration over whole switching periods.

    ``steps_per_period`` must be even so mode boundaries land on grid
    points.  Samples are recorded at sub-step starts; the first sample is
    the (clamped) initial state.  Raises ConvergenceError with the offending
    time if the state stops being finite.
    """
    dv = phase_value(d)
    if steps_per_period < 2 or steps_per_period % 2:
        raise ValidationError("steps_per_period must be even and >= 2")
    if n_periods < 1:
        raise ValidationError("n_periods must be >= 1")

    ts = params.ts
    h = ts / steps_per_period
    omega = 2.0 * math.pi * params.fs
    half_steps = steps_per_period // 2
    n_samples = n_periods * steps_per_period
    states = np.empty((n_samples, 5))

    dyn = {m: assemble_mode_dynamics(params, m) for m in (Mode.MODE_I, Mode.MODE_II)}
    amp = params.i_ls_amp
    cres = params.c_res

    x = x0.as_array()
    energy = 0.0
    idx = 0
    for period in range(n_periods):
        for mode in (Mode.MODE_I, Mode.MODE_II):
            a = dyn[mode].a
            b_amp = dyn[mode].b * amp
            ring = mode.ringing_index
            leg = IDX_I_L1 if mode is Mode.MODE_I else IDX_I_L2
            sgn = 1.0 if mode is Mode.MODE_I else -1.0

            # boundary clamp: short the other capacitor, book its energy
            clamped = mode.clamped_index
            energy += 0.5 * cres * x[clamped] ** 2
            x[clamped] = 0.0

            a_hold = a.copy()
            a_hold[ring, :] = 0.0
            b_hold = b_amp.copy()
            b_hold[ring] = 0.0

            def node_i(xx, tt):
                return sgn * amp * math.cos(omega * tt - 2.0 * math.pi * dv) - xx[leg]

            held = diode_hold and x[ring] <= 0.0 and node_i(x, idx * h) < 0.0
            if diode_hold and x[ring] < 0.0:
                x[ring] = 0.0

            for _ in range(half_steps):
                t = idx * h
                states[idx] = x
                if not diode_hold:
                    x = _rk4_step(a, b_amp, omega, dv, x, t, h)
                else:
                    # sub-step loop so diode events inside a step are honored
                    rem = h
                    tt = t
                    guard = 0
                    while rem > 1e-18 * ts:
                        guard += 1
                        if guard > 8:
                            raise ConvergenceError(
                                f"diode event chatter at t={tt:.6e} s")
                        if held:
                            xn = _rk4_step(a_hold, b_hold, omega, dv, x, tt, rem)
                            xn[ring] = 0.0
                            if node_i(xn, tt + rem) > 0.0:
                                frac = _bisect_event(
                                    lambda fr: node_i(
                                        _rk4_step(a_hold, b_hold, omega, dv, x, tt, fr * rem),
                                        tt + fr * rem), 0.0, 1.0)
                                x = _rk4_step(a_hold, b_hold, omega, dv, x, tt, frac * rem)
                                x[ring] = 0.0
                                tt += frac * rem
                                rem -= frac * rem
                                held = False
                            else:
                                x = xn
                                rem = 0.0
                        else:
                            xn = _rk4_step(a, b_amp, omega, dv, x, tt, rem)
                            if xn[ring] < 0.0:
                                frac = _bisect_event(
                                    lambda fr: _rk4_step(
                                        a, b_amp, omega, dv, x, tt, fr * rem)[ring],
                                    0.0, 1.0)
                                x = _rk4_step(a, b_amp, omega, dv, x, tt, frac * rem)
                                x[ring] = 0.0
                                tt += frac * rem
                                rem -= frac * rem
                                held = True
                            else:
                                x = xn
                                rem = 0.0
                idx += 1
            if not np.all(np.isfinite(x)):
                raise ConvergenceError(
                    f"integration diverged near t = {idx * h:.6e} s")

    t_all = np.arange(n_samples) * h
    channels = {
        "i_l1": states[:, IDX_I_L1],
        "i_l2": states[:, IDX_I_L2],
        "v_c1": states[:, IDX_V_C1],
        "v_c2": states[:, IDX_V_C2],
        "v_o": states[:, IDX_V_O],
        "i_ls": source_current(params, dv, t_all),
    }
    return Waveform(t0=0.0, dt=h, channels=channels, clamp_energy=energy)


def _bisect_event(g, lo, hi, iters=80):
    """Root of a scalar function on [lo, hi] by plain bisection."""
    glo = g(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if glo * g(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# exact single-mode propagation


def _expm_propagate(a5, b5, amp, omega, d, x0, t_from, t_to):
    aa = np.zeros((7, 7))
    aa[:5, :5] = a5
    aa[:5, _OSC_C] = b5 * amp
    aa[_OSC_C, _OSC_S] = -omega
    aa[_OSC_S, _OSC_C] = omega
    x = np.empty(7)
    x[:5] = x0
    ang = omega * t_from - 2.0 * math.pi * d
    x[_OSC_C], x[_OSC_S] = math.cos(ang), math.sin(ang)
    return (expm(aa * (t_to - t_from)) @ x)[:5]


def exact_propagate(params: ReceiverParams, d, x0: StateVector,
                    t_from: float, t_to: float) -> StateVector:
    """Exact LTI propagation across a window inside a single mode.

    The sinusoidal source is appended as a two-state oscillator and the
    augmented 7x7 system is exponentiated, so the result is bitwise
    deterministic for fixed inputs.  The window must not straddle a mode
    boundary; the diode hold is deliberately not modeled here (this is the
    pure switched-LTI primitive).
    """
    dv = phase_value(d)
    if t_to < t_from:
        raise ValidationError("t_to must be >= t_from")
    half = 0.5 * params.ts
    eps = 1e-9 * params.ts
    m = math.floor((t_from + eps) / half)
    if t_to > (m + 1) * half + eps:
        raise ValidationError(
            f"[{t_from}, {t_to}] straddles a mode boundary at {(m + 1) * half}")
    mode = Mode.MODE_I if m % 2 == 0 else Mode.MODE_II
    dyn = assemble_mode_dynamics(params, mode)
    out = _expm_propagate(dyn.a, dyn.b, params.i_ls_amp,
                          2.0 * math.pi * params.fs, dv,
                          x0.as_array(), t_from, t_to)
    return StateVector.from_array(out)


# ---------------------------------------------------------------------------
# periodic steady state


def _affine_period_map(cache: _PropagatorCache, d: float):
    """One-period affine map x -> Phi x + w of the diode-free model."""
    m1 = cache.modes[Mode.MODE_I].chains[False][0]
    m2 = cache.modes[Mode.MODE_II].chains[False][0]
    p1 = np.eye(5)
    p1[IDX_V_C1, IDX_V_C1] = 0.0
    p2 = np.eye(5)
    p2[IDX_V_C2, IDX_V_C2] = 0.0
    s0 = np.array(_osc_state(d, 0.0))
    sh = np.array(_osc_state(d, 0.5))
    phi1, w1 = m1[:5, :5], m1[:5, 5:]
    phi2, w2 = m2[:5, :5], m2[:5, 5:]
    phi = p2 @ phi2 @ p1 @ phi1
    w = p2 @ phi2 @ p1 @ (w1 @ s0) + p2 @ (w2 @ sh)
    return phi, w


def periodic_steady_state(params: ReceiverParams, d,
                          steps_per_period: int = DEFAULT_STEPS_PER_PERIOD,
                          diode_hold: bool = True) -> SteadyState:
    """Solve x(Ts) = x0 for the switching-periodic orbit.

    The diode-free fixed point comes from the linear solve
    (I - Phi) x0 = w on the composed per-mode exponentials with the clamp
    projections at the half- and full-period boundaries.  When the diode
    hold is enabled and engages on that orbit, the affine solution seeds a
    damped Newton iteration on the event-detected period map.  The returned
    residual is ||x(Ts) - x0|| / ||x0||, required below 1e-9.
    """
    dv = phase_value(d)
    if steps_per_period < 2 or steps_per_period % 2:
        raise ValidationError("steps_per_period must be even and >= 2")
    cache = _get_cache(params)

    phi, w = _affine_period_map(cache, dv)
    try:
        x0 = np.linalg.solve(np.eye(5) - phi, w)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            "period map is singular; configuration has no unique "
            "periodic solution") from exc

    if diode_hold:
        x0 = _newton_shoot(cache, dv, x0)

    x1, v1_pre, v2_pre, energy, samples = _advance_period(
        cache, dv, x0, diode_hold, sample_n=steps_per_period)
    norm0 = np.linalg.norm(x0)
    residual = np.linalg.norm(x1 - x0) / (norm0 if norm0 > 0 else 1.0)
    if residual > 1e-9:
        raise ConvergenceError(
            f"steady-state residual {residual:.3e} exceeds 1e-9")

    dt = params.ts / steps_per_period
    t_all = np.arange(steps_per_period) * dt
    channels = {
        "i_l1": samples[:, IDX_I_L1],
        "i_l2": samples[:, IDX_I_L2],
        "v_c1": samples[:, IDX_V_C1],
        "v_c2": samples[:, IDX_V_C2],
        "v_o": samples[:, IDX_V_O],
        "i_ls": source_current(params, dv, t_all),
    }
    waveform = Waveform(t0=0.0, dt=dt, channels=channels, clamp_energy=energy)
    return SteadyState(
        x0=StateVector.from_array(x0),
        waveform=waveform,
        residual=float(residual),
        v_c1_before_half_clamp=float(v1_pre),
        v_c2_before_full_clamp=float(v2_pre),
        clamp_energy_per_cycle=float(energy),
        diode_hold=diode_hold,
    )


def _newton_shoot(cache, d, x_seed, tol=1e-11, max_iter=80):
    """Damped Newton on the event-detected period map, FD Jacobian."""

    def fmap(x):
        return _advance_period(cache, d, x, True)[0]

    x = x_seed.copy()
    x[IDX_V_C2] = 0.0
    fx = fmap(x)
    scale = max(np.linalg.norm(x), 1.0)
    best = np.linalg.norm(fx - x)
    for _ in range(max_iter):
        if best <= tol * scale:
            return x
        jac = np.empty((5, 5))
        eps = 1e-7 * scale
        for i in range(5):
            xp = x.copy()
            xp[i] += eps
            jac[:, i] = (fmap(xp) - fx) / eps
        try:
            delta = np.linalg.solve(jac - np.eye(5), -(fx - x))
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian in steady-state shooting") from exc
        step = 1.0
        for _ in range(12):
            xt = x + step * delta
            ft = fmap(xt)
            r = np.linalg.norm(ft - xt)
            if r < best:
                x, fx, best = xt, ft, r
                scale = max(np.linalg.norm(x), 1.0)
                break
            step *= 0.5
        else:
            break
    if best > 1e-9 * scale:
        raise ConvergenceError(
            f"steady-state shooting stalled at residual {best / scale:.3e}")
    return x


def settle_by_periods(params: ReceiverParams, d, n_periods: int,
                      x0: StateVector | None = None,
                      diode_hold: bool = True) -> StateVector:
    """Brute-force settling: apply the one-period propagation repeatedly.

    Long-integration oracle for the fixed-point solve; starts from zero
    state unless given.
    """
    dv = phase_value(d)
    cache = _get_cache(params)
    x = (x0.as_array() if x0 is not None else np.zeros(5))
    for _ in range(n_periods):
        x = _advance_period(cache, dv, x, diode_hold)[0]
        if not np.all(np.isfinite(x)):
            raise ConvergenceError("settling diverged")
    return StateVector.from_array(x)


# ---------------------------------------------------------------------------
# metrics


def zvs_metrics(ss: SteadyState, params: ReceiverParams) -> ZvsReport:
    """Switch-instant capacitor voltages and discarded energy of an orbit."""
    w = ss.waveform
    peak = float(max(w["v_c1"].max(), w["v_c2"].max()))
    v_s1_on = ss.v_c1_before_half_clamp
    v_s2_on = ss.v_c2_before_full_clamp
    energy = 0.5 * params.c_res * (v_s1_on**2 + v_s2_on**2)
    half_idx = w.n_samples // 2
    return ZvsReport(
        v_at_s1_on=v_s1_on,
        v_at_s1_off=float(ss.x0.v_c1),
        v_at_s2_on=v_s2_on,
        v_at_s2_off=float(w["v_c2"][half_idx]),
        discarded_energy_per_cycle=energy,
        v_c_peak=peak,
    )


def ripple_metrics(ss: SteadyState) -> dict:
    """Peak-to-peak ripple of the summed and individual inductor currents.

    The differential architecture cancels the odd ripple in
    i_lm = i_l1 + i_l2, so i_lm_pp is much smaller than the leg swing.
    """
    w = ss.waveform
    i_lm = w["i_l1"] + w["i_l2"]
    return {
        "i_lm_pp": float(np.ptp(i_lm)),
        "v_o_pp": float(np.ptp(w["v_o"])),
        "i_lx_pp": float(max(np.ptp(w["i_l1"]), np.ptp(w["i_l2"]))),
    }
