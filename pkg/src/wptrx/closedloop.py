"""Cycle-by-cycle closed-loop simulation and regulation studies.

The plant advances one switching period at a time through the exact
per-mode exponentials collapsed into an affine cycle map; the phase-shift
command enters through the source-phase terms, so changing d between
cycles costs two vector updates and no matrix rebuilds.  Measurements are
sampled once per cycle at the period boundary, matching the per-cycle
timer structure of the gate generator, and the PI command is quantized to
the timer tick grid.

This path deliberately uses the bilateral (diode-free) plant: it is the
model the modulation law and the small-signal designs assume, and it keeps
hundred-thousand-cycle transients cheap.  Waveform-accurate studies belong
to the simulator module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytics import OUTPUT_LAW_GAIN
from .circuit import IDX_V_O, Mode, ReceiverParams, phase_value
from .control import PIGains, PIState, pi_step, tustin_discretize
from .errors import ConvergenceError, ValidationError
from .simulator import _get_cache
from .syncpwm import DEFAULT_TICKS_PER_PERIOD

_EVENT_FIELDS = ("r_load", "i_ls_amp")


@dataclass(frozen=True)
class Scenario:
    """A regulation experiment: reference, duration, and plant events.

    Events are (time_s, field, value) with field one of ``r_load`` or
    ``i_ls_amp``; they snap to the nearest period boundary when applied.
    """

    regulation: str           # "voltage" or "current"
    reference: float
    duration: float
    events: tuple = ()

    def __post_init__(self):
        if self.regulation not in ("voltage", "current"):
            raise ValidationError(f"unknown regulation kind {self.regulation!r}")
        if not self.duration > 0:
            raise ValidationError("duration must be positive")
        last = 0.0
        for ev in self.events:
            t, fieldname, value = ev
            if fieldname not in _EVENT_FIELDS:
                raise ValidationError(f"unknown event field {fieldname!r}")
            if not 0.0 <= t <= self.duration:
                raise ValidationError("event times must lie within the duration")
            if t < last:
                raise ValidationError("event times must be ascending")
            if not value > 0:
                raise ValidationError("event values must be positive")
            last = t


@dataclass
class TransientResult:
    """Per-cycle closed-loop trace plus event-relative metrics."""

    t: np.ndarray
    v_o: np.ndarray
    i_o: np.ndarray
    d_command: np.ndarray
    regulation: str
    reference: float
    events: list = field(default_factory=list)

    @property
    def regulated(self) -> np.ndarray:
        return self.v_o if self.regulation == "voltage" else self.i_o


class _CycleMap:
    """Affine one-period plant map x -> M x + cos(th) Hc + sin(th) Hs."""

    def __init__(self, params: ReceiverParams):
        self.params = params
        cache = _get_cache(params)
        m1 = cache.modes[Mode.MODE_I].chains[False][0]
        m2 = cache.modes[Mode.MODE_II].chains[False][0]
        p1 = np.eye(5)
        p1[2, 2] = 0.0
        p2 = np.eye(5)
        p2[3, 3] = 0.0
        phi1, w1 = m1[:5, :5], m1[:5, 5:]
        phi2, w2 = m2[:5, :5], m2[:5, 5:]
        g1 = p2 @ phi2 @ p1 @ w1
        g2 = p2 @ w2
        self.m = p2 @ phi2 @ p1 @ phi1
        # source-phase columns: s0 = [cos th, -sin th], s_half = [-cos th, sin th]
        self.hc = g1[:, 0] - g2[:, 0]
        self.hs = g2[:, 1] - g1[:, 1]

    def fixed_point(self, d: float) -> np.ndarray:
        th = 2.0 * math.pi * phase_value(d)
        c = math.cos(th) * self.hc + math.sin(th) * self.hs
        return np.linalg.solve(np.eye(5) - self.m, c)

    def advance(self, x: np.ndarray, d: float) -> np.ndarray:
        th = 2.0 * math.pi * d
        return self.m @ x + math.cos(th) * self.hc + math.sin(th) * self.hs


def _segment_metrics(t, y, reference, t_start, t_end):
    """Dip/overshoot/settling/steady-state error over one event segment."""
    sel = (t >= t_start) & (t < t_end)
    ts = t[sel]
    ys = y[sel]
    if len(ys) == 0:
        return None
    band = 0.02 * abs(reference)
    outside = np.abs(ys - reference) > band
    if outside.any():
        last_out = np.nonzero(outside)[0][-1]
        settling = (ts[last_out] - t_start) if last_out + 1 < len(ys) else math.nan
    else:
        settling = 0.0
    tail = ys[max(len(ys) - max(len(ys) // 10, 1), 0):]
    return {
        "t_event": t_start,
        "dip": float(reference - ys.min()),
        "overshoot": float(ys.max() - reference),
        "settling_time": float(settling),
        "steady_state_error": float(abs(tail.mean() - reference)),
    }


def run_transient(params: ReceiverParams, gains: PIGains, scenario: Scenario,
                  ticks_per_period: int = DEFAULT_TICKS_PER_PERIOD,
                  x0: np.ndarray | None = None,
                  start_settled: bool = False,
                  meas_noise: float = 0.0,
                  rng: np.random.Generator | None = None,
                  anti_windup: bool = True) -> TransientResult:
    """Co-simulate plant and regulator cycle by cycle.

    Each period: advance the plant with the current quantized command,
    sample the regulated variable at the boundary, run one PI update, and
    apply the new command to the next period.  Events swap the plant map
    at the nearest boundary.  Raises if the plant state diverges.

    ``start_settled`` skips the slew-limited startup (charging the output
    capacitor at the current ceiling takes tens of milliseconds) by seeding
    the plant at the modulation-law operating point of the reference and
    preloading the integrator, so event studies begin from regulation.
    """
    ts = params.ts
    n_cycles = int(round(scenario.duration / ts))
    if n_cycles < 1:
        raise ValidationError("duration shorter than one switching period")
    if gains.t_samp is None:
        gains = tustin_discretize(gains, ts)
    if meas_noise and rng is None:
        rng = np.random.default_rng()

    event_cycles = {}
    for t_ev, fieldname, value in scenario.events:
        event_cycles.setdefault(int(round(t_ev / ts)), []).append((fieldname, value))

    cur = params
    cmap = _CycleMap(cur)
    pi_state = PIState()
    d = 0.0
    if x0 is not None:
        x = np.asarray(x0, dtype=float).copy()
    elif start_settled:
        law_scale = OUTPUT_LAW_GAIN * cur.i_ls_amp * (
            cur.r_load if scenario.regulation == "voltage" else 1.0)
        arg = min(scenario.reference / law_scale, 1.0)
        d = math.asin(arg) / (2.0 * math.pi)
        x = cmap.fixed_point(d)
        pi_state = PIState(integrator=d)
    else:
        x = np.zeros(5)

    t_arr = np.empty(n_cycles)
    vo_arr = np.empty(n_cycles)
    io_arr = np.empty(n_cycles)
    d_arr = np.empty(n_cycles)

    for n in range(n_cycles):
        if n in event_cycles:
            for fieldname, value in event_cycles[n]:
                cur = cur.replace(**{fieldname: value})
            cmap = _CycleMap(cur)
        d_q = round(d * ticks_per_period) / ticks_per_period
        x = cmap.advance(x, d_q)
        if not np.all(np.isfinite(x)):
            raise ConvergenceError(f"plant diverged at t = {(n + 1) * ts:.6e} s")
        v_o = x[IDX_V_O]
        i_o = v_o / cur.r_load
        t_arr[n] = (n + 1) * ts
        vo_arr[n] = v_o
        io_arr[n] = i_o
        d_arr[n] = d_q
        meas = v_o if scenario.regulation == "voltage" else i_o
        if meas_noise:
            meas += rng.normal(0.0, meas_noise)
        d, pi_state = pi_step(pi_state, gains, scenario.reference - meas,
                              anti_windup=anti_windup)

    result = TransientResult(t=t_arr, v_o=vo_arr, i_o=io_arr, d_command=d_arr,
                             regulation=scenario.regulation,
                             reference=scenario.reference)
    y = result.regulated
    seg_starts = [0.0] + [t for t, _, _ in scenario.events]
    seg_ends = seg_starts[1:] + [scenario.duration]
    for t_start, t_end in zip(seg_starts, seg_ends):
        m = _segment_metrics(t_arr, y, scenario.reference, t_start, t_end)
        if m is not None:
            result.events.append(m)
    return result


def regulation_sweep(params: ReceiverParams, gains: PIGains, axis: str, grid,
                     reference: float,
                     ticks_per_period: int = DEFAULT_TICKS_PER_PERIOD,
                     settle_time: float = 0.15) -> list[dict]:
    """Settled regulated value across an operating-condition axis.

    axis ``load_power`` converts each grid value (W) to a load resistance
    for the voltage loop; ``load_resistance`` and ``source_amplitude`` set
    the plant field directly.  Points whose required phase shift exceeds
    0.25 under the modulation law are flagged unreachable rather than
    silently clamped; they are still simulated so the saturated outcome is
    visible.
    """
    if axis not in ("load_power", "load_resistance", "source_amplitude"):
        raise ValidationError(f"unknown sweep axis {axis!r}")
    if axis == "load_power" and gains.kind != "voltage":
        raise ValidationError("load_power sweeps require the voltage loop")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise ValidationError("sweep grid values must be positive")
    rows = []
    for value in grid:
        p = params
        if axis == "load_power":
            p = p.replace(r_load=reference**2 / value)
        elif axis == "load_resistance":
            p = p.replace(r_load=value)
        else:
            p = p.replace(i_ls_amp=value)
        law_scale = OUTPUT_LAW_GAIN * p.i_ls_amp * (
            p.r_load if gains.kind == "voltage" else 1.0)
        required = reference / law_scale
        reachable = required <= 1.0
        scenario = Scenario(regulation=gains.kind, reference=reference,
                            duration=settle_time)
        res = run_transient(p, gains, scenario, ticks_per_period=ticks_per_period,
                            start_settled=True)
        tail = res.regulated[-max(len(res.regulated) // 20, 10):]
        settled = float(tail.mean())
        rows.append({
            "axis_value": float(value),
            "settled": settled,
            "error": settled - reference,
            "error_pct": 100.0 * (settled - reference) / reference,
            "d_settled": float(res.d_command[-1]),
            "reachable": reachable,
        })
    return rows


def measure_frequency_response(params: ReceiverParams, d_op, frequencies,
                               kind: str = "voltage", delta_d: float = 0.005,
                               settle_tc: float = 5.0,
                               min_periods: float = 2.0,
                               min_cycles: int = 4000) -> list[dict]:
    """Frequency response of the cycle-averaged plant by sine perturbation.

    The phase-shift command is wiggled sinusoidally around the operating
    point (no quantization: this probes the plant, not the timer) and the
    regulated variable's fundamental is extracted by least squares after
    the plant pole transient has settled.  Used to validate the analytic
    first-order models.
    """
    dv = phase_value(d_op)
    if kind not in ("voltage", "current"):
        raise ValidationError(f"unknown plant kind {kind!r}")
    amp = min(delta_d, dv, 0.25 - dv)
    if amp <= 0:
        raise ValidationError("no perturbation headroom at this operating point")
    ts = params.ts
    cmap = _CycleMap(params)
    x_ss = cmap.fixed_point(dv)
    tau = params.r_load * params.c_o
    n_settle = int(math.ceil(settle_tc * tau / ts))

    out = []
    for f in np.asarray(frequencies, dtype=float):
        if f <= 0:
            raise ValidationError("frequencies must be positive")
        n_meas = max(min_cycles, int(math.ceil(min_periods / (f * ts))))
        x = x_ss.copy()
        n_tot = n_settle + n_meas
        cycles = np.arange(n_tot)
        d_seq = dv + amp * np.sin(2.0 * math.pi * f * cycles * ts)
        y = np.empty(n_tot)
        for n in range(n_tot):
            x = cmap.advance(x, d_seq[n])
            y[n] = x[IDX_V_O]
        if kind == "current":
            y = y / params.r_load
        t_meas = (cycles[n_settle:] + 1.0) * ts
        y_meas = y[n_settle:]
        base = np.column_stack([
            np.sin(2.0 * math.pi * f * t_meas),
            np.cos(2.0 * math.pi * f * t_meas),
            np.ones_like(t_meas),
        ])
        coef, *_ = np.linalg.lstsq(base, y_meas, rcond=None)
        a_s, a_c = coef[0], coef[1]
        mag = math.hypot(a_s, a_c) / amp
        phase = math.degrees(math.atan2(a_c, a_s))
        out.append({"f_hz": float(f),
                    "mag_db": 20.0 * math.log10(mag),
                    "phase_deg": phase})
    return out
