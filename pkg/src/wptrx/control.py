"""Small-signal models, Bode data, PI synthesis, and the runtime regulator.

Averaged over a switching period, the output stage is a first-order plant:
the output capacitor integrates the difference between the phase-shift
controlled charging current and the load draw, giving

    R_L C_o d(i_o)/dt = 1.58 |I_Ls| sin(2 pi d) - i_o

whose linearization around an operating point d_op has DC gain
2 pi 1.58 |I_Ls| cos(2 pi d_op) (per unit d) and time constant R_L C_o;
the voltage plant is the same scaled by R_L.  The PI designs place the
controller zero on the plant pole, so the loop crossover lands at the
requested frequency exactly.

The runtime regulator is a trapezoidal PI with conditional-integration
anti-windup, clamped to the physical phase-shift range [0, 0.25].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .analytics import OUTPUT_LAW_GAIN
from .circuit import ReceiverParams, phase_value
from .errors import ValidationError

# Linearized modulation gain d(i_o)/dd at d = 0; 2*pi*1.58, printed as 9.93.
LINEARIZED_GAIN = 2.0 * math.pi * OUTPUT_LAW_GAIN

D_MIN = 0.0
D_MAX = 0.25


@dataclass(frozen=True)
class TransferFunction1P:
    """First-order small-signal plant: dc_gain / (1 + s * time_constant)."""

    dc_gain: float
    time_constant: float
    kind: str  # "current" or "voltage"

    def __post_init__(self):
        if not self.time_constant > 0:
            raise ValidationError("time_constant must be positive")
        if self.kind not in ("current", "voltage"):
            raise ValidationError(f"unknown transfer-function kind {self.kind!r}")


@dataclass(frozen=True)
class PIGains:
    """Continuous PI gains plus the Tustin-discretized coefficients.

    The discrete update is u[n] = u[n-1] + b0 e[n] + b1 e[n-1], the
    bilinear transform of kp + ki/s at sample period t_samp.
    """

    kp: float
    ki: float
    kind: str = "voltage"
    t_samp: float | None = None
    b0: float | None = None
    b1: float | None = None

    def __post_init__(self):
        # ki = 0 (pure proportional) is allowed for test and bring-up use
        if not (self.kp > 0 and self.ki >= 0):
            raise ValidationError("PI gains must be positive")


@dataclass(frozen=True)
class PIState:
    """Regulator memory advanced only through pi_step."""

    integrator: float = 0.0
    prev_error: float = 0.0
    last_output_saturated: bool = False


def current_tf(params: ReceiverParams, d_op) -> TransferFunction1P:
    """Small-signal current plant at operating point d_op."""
    dv = phase_value(d_op)
    gain = LINEARIZED_GAIN * params.i_ls_amp * math.cos(2.0 * math.pi * dv)
    return TransferFunction1P(dc_gain=gain,
                              time_constant=params.r_load * params.c_o,
                              kind="current")


def voltage_tf(params: ReceiverParams, d_op) -> TransferFunction1P:
    """Small-signal voltage plant: the current plant scaled by R_L."""
    tf = current_tf(params, d_op)
    return TransferFunction1P(dc_gain=tf.dc_gain * params.r_load,
                              time_constant=tf.time_constant,
                              kind="voltage")


def bode_points(tf: TransferFunction1P, frequencies) -> list[dict]:
    """Magnitude/phase of the first-order response on a frequency grid."""
    out = []
    for f in np.asarray(frequencies, dtype=float):
        if f <= 0:
            raise ValidationError("frequencies must be positive")
        h = tf.dc_gain / (1.0 + 1j * 2.0 * math.pi * f * tf.time_constant)
        out.append({
            "f_hz": float(f),
            "mag_db": 20.0 * math.log10(abs(h)),
            "phase_deg": math.degrees(math.atan2(h.imag, h.real)),
        })
    return out


def design_pi(kind: str, params: ReceiverParams, f_c: float, d_op,
              r_l_nominal: float, f_c_scale: float = 1.0) -> PIGains:
    """PI gains for the requested loop and crossover frequency.

    current:  kp = f_c C_o R_Lnom / (1.58 |I_Ls| cos(2 pi d_op))
    voltage:  kp = f_c C_o / (1.58 |I_Ls| cos(2 pi d_op))
    both:     ki = kp / (R_Lnom C_o)   (zero on the plant pole)

    Because the linearized gain is 2 pi times the 1.58 law, an f_c given in
    hertz lands the crossover at f_c exactly.  ``f_c_scale`` rescales f_c
    for callers that specify rad/s (use 2 pi).
    """
    dv = phase_value(d_op)
    if kind not in ("current", "voltage"):
        raise ValidationError(f"unknown loop kind {kind!r}")
    if not f_c > 0:
        raise ValidationError("crossover frequency must be positive")
    if f_c * f_c_scale > params.fs / 10.0:
        raise ValidationError(
            "crossover must stay below fs/10 for per-cycle control")
    denom = OUTPUT_LAW_GAIN * params.i_ls_amp * math.cos(2.0 * math.pi * dv)
    if abs(denom) < 1e-15:
        raise ValidationError(
            "plant gain is zero at d_op = 0.25; loop cannot be designed there")
    fc = f_c * f_c_scale
    kp = fc * params.c_o * (r_l_nominal if kind == "current" else 1.0) / denom
    ki = kp / (r_l_nominal * params.c_o)
    return PIGains(kp=kp, ki=ki, kind=kind)


def tustin_discretize(gains: PIGains, t_samp: float) -> PIGains:
    """Fill the discrete coefficients via the bilinear transform.

    Trapezoidal equivalence: a constant error accumulates ki * t_samp per
    step through the integral path.
    """
    if not t_samp > 0:
        raise ValidationError("t_samp must be positive")
    half = 0.5 * gains.ki * t_samp
    return replace(gains, t_samp=t_samp,
                   b0=gains.kp + half, b1=-gains.kp + half)


def pi_step(state: PIState, gains: PIGains, error: float,
            out_min: float = D_MIN, out_max: float = D_MAX,
            anti_windup: bool = True) -> tuple[float, PIState]:
    """One trapezoidal PI update producing a clamped phase-shift command.

    With the default limits the command always lies in the physical
    phase-shift range [0, 0.25].  The integrator is frozen whenever the
    output saturates and the error keeps pushing into the rail
    (conditional integration), so a long unreachable reference cannot wind
    it up.
    """
    if not math.isfinite(error):
        raise ValidationError("error must be finite")
    if gains.t_samp is None:
        raise ValidationError("gains lack a sample period; run tustin_discretize")
    integ_new = state.integrator + 0.5 * gains.ki * gains.t_samp * (
        error + state.prev_error)
    u = gains.kp * error + integ_new
    u_clamped = min(max(u, out_min), out_max)
    saturated = u != u_clamped
    windup_push = saturated and (u - u_clamped) * error > 0.0
    if anti_windup and windup_push:
        integ_new = state.integrator  # hold the accumulated value
    new_state = PIState(integrator=integ_new, prev_error=error,
                        last_output_saturated=saturated)
    return u_clamped, new_state
