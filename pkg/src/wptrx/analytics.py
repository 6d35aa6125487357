"""Closed-form steady-state laws and spectral analysis.

The designed rectifier rings each leg capacitor through a half-sine-like
bump whose shape is set by the resonance of L(1-k^2) with C_AC + C_f and
whose amplitude scales with the output voltage.  The differential AC
voltage is then nearly sinusoidal with fundamental amplitude 2*gamma*v_o,
and the transferred real power follows P = gamma |I_Ls| v_o sin(2 pi d).
These expressions assume the idealized bilateral clamping model
(``diode_hold=False`` in the simulator).

The printed design constant 1.58 is the value of gamma for a tuned
circuit; the exact expression is available as :func:`gamma`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import ReceiverParams, phase_value
from .errors import ValidationError

# Nominal output-law gain: i_o = 1.58 |I_Ls| sin(2 pi d) for tuned designs.
OUTPUT_LAW_GAIN = 1.58


@dataclass(frozen=True)
class OperatingPoint:
    """Averaged electrical operating point at one phase-shift ratio."""

    p: float        # transferred real power (W)
    p_max: float    # power at full phase shift (W)
    i_o: float      # output current (A)
    v_o: float      # output voltage (V)
    gamma: float    # AC fundamental / output voltage ratio (per 2*v_o)
    v_m: float      # resonant bump amplitude (V)


@dataclass(frozen=True)
class Spectrum:
    """Harmonic magnitudes of one channel and the resulting distortion."""

    f0: float
    mags: np.ndarray   # mags[h-1] is the h-th harmonic magnitude
    thd: float


def resonant_omega(params: ReceiverParams) -> float:
    """Angular frequency of the per-mode tank, 1/sqrt(L C' (1-k^2))."""
    return 1.0 / math.sqrt(params.l_eff * params.c_res)


def vm(params: ReceiverParams, v_o: float | None = None) -> float:
    """Amplitude of the resonant cosine in the capacitor bump.

    v_m = |(1-k) sec(quarter-period * omega_r)| * v_o.  The secant pole
    (quarter-period angle at pi/2, i.e. tank tuned exactly to fs) is a
    degenerate design and rejected.
    """
    if v_o is None:
        v_o = params.v_o_ref
    ang = 0.25 * params.ts * resonant_omega(params)
    c = math.cos(ang)
    if abs(c) < 1e-12:
        raise ValidationError(
            "resonant angle at the secant pole; tank degenerately tuned to fs")
    return abs((1.0 - params.k) / c) * v_o


def gamma(params: ReceiverParams) -> float:
    """Exact ratio linking the AC fundamental to the output voltage.

    gamma = 2(1-k) / (pi (1 - 4 pi^2 fs^2 L (C_AC+C_f)(1-k^2))); close to
    1.58 for designed circuits.
    """
    denom = 1.0 - (2.0 * math.pi * params.fs) ** 2 * params.l_eff * params.c_res
    if abs(denom) < 1e-12:
        raise ValidationError(
            "gamma denominator vanishes; tank degenerately tuned to fs")
    return 2.0 * (1.0 - params.k) / (math.pi * denom)


def analytic_waveforms(params: ReceiverParams, t, v_o: float | None = None) -> dict:
    """Closed-form v_c1, v_c2, v_ac over the switching period.

    Each leg voltage is a cosine bump V_m cos(omega_r (t - quarter)) offset
    by (1-k) v_o during its ringing half-period and zero while its switch
    conducts; v_ac is their difference, which mirrors the second half with
    fully negated sign so the differential voltage carries no DC.
    """
    if v_o is None:
        v_o = params.v_o_ref
    t = np.asarray(t, dtype=float)
    ts = params.ts
    w_r = resonant_omega(params)
    v_m = vm(params, v_o)
    tau = np.mod(t, ts)
    first = tau < 0.5 * ts
    bump1 = v_m * np.cos(w_r * (tau - 0.25 * ts)) + (1.0 - params.k) * v_o
    bump2 = v_m * np.cos(w_r * (tau - 0.75 * ts)) + (1.0 - params.k) * v_o
    v_c1 = np.where(first, bump1, 0.0)
    v_c2 = np.where(first, 0.0, bump2)
    return {"v_c1": v_c1, "v_c2": v_c2, "v_ac": v_c1 - v_c2}


def real_power(params: ReceiverParams, d) -> dict:
    """Transferred AC real power p and its ceiling p_max = gamma |I| v_o."""
    dv = phase_value(d)
    p_max = gamma(params) * params.i_ls_amp * params.v_o_ref
    return {"p": p_max * math.sin(2.0 * math.pi * dv), "p_max": p_max}


def output_operating_point(params: ReceiverParams, d) -> OperatingPoint:
    """Averaged output per the nominal modulation law.

    i_o = 1.58 |I_Ls| sin(2 pi d) and v_o = i_o R_L; the law is what the
    regulation loops invert, so it uses the printed 1.58 rather than the
    exact gamma.
    """
    dv = phase_value(d)
    i_o = OUTPUT_LAW_GAIN * params.i_ls_amp * math.sin(2.0 * math.pi * dv)
    v_o = i_o * params.r_load
    power = real_power(params, dv)
    return OperatingPoint(
        p=power["p"],
        p_max=power["p_max"],
        i_o=i_o,
        v_o=v_o,
        gamma=gamma(params),
        v_m=vm(params),
    )


def spectrum(waveform, channel: str, n_harmonics: int = 40,
             fundamental_hz: float | None = None) -> Spectrum:
    """Harmonic magnitudes of a channel by DFT at multiples of f0.

    The waveform must span an integer number of fundamental periods
    (leakage would corrupt the distortion figure); by default the span is
    taken as exactly one period.  THD is the RMS of harmonics 2..H over
    the fundamental.
    """
    y = np.asarray(waveform[channel], dtype=float)
    n = len(y)
    span = n * waveform.dt
    if fundamental_hz is None:
        fundamental_hz = 1.0 / span
    cycles = span * fundamental_hz
    if abs(cycles - round(cycles)) > 1e-9 or round(cycles) < 1:
        raise ValidationError(
            f"waveform spans {cycles:.6f} fundamental periods; an integer "
            "count is required for leakage-free harmonics")
    per = int(round(cycles))
    if n_harmonics * per >= n // 2:
        raise ValidationError("n_harmonics exceeds the Nyquist range")
    coeff = np.fft.rfft(y) / n
    mags = 2.0 * np.abs(coeff[per:(n_harmonics + 1) * per:per])
    if mags[0] == 0.0:
        raise ValidationError("fundamental magnitude is zero; THD undefined")
    thd = math.sqrt(float(np.sum(mags[1:] ** 2))) / mags[0]
    return Spectrum(f0=fundamental_hz, mags=mags, thd=thd)
