"""Frequency synchronization and phase-shifted gate generation.

Models the digital chain between the coil-current sense and the gate
drivers: a zero-crossing comparator turns the sinusoid into a sync pulse
train; a first timer locks to it cycle-by-cycle (so frequency drift is
corrected one period late); a second timer runs offset by the commanded
phase-shift ratio and its 50% compare generates the complementary gates.
The net effect is that the rising edge of the first gate trails the coil
current's cosine peak by (0.25 + d) of a period.

Timer quantization matters for regulation resolution, so edge placement
snaps to an integer tick grid (4096 ticks per period by default).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import phase_value
from .errors import ValidationError

DEFAULT_TICKS_PER_PERIOD = 4096


@dataclass
class GateTimeline:
    """Per-cycle gate edges (absolute times, seconds).

    ``gs2`` conducts the first half of each shifted cycle and ``gs1`` the
    second half; the pair is complementary with 50% duty (no dead time by
    default).  ``periods[i]`` is the measured source period used for
    cycle i.
    """

    cycle_starts: np.ndarray = field(default_factory=lambda: np.empty(0))
    periods: np.ndarray = field(default_factory=lambda: np.empty(0))
    gs1_rise: np.ndarray = field(default_factory=lambda: np.empty(0))
    gs1_fall: np.ndarray = field(default_factory=lambda: np.empty(0))
    gs2_rise: np.ndarray = field(default_factory=lambda: np.empty(0))
    gs2_fall: np.ndarray = field(default_factory=lambda: np.empty(0))
    ticks_per_period: int = DEFAULT_TICKS_PER_PERIOD
    dead_time: float = 0.0

    @property
    def n_cycles(self) -> int:
        return len(self.cycle_starts)

    def gate_state(self, t: float) -> tuple[bool, bool]:
        """(gs1, gs2) assertion at time t, half-open [rise, fall) intervals."""
        gs1 = bool(np.any((self.gs1_rise <= t) & (t < self.gs1_fall)))
        gs2 = bool(np.any((self.gs2_rise <= t) & (t < self.gs2_fall)))
        return gs1, gs2


def zero_cross_detect(t, y, hysteresis: float = 0.0) -> np.ndarray:
    """Rising zero-crossing times of a sampled signal.

    Crossings are located by linear interpolation between the bracketing
    samples.  With a nonzero hysteresis band the detector arms only after
    the signal falls below -hysteresis and fires once it exceeds
    +hysteresis, which rejects noise-induced double crossings.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1 or len(t) < 2:
        raise ValidationError("t and y must be equal-length 1-D arrays")
    if hysteresis < 0:
        raise ValidationError("hysteresis must be >= 0")

    edges = []
    if hysteresis == 0.0:
        neg = y[:-1] < 0.0
        pos = y[1:] >= 0.0
        idx = np.nonzero(neg & pos)[0]
        for i in idx:
            frac = -y[i] / (y[i + 1] - y[i])
            edges.append(t[i] + frac * (t[i + 1] - t[i]))
    else:
        armed = y[0] < -hysteresis
        for i in range(1, len(y)):
            if not armed:
                if y[i] < -hysteresis:
                    armed = True
                continue
            if y[i] > hysteresis:
                # locate the actual zero crossing inside the armed stretch
                j = i
                while j > 0 and y[j - 1] >= 0.0:
                    j -= 1
                frac = -y[j - 1] / (y[j] - y[j - 1])
                edges.append(t[j - 1] + frac * (t[j] - t[j - 1]))
                armed = False
    if not edges:
        raise ValidationError("no rising zero crossings in the sampled span")
    return np.asarray(edges)


def pwm_generate(sync_edges, d, ticks_per_period: int = DEFAULT_TICKS_PER_PERIOD,
                 dead_time: float = 0.0) -> GateTimeline:
    """Complementary phase-shifted gates from a sync edge train.

    Each cycle adopts the period measured between the two preceding sync
    edges, so a frequency step is tracked on the following cycle.  Within a
    cycle starting at edge e with period T (tick q = T / ticks):

        gs2: rises at e + q(d T),        falls at e + q((0.5 + d) T)
        gs1: rises at e + q((0.5 + d) T) + dead_time, falls at e + q((1 + d) T)

    which places gs1's rising edge (0.25 + d) T after the cosine peak of
    the sensed current (the peak trails a rising zero crossing by T/4).
    """
    dv = phase_value(d)
    edges = np.asarray(sync_edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2:
        raise ValidationError("need at least two sync edges to measure a period")
    if np.any(np.diff(edges) <= 0):
        raise ValidationError("sync edges must be strictly increasing")
    if ticks_per_period < 2:
        raise ValidationError("ticks_per_period must be >= 2")
    if dead_time < 0:
        raise ValidationError("dead_time must be >= 0")

    starts, periods = [], []
    gs1r, gs1f, gs2r, gs2f = [], [], [], []
    for i in range(1, len(edges)):
        e = edges[i]
        period = edges[i] - edges[i - 1]
        tick = period / ticks_per_period

        def q(x):
            return round(x / tick) * tick

        starts.append(e)
        periods.append(period)
        gs2r.append(e + q(dv * period))
        gs2f.append(e + q((0.5 + dv) * period))
        gs1r.append(e + q((0.5 + dv) * period) + dead_time)
        gs1f.append(e + q((1.0 + dv) * period))
    return GateTimeline(
        cycle_starts=np.asarray(starts),
        periods=np.asarray(periods),
        gs1_rise=np.asarray(gs1r),
        gs1_fall=np.asarray(gs1f),
        gs2_rise=np.asarray(gs2r),
        gs2_fall=np.asarray(gs2f),
        ticks_per_period=ticks_per_period,
        dead_time=dead_time,
    )


def quantize_phase(d, ticks_per_period: int = DEFAULT_TICKS_PER_PERIOD) -> float:
    """Snap a phase-shift ratio to the timer tick grid."""
    dv = phase_value(d)
    return round(dv * ticks_per_period) / ticks_per_period
