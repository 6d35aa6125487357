"""Receiver electrical model: parameters and per-mode linear dynamics.

The rectifier is a differential pair of class-E half-circuits sharing a
coupled inductor (L1 = L2 = L, mutual kL) and driven by the receiver-coil
current, which series-series compensation makes behave as an independent
sinusoidal current source.  The two ground-referenced switches gate
complementarily at 50% duty, giving two half-period modes:

  Mode I  (first half-period):  S1 off, S2 on -> C_f2 shorted, leg-1 tank
          (C_f1 + C_AC against L(1-k^2)) rings.
  Mode II (second half-period): mirror image on leg 2.

Within each mode the circuit is linear, so the whole receiver is a switched
linear system in the state (i_l1, i_l2, v_c1, v_c2, v_o).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# State vector layout used by every solver in the package.
IDX_I_L1 = 0
IDX_I_L2 = 1
IDX_V_C1 = 2
IDX_V_C2 = 3
IDX_V_O = 4
N_STATES = 5

STATE_NAMES = ("i_l1", "i_l2", "v_c1", "v_c2", "v_o")


class Mode(enum.Enum):
    """Half-period conduction mode of the rectifier."""

    MODE_I = 1   # S1 off, S2 on; v_c2 clamped to zero
    MODE_II = 2  # S2 off, S1 on; v_c1 clamped to zero

    @property
    def clamped_index(self) -> int:
        """State index of the capacitor shorted by the conducting switch."""
        return IDX_V_C2 if self is Mode.MODE_I else IDX_V_C1

    @property
    def ringing_index(self) -> int:
        """State index of the capacitor free to resonate in this mode."""
        return IDX_V_C1 if self is Mode.MODE_I else IDX_V_C2


@dataclass(frozen=True)
class ReceiverParams:
    """Electrical constants of the receiver.

    Attributes:
        fs: switching frequency (Hz).
        i_ls_amp: amplitude of the induced coil current (A).
        L: self-inductance of each coupled-inductor leg (H).
        k: coupling coefficient of the two legs, 0 <= k < 1.
        c_f: per-leg resonant capacitance (F).
        c_ac: differential capacitance across the AC port (F).
        c_o: output capacitance (F).
        r_load: load resistance (ohm); math.inf models an open load.
        v_o_ref: nominal output voltage (V), used by design and control.
    """

    fs: float
    i_ls_amp: float
    L: float
    k: float
    c_f: float
    c_ac: float
    c_o: float
    r_load: float
    v_o_ref: float

    def __post_init__(self):
        if not self.fs > 0:
            raise ValidationError(f"fs must be positive, got {self.fs}")
        if self.i_ls_amp < 0:
            raise ValidationError(f"i_ls_amp must be >= 0, got {self.i_ls_amp}")
        if not self.L > 0:
            raise ValidationError(f"L must be positive, got {self.L}")
        if not 0 <= self.k < 1:
            raise ValidationError(
                f"k must lie in [0, 1); k={self.k} makes the effective "
                "resonant inductance L(1-k^2) singular"
            )
        if not self.c_f > 0:
            raise ValidationError(f"c_f must be positive, got {self.c_f}")
        if self.c_ac < 0:
            raise ValidationError(f"c_ac must be >= 0, got {self.c_ac}")
        if not self.c_o > 0:
            raise ValidationError(f"c_o must be positive, got {self.c_o}")
        if not self.r_load > 0:
            raise ValidationError(f"r_load must be positive, got {self.r_load}")

    @property
    def ts(self) -> float:
        """Switching period (s)."""
        return 1.0 / self.fs

    @property
    def c_res(self) -> float:
        """Effective per-mode resonant capacitance C_AC + C_f (F)."""
        return self.c_ac + self.c_f

    @property
    def l_eff(self) -> float:
        """Effective resonant inductance L(1-k^2) (H)."""
        return self.L * (1.0 - self.k**2)

    def replace(self, **changes) -> "ReceiverParams":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class PhaseShift:
    """Phase-shift ratio of the gate pattern against the coil current.

    The single control input; d = 0 transfers no real power, d = 0.25
    aligns the AC voltage fundamental with the current for maximum power.
    """

    d: float

    def __post_init__(self):
        if not 0.0 <= self.d <= 0.25:
            raise ValidationError(f"phase-shift ratio must be in [0, 0.25], got {self.d}")


def phase_value(d) -> float:
    """Accept either a PhaseShift or a bare ratio and return the float."""
    if isinstance(d, PhaseShift):
        return d.d
    d = float(d)
    if not 0.0 <= d <= 0.25:
        raise ValidationError(f"phase-shift ratio must be in [0, 0.25], got {d}")
    return d


@dataclass(frozen=True)
class StateVector:
    """Dynamic state of the receiver at one instant."""

    i_l1: float
    i_l2: float
    v_c1: float
    v_c2: float
    v_o: float

    def as_array(self) -> np.ndarray:
        return np.array([self.i_l1, self.i_l2, self.v_c1, self.v_c2, self.v_o])

    @staticmethod
    def from_array(x) -> "StateVector":
        x = np.asarray(x, dtype=float)
        return StateVector(*(float(v) for v in x[:N_STATES]))

    @staticmethod
    def zero() -> "StateVector":
        return StateVector(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class LinearDynamics:
    """State-space dynamics of one mode: dx/dt = a @ x + b * i_ls(t).

    The row of the clamped capacitor is identically zero (its voltage is
    pinned by the conducting switch).  The source-coupling vector b carries
    the sign of the differential port: the coil current enters leg 1 and
    leaves leg 2, so b points into v_c1 in Mode I and out of v_c2 in
    Mode II.
    """

    a: np.ndarray
    b: np.ndarray
    mode: Mode


def source_current(params: ReceiverParams, d, t):
    """Induced coil current i_ls(t) = |I_Ls| cos(2 pi fs t - 2 pi d).

    Accepts scalar or array time; the phase-shift ratio delays the current
    relative to the gate clock that defines the mode boundaries.
    """
    dv = phase_value(d)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValidationError("time must be >= 0")
    out = params.i_ls_amp * np.cos(2.0 * math.pi * params.fs * t - 2.0 * math.pi * dv)
    return float(out) if out.ndim == 0 else out


def assemble_mode_dynamics(params: ReceiverParams, mode: Mode) -> LinearDynamics:
    """Build the 5x5 state matrix and source coupling for one mode.

    The coupled-inductor pair is inverted analytically (2x2 with determinant
    L^2(1-k^2)), giving explicit rates for both leg currents.  In Mode I:

        di_l1/dt = [ v_c1 - (1-k) v_o] / (L (1-k^2))
        di_l2/dt = [-k v_c1 - (1-k) v_o] / (L (1-k^2))
        dv_c1/dt = (i_ls - i_l1) / (C_AC + C_f)
        dv_o/dt  = (i_l1 + i_l2 - v_o / R_L) / C_o

    Mode II mirrors legs 1 <-> 2; its source coupling is negated because the
    coil current leaves the rectifier through the leg-2 node.
    """
    if params.k >= 1.0:
        raise ValidationError("k >= 1 makes the inductance matrix singular")

    le = params.l_eff
    cr = params.c_res
    k = params.k

    a = np.zeros((N_STATES, N_STATES))
    b = np.zeros(N_STATES)

    if mode is Mode.MODE_I:
        a[IDX_I_L1, IDX_V_C1] = 1.0 / le
        a[IDX_I_L1, IDX_V_O] = -(1.0 - k) / le
        a[IDX_I_L2, IDX_V_C1] = -k / le
        a[IDX_I_L2, IDX_V_O] = -(1.0 - k) / le
        a[IDX_V_C1, IDX_I_L1] = -1.0 / cr
        b[IDX_V_C1] = 1.0 / cr
    else:
        a[IDX_I_L2, IDX_V_C2] = 1.0 / le
        a[IDX_I_L2, IDX_V_O] = -(1.0 - k) / le
        a[IDX_I_L1, IDX_V_C2] = -k / le
        a[IDX_I_L1, IDX_V_O] = -(1.0 - k) / le
        a[IDX_V_C2, IDX_I_L2] = -1.0 / cr
        b[IDX_V_C2] = -1.0 / cr

    a[IDX_V_O, IDX_I_L1] = 1.0 / params.c_o
    a[IDX_V_O, IDX_I_L2] = 1.0 / params.c_o
    a[IDX_V_O, IDX_V_O] = -1.0 / (params.r_load * params.c_o)

    return LinearDynamics(a=a, b=b, mode=mode)


# Index permutation that exchanges leg 1 and leg 2 quantities.
LEG_SWAP = np.array([IDX_I_L2, IDX_I_L1, IDX_V_C2, IDX_V_C1, IDX_V_O])


def swap_legs(x: np.ndarray) -> np.ndarray:
    """Exchange (i_l1, v_c1) with (i_l2, v_c2) in a state array."""
    x = np.asarray(x)
    return x[..., LEG_SWAP]
