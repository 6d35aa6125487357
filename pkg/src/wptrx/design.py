"""Reactive-component sizing and coupled-inductor magnetic realization.

Sizing runs in three steps: bound the effective resonant inductance
L(1-k^2) so the inductor-driven part of the AC voltage dominates the
source-driven part without excessive circulating current; bound the mutual
inductance kL so the summed inductor-current ripple stays under the chosen
fraction of the output current; then pick the resonant capacitance so each
leg's voltage bump rings back to zero exactly at the half-period for
zero-voltage switching.  The ring duration condition reduces to a
transcendental equation in the frequency ratio alpha = f_res / fs:

    (1-k)/(1+k) * tan(pi alpha / 2) + pi alpha / 2 = 0,  alpha in (1, 2).

The magnetic model maps a three-leg core (n1 turns on the center leg, n2
on the outer) with center/outer reluctances R1/R2 to (L, k); the design
search inverts it over integer turn counts with R2 as the continuous
air-gap proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .circuit import ReceiverParams
from .errors import ConvergenceError, ValidationError

DEFAULT_AC_FRACTION = 2.0 / 49.0  # voltage-stressed differential cap kept small


@dataclass(frozen=True)
class DesignSpec:
    """Electrical targets the sizing must meet."""

    v_o_nom: float        # nominal output voltage (V)
    i_o_nom: float        # nominal output current (A)
    fs: float             # switching frequency (Hz)
    i_ls_amp: float       # induced source-current amplitude (A)
    ripple_percent: float  # allowed i_lm ripple, percent of i_o_nom

    def __post_init__(self):
        for name in ("v_o_nom", "i_o_nom", "fs", "i_ls_amp"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if not 0 < self.ripple_percent <= 100:
            raise ValidationError("ripple_percent must be in (0, 100]")


@dataclass(frozen=True)
class DesignResult:
    """Sized reactive components plus the derived dimensionless quantities."""

    L: float
    k: float
    c_total: float
    c_ac: float
    c_f: float
    alpha: float
    gamma: float


@dataclass(frozen=True)
class MagneticGeometry:
    """Three-leg core winding plan and equivalent reluctances."""

    n1: int      # turns on the center leg
    n2: int      # turns on the outer leg
    r1: float    # center-leg reluctance (A-turns/Wb)
    r2: float    # outer-leg reluctance (A-turns/Wb)

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValidationError("turn counts must be >= 0")
        if not (self.r1 > 0 and self.r2 > 0):
            raise ValidationError("reluctances must be positive")


def inductance_bounds(spec: DesignSpec) -> dict:
    """Allowed band for the effective resonant inductance L(1-k^2).

    The lower bound keeps the inductor-driven voltage an order of magnitude
    above the source-driven one; the upper bound caps the circulating
    reactive current.  The band always spans a factor of ten.
    """
    denom = spec.fs * spec.i_ls_amp
    return {
        "lower": spec.v_o_nom / (40.0 * denom),
        "upper": spec.v_o_nom / (4.0 * denom),
    }


def ripple_bound(spec: DesignSpec) -> float:
    """Minimum mutual inductance kL keeping i_lm ripple under the spec.

    kL > 0.105 v_o / (x i_o fs) with x the ripple bound as a fraction.
    """
    x = spec.ripple_percent / 100.0
    return 0.105 * spec.v_o_nom / (x * spec.i_o_nom * spec.fs)


def feasible_region(spec: DesignSpec, k_grid, l_grid) -> np.ndarray:
    """Boolean grid over (k, L): True where both sizing bounds hold."""
    k_grid = np.asarray(k_grid, dtype=float)
    l_grid = np.asarray(l_grid, dtype=float)
    if np.any(np.diff(k_grid) <= 0) or np.any(np.diff(l_grid) <= 0):
        raise ValidationError("grids must be strictly ascending")
    bounds = inductance_bounds(spec)
    kl_min = ripple_bound(spec)
    kk = k_grid[:, None]
    ll = l_grid[None, :]
    l_eff = ll * (1.0 - kk**2)
    return (
        (l_eff > bounds["lower"])
        & (l_eff < bounds["upper"])
        & (kk * ll > kl_min)
    )


def solve_alpha(k: float) -> float:
    """Frequency ratio making the resonant bump span exactly a half-period.

    Unique root of (1-k)/(1+k) tan(pi a/2) + pi a/2 = 0 on (1, 2), found by
    bisection on the branch where the tangent is negative.
    """
    if not 0.0 <= k < 1.0:
        raise ValidationError(f"k must be in [0, 1), got {k}")
    ratio = (1.0 - k) / (1.0 + k)

    def f(a):
        return ratio * math.tan(0.5 * math.pi * a) + 0.5 * math.pi * a

    lo, hi = 1.0 + 1e-13, 2.0 - 1e-13
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-15:
            break
    root = 0.5 * (lo + hi)
    if abs(f(root)) > 1e-9:
        raise ConvergenceError(f"alpha root did not converge for k={k}")
    return root


def resonant_capacitance(L: float, k: float, fs: float) -> float:
    """Total resonant capacitance C_AC + C_f enforcing the half-period ring.

    c_total = 1 / (4 pi^2 fs^2 alpha^2 L (1-k^2)), i.e. the tank of
    L(1-k^2) with c_total resonates at alpha * fs.
    """
    if not (L > 0 and fs > 0):
        raise ValidationError("L and fs must be positive")
    alpha = solve_alpha(k)
    return 1.0 / ((2.0 * math.pi * fs * alpha) ** 2 * L * (1.0 - k**2))


def split_capacitance(c_total: float, ac_fraction: float = DEFAULT_AC_FRACTION) -> dict:
    """Split the resonant capacitance between the AC port and the legs.

    The differential capacitor sees roughly twice the leg voltage stress,
    so it gets the small share.
    """
    if not 0.0 <= ac_fraction < 0.5:
        raise ValidationError("ac_fraction must be in [0, 0.5)")
    c_ac = ac_fraction * c_total
    return {"c_ac": c_ac, "c_f": c_total - c_ac}


def size_receiver(spec: DesignSpec, k: float, L: float,
                  ac_fraction: float = DEFAULT_AC_FRACTION,
                  enforce_bounds: bool = True) -> DesignResult:
    """Full sizing for a chosen (k, L) point.

    Validates the point against both inductance bounds (unless disabled),
    then fills the capacitances and the derived alpha and gamma.
    """
    bounds = inductance_bounds(spec)
    l_eff = L * (1.0 - k**2)
    if enforce_bounds:
        if not bounds["lower"] < l_eff < bounds["upper"]:
            raise ValidationError(
                f"L(1-k^2) = {l_eff:.3e} H outside ({bounds['lower']:.3e}, "
                f"{bounds['upper']:.3e}) H")
        if not k * L > ripple_bound(spec):
            raise ValidationError(
                f"kL = {k * L:.3e} H below the ripple bound "
                f"{ripple_bound(spec):.3e} H")
    alpha = solve_alpha(k)
    c_total = resonant_capacitance(L, k, spec.fs)
    split = split_capacitance(c_total, ac_fraction)
    g = 2.0 * (1.0 - k) * alpha**2 / (math.pi * (alpha**2 - 1.0))
    return DesignResult(L=L, k=k, c_total=c_total, c_ac=split["c_ac"],
                        c_f=split["c_f"], alpha=alpha, gamma=g)


def designed_receiver_params(spec: DesignSpec, k: float, L: float,
                             c_o: float, r_load: float | None = None,
                             ac_fraction: float = DEFAULT_AC_FRACTION,
                             enforce_bounds: bool = True) -> ReceiverParams:
    """Convenience: run the sizing and assemble simulator parameters."""
    res = size_receiver(spec, k, L, ac_fraction, enforce_bounds)
    if r_load is None:
        r_load = spec.v_o_nom / spec.i_o_nom
    return ReceiverParams(
        fs=spec.fs, i_ls_amp=spec.i_ls_amp, L=L, k=k,
        c_f=res.c_f, c_ac=res.c_ac, c_o=c_o, r_load=r_load,
        v_o_ref=spec.v_o_nom,
    )


def magnetic_inductance(g: MagneticGeometry) -> dict:
    """Self-inductance and coupling of the three-leg winding plan.

    L = [2 R2 n1^2 + 2 R2 n1 n2 + (R1+R2) n2^2] / ((2 R1 + R2) R2)
    k = 1 - n2^2 / (R2 L)

    With n2 = 0 the winding sits wholly on the shared center leg and the
    coupling is exactly 1; n1 = 0 drives k negative, which is flagged to
    the caller rather than hidden.
    """
    r1, r2, n1, n2 = g.r1, g.r2, g.n1, g.n2
    L = (2.0 * r2 * n1**2 + 2.0 * r2 * n1 * n2 + (r1 + r2) * n2**2) / (
        (2.0 * r1 + r2) * r2)
    if L <= 0:
        raise ValidationError("geometry yields non-positive inductance")
    k = 1.0 - n2**2 / (r2 * L)
    return {"L": L, "k": k}


def solve_magnetic_design(l_target: float, k_target: float, r1: float,
                          turn_limit: int = 60, tol: float = 0.02) -> MagneticGeometry:
    """Find integer turns and an outer-leg reluctance hitting (L, k).

    For each candidate (n1, n2), the outer reluctance (the air-gap proxy)
    is solved so the coupling matches exactly, then the inductance is
    checked against the tolerance.  Among feasible candidates the one with
    the fewest total turns wins.  k = 1 is only realizable on the n2 = 0
    branch and is otherwise rejected.
    """
    if not l_target > 0:
        raise ValidationError("l_target must be positive")
    if not r1 > 0:
        raise ValidationError("r1 must be positive")
    if k_target == 1.0:
        # pure center-leg winding; needs r2 = 2 n1^2 / L - 2 r1 > 0
        for n1 in range(1, turn_limit + 1):
            r2 = 2.0 * n1**2 / l_target - 2.0 * r1
            if r2 > 0:
                return MagneticGeometry(n1=n1, n2=0, r1=r1, r2=r2)
        raise ValidationError(
            "k = 1 requires the center-leg-only branch, infeasible within "
            "the turn limit")
    if not 0.0 < k_target < 1.0:
        raise ValidationError("k_target must be in (0, 1)")

    def k_of(n1, n2, r2):
        return magnetic_inductance(
            MagneticGeometry(n1=n1, n2=n2, r1=r1, r2=r2))["k"]

    for total in range(1, 2 * turn_limit + 1):
        for n2 in range(1, min(total, turn_limit) + 1):
            n1 = total - n2
            if n1 > turn_limit:
                continue
            # k(r2) rises from -1 toward its r2 -> inf ceiling
            k_inf = 2.0 * n1 * (n1 + n2) / (2.0 * n1**2 + 2.0 * n1 * n2 + n2**2)
            if k_target >= k_inf:
                continue
            lo = 1e-6 * r1
            hi = 1e12 * r1
            if not (k_of(n1, n2, lo) < k_target < k_of(n1, n2, hi)):
                continue
            r2 = brentq(lambda r: k_of(n1, n2, r) - k_target, lo, hi,
                        xtol=1e-30, rtol=1e-14)
            got = magnetic_inductance(MagneticGeometry(n1=n1, n2=n2, r1=r1, r2=r2))
            if (abs(got["L"] - l_target) <= tol * l_target
                    and abs(got["k"] - k_target) <= tol * abs(k_target)):
                return MagneticGeometry(n1=n1, n2=n2, r1=r1, r2=r2)
    raise ValidationError(
        f"no winding plan within {turn_limit} turns reaches "
        f"L={l_target:.3e} H, k={k_target}")
