import math

import numpy as np
import pytest

from wptrx import (
    MagneticGeometry,
    ValidationError,
    feasible_region,
    inductance_bounds,
    magnetic_inductance,
    periodic_steady_state,
    resonant_capacitance,
    ripple_bound,
    solve_alpha,
    solve_magnetic_design,
    split_capacitance,
    zvs_metrics,
)
from wptrx.design import DesignSpec, designed_receiver_params, size_receiver

# measured coupled-inductor point of the 12 V / 2 A prototype
PROTO_L = 22.25e-6
PROTO_K = 0.71

# tabulated roots of the ring-duration equation (rounded to 0.01)
ALPHA_TABLE = [
    (0.0, 1.29), (0.1, 1.25), (0.2, 1.21), (0.3, 1.18), (0.4, 1.15),
    (0.5, 1.12), (0.6, 1.09), (0.7, 1.07), (0.8, 1.04), (0.9, 1.02),
]


class TestInductanceBounds:
    def test_hand_arithmetic(self, proto_spec):
        b = inductance_bounds(proto_spec)
        assert b["lower"] == pytest.approx(12.0 / (40 * 200e3 * 1.27))
        assert b["upper"] == pytest.approx(12.0 / (4 * 200e3 * 1.27))
        assert b["upper"] / b["lower"] == pytest.approx(10.0)

    def test_linear_in_output_voltage(self, proto_spec):
        doubled = DesignSpec(v_o_nom=24.0, i_o_nom=2.0, fs=200e3,
                             i_ls_amp=1.27, ripple_percent=40.0)
        b1 = inductance_bounds(proto_spec)
        b2 = inductance_bounds(doubled)
        assert b2["lower"] == pytest.approx(2 * b1["lower"])
        assert b2["upper"] == pytest.approx(2 * b1["upper"])

    def test_prototype_point_inside(self, proto_spec):
        b = inductance_bounds(proto_spec)
        l_eff = PROTO_L * (1 - PROTO_K**2)
        assert b["lower"] < l_eff < b["upper"]


class TestRippleBound:
    def test_hand_arithmetic(self, proto_spec):
        assert ripple_bound(proto_spec) == pytest.approx(
            0.105 * 12.0 / (0.40 * 2.0 * 200e3))

    def test_prototype_satisfies(self, proto_spec):
        assert PROTO_K * PROTO_L > ripple_bound(proto_spec)

    def test_inverse_in_current(self, proto_spec):
        doubled = DesignSpec(v_o_nom=12.0, i_o_nom=4.0, fs=200e3,
                             i_ls_amp=1.27, ripple_percent=40.0)
        assert ripple_bound(doubled) == pytest.approx(
            ripple_bound(proto_spec) / 2)

    def test_relaxed_at_full_ripple(self, proto_spec):
        relaxed = DesignSpec(v_o_nom=12.0, i_o_nom=2.0, fs=200e3,
                             i_ls_amp=1.27, ripple_percent=100.0)
        assert ripple_bound(proto_spec) / ripple_bound(relaxed) == \
            pytest.approx(2.5)


class TestFeasibleRegion:
    def test_zero_coupling_row_infeasible(self, proto_spec):
        grid = feasible_region(proto_spec, [0.0, 0.5], np.linspace(1e-6, 40e-6, 20))
        assert not grid[0].any()

    def test_prototype_point_feasible(self, proto_spec):
        grid = feasible_region(proto_spec, [PROTO_K], [PROTO_L])
        assert grid[0, 0]

    def test_tiny_inductance_all_infeasible(self, proto_spec):
        grid = feasible_region(proto_spec, np.linspace(0.1, 0.9, 9),
                               np.linspace(1e-9, 1e-8, 5))
        assert not grid.any()

    def test_unsorted_grid_rejected(self, proto_spec):
        with pytest.raises(ValidationError):
            feasible_region(proto_spec, [0.5, 0.2], [1e-6, 2e-6])


class TestSolveAlpha:
    @pytest.mark.parametrize("k,alpha", ALPHA_TABLE)
    def test_tabulated_roots(self, k, alpha):
        assert abs(solve_alpha(k) - alpha) <= 0.005

    def test_residual_is_tiny(self):
        for k in (0.0, 0.3, 0.71, 0.95):
            a = solve_alpha(k)
            res = (1 - k) / (1 + k) * math.tan(math.pi * a / 2) + math.pi * a / 2
            assert abs(res) < 1e-9

    def test_strictly_decreasing_in_k(self):
        ks = np.linspace(0.0, 0.9, 10)
        alphas = [solve_alpha(k) for k in ks]
        assert np.all(np.diff(alphas) < 0)

    def test_limit_toward_full_coupling(self):
        assert 1.0 < solve_alpha(0.99) < 1.01

    def test_domain(self):
        with pytest.raises(ValidationError):
            solve_alpha(1.0)
        with pytest.raises(ValidationError):
            solve_alpha(-0.1)


class TestResonantCapacitance:
    def test_prototype_value(self):
        # the hardware pairing was 47 nF + 2 nF = 49 nF
        c = resonant_capacitance(PROTO_L, PROTO_K, 200e3)
        assert abs(c - 49e-9) / 49e-9 < 0.05

    def test_resonance_sits_at_alpha_fs(self):
        fs = 200e3
        c = resonant_capacitance(5e-6, 0.0, fs)
        f_res = 1.0 / (2 * math.pi * math.sqrt(5e-6 * c))
        assert f_res == pytest.approx(solve_alpha(0.0) * fs, rel=1e-9)
        assert f_res == pytest.approx(258e3, rel=0.01)

    def test_inverse_in_inductance(self):
        c1 = resonant_capacitance(5e-6, 0.3, 200e3)
        c4 = resonant_capacitance(20e-6, 0.3, 200e3)
        assert c1 == pytest.approx(4 * c4, rel=1e-12)


class TestSplitCapacitance:
    def test_prototype_ratio(self):
        s = split_capacitance(49e-9, 2.0 / 49.0)
        assert s["c_ac"] == pytest.approx(2e-9)
        assert s["c_f"] == pytest.approx(47e-9)

    def test_zero_fraction(self):
        s = split_capacitance(49e-9, 0.0)
        assert s["c_ac"] == 0.0
        assert s["c_f"] == 49e-9

    def test_sum_preserved(self):
        for frac in (0.0, 0.1, 0.4999):
            s = split_capacitance(33e-9, frac)
            assert s["c_ac"] + s["c_f"] == pytest.approx(33e-9, rel=1e-15)

    def test_fraction_range(self):
        with pytest.raises(ValidationError):
            split_capacitance(49e-9, 0.5)
        with pytest.raises(ValidationError):
            split_capacitance(49e-9, -0.01)


class TestMagneticInductance:
    def test_center_leg_only(self):
        g = MagneticGeometry(n1=10, n2=0, r1=2e6, r2=1e6)
        out = magnetic_inductance(g)
        assert out["L"] == pytest.approx(2 * 100 / (2 * 2e6 + 1e6))
        assert out["k"] == pytest.approx(1.0)

    def test_outer_leg_only_flags_negative_coupling(self):
        g = MagneticGeometry(n1=0, n2=10, r1=2e6, r2=1e6)
        out = magnetic_inductance(g)
        expected_l = (2e6 + 1e6) * 100 / ((2 * 2e6 + 1e6) * 1e6)
        assert out["L"] == pytest.approx(expected_l)
        assert out["k"] == pytest.approx(1 - (2 * 2e6 + 1e6) / (2e6 + 1e6))
        assert out["k"] < 0

    def test_reluctance_homogeneity(self):
        g1 = MagneticGeometry(n1=7, n2=3, r1=1.5e6, r2=0.8e6)
        g2 = MagneticGeometry(n1=7, n2=3, r1=3.0e6, r2=1.6e6)
        o1, o2 = magnetic_inductance(g1), magnetic_inductance(g2)
        assert o2["L"] == pytest.approx(o1["L"] / 2, rel=1e-12)
        assert o2["k"] == pytest.approx(o1["k"], rel=1e-12)

    def test_bad_geometry_rejected(self):
        with pytest.raises(ValidationError):
            MagneticGeometry(n1=-1, n2=0, r1=1e6, r2=1e6)
        with pytest.raises(ValidationError):
            MagneticGeometry(n1=1, n2=0, r1=0.0, r2=1e6)


class TestSolveMagneticDesign:
    def test_round_trip(self):
        geo = solve_magnetic_design(PROTO_L, PROTO_K, r1=1e6)
        got = magnetic_inductance(geo)
        assert abs(got["L"] - PROTO_L) / PROTO_L <= 0.02
        assert abs(got["k"] - PROTO_K) / PROTO_K <= 0.02

    def test_fewest_turns_wins(self):
        # brute-force oracle over smaller turn totals using the closed
        # forms directly: no cheaper winding may reach the same targets
        geo = solve_magnetic_design(PROTO_L, PROTO_K, r1=1e6)
        found_total = geo.n1 + geo.n2

        def k_at(n1, n2, r2):
            L = (2 * r2 * n1**2 + 2 * r2 * n1 * n2 + (1e6 + r2) * n2**2) / (
                (2 * 1e6 + r2) * r2)
            return L, 1 - n2**2 / (r2 * L)

        for total in range(1, found_total):
            for n2 in range(1, total + 1):
                n1 = total - n2
                for r2 in np.geomspace(1e3, 1e12, 2000):
                    L, k = k_at(n1, n2, r2)
                    if abs(L - PROTO_L) / PROTO_L <= 0.02 \
                            and abs(k - PROTO_K) / PROTO_K <= 0.02:
                        pytest.fail(f"cheaper winding {n1}+{n2} exists")

    def test_full_coupling_needs_center_branch(self):
        geo = solve_magnetic_design(20e-6, 1.0, r1=1e6)
        assert geo.n2 == 0
        assert magnetic_inductance(geo)["k"] == pytest.approx(1.0)

    def test_invalid_targets(self):
        with pytest.raises(ValidationError):
            solve_magnetic_design(20e-6, 1.2, r1=1e6)
        with pytest.raises(ValidationError):
            solve_magnetic_design(20e-6, 0.0, r1=1e6)
        with pytest.raises(ValidationError):
            solve_magnetic_design(-1e-6, 0.5, r1=1e6)

    def test_infeasible_within_turn_limit(self):
        with pytest.raises(ValidationError):
            solve_magnetic_design(1e3, 0.5, r1=1e6, turn_limit=5)


class TestEndToEndDesign:
    @pytest.mark.parametrize("spec_kw,k", [
        (dict(v_o_nom=12.0, i_o_nom=2.0, fs=200e3, i_ls_amp=1.27,
              ripple_percent=40.0), 0.71),
        (dict(v_o_nom=5.0, i_o_nom=1.0, fs=100e3, i_ls_amp=0.8,
              ripple_percent=40.0), 0.65),
        (dict(v_o_nom=24.0, i_o_nom=1.0, fs=300e3, i_ls_amp=0.7,
              ripple_percent=30.0), 0.75),
    ])
    def test_sized_circuit_switches_at_zero(self, spec_kw, k):
        # pick an inductance inside both bounds, size the capacitors, and
        # confirm the simulated orbit switches at (near) zero volts at the
        # nominal load and at +/-50%
        spec = DesignSpec(**spec_kw)
        b = inductance_bounds(spec)
        lo = max(b["lower"], ripple_bound(spec) * (1 - k**2) / k) / (1 - k**2)
        hi = b["upper"] / (1 - k**2)
        assert lo < hi, "chosen k leaves no feasible inductance"
        L = math.sqrt(lo * hi)
        r_nom = spec.v_o_nom / spec.i_o_nom
        c_o = 8000.0 / (spec.fs * r_nom)
        for r_scale in (0.5, 1.0, 1.5):
            p = designed_receiver_params(spec, k=k, L=L, c_o=c_o,
                                         r_load=r_nom * r_scale)
            ss = periodic_steady_state(p, 0.25)
            z = zvs_metrics(ss, p)
            worst = max(abs(z.v_at_s1_on), abs(z.v_at_s2_on))
            assert worst < 0.02 * z.v_c_peak

    def test_size_receiver_rejects_out_of_band_point(self, proto_spec):
        with pytest.raises(ValidationError):
            size_receiver(proto_spec, 0.71, 200e-6)
        with pytest.raises(ValidationError):
            size_receiver(proto_spec, 0.05, PROTO_L)  # ripple bound fails
