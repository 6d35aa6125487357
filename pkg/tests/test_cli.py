import json
import textwrap

import numpy as np
import pytest

from wptrx import cli
from wptrx.errors import ConvergenceError

RECEIVER = """\
[receiver]
fs_hz = 200e3
i_ls_amp_a = 1.27
l_h = 22.25e-6
k = 0.71
c_f_f = 48.594e-9
c_ac_f = 2.068e-9
c_o_f = 6800e-6
r_load_ohm = 6.0
v_o_ref_v = 12.0
"""

DESIGN = """\
[design]
v_o_nom_v = 12.0
i_o_nom_a = 2.0
fs_hz = 200e3
i_ls_amp_a = 1.27
ripple_percent = 40
k = 0.71
l_h = 22.25e-6

[magnetics]
r1_per_h = 1e6
turn_limit = 60

[feasible-region]
k_min = 0.1
k_max = 0.9
k_points = 9
l_min_h = 2e-6
l_max_h = 40e-6
l_points = 11
"""


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def run(args):
    return cli.main([*args])


class TestSteadyStateCommand:
    def test_artifacts_and_determinism(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + "[steady-state]\nd = 0.25\n"
                    + "[solver]\nsteps_per_period = 512\n")
        out1 = tmp_path / "o1"
        out2 = tmp_path / "o2"
        assert run(["steady-state", cfg, "--out", str(out1), "--no-plot"]) == 0
        assert run(["steady-state", cfg, "--out", str(out2), "--no-plot"]) == 0
        csv1 = (out1 / "steady_state_waveform.csv").read_bytes()
        csv2 = (out2 / "steady_state_waveform.csv").read_bytes()
        assert csv1 == csv2
        summary = json.loads((out1 / "steady_state_summary.json").read_text())
        assert summary["schema_version"] == 1
        assert summary["thd_vac"] <= 0.10
        assert summary["zvs"]["worst_on_ratio"] < 0.02

    def test_csv_round_trip(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + "[steady-state]\nd = 0.2\n"
                    + "[solver]\nsteps_per_period = 256\n")
        out = tmp_path / "o"
        assert run(["steady-state", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "steady_state_waveform.csv", delimiter=",",
                             names=True)
        # reload losslessly at the printed precision and re-derive v_ac
        np.testing.assert_allclose(data["v_ac"], data["v_c1"] - data["v_c2"],
                                   atol=1e-9)
        assert len(data) == 256

    def test_figures_rendered(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + "[steady-state]\nd = 0.25\n"
                    + "[solver]\nsteps_per_period = 256\n")
        out = tmp_path / "o"
        assert run(["steady-state", cfg, "--out", str(out)]) == 0
        assert (out / "steady_state.png").stat().st_size > 1000
        assert (out / "spectrum.png").stat().st_size > 1000


class TestDesignCommands:
    def test_design_json(self, tmp_path):
        cfg = write(tmp_path, "d.ini", DESIGN)
        out = tmp_path / "o"
        assert run(["design", cfg, "--out", str(out), "--no-plot"]) == 0
        payload = json.loads((out / "design.json").read_text())
        assert payload["c_total_f"] == pytest.approx(50.66e-9, rel=0.01)
        assert payload["alpha"] == pytest.approx(1.064, abs=0.005)
        assert payload["magnetics"]["n1"] >= 1

    def test_feasible_region_csv(self, tmp_path):
        cfg = write(tmp_path, "d.ini", DESIGN)
        out = tmp_path / "o"
        assert run(["feasible-region", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "feasible_region.csv", delimiter=",",
                             names=True)
        assert len(data) == 9 * 11
        assert set(np.unique(data["feasible"])) <= {0.0, 1.0}
        assert data["feasible"].any()

    def test_alpha_table(self, tmp_path):
        cfg = write(tmp_path, "empty.ini", "")
        out = tmp_path / "o"
        assert run(["alpha-table", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "alpha_table.csv", delimiter=",", names=True)
        assert len(data) == 10
        assert data["alpha"][0] == pytest.approx(1.29, abs=0.005)


class TestSweepCommand:
    def test_law_column_endpoints(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + """\
[sweep-d]
d_values = 0 0.125 0.25
simulate = true
diode_hold = false

[solver]
steps_per_period = 512
""")
        out = tmp_path / "o"
        assert run(["sweep-d", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "sweep_d.csv", delimiter=",", names=True)
        law = 1.58 * 1.27
        np.testing.assert_allclose(
            data["i_o_law"], [0.0, law * np.sin(np.pi / 4), law], rtol=1e-9)
        # the simulated column tracks the law within the model gap
        assert abs(data["i_o_sim"][2] - law) / law < 0.02
        # reloads losslessly at the printed precision
        assert np.all(np.abs(data["v_o_law"] - data["i_o_law"] * 6.0) < 1e-9)


class TestControlCommands:
    def test_pi_design(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + """\
[control]
kind = current
f_c_hz = 100
d_op = 0.0
r_l_nominal_ohm = 6.0
""")
        out = tmp_path / "o"
        assert run(["pi-design", cfg, "--out", str(out), "--no-plot"]) == 0
        payload = json.loads((out / "pi_gains.json").read_text())
        assert payload["kp"] == pytest.approx(2.03, abs=0.01)
        assert payload["ki_per_s"] == pytest.approx(49.8, abs=0.1)
        assert payload["t_samp_s"] == pytest.approx(5e-6)

    def test_bode(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + """\
[bode]
kind = voltage
d_ops = 0.10
f_hz = 100 1000
measure = true
""")
        out = tmp_path / "o"
        assert run(["bode", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "bode.csv", delimiter=",", names=True)
        assert len(data) == 2
        assert np.all(np.abs(data["mag_db"] - data["mag_db_measured"]) < 3.0)
        assert np.all(np.abs(data["phase_deg"] - data["phase_deg_measured"]) < 10.0)

    def test_transient_with_seeded_noise(self, tmp_path):
        body = RECEIVER + """\
[control]
kind = voltage
f_c_hz = 100
d_op = 0.0
r_l_nominal_ohm = 6.0

[scenario]
regulation = voltage
reference = 12.0
duration_s = 0.01
events = 0.005 r_load_ohm 12.0
start_settled = true
meas_noise = 0.005
"""
        cfg = write(tmp_path, "c.ini", body)
        outs = []
        for name, seed in (("a", "7"), ("b", "7"), ("c", "8")):
            out = tmp_path / name
            assert run(["transient", cfg, "--out", str(out), "--no-plot",
                        "--seed", seed]) == 0
            outs.append((out / "transient.csv").read_bytes())
        assert outs[0] == outs[1]
        assert outs[0] != outs[2]
        metrics = json.loads((tmp_path / "a" / "transient_metrics.json").read_text())
        assert len(metrics["events"]) == 2

    def test_regulation_sweep(self, tmp_path):
        body = RECEIVER.replace("i_ls_amp_a = 1.27", "i_ls_amp_a = 1.4") + """\
[control]
kind = voltage
f_c_hz = 100
d_op = 0.0
r_l_nominal_ohm = 6.0

[regulation-sweep]
axis = load_power
values = 4.8 24.0
reference = 12.0
settle_s = 0.03
"""
        cfg = write(tmp_path, "c.ini", body)
        out = tmp_path / "o"
        assert run(["regulation-sweep", cfg, "--out", str(out), "--no-plot"]) == 0
        data = np.genfromtxt(out / "regulation_sweep.csv", delimiter=",",
                             names=True)
        assert np.all(data["reachable"] == 1.0)
        summary = json.loads((out / "regulation_sweep_summary.json").read_text())
        assert summary["max_abs_error_pct"] < 1.0


class TestErrorPaths:
    def test_unknown_key_exits_2(self, tmp_path, capsys):
        cfg = write(tmp_path, "c.ini", RECEIVER.replace("r_load_ohm", "rload_ohm")
                    + "[steady-state]\nd = 0.25\n")
        assert run(["steady-state", cfg, "--out", str(tmp_path / "o"),
                    "--no-plot"]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_unknown_section_exits_2(self, tmp_path):
        cfg = write(tmp_path, "c.ini", RECEIVER + "[mystery]\nx = 1\n")
        assert run(["steady-state", cfg, "--out", str(tmp_path / "o"),
                    "--no-plot"]) == 2

    def test_missing_required_key_exits_2(self, tmp_path):
        cfg = write(tmp_path, "c.ini",
                    RECEIVER.replace("fs_hz = 200e3\n", "")
                    + "[steady-state]\nd = 0.25\n")
        assert run(["steady-state", cfg, "--out", str(tmp_path / "o"),
                    "--no-plot"]) == 2

    def test_validation_error_exits_3(self, tmp_path, capsys):
        cfg = write(tmp_path, "c.ini", RECEIVER.replace("k = 0.71", "k = 1.2")
                    + "[steady-state]\nd = 0.25\n")
        assert run(["steady-state", cfg, "--out", str(tmp_path / "o"),
                    "--no-plot"]) == 3
        assert "validation error" in capsys.readouterr().err

    def test_solver_error_exits_4(self, tmp_path, monkeypatch):
        def boom(*a, **k):
            raise ConvergenceError("no fixed point")

        monkeypatch.setattr(cli.simulator, "periodic_steady_state", boom)
        cfg = write(tmp_path, "c.ini", RECEIVER + "[steady-state]\nd = 0.25\n")
        assert run(["steady-state", cfg, "--out", str(tmp_path / "o"),
                    "--no-plot"]) == 4

    def test_missing_config_exits_5(self, tmp_path):
        assert run(["steady-state", str(tmp_path / "nope.ini"),
                    "--out", str(tmp_path / "o"), "--no-plot"]) == 5


class TestHelp:
    @pytest.mark.parametrize("command,needle", [
        ("steady-state", "fs_hz"),
        ("design", "ripple_percent"),
        ("transient", "events"),
        ("bode", "d_ops"),
        ("regulation-sweep", "axis"),
    ])
    def test_subcommand_help_documents_keys(self, command, needle, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main([command, "--help"])
        assert exc.value.code == 0
        assert needle in capsys.readouterr().out
