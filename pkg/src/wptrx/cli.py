"""Batch command-line front end.

Every subcommand takes one positional config path (INI sections, keys with
units in their names) plus ``--out DIR`` for artifacts, emits deterministic
CSV (12 significant digits) and versioned JSON summaries, and renders a
matplotlib figure next to the delimited output unless ``--no-plot`` is
given.

Exit codes: 0 success, 2 config error, 3 validation error, 4 solver
non-convergence, 5 I/O failure, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import analytics, closedloop, config, control, design, report, simulator
from .errors import ConfigError, ConvergenceError, ValidationError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_SOLVER = 4
EXIT_IO = 5


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return format(float(value), ".12g")


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[h]) for h in header) + "\n")
    return path


def _write_json(path, payload):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _solver_opts(cfg):
    if cfg.has("solver"):
        s = cfg.section("solver")
        return s["steps_per_period"], s["n_harmonics"], s["diode_hold"]
    return 1024, 40, True


def _control_gains(cfg, params):
    s = cfg.section("control")
    gains = control.design_pi(s["kind"], params, s["f_c_hz"], s["d_op"],
                              s["r_l_nominal_ohm"], s["f_c_scale"])
    t_samp = s["t_samp_s"] if s["t_samp_s"] is not None else params.ts
    return control.tustin_discretize(gains, t_samp), s


def cmd_alpha_table(cfg, out, plot, seed):
    s = cfg.sections.get("alpha-table") or {
        k: d for k, (_, _, d) in config.SCHEMA["alpha-table"].items()}
    ks = np.arange(s["k_min"], s["k_max"] + 0.5 * s["k_step"], s["k_step"])
    rows = [{"k": float(k), "alpha": design.solve_alpha(float(k))} for k in ks]
    _write_csv(os.path.join(out, "alpha_table.csv"), ["k", "alpha"], rows)
    if plot:
        report.alpha_table_figure(rows, os.path.join(out, "alpha_table.png"))
    return EXIT_OK


def cmd_design(cfg, out, plot, seed):
    spec = config.design_spec(cfg)
    s = cfg.section("design")
    if s["k"] is None or s["l_h"] is None:
        raise ConfigError("[design] needs chosen k and l_h for sizing")
    result = design.size_receiver(spec, s["k"], s["l_h"], s["ac_fraction"])
    bounds = design.inductance_bounds(spec)
    payload = {
        "l_h": result.L,
        "k": result.k,
        "c_total_f": result.c_total,
        "c_ac_f": result.c_ac,
        "c_f_f": result.c_f,
        "alpha": result.alpha,
        "gamma": result.gamma,
        "l_eff_lower_h": bounds["lower"],
        "l_eff_upper_h": bounds["upper"],
        "kl_min_h": design.ripple_bound(spec),
    }
    if cfg.has("magnetics"):
        m = cfg.section("magnetics")
        geo = design.solve_magnetic_design(result.L, result.k, m["r1_per_h"],
                                           m["turn_limit"])
        achieved = design.magnetic_inductance(geo)
        payload["magnetics"] = {
            "n1": geo.n1, "n2": geo.n2,
            "r1_per_h": geo.r1, "r2_per_h": geo.r2,
            "achieved_l_h": achieved["L"], "achieved_k": achieved["k"],
        }
    _write_json(os.path.join(out, "design.json"), payload)
    return EXIT_OK


def cmd_feasible_region(cfg, out, plot, seed):
    spec = config.design_spec(cfg)
    s = cfg.section("feasible-region")
    k_grid = np.linspace(s["k_min"], s["k_max"], s["k_points"])
    l_grid = np.linspace(s["l_min_h"], s["l_max_h"], s["l_points"])
    grid = design.feasible_region(spec, k_grid, l_grid)
    rows = [
        {"k": float(k_grid[i]), "l_h": float(l_grid[j]),
         "feasible": bool(grid[i, j])}
        for i in range(len(k_grid)) for j in range(len(l_grid))
    ]
    _write_csv(os.path.join(out, "feasible_region.csv"),
               ["k", "l_h", "feasible"], rows)
    if plot:
        report.feasible_region_figure(
            k_grid, l_grid, grid, os.path.join(out, "feasible_region.png"))
    return EXIT_OK


def cmd_steady_state(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    d = cfg.get("steady-state", "d")
    steps, n_harm, diode_hold = _solver_opts(cfg)
    ss = simulator.periodic_steady_state(params, d, steps, diode_hold)
    w = ss.waveform
    rows = [
        {"t_s": float(w.t[i]), **{ch: float(w[ch][i]) for ch in
         ("i_l1", "i_l2", "v_c1", "v_c2", "v_o", "i_ls", "v_ac")}}
        for i in range(w.n_samples)
    ]
    _write_csv(os.path.join(out, "steady_state_waveform.csv"),
               ["t_s", "i_l1", "i_l2", "v_c1", "v_c2", "v_o", "i_ls", "v_ac"],
               rows)
    spec = analytics.spectrum(w, "v_ac", n_harm)
    zvs = simulator.zvs_metrics(ss, params)
    ripple = simulator.ripple_metrics(ss)
    even = spec.mags[1::2]
    v_o_mean = float(np.mean(w["v_o"]))
    _write_json(os.path.join(out, "steady_state_summary.json"), {
        "d": float(d),
        "diode_hold": diode_hold,
        "residual": ss.residual,
        "v_o_mean_v": v_o_mean,
        "i_o_mean_a": v_o_mean / params.r_load,
        "p_out_w": float(np.mean(w["v_o"] ** 2)) / params.r_load,
        "thd_vac": spec.thd,
        "even_harmonic_max_ratio": float(np.max(even) / spec.mags[0]),
        "zvs": {
            "v_at_s1_on_v": zvs.v_at_s1_on,
            "v_at_s1_off_v": zvs.v_at_s1_off,
            "v_at_s2_on_v": zvs.v_at_s2_on,
            "v_at_s2_off_v": zvs.v_at_s2_off,
            "discarded_energy_per_cycle_j": zvs.discarded_energy_per_cycle,
            "v_c_peak_v": zvs.v_c_peak,
            "worst_on_ratio": max(abs(zvs.v_at_s1_on), abs(zvs.v_at_s2_on))
            / zvs.v_c_peak,
        },
        "ripple": {
            "i_lm_pp_a": ripple["i_lm_pp"],
            "v_o_pp_v": ripple["v_o_pp"],
            "i_lx_pp_a": ripple["i_lx_pp"],
        },
    })
    if plot:
        report.waveform_figure(w, os.path.join(out, "steady_state.png"))
        report.spectrum_figure(spec, os.path.join(out, "spectrum.png"))
    return EXIT_OK


def cmd_sweep_d(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    s = cfg.section("sweep-d")
    steps, _, _ = _solver_opts(cfg)
    rows = []
    for d in s["d_values"]:
        op = analytics.output_operating_point(params, d)
        row = {"d": float(d), "i_o_law": op.i_o, "v_o_law": op.v_o,
               "p_law": op.p}
        if s["simulate"]:
            ss = simulator.periodic_steady_state(params, d, steps,
                                                 diode_hold=s["diode_hold"])
            v_o = float(np.mean(ss.waveform["v_o"]))
            row["v_o_sim"] = v_o
            row["i_o_sim"] = v_o / params.r_load
        rows.append(row)
    header = ["d", "i_o_law", "v_o_law", "p_law"]
    if s["simulate"]:
        header += ["i_o_sim", "v_o_sim"]
    _write_csv(os.path.join(out, "sweep_d.csv"), header, rows)
    if plot:
        report.sweep_d_figure(rows, os.path.join(out, "sweep_d.png"))
    return EXIT_OK


def cmd_bode(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    s = cfg.section("bode") if cfg.has("bode") else {
        k: d for k, (_, _, d) in config.SCHEMA["bode"].items()}
    kind = s["kind"]
    per_dop = {}
    rows_flat = []
    for d_op in s["d_ops"]:
        tf = (control.voltage_tf if kind == "voltage" else control.current_tf)(
            params, d_op)
        rows = control.bode_points(tf, s["f_hz"])
        if s["measure"]:
            meas = closedloop.measure_frequency_response(
                params, d_op, s["f_hz"], kind=kind, delta_d=s["delta_d"])
            for r, m in zip(rows, meas):
                r["mag_db_measured"] = m["mag_db"]
                r["phase_deg_measured"] = m["phase_deg"]
        per_dop[d_op] = rows
        for r in rows:
            rows_flat.append({"d_op": float(d_op), **r})
    header = ["d_op", "f_hz", "mag_db", "phase_deg"]
    if s["measure"]:
        header += ["mag_db_measured", "phase_deg_measured"]
    _write_csv(os.path.join(out, "bode.csv"), header, rows_flat)
    if plot:
        report.bode_figure(per_dop, os.path.join(out, "bode.png"), kind)
    return EXIT_OK


def cmd_pi_design(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    gains, s = _control_gains(cfg, params)
    _write_json(os.path.join(out, "pi_gains.json"), {
        "kind": gains.kind,
        "f_c_hz": s["f_c_hz"],
        "f_c_scale": s["f_c_scale"],
        "d_op": s["d_op"],
        "r_l_nominal_ohm": s["r_l_nominal_ohm"],
        "kp": gains.kp,
        "ki_per_s": gains.ki,
        "t_samp_s": gains.t_samp,
        "b0": gains.b0,
        "b1": gains.b1,
    })
    return EXIT_OK


def cmd_transient(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    gains, _ = _control_gains(cfg, params)
    scen = config.scenario(cfg)
    s = cfg.section("scenario")
    rng = np.random.default_rng(seed) if s["meas_noise"] else None
    res = closedloop.run_transient(params, gains, scen,
                                   start_settled=s["start_settled"],
                                   meas_noise=s["meas_noise"], rng=rng)
    rows = [
        {"t_s": float(res.t[i]), "v_o_v": float(res.v_o[i]),
         "i_o_a": float(res.i_o[i]), "d": float(res.d_command[i])}
        for i in range(len(res.t))
    ]
    _write_csv(os.path.join(out, "transient.csv"),
               ["t_s", "v_o_v", "i_o_a", "d"], rows)
    _write_json(os.path.join(out, "transient_metrics.json"), {
        "regulation": res.regulation,
        "reference": res.reference,
        "events": res.events,
    })
    if plot:
        report.transient_figure(res, os.path.join(out, "transient.png"))
    return EXIT_OK


def cmd_regulation_sweep(cfg, out, plot, seed):
    params = config.receiver_params(cfg)
    gains, _ = _control_gains(cfg, params)
    s = cfg.section("regulation-sweep")
    rows = closedloop.regulation_sweep(params, gains, s["axis"], s["values"],
                                       s["reference"], settle_time=s["settle_s"])
    _write_csv(os.path.join(out, "regulation_sweep.csv"),
               ["axis_value", "settled", "error", "error_pct", "d_settled",
                "reachable"], rows)
    _write_json(os.path.join(out, "regulation_sweep_summary.json"), {
        "axis": s["axis"],
        "reference": s["reference"],
        "max_abs_error_pct": max(abs(r["error_pct"]) for r in rows
                                 if r["reachable"]),
        "unreachable_points": [r["axis_value"] for r in rows
                               if not r["reachable"]],
    })
    if plot:
        report.regulation_sweep_figure(
            rows, os.path.join(out, "regulation_sweep.png"),
            s["axis"], s["reference"])
    return EXIT_OK


_COMMANDS = {
    "alpha-table": (cmd_alpha_table, "Tabulate the ZVS frequency ratio over coupling",
                    ["alpha-table"]),
    "design": (cmd_design, "Size reactive components and the magnetic core",
               ["design", "magnetics"]),
    "feasible-region": (cmd_feasible_region,
                        "Grid of (k, L) points satisfying both sizing bounds",
                        ["design", "feasible-region"]),
    "steady-state": (cmd_steady_state,
                     "Periodic orbit waveform with ZVS/ripple/THD summary",
                     ["receiver", "steady-state", "solver"]),
    "sweep-d": (cmd_sweep_d, "Output law and simulated output across phase shift",
                ["receiver", "sweep-d", "solver"]),
    "bode": (cmd_bode, "Analytic and simulator-extracted plant frequency response",
             ["receiver", "bode"]),
    "pi-design": (cmd_pi_design, "PI gains for the chosen loop and crossover",
                  ["receiver", "control"]),
    "transient": (cmd_transient, "Closed-loop event scenario",
                  ["receiver", "control", "scenario"]),
    "regulation-sweep": (cmd_regulation_sweep,
                         "Settled regulation across load or source amplitude",
                         ["receiver", "control", "regulation-sweep"]),
}

_KEY_DOC = {
    "receiver": [
        "fs_hz: switching frequency",
        "i_ls_amp_a: induced coil current amplitude",
        "l_h: per-leg self-inductance",
        "k: coupling coefficient in [0, 1)",
        "c_f_f: per-leg resonant capacitance",
        "c_ac_f: differential AC-port capacitance",
        "c_o_f: output capacitance",
        "r_load_ohm: load resistance",
        "v_o_ref_v: nominal output voltage",
    ],
    "design": [
        "v_o_nom_v / i_o_nom_a: nominal output ratings",
        "fs_hz, i_ls_amp_a: operating frequency and source amplitude",
        "ripple_percent: allowed summed-current ripple (% of i_o)",
        "k, l_h: chosen coupled-inductor point (design command)",
        "ac_fraction: share of resonant capacitance on the AC port",
    ],
    "magnetics": [
        "r1_per_h: center-leg reluctance (A-turns/Wb)",
        "turn_limit: winding search bound",
    ],
    "feasible-region": [
        "k_min/k_max/k_points, l_min_h/l_max_h/l_points: grid extents",
    ],
    "solver": [
        "steps_per_period: samples per switching period (even)",
        "n_harmonics: spectrum depth",
        "diode_hold: model body-diode zero-hold (physical switching model)",
    ],
    "steady-state": ["d: phase-shift ratio in [0, 0.25]"],
    "sweep-d": [
        "d_values: phase-shift grid",
        "simulate: add simulated columns",
        "diode_hold: switching model for the simulated columns",
    ],
    "bode": [
        "kind: current or voltage loop",
        "d_ops: operating points",
        "f_hz: frequency grid",
        "measure: include simulator-extracted columns",
        "delta_d: perturbation amplitude",
    ],
    "control": [
        "kind: current or voltage loop",
        "f_c_hz: desired crossover frequency",
        "d_op: linearization operating point",
        "r_l_nominal_ohm: nominal load for the gain formulas",
        "t_samp_s: control sample period (default one switching period)",
        "f_c_scale: crossover prefactor (2*pi for rad/s conventions)",
    ],
    "scenario": [
        "regulation: voltage or current",
        "reference: setpoint (V or A)",
        "duration_s: run length",
        "events: 'TIME FIELD VALUE ; ...' with FIELD r_load_ohm|i_ls_amp_a",
        "start_settled: begin from the regulated operating point",
        "meas_noise: gaussian measurement noise sigma (uses --seed)",
    ],
    "regulation-sweep": [
        "axis: load_power | load_resistance | source_amplitude",
        "values: grid on that axis",
        "reference: regulation setpoint",
        "settle_s: per-point settling horizon",
    ],
    "alpha-table": ["k_min/k_max/k_step: coupling grid"],
}


def _epilog(sections):
    lines = ["config sections:"]
    for sec in sections:
        lines.append(f"  [{sec}]")
        for doc in _KEY_DOC[sec]:
            lines.append(f"    {doc}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wptrx",
        description="Differential class-E resonant WPT receiver toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text, sections) in _COMMANDS.items():
        p = sub.add_parser(name, help=help_text, epilog=_epilog(sections),
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("config", help="path to the INI config file")
        p.add_argument("--out", default="out", help="artifact directory")
        p.add_argument("--no-plot", action="store_true",
                       help="skip figure rendering")
        if name == "transient":
            p.add_argument("--seed", type=int, default=None,
                           help="RNG seed for configured measurement noise")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config.load_config(args.config)
        os.makedirs(args.out, exist_ok=True)
        return args.func(cfg, args.out, not args.no_plot,
                         getattr(args, "seed", None))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
