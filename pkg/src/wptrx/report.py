"""Figure rendering for the CLI report paths.

Every report-producing command writes its delimited data first and then,
unless plotting is disabled, a matplotlib PNG alongside it.  Figures are
deliberately plain: labeled axes with units, thin grids, no styling games.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_DPI = 130


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def waveform_figure(waveform, path, title="steady-state waveforms"):
    t_us = waveform.t * 1e6
    fig, axes = plt.subplots(3, 1, figsize=(8, 7), sharex=True)
    axes[0].plot(t_us, waveform["v_c1"], label="v_c1")
    axes[0].plot(t_us, waveform["v_c2"], label="v_c2")
    axes[0].plot(t_us, waveform["v_ac"], label="v_ac", lw=0.9)
    axes[0].set_ylabel("voltage (V)")
    axes[0].legend(loc="upper right", fontsize=8)
    axes[0].set_title(title)
    axes[1].plot(t_us, waveform["i_l1"], label="i_l1")
    axes[1].plot(t_us, waveform["i_l2"], label="i_l2")
    axes[1].plot(t_us, waveform["i_l1"] + waveform["i_l2"], label="i_lm")
    axes[1].plot(t_us, waveform["i_ls"], label="i_ls", lw=0.9)
    axes[1].set_ylabel("current (A)")
    axes[1].legend(loc="upper right", fontsize=8)
    axes[2].plot(t_us, waveform["v_o"], color="tab:red")
    axes[2].set_ylabel("v_o (V)")
    axes[2].set_xlabel("time (us)")
    for ax in axes:
        ax.grid(alpha=0.3)
    return _finish(fig, path)


def spectrum_figure(spec, path, channel="v_ac"):
    h = np.arange(1, len(spec.mags) + 1)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(h, spec.mags / spec.mags[0], width=0.6)
    ax.set_yscale("log")
    ax.set_ylim(1e-6, 2.0)
    ax.set_xlabel("harmonic order")
    ax.set_ylabel(f"|{channel}| harmonic / fundamental")
    ax.set_title(f"{channel} spectrum, THD = {spec.thd * 100:.2f}%")
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def sweep_d_figure(rows, path):
    d = [r["d"] for r in rows]
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.8))
    axes[0].plot(d, [r["i_o_law"] for r in rows], "o-", label="law")
    axes[1].plot(d, [r["v_o_law"] for r in rows], "o-", label="law")
    if "i_o_sim" in rows[0]:
        axes[0].plot(d, [r["i_o_sim"] for r in rows], "s--", label="simulated")
        axes[1].plot(d, [r["v_o_sim"] for r in rows], "s--", label="simulated")
    axes[0].set_xlabel("phase-shift ratio d")
    axes[0].set_ylabel("i_o (A)")
    axes[1].set_xlabel("phase-shift ratio d")
    axes[1].set_ylabel("v_o (V)")
    for ax in axes:
        ax.grid(alpha=0.3)
        ax.legend(fontsize=8)
    return _finish(fig, path)


def feasible_region_figure(k_grid, l_grid, grid, path):
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.pcolormesh(np.asarray(l_grid) * 1e6, k_grid, grid,
                  cmap="Greens", shading="auto", vmin=0, vmax=1.2)
    ax.set_xlabel("inductance L (uH)")
    ax.set_ylabel("coupling coefficient k")
    ax.set_title("coupled-inductor feasible region")
    return _finish(fig, path)


def bode_figure(per_dop, path, kind):
    fig, (ax_m, ax_p) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for d_op, rows in per_dop.items():
        f = [r["f_hz"] for r in rows]
        ax_m.semilogx(f, [r["mag_db"] for r in rows], "-",
                      label=f"analytic d={d_op:g}")
        ax_p.semilogx(f, [r["phase_deg"] for r in rows], "-")
        if "mag_db_measured" in rows[0]:
            ax_m.semilogx(f, [r["mag_db_measured"] for r in rows], "x",
                          label=f"simulated d={d_op:g}")
            ax_p.semilogx(f, [r["phase_deg_measured"] for r in rows], "x")
    ax_m.set_ylabel("magnitude (dB)")
    ax_p.set_ylabel("phase (deg)")
    ax_p.set_xlabel("frequency (Hz)")
    ax_m.set_title(f"{kind} loop plant response")
    ax_m.legend(fontsize=8)
    for ax in (ax_m, ax_p):
        ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def transient_figure(result, path):
    fig, axes = plt.subplots(3, 1, figsize=(8, 7), sharex=True)
    t_ms = result.t * 1e3
    axes[0].plot(t_ms, result.v_o, color="tab:blue")
    axes[0].set_ylabel("v_o (V)")
    axes[1].plot(t_ms, result.i_o, color="tab:orange")
    axes[1].set_ylabel("i_o (A)")
    axes[2].plot(t_ms, result.d_command, color="tab:green")
    axes[2].set_ylabel("d command")
    axes[2].set_xlabel("time (ms)")
    ref_ax = axes[0] if result.regulation == "voltage" else axes[1]
    ref_ax.axhline(result.reference, color="k", lw=0.8, ls=":")
    axes[0].set_title(f"{result.regulation} regulation transient")
    for ax in axes:
        ax.grid(alpha=0.3)
    return _finish(fig, path)


def regulation_sweep_figure(rows, path, axis, reference):
    x = [r["axis_value"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, [r["settled"] for r in rows], "o-")
    ax.axhline(reference, color="k", lw=0.8, ls=":")
    for r in rows:
        if not r["reachable"]:
            ax.plot(r["axis_value"], r["settled"], "rx", ms=10)
    ax.set_xlabel(axis.replace("_", " "))
    ax.set_ylabel("settled regulated value")
    ax.set_title("steady-state regulation (x = unreachable)")
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def alpha_table_figure(rows, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot([r["k"] for r in rows], [r["alpha"] for r in rows], "o-")
    ax.set_xlabel("coupling coefficient k")
    ax.set_ylabel("frequency ratio alpha")
    ax.set_title("zero-voltage-switching frequency ratio")
    ax.grid(alpha=0.3)
    return _finish(fig, path)
