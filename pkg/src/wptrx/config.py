"""Run configuration: INI-style key/value files with per-command sections.

Every physical quantity carries its unit in the key name (fs_hz, l_h,
c_f_f, r_load_ohm, ...) and unknown sections or keys are rejected outright
so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .circuit import ReceiverParams
from .closedloop import Scenario
from .design import DEFAULT_AC_FRACTION, DesignSpec
from .errors import ConfigError

# section -> key -> (parser, required, default)
_F, _I, _B, _S, _LIST = "float", "int", "bool", "str", "floats"

SCHEMA = {
    "receiver": {
        "fs_hz": (_F, True, None),
        "i_ls_amp_a": (_F, True, None),
        "l_h": (_F, True, None),
        "k": (_F, True, None),
        "c_f_f": (_F, True, None),
        "c_ac_f": (_F, True, None),
        "c_o_f": (_F, True, None),
        "r_load_ohm": (_F, True, None),
        "v_o_ref_v": (_F, True, None),
    },
    "design": {
        "v_o_nom_v": (_F, True, None),
        "i_o_nom_a": (_F, True, None),
        "fs_hz": (_F, True, None),
        "i_ls_amp_a": (_F, True, None),
        "ripple_percent": (_F, True, None),
        "k": (_F, False, None),
        "l_h": (_F, False, None),
        "ac_fraction": (_F, False, DEFAULT_AC_FRACTION),
    },
    "magnetics": {
        "r1_per_h": (_F, True, None),
        "turn_limit": (_I, False, 60),
    },
    "feasible-region": {
        "k_min": (_F, False, 0.0),
        "k_max": (_F, False, 0.95),
        "k_points": (_I, False, 40),
        "l_min_h": (_F, True, None),
        "l_max_h": (_F, True, None),
        "l_points": (_I, False, 40),
    },
    "solver": {
        "steps_per_period": (_I, False, 1024),
        "n_harmonics": (_I, False, 40),
        "diode_hold": (_B, False, True),
    },
    "steady-state": {
        "d": (_F, True, None),
    },
    "sweep-d": {
        "d_values": (_LIST, True, None),
        "simulate": (_B, False, True),
        "diode_hold": (_B, False, False),
    },
    "bode": {
        "kind": (_S, False, "voltage"),
        "d_ops": (_LIST, False, (0.05, 0.10, 0.15)),
        "f_hz": (_LIST, False, (1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0)),
        "measure": (_B, False, True),
        "delta_d": (_F, False, 0.005),
    },
    "control": {
        "kind": (_S, False, "voltage"),
        "f_c_hz": (_F, True, None),
        "d_op": (_F, False, 0.0),
        "r_l_nominal_ohm": (_F, True, None),
        "t_samp_s": (_F, False, None),
        "f_c_scale": (_F, False, 1.0),
    },
    "scenario": {
        "regulation": (_S, True, None),
        "reference": (_F, True, None),
        "duration_s": (_F, True, None),
        "events": (_S, False, ""),
        "start_settled": (_B, False, False),
        "meas_noise": (_F, False, 0.0),
    },
    "regulation-sweep": {
        "axis": (_S, True, None),
        "values": (_LIST, True, None),
        "reference": (_F, True, None),
        "settle_s": (_F, False, 0.15),
    },
    "alpha-table": {
        "k_min": (_F, False, 0.0),
        "k_max": (_F, False, 0.9),
        "k_step": (_F, False, 0.1),
    },
}

_EVENT_KEYS = {"r_load_ohm": "r_load", "i_ls_amp_a": "i_ls_amp"}


@dataclass
class RunConfig:
    """Validated view of one config file."""

    sections: dict

    def has(self, section: str) -> bool:
        return section in self.sections

    def get(self, section: str, key: str):
        try:
            return self.sections[section][key]
        except KeyError as exc:
            raise ConfigError(f"missing [{section}] {key}") from exc

    def section(self, section: str) -> dict:
        if section not in self.sections:
            raise ConfigError(f"config needs a [{section}] section")
        return self.sections[section]


def _parse_value(kind, raw, where):
    raw = raw.strip()
    try:
        if kind == _F:
            return float(raw)
        if kind == _I:
            return int(raw)
        if kind == _B:
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == _LIST:
            return tuple(float(tok) for tok in raw.replace(",", " ").split())
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse {where} = {raw!r} as {kind}") from exc


def load_config(path: str) -> RunConfig:
    """Read and validate a config file against the schema."""
    # '#' only for inline comments: ';' separates event clauses
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError:
        raise
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    sections = {}
    for name in parser.sections():
        if name not in SCHEMA:
            raise ConfigError(f"unknown section [{name}]")
        schema = SCHEMA[name]
        out = {}
        for key, raw in parser.items(name):
            if key not in schema:
                raise ConfigError(f"unknown key {key!r} in [{name}]")
            kind, _, _ = schema[key]
            out[key] = _parse_value(kind, raw, f"[{name}] {key}")
        for key, (kind, required, default) in schema.items():
            if key not in out:
                if required:
                    raise ConfigError(f"missing required key {key!r} in [{name}]")
                out[key] = default
        sections[name] = out
    return RunConfig(sections=sections)


def receiver_params(cfg: RunConfig) -> ReceiverParams:
    s = cfg.section("receiver")
    return ReceiverParams(
        fs=s["fs_hz"], i_ls_amp=s["i_ls_amp_a"], L=s["l_h"], k=s["k"],
        c_f=s["c_f_f"], c_ac=s["c_ac_f"], c_o=s["c_o_f"],
        r_load=s["r_load_ohm"], v_o_ref=s["v_o_ref_v"],
    )


def design_spec(cfg: RunConfig) -> DesignSpec:
    s = cfg.section("design")
    return DesignSpec(
        v_o_nom=s["v_o_nom_v"], i_o_nom=s["i_o_nom_a"], fs=s["fs_hz"],
        i_ls_amp=s["i_ls_amp_a"], ripple_percent=s["ripple_percent"],
    )


def parse_events(raw: str):
    """Parse 'TIME FIELD VALUE ; TIME FIELD VALUE ...' event clauses."""
    events = []
    raw = raw.strip()
    if not raw:
        return tuple(events)
    for clause in raw.split(";"):
        clause = clause.strip()
        if not clause:
            continue
        parts = clause.split()
        if len(parts) != 3:
            raise ConfigError(
                f"event clause {clause!r} must be 'TIME FIELD VALUE'")
        t_raw, fieldname, v_raw = parts
        if fieldname not in _EVENT_KEYS:
            raise ConfigError(
                f"event field {fieldname!r} must be one of {sorted(_EVENT_KEYS)}")
        try:
            events.append((float(t_raw), _EVENT_KEYS[fieldname], float(v_raw)))
        except ValueError as exc:
            raise ConfigError(f"cannot parse event clause {clause!r}") from exc
    return tuple(events)


def scenario(cfg: RunConfig) -> Scenario:
    s = cfg.section("scenario")
    return Scenario(
        regulation=s["regulation"],
        reference=s["reference"],
        duration=s["duration_s"],
        events=parse_events(s["events"]),
    )
