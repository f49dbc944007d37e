"""Experiment configuration: an INI file with fixed sections plus ``key=value`` overrides.

Schema (all keys optional, defaults shown by :data:`DEFAULTS`)::

    [system]   M, N, T, K (linear) or K_db, beta, Pf, eta, sigma_r2_dbm
    [channel]  aoa_deg, aod_deg, spacing
    [scenario] name = rayleigh | miso_rician | large_m
    [run]      trials, seed, workers, lambda_cache, lambda_method
    [sweep]    variable, values          (one variable, comma-separated values)
    [output]   csv

Overrides are ``section.key=value`` or a bare ``key=value`` when the key is
unique across sections.
"""

import configparser
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import RicianSpec, db_to_linear
from .energy import SystemParams, dbm_to_watts

SCENARIOS = ("rayleigh", "miso_rician", "large_m")

DEFAULTS = {
    # K is linear; K_db (unset by default) replaces it when given.
    "system": {"M": "5", "N": "10", "T": "50", "K": "0", "K_db": None, "beta": "1e-6",
               "Pf": "1.0", "eta": "0.5", "sigma_r2_dbm": "-90"},
    "channel": {"aoa_deg": "0", "aod_deg": "10", "spacing": "0.5"},
    "scenario": {"name": "rayleigh"},
    "run": {"trials": "10000", "seed": "0", "workers": "1", "lambda_cache": "",
            "lambda_method": "exact"},
    "sweep": {"variable": "", "values": ""},
    "output": {"csv": ""},
}
INT_KEYS = {"M", "N", "T", "trials", "seed", "workers"}
SWEEPABLE = ("M", "N", "T", "K", "K_db", "beta", "Pf", "eta", "sigma_r2_dbm",
             "aoa_deg", "aod_deg", "spacing")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    system: dict
    channel: dict
    scenario: str
    trials: int
    seed: int
    workers: int = 1
    lambda_cache: str = ""
    lambda_method: str = "exact"
    sweep_variable: str = ""
    sweep_values: list = field(default_factory=list)
    csv_path: str = ""

    def points(self):
        """Yield ``(sweep_value, system, channel)`` for every sweep point (one if no sweep)."""
        if not self.sweep_variable:
            yield None, dict(self.system), dict(self.channel)
            return
        for value in self.sweep_values:
            system, channel = dict(self.system), dict(self.channel)
            target = channel if self.sweep_variable in channel else system
            if self.sweep_variable == "K_db":
                system.pop("K", None)
            if self.sweep_variable == "K":
                system.pop("K_db", None)
            target[self.sweep_variable] = value
            yield value, system, channel


def build_params(system):
    if "K_db" in system and "K" in system:
        raise ConfigError("give either K or K_db, not both")
    K = float(db_to_linear(system["K_db"])) if "K_db" in system else float(system["K"])
    try:
        return SystemParams(M=int(system["M"]), N=int(system["N"]), T=int(system["T"]), K=K,
                            beta=float(system["beta"]), Pf=float(system["Pf"]),
                            eta=float(system["eta"]),
                            sigma_r2=float(dbm_to_watts(system["sigma_r2_dbm"])))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_spec(p, channel):
    return RicianSpec.rank_one(p.M, p.N, p.K, p.beta, aoa=math.radians(channel["aoa_deg"]),
                               aod=math.radians(channel["aod_deg"]), spacing=channel["spacing"])


def check_scenario(scenario, p):
    if scenario == "rayleigh" and p.K != 0:
        raise ConfigError("scenario rayleigh requires K = 0")
    if scenario == "miso_rician" and p.N != 1:
        raise ConfigError("scenario miso_rician requires N = 1")
    if scenario == "large_m" and p.M < p.N:
        raise ConfigError("scenario large_m requires M >= N")


def _convert(key, raw):
    raw = raw.strip()
    try:
        if key in INT_KEYS:
            return int(float(raw)) if float(raw).is_integer() else _bad(key, raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None


def _bad(key, raw):
    raise ConfigError(f"{key} must be an integer, got {raw!r}")


def _apply_override(sections, item):
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not key=value")
    key, value = (s.strip() for s in item.split("=", 1))
    if "." in key:
        sec, k = key.split(".", 1)
        if sec not in DEFAULTS or k not in DEFAULTS[sec]:
            raise ConfigError(f"unknown key {key!r}")
    else:
        owners = [s for s in DEFAULTS if key in DEFAULTS[s]]
        if len(owners) != 1:
            raise ConfigError(f"unknown or ambiguous key {key!r}")
        sec, k = owners[0], key
    _set(sections, sec, k, value)


def _set(sections, sec, key, value):
    if sec == "system" and key in ("K", "K_db"):
        sections[sec]["K_db" if key == "K" else "K"] = None
    sections[sec][key] = value


def load_config(path=None, overrides=(), base=None):
    """Read ``path`` (optional), layer ``base`` (section dict) and ``overrides``, validate."""
    sections = {s: dict(v) for s, v in DEFAULTS.items()}
    for sec, values in (base or {}).items():
        for k, v in values.items():
            _set(sections, sec, k, str(v))
    if path:
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        parser.optionxform = str
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        for sec in parser.sections():
            if sec not in DEFAULTS:
                raise ConfigError(f"unknown section [{sec}]")
            for k, v in parser.items(sec):
                if k not in DEFAULTS[sec]:
                    raise ConfigError(f"unknown key {sec}.{k}")
                _set(sections, sec, k, v)
    for item in overrides:
        _apply_override(sections, item)
    return _finish(sections)


def _finish(sections):
    system = {k: _convert(k, v) for k, v in sections["system"].items() if v is not None}
    channel = {k: _convert(k, v) for k, v in sections["channel"].items()}
    scenario = sections["scenario"]["name"].strip()
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    run = sections["run"]
    var = sections["sweep"]["variable"].strip()
    values = []
    if var:
        names = [v.strip() for v in var.replace(";", ",").split(",") if v.strip()]
        if len(names) != 1 or len(var.split()) != 1:
            raise ConfigError(f"exactly one sweep variable allowed, got {var!r}")
        if var not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {var!r}")
        raw = sections["sweep"]["values"]
        values = [_convert(var, v) for v in raw.split(",") if v.strip()]
        if not values:
            raise ConfigError("sweep.values is empty")
    cfg = ExperimentConfig(system=system, channel=channel, scenario=scenario,
                           trials=_convert("trials", run["trials"]),
                           seed=_convert("seed", run["seed"]),
                           workers=_convert("workers", run["workers"]),
                           lambda_cache=run["lambda_cache"].strip(),
                           lambda_method=run["lambda_method"].strip(),
                           sweep_variable=var, sweep_values=values,
                           csv_path=sections["output"]["csv"].strip())
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    if cfg.lambda_method not in ("exact", "mc"):
        raise ConfigError("lambda_method must be exact or mc")
    for _, system, _ in cfg.points():
        p = build_params(system)
        check_scenario(scenario, p)
    return cfg


def parse_range(text):
    """``"1:5"`` -> [1..5], ``"1,3,7"`` -> [1, 3, 7]."""
    text = text.strip()
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(np.arange(start, stop + 1, step).tolist())
    return [int(x) for x in text.split(",") if x.strip()]
