"""Plot-ready result tables: solver sweeps, Monte Carlo validation and benchmarks."""

import csv
import math

import numpy as np

from . import __version__
from .config import build_params, build_spec, check_scenario, load_config
from .optimizer import (TrainingDesign, miso_training_threshold, optimal_value_and_power,
                        solve_large_m, solve_miso_rician, solve_rayleigh, _base_rate)
from .simkit import TrialPlan, run_plan
from .wishart import LambdaTable

SCHEMA_VERSION = 1
COLUMNS = ["series", "sweep_value", "n1_star", "tau_star", "pr_star_watts",
           "predicted_net_joules", "mc_net_joules", "mc_halfwidth", "benchmark_ideal",
           "benchmark_isotropic", "benchmark_los", "boundary_t"]

# Per figure: preset config sections, x-axis variable and default x grid.
FIGURES = {
    "fig3": dict(base={"system": {"M": 5, "N": 10}, "sweep": {"variable": "T",
                                                             "values": "25,50,100"}},
                 x="N1", grid=None, mc=True),
    "fig4": dict(base={"system": {"N": 10}, "sweep": {"variable": "M", "values": "1,2,5"}},
                 x="T", grid=list(range(10, 201, 10)), mc=False),
    "fig5": dict(base={"system": {"N": 10}, "sweep": {"variable": "M", "values": "1,2,5"}},
                 x="T", grid=list(range(10, 501, 10)), mc=False),
    "fig6": dict(base={"system": {"M": 5, "N": 5}}, x="T", grid=list(range(10, 201, 10)),
                 mc=True, benchmarks=("ideal", "isotropic")),
    "fig7": dict(base={"system": {"M": 5, "N": 1, "T": 200}, "scenario": {"name": "miso_rician"}},
                 x="K_db", grid=[float(k) for k in range(-10, 21, 2)], mc=True,
                 benchmarks=("ideal", "los")),
    "fig8": dict(base={"system": {"N": 1, "K_db": 3}, "scenario": {"name": "miso_rician"},
                       "sweep": {"variable": "K_db", "values": "3,10"}},
                 x="M", grid=list(range(2, 31)), mc=False),
    "fig9": dict(base={"system": {"N": 5, "T": 1000, "K": 1}, "scenario": {"name": "large_m"}},
                 x="M", grid=[5, 10, 20, 50, 100, 150, 200, 250, 300], mc=True,
                 benchmarks=("ideal", "los")),
}


def make_table(cfg):
    return LambdaTable(method=cfg.lambda_method, trials=max(cfg.trials, 1000), seed=cfg.seed,
                       path=cfg.lambda_cache or None)


def solve(scenario, p, spec, lam):
    check_scenario(scenario, p)
    if scenario == "rayleigh":
        return solve_rayleigh(p, lam)
    if scenario == "miso_rician":
        return solve_miso_rician(p)
    return solve_large_m(p, spec.hbar)


def empty_row(series="", sweep_value=""):
    row = dict.fromkeys(COLUMNS, "")
    row.update(series=series, sweep_value=sweep_value)
    return row


def design_columns(row, design, value):
    row.update(n1_star=design.n1, tau_star=design.tau, pr_star_watts=design.pr,
               predicted_net_joules=value)
    return row


def mc_columns(row, cfg, p, spec, design, benchmarks=()):
    stats = run_plan(TrialPlan(p, spec, design, cfg.trials, cfg.seed), workers=cfg.workers)
    row.update(mc_net_joules=stats.mean_net, mc_halfwidth=stats.halfwidth95)
    for b in benchmarks:
        s = run_plan(TrialPlan(p, spec, b, cfg.trials, cfg.seed), workers=cfg.workers)
        row["benchmark_" + b] = s.mean_net
    return row


def _with_x(system, name, value):
    system = dict(system)
    if name == "K_db":
        system.pop("K", None)
    system[name] = value
    return system


def _series_label(cfg, value):
    return f"{cfg.sweep_variable}={value:g}" if cfg.sweep_variable else "main"


def figure_rows(name, cfg, grid=None, mc=None):
    """Rows for figure ``name`` given a loaded config (presets already applied)."""
    fig = FIGURES[name]
    grid = fig["grid"] if grid is None else grid
    mc = fig["mc"] if mc is None else mc
    lam = make_table(cfg)
    rows = []
    for series_value, system, channel in cfg.points():
        label = _series_label(cfg, series_value) if series_value is not None else "main"
        if name == "fig3":
            p = build_params(system)
            spec = build_spec(p, channel)
            base = _base_rate(p, 0.0)
            for n1 in range(0, min(p.N, p.T) + 1):
                ratio = lam(p.M, n1) / n1 if n1 else 0.0
                value, pr = optimal_value_and_power(p, n1, base, ratio)
                design = TrainingDesign.first(n1, pr)
                row = design_columns(empty_row(label, n1), design, value)
                if mc:
                    mc_columns(row, cfg, p, spec, design)
                rows.append(row)
            continue
        for x in grid:
            sys_x = _with_x(system, fig["x"], x)
            p = build_params(sys_x)
            row = empty_row(label, x)
            if name == "fig8":
                row["boundary_t"] = miso_training_threshold(p.M, p.K, math.inf) or ""
                rows.append(row)
                continue
            spec = build_spec(p, channel)
            report = solve(cfg.scenario, p, spec, lam)
            design_columns(row, report.design, report.predicted_net)
            if mc:
                mc_columns(row, cfg, p, spec, report.design, fig.get("benchmarks", ()))
            rows.append(row)
    if lam.path:
        lam.save()
    return rows


def load_figure_config(name, path=None, overrides=()):
    if name not in FIGURES:
        raise KeyError(name)
    return load_config(path, overrides, base=FIGURES[name]["base"])


def _fmt(v):
    if v == "" or v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_rows(path, rows, meta=None):
    """Write rows with ``#`` metadata lines (tool version, schema, seed, ...)."""
    meta = dict(meta or {})
    with open(path, "w", newline="") as fh:
        fh.write(f"# wetrain {__version__}\n# schema={SCHEMA_VERSION}\n")
        for k, v in meta.items():
            fh.write(f"# {k}={v}\n")
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([_fmt(row.get(c, "")) for c in COLUMNS])
    return path


def read_rows(path):
    """Inverse of :func:`write_rows`: ``(meta, rows)`` with numeric cells as floats."""
    meta, body = {}, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                text = line[1:].strip()
                if "=" in text:
                    k, v = text.split("=", 1)
                    meta[k.strip()] = v.strip()
            else:
                body.append(line)
    rows = []
    for raw in csv.DictReader(body):
        row = {}
        for k, v in raw.items():
            if k == "series" or v == "":
                row[k] = v if k == "series" else None
            else:
                row[k] = float(v)
        rows.append(row)
    return meta, rows
