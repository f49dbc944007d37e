"""Command-line front end: ``wetrain {solve,simulate,figure,lambda-table}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numeric failure.
"""

import argparse
import sys

from . import __version__
from .config import ConfigError, build_params, build_spec, load_config, parse_range
from .figures import (FIGURES, design_columns, empty_row, figure_rows, load_figure_config,
                      make_table, mc_columns, solve, write_rows)
from .numerics import ContractError, NumericError
from .wishart import LambdaTable

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(sub):
    sub.add_argument("--config", help="INI experiment file")
    sub.add_argument("--seed", type=int, help="master seed")
    sub.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    sub.add_argument("--out", help="CSV output path")
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="config override, repeatable")


def build_parser():
    parser = _Parser(prog="wetrain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wetrain {__version__}")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _common(subs.add_parser("solve", help="optimal training design per sweep point"))
    _common(subs.add_parser("simulate", help="solve, then validate by Monte Carlo"))
    fig = subs.add_parser("figure", help="plot-ready CSV for a named figure")
    fig.add_argument("name")
    fig.add_argument("--grid", help="x-axis values, 'a:b[:step]' or comma list")
    fig.add_argument("--no-mc", action="store_true", help="skip Monte Carlo columns")
    _common(fig)
    lam = subs.add_parser("lambda-table", help="build or extend the Lambda(M, N1) cache")
    lam.add_argument("--M", dest="m_range", required=True, help="'a:b' or comma list")
    lam.add_argument("--N1", dest="n1_range", required=True, help="'a:b' or comma list")
    lam.add_argument("--method", choices=("exact", "mc"), default="exact")
    lam.add_argument("--seed", type=int, default=0)
    lam.add_argument("--trials", type=int, default=200_000)
    lam.add_argument("--out", required=True, help="cache CSV (extended if it exists)")
    return parser


def _overrides(args):
    extra = list(args.overrides)
    if args.seed is not None:
        extra.append(f"run.seed={args.seed}")
    if args.trials is not None:
        extra.append(f"run.trials={args.trials}")
    return extra


def _describe(label, p, report):
    d = report.design
    flag = "train" if report.trained else "no training"
    antennas = ",".join(str(int(i)) for i in d.trained_set) or "-"
    print(f"[{label}] M={p.M} N={p.N} T={p.T} K={p.K:g}  regime={report.regime.value}  "
          f"decision={flag}")
    print(f"    N1*={d.n1} tau*={d.tau} Pr*={d.pr:.6g} W antennas={antennas}  "
          f"predicted net={report.predicted_net:.6g} J")


def _run_points(cfg, with_mc):
    lam = make_table(cfg)
    rows = []
    for value, system, channel in cfg.points():
        p = build_params(system)
        spec = build_spec(p, channel)
        report = solve(cfg.scenario, p, spec, lam)
        label = "main" if value is None else f"{cfg.sweep_variable}={value:g}"
        _describe(label, p, report)
        row = design_columns(empty_row(label, "" if value is None else value),
                             report.design, report.predicted_net)
        if with_mc:
            benches = ("ideal", "isotropic") + (("los",) if p.K > 0 else ())
            mc_columns(row, cfg, p, spec, report.design, benches)
            print(f"    MC net={row['mc_net_joules']:.6g} J +/- {row['mc_halfwidth']:.2g} "
                  f"({cfg.trials} trials)")
        rows.append(row)
    if lam.path:
        lam.save()
    return rows


def _emit(rows, out, meta):
    if out:
        write_rows(out, rows, meta)
        print(f"wrote {len(rows)} rows to {out}")


def _meta(cfg, **extra):
    meta = {"seed": cfg.seed, "trials": cfg.trials, "scenario": cfg.scenario,
            "lambda_method": cfg.lambda_method}
    meta.update(extra)
    return meta


def cmd_solve(args, with_mc=False):
    cfg = load_config(args.config, _overrides(args))
    rows = _run_points(cfg, with_mc)
    _emit(rows, args.out or cfg.csv_path, _meta(cfg, command=args.command))
    return EXIT_OK


def cmd_figure(args):
    if args.name not in FIGURES:
        print(f"unknown figure {args.name!r}; choose from {', '.join(FIGURES)}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = load_figure_config(args.name, args.config, _overrides(args))
    grid = None
    if args.grid:
        try:
            grid = parse_range(args.grid)
        except ValueError:
            grid = [float(x) for x in args.grid.split(",")]
    rows = figure_rows(args.name, cfg, grid=grid, mc=False if args.no_mc else None)
    out = args.out or cfg.csv_path or f"{args.name}.csv"
    _emit(rows, out, _meta(cfg, figure=args.name))
    return EXIT_OK


def cmd_lambda_table(args):
    ms, n1s = parse_range(args.m_range), parse_range(args.n1_range)
    if not ms or not n1s:
        raise ConfigError("M and N1 ranges must be non-empty")
    table = LambdaTable(method=args.method, trials=args.trials, seed=args.seed, path=args.out)
    table.fill(ms, n1s)
    table.save()
    print(f"{len(table.entries)} entries in {args.out}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "simulate":
            return cmd_solve(args, with_mc=True)
        if args.command == "figure":
            return cmd_figure(args)
        return cmd_lambda_table(args)
    except (ConfigError, ContractError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (NumericError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
