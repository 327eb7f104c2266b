"""
qeraser: multi-slit quantum-eraser patterns from a JSON experiment config.

Usage:
    qeraser simulate -c config.json [-o out.csv] [--plot fig.png] [--oracle]
    qeraser verify   -c config.json [--suite all|sumrule|unitarity|oracle|sorkin|closedform]
    qeraser sweep    -c config.json --param a --values 10,50,250 [--outdir DIR]

Exit codes: 0 success, 1 failed check, 2 config error, 3 aliasing risk.
"""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import report
from .config import load_config
from .errors import AliasingRisk, ConfigError, ParameterOutOfRegime, WindowOutOfGrid
from .patterns import visibility
from .propagation import marginal_intensity, propagate_state
from .qstate import Pattern, make_tagged_state
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ALIASING = 0, 1, 2, 3
SWEEP_PARAMS = ("a", "d", "epsilon")

log = logging.getLogger("qeraser")


def _oracle_report(config) -> dict:
    result = report.run_oracle(config)
    rel = max(result.amplitude_linf_rel)
    log.info("oracle cross-check: amplitude L-inf rel %.3e (%s)", rel, "pass" if result.passed else "FAIL")
    return result.as_dict()


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    extra = None
    if args.oracle or config.oracle:
        try:
            extra = {"oracle": _oracle_report(config)}
        except AliasingRisk as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ALIASING
    table = report.compute_table(config)
    out = Path(args.output or config.output.path)
    report.write_table(table, config, out, extra)
    print(f"wrote {out}")
    figure = args.plot or _default_figure(config, args.output)
    if figure:
        from .plotting import plot_table

        plot_table(table, figure, title=_title(config))
        print(f"wrote {figure}")
    if extra and not extra["oracle"]["pass"]:
        return EXIT_FAIL
    return EXIT_OK


def _default_figure(config, output_override):
    # a redirected table takes its configured figure along with it
    if not config.output.figure:
        return None
    if output_override:
        return str(Path(output_override).with_suffix(Path(config.output.figure).suffix or ".png"))
    return config.output.figure


def _title(config) -> str:
    s = config.slits
    basis = config.basis_name if config.detector_enabled else "no detector"
    return f"n={s.n}, d={s.spacing:g}, eps={s.width_param:g}, a={config.a:g} ({basis})"


def cmd_verify(args) -> int:
    config = load_config(args.config)
    checks = run_suite(config, args.suite)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def parse_values(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError("--values", f"not a comma-separated list of numbers: {text!r}") from exc
    if not values or any(not v > 0 for v in values):
        raise ConfigError("--values", "values must be positive")
    return values


def _visibility_or_nan(p, baseline, period) -> float:
    try:
        return visibility(p, baseline, period)
    except (WindowOutOfGrid, ValueError):
        return float("nan")


def sweep_row(config, value, table) -> dict:
    grid = config.grid
    tagged = propagate_state(make_tagged_state(config.slits), config.propagation)
    baseline = marginal_intensity(tagged, grid)
    period = np.pi * config.a / config.slits.spacing
    row = {
        "value": value,
        "a": config.a,
        "omega": config.omega,
        "sumrule_residual": report.sum_rule_residual(table),
    }
    for name, values in table.items():
        if name == "x":
            continue
        pat = Pattern(grid, values, name)
        row["V_" + name[2:]] = _visibility_or_nan(pat, baseline, period)
    return row


def cmd_sweep(args) -> int:
    if args.param not in SWEEP_PARAMS:
        print(f"error: --param: unknown parameter {args.param!r}; choose from {SWEEP_PARAMS}", file=sys.stderr)
        return EXIT_CONFIG
    base = load_config(args.config)
    values = parse_values(args.values)
    template = Path(args.output or base.output.path)
    outdir = Path(args.outdir) if args.outdir else template.parent
    rows = []
    for value in values:
        config = base.replace(**{args.param: value})
        table = report.compute_table(config)
        path = outdir / f"{template.stem}_{args.param}_{value:g}{template.suffix}"
        report.write_table(table, config, path)
        print(f"wrote {path}")
        rows.append(sweep_row(config, value, table))
    summary = {k: np.array([r[k] for r in rows]) for k in rows[0]}
    summary_path = outdir / f"{template.stem}_{args.param}_summary.csv"
    summary_path.write_text(report.table_to_csv(summary), encoding="utf-8")
    print(f"wrote {summary_path}")
    if args.plot:
        from .plotting import plot_sweep

        plot_sweep(summary, args.param, args.plot)
        print(f"wrote {args.plot}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="qeraser", description=__doc__.split("\n")[1], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="write marginal and outcome-conditioned patterns")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("-o", "--output", help="override output.path")
    p.add_argument("--plot", help="also render a PNG figure to this path")
    p.add_argument("--oracle", action="store_true", help="cross-check against the spectral propagator")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run invariant checks")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("--suite", default="all", choices=("all",) + SUITES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="repeat simulate over values of one parameter")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--values", required=True, help="comma-separated, e.g. 10,50,250")
    p.add_argument("-o", "--output", help="file name template (default output.path)")
    p.add_argument("--outdir")
    p.add_argument("--plot", help="render visibility vs parameter to this path")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(message)s")
    warnings.simplefilter("ignore", ParameterOutOfRegime)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AliasingRisk as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ALIASING


if __name__ == "__main__":
    sys.exit(main())
