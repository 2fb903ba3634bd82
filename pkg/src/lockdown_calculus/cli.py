"""Command-line entry point.

Exit codes: 0 success, 1 a ``paper-check`` row failed, 2 bad configuration
or arguments. Data goes to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import report
from .checks import run_checks
from .config import FORMATS, load_config
from .errors import ConfigError, DomainError

SUBCOMMANDS = ("project", "compare", "consistency", "endstate", "finalsize", "sweep", "paper-check")

# subcommand -> (x column, y columns or None for all but x, y label, chart kind)
_SVG = {
    "project": ("week", None, "deaths per week", "line"),
    "sweep": ("value", ["monetized_gbp", "lockdown_cost_gbp"], "GBP", "bar"),
    "finalsize": ("r0", ["herd_threshold", "attack_rate", "overshoot"], "fraction of population", "line"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lockdown-calculus",
        description="Lockdown cost-benefit scenarios, end-state valuation and decision-consistency checks.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=Path, help="JSON run configuration (defaults if omitted)")
    parser.add_argument("--out", type=Path, help="write output here instead of stdout")
    parser.add_argument("--format", choices=FORMATS, help="output format (overrides the config)")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed, unsigned 64-bit (overrides the config)")
    parser.add_argument("--samples", type=int, help="Monte Carlo samples (overrides the config)")
    return parser


def _render(table: report.Table, fmt: str, subcommand: str) -> str:
    if fmt == "csv":
        return report.to_csv(table)
    if fmt == "table":
        return report.to_text(table)
    if subcommand not in _SVG:
        raise ConfigError(f"svg output is not available for {subcommand}")
    x, ys, ylabel, kind = _SVG[subcommand]
    ys = ys or [c for c in table.columns if c != x]
    return report.to_svg(table, x, ys, ylabel, kind)


def _paper_check_table(results) -> report.Table:
    table = report.Table(["status", "check", "detail"], title="Reference-value checks")
    for r in results:
        table.add("PASS" if r.passed else "FAIL", r.name, r.detail)
    return table


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    try:
        cfg = load_config(args.config)
        overrides = {}
        if args.format:
            overrides["format"] = args.format
        if args.seed is not None:
            overrides["seed"] = args.seed
        if overrides:
            cfg = replace(cfg, **overrides)
        if args.samples is not None:
            cfg = replace(cfg, option_value=replace(cfg.option_value, n_samples=args.samples))
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    status = 0
    try:
        if args.subcommand == "paper-check":
            results = run_checks()
            table = _paper_check_table(results)
            failed = [r.name for r in results if not r.passed]
            if failed:
                print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
                status = 1
        else:
            builder = {
                "project": report.project_table,
                "compare": report.compare_table,
                "consistency": report.consistency_table,
                "endstate": report.endstate_table,
                "finalsize": report.finalsize_table,
                "sweep": report.sweep_table,
            }[args.subcommand]
            table = builder(cfg)
            if args.subcommand == "consistency":
                print(f"{len(table.rows)} witness(es) over {cfg.search.size} grid points", file=sys.stderr)
        text = _render(table, "table" if args.subcommand == "paper-check" and cfg.format == "svg" else cfg.format,
                       args.subcommand)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.out:
        args.out.write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
