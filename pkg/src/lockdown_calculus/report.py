"""Report tables for each subcommand and their CSV, text and SVG renderings.

CSV output is comma separated with a header row and ``\\n`` line endings.
Floats are written in Python's shortest round-trip form, so identical inputs
give byte-identical files. Money columns hold whole pounds, with a companion
``*_bn`` column in billions rounded to two decimals.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

from .config import RunConfig
from .decision import find_inconsistency, quarterly_comparison
from .epidemic import SirParams, final_size
from .errors import ConfigError
from .option_value import mc_end_state_value
from .qaly import QalyValuation
from .scenario import GeometricScenario, cumulative_deaths, project

Cell = float | int | str | bool | None


@dataclass(frozen=True)
class ReportRow:
    label: str
    value: Cell
    unit: str
    provenance: str


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Cell]] = field(default_factory=list)
    title: str = ""

    def add(self, *cells: Cell) -> None:
        if len(cells) != len(self.columns):
            raise ValueError(f"row has {len(cells)} cells, table has {len(self.columns)} columns")
        self.rows.append(list(cells))

    def column(self, name: str) -> list[Cell]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def pounds(x: float) -> int:
    return int(round(x))


def billions(x: float) -> str:
    return f"{x / 1e9:.2f}"


def _csv_cell(v: Cell) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return repr(v)
    return str(v)


def _text_cell(v: Cell) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return _csv_cell(v)


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def to_text(table: Table) -> str:
    """Aligned plain text: numbers right-aligned, everything else left."""
    cells = [table.columns] + [[_text_cell(v) for v in row] for row in table.rows]
    numeric = [
        all(isinstance(row[i], (int, float)) and not isinstance(row[i], bool) or row[i] is None
            for row in table.rows)
        for i in range(len(table.columns))
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(len(table.columns))]
    lines = [table.title] if table.title else []
    for k, row in enumerate(cells):
        parts = [c.rjust(w) if k and num else c.ljust(w) for c, w, num in zip(row, widths, numeric)]
        lines.append("  ".join(parts).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def to_svg(table: Table, x: str, ys: Sequence[str], ylabel: str = "", kind: str = "line") -> str:
    """Static chart of columns ``ys`` against ``x``."""
    try:
        import matplotlib
    except ImportError:
        raise ConfigError("svg output needs matplotlib (pip install 'artifact[svg]')") from None

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in table.rows if isinstance(r[table.columns.index(x)], (int, float))]
    xs = [r[table.columns.index(x)] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / max(len(ys), 1)
    for k, name in enumerate(ys):
        vals = [r[table.columns.index(name)] for r in rows]
        if kind == "bar":
            pos = [i + k * width for i in range(len(xs))]
            ax.bar(pos, vals, width=width, label=name)
        else:
            ax.plot(xs, vals, marker="o", label=name)
    if kind == "bar":
        ax.set_xticks([i + width * (len(ys) - 1) / 2 for i in range(len(xs))])
        ax.set_xticklabels([_text_cell(v) for v in xs])
    ax.set_xlabel(x)
    ax.set_ylabel(ylabel)
    ax.set_title(table.title)
    ax.legend()
    fig.tight_layout()
    buf = io.StringIO()
    # fixed hash salt and no date keep the SVG byte-stable
    with matplotlib.rc_context({"svg.hashsalt": "lockdown-calculus"}):
        fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def report_rows_table(rows: Sequence[ReportRow], title: str = "") -> Table:
    table = Table(["label", "value", "unit", "billions", "provenance"], title=title)
    for r in rows:
        if r.unit == "GBP" and isinstance(r.value, float):
            table.add(r.label, pounds(r.value), r.unit, billions(r.value), r.provenance)
        else:
            table.add(r.label, r.value, r.unit, None, r.provenance)
    return table


# --- subcommand tables -------------------------------------------------------


def project_table(cfg: RunConfig) -> Table:
    """Weekly deaths per scenario, with a closing ``total`` row."""
    horizon = max(s.horizon_weeks for s in cfg.scenarios)
    trajectories = [project(s) for s in cfg.scenarios]
    table = Table(["week"] + [s.label or f"scenario{i}" for i, s in enumerate(cfg.scenarios)],
                  title="Weekly deaths by scenario")
    for n in range(1, horizon + 1):
        table.add(n, *[t.weekly_deaths[n - 1] if n <= len(t.weekly_deaths) else None for t in trajectories])
    table.add("total", *[cumulative_deaths(s) for s in cfg.scenarios])
    return table


def _origin(value, default) -> str:
    return "default" if value == default else "config"


def comparison_rows(cfg: RunConfig) -> list[ReportRow]:
    defaults = RunConfig()
    cc, dc = cfg.comparison, defaults.comparison
    ease, lock = cc.scenarios()
    extended = cc.mode == "extended"
    result = quarterly_comparison(
        ease, lock, cc.lockdown_quarter_cost, cfg.valuation,
        illness=cfg.illness if extended else None,
        aftereffects=cfg.aftereffects if extended else None,
    )
    replication = cc == dc and cfg.valuation == defaults.valuation

    def ref(text: str) -> str:
        return f"computed; reference {text}" if replication else "computed"

    return [
        ReportRow("initial_weekly_deaths", cc.initial_weekly_deaths, "deaths/week",
                  _origin(cc.initial_weekly_deaths, dc.initial_weekly_deaths)),
        ReportRow("easing_factor", cc.easing_factor, "per week", _origin(cc.easing_factor, dc.easing_factor)),
        ReportRow("lockdown_factor", cc.lockdown_factor, "per week",
                  _origin(cc.lockdown_factor, dc.lockdown_factor)),
        ReportRow("horizon_weeks", cc.horizon_weeks, "weeks", _origin(cc.horizon_weeks, dc.horizon_weeks)),
        ReportRow("ease_deaths", result.ease_deaths, "deaths", ref("about 300000")),
        ReportRow("lock_deaths", result.lock_deaths, "deaths", ref("about 17500")),
        ReportRow("excess_deaths", result.excess_deaths, "deaths", ref("about 282500")),
        ReportRow("qalys_per_death", result.qalys_per_death, "QALY/death",
                  "computed" if extended else _origin(cfg.valuation.qalys_per_death,
                                                      defaults.valuation.qalys_per_death)),
        ReportRow("qaly_cost", result.qaly_cost, "QALY", "computed"),
        ReportRow("pounds_per_qaly", cfg.valuation.pounds_per_qaly, "GBP/QALY",
                  _origin(cfg.valuation.pounds_per_qaly, defaults.valuation.pounds_per_qaly)
                  + (" (NICE threshold)" if cfg.valuation.pounds_per_qaly == 30000 else "")),
        ReportRow("monetized_qaly_cost", result.monetized, "GBP", ref("about 84bn")),
        ReportRow("lockdown_quarter_cost", cc.lockdown_quarter_cost, "GBP",
                  _origin(cc.lockdown_quarter_cost, dc.lockdown_quarter_cost)),
        ReportRow("verdict", result.verdict, "", f"computed; mode={result.mode}"),
    ]


def compare_table(cfg: RunConfig) -> Table:
    return report_rows_table(comparison_rows(cfg), title="Quarterly ease/lockdown comparison")


def _swept(cfg: RunConfig, value: float):
    cc = cfg.comparison
    name = cfg.sweep.parameter
    val = cfg.valuation
    kw = dict(
        initial_weekly_deaths=cc.initial_weekly_deaths,
        easing_factor=cc.easing_factor,
        lockdown_factor=cc.lockdown_factor,
        lockdown_quarter_cost=cc.lockdown_quarter_cost,
    )
    if name == "pounds_per_qaly":
        val = QalyValuation(value, val.qalys_per_death)
    elif name == "qalys_per_death":
        val = QalyValuation(val.pounds_per_qaly, value)
    else:
        kw[name] = value
    d = kw["initial_weekly_deaths"]
    ease = GeometricScenario(d, kw["easing_factor"], cc.horizon_weeks, "ease")
    lock = GeometricScenario(d, kw["lockdown_factor"], cc.horizon_weeks, "lock")
    extended = cc.mode == "extended"
    return quarterly_comparison(
        ease, lock, kw["lockdown_quarter_cost"], val,
        illness=cfg.illness if extended else None,
        aftereffects=cfg.aftereffects if extended else None,
    )


def sweep_table(cfg: RunConfig) -> Table:
    table = Table(
        ["parameter", "value", "excess_deaths", "qalys_per_death", "qaly_cost",
         "monetized_gbp", "monetized_bn", "lockdown_cost_gbp", "lockdown_cost_bn", "verdict"],
        title=f"Quarterly comparison swept over {cfg.sweep.parameter}",
    )
    for value in cfg.sweep.values:
        r = _swept(cfg, value)
        table.add(cfg.sweep.parameter, value, r.excess_deaths, r.qalys_per_death, r.qaly_cost,
                  pounds(r.monetized), billions(r.monetized),
                  pounds(r.lockdown_cost), billions(r.lockdown_cost), r.verdict)
    return table


def consistency_table(cfg: RunConfig) -> Table:
    table = Table(
        ["easing_factor", "lockdown_factor", "horizon_weeks", "cost_ratio",
         "weekly_lhs_last", "weekly_rhs", "block_lhs", "block_rhs"],
        title="Models where weekly decisions ease throughout but the block decision locks down",
    )
    for w in find_inconsistency(cfg.search):
        m = w.model
        table.add(m.easing_factor, m.lockdown_factor, m.horizon_weeks,
                  m.lockdown_cost_per_week / m.death_cost_scale,
                  w.weekly_margin.lhs, w.weekly_margin.rhs, w.block_margin.lhs, w.block_margin.rhs)
    return table


def finalsize_table(cfg: RunConfig) -> Table:
    s0 = cfg.epidemic.initial_susceptible_fraction
    table = Table(
        ["r0", "initial_susceptible_fraction", "herd_threshold", "attack_rate",
         "overshoot", "final_immune_fraction", "residual", "iterations"],
        title="Final size and overshoot",
    )
    for r0 in cfg.epidemic.r0_values:
        res = final_size(SirParams(r0, s0))
        table.add(r0, s0, res.herd_threshold, res.attack_rate, res.overshoot,
                  res.final_immune_fraction, res.residual, res.iterations)
    return table


def endstate_table(cfg: RunConfig, seed: int | None = None, n_samples: int | None = None) -> Table:
    ov = cfg.option_value
    seed = cfg.seed if seed is None else seed
    n_samples = ov.n_samples if n_samples is None else n_samples
    cap = ifr = None
    include_overshoot = True
    if ov.cap is not None:
        cap = SirParams(ov.cap.r0, 1.0, ov.cap.population)
        ifr = ov.cap.ifr
        include_overshoot = ov.cap.include_overshoot
    table = Table(
        ["label", "weekly_deaths", "weekly_factor", "cumulative_infected_fraction",
         "expected_future_deaths", "standard_error", "samples", "expected_future_qalys",
         "monetized_gbp", "monetized_bn", "difference_vs_first_gbp"],
        title=f"End-state valuation over {ov.horizon_weeks} weeks (seed {seed})",
    )
    first = None
    for state in ov.end_states:
        val = mc_end_state_value(state, ov.horizon_weeks, ov.treatment, ov.vaccine, cap, ifr,
                                 cfg.valuation, n_samples, seed, include_overshoot)
        if first is None:
            first = (state, val)
        diff = None
        if state.weeks_since_pandemic_start == first[0].weeks_since_pandemic_start:
            diff = pounds(val.monetized - first[1].monetized)
        table.add(state.label, state.weekly_deaths, state.weekly_factor_under_policy,
                  state.cumulative_infected_fraction, val.expected_future_deaths, val.standard_error,
                  val.samples, val.expected_future_qalys, pounds(val.monetized), billions(val.monetized), diff)
    return table
