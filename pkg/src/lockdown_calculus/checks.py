"""Reference-value checks run by the ``paper-check`` subcommand.

Each check recomputes one figure from the library and compares it with the
published value at a fixed tolerance. The property checks use a fixed RNG
seed so the whole suite is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .decision import (
    DecisionModel,
    SearchBox,
    block_easing_condition,
    find_inconsistency,
    quarterly_comparison,
    weekly_easing_condition,
    weekly_verdicts,
)
from .epidemic import SirParams, final_size
from .option_value import (
    EndState,
    TreatmentDiscoveryModel,
    VaccineModel,
    mc_end_state_value,
    mortality_multiplier,
    project_future_deaths,
)
from .qaly import (
    AfterEffectParams,
    HospitalizationParams,
    IllnessCostParams,
    QalyValuation,
    aftereffect_qaly_per_death,
    death_qaly_cost,
    hospitalization_qaly_total,
    illness_qaly_per_death,
    monetize,
)
from .scenario import GeometricScenario, cumulative_deaths, excess_deaths, weekly_deaths

PROPERTY_SEED = 7572


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def check_cumulative_39_weeks() -> CheckResult:
    total = cumulative_deaths(GeometricScenario(1230, 1.15, 39))
    return CheckResult("cumulative_39_weeks", _rel(total, 2_187_051) <= 1e-4,
                       f"{total:.1f} vs 2187051 (tol 0.01%)")


def check_week_13_rates() -> CheckResult:
    high = weekly_deaths(GeometricScenario(1230, 1.15, 13), 13)
    low = weekly_deaths(GeometricScenario(1230, 0.7, 13), 13)
    ok = _rel(high, 7572) <= 2e-3 and 11 <= low <= 14
    return CheckResult("week_13_rates", ok, f"F=1.15: {high:.1f} vs 7572 (tol 0.2%); F=0.7: {low:.2f} in [11, 14]")


def check_quarter_totals() -> CheckResult:
    ease = GeometricScenario(7572, 1.15, 13)
    lock = GeometricScenario(7572, 0.7, 13)
    e, l, x = cumulative_deaths(ease), cumulative_deaths(lock), excess_deaths(ease, lock)
    ok = _rel(e, 299_100) <= 0.02 and _rel(l, 17_497) <= 0.02 and _rel(x, 282_500) <= 0.02
    return CheckResult("quarter_totals", ok,
                       f"ease {e:.0f} vs 299100, lock {l:.0f} vs 17497, excess {x:.0f} vs 282500 (tol 2%)")


def check_monetization() -> CheckResult:
    ease = GeometricScenario(7572, 1.15, 13)
    lock = GeometricScenario(7572, 0.7, 13)
    base = quarterly_comparison(ease, lock, 200e9, QalyValuation(30000, 10))
    trebled = quarterly_comparison(ease, lock, 200e9, QalyValuation(90000, 10))
    at_reference = monetize(death_qaly_cost(282_500, QalyValuation()), QalyValuation())
    ok = (
        80e9 < base.monetized <= 85e9
        and math.isclose(at_reference, 84.75e9, rel_tol=1e-12)
        and base.verdict == "ease"
        and trebled.verdict == "lockdown"
    )
    return CheckResult(
        "monetization", ok,
        f"GBP {base.monetized / 1e9:.2f}bn ({base.verdict}); 282500 deaths -> GBP {at_reference / 1e9:.2f}bn; "
        f"at GBP 90000/QALY GBP {trebled.monetized / 1e9:.2f}bn ({trebled.verdict}) vs GBP 200bn",
    )


def check_treatment_multipliers() -> CheckResult:
    values = [mortality_multiplier(m) for m in (1, 2, 3)]
    exact = all(math.isclose(v, e, rel_tol=1e-12) for v, e in zip(values, (0.92, 0.8464, 0.778688)))
    rounded = [round(v, 2) for v in values]
    ok = exact and rounded == [0.92, 0.84, 0.78]
    return CheckResult("treatment_multipliers", ok,
                       f"{values[0]:.6f} / {values[1]:.6f} / {values[2]:.6f}; "
                       f"2-dp rounding {rounded} vs reference [0.92, 0.84, 0.78]")


def check_illness_accounting() -> CheckResult:
    ill = IllnessCostParams()
    derived = IllnessCostParams.derived()
    after = aftereffect_qaly_per_death(AfterEffectParams())
    hosp = hospitalization_qaly_total(HospitalizationParams())
    lo = death_qaly_cost(40000, QalyValuation(30000, 5))
    hi = death_qaly_cost(40000, QalyValuation(30000, 10))
    ok = (
        math.isclose(derived.qaly_per_bout, 0.02, rel_tol=1e-9)
        and math.isclose(illness_qaly_per_death(ill), 3.0, rel_tol=1e-9)
        and math.isclose(after, 10.0, rel_tol=1e-9)
        and 1500 <= hosp <= 2100
        and lo == 200_000
        and hi == 400_000
    )
    return CheckResult(
        "illness_accounting", ok,
        f"bout {derived.qaly_per_bout:.4f}, illness {illness_qaly_per_death(ill):.3f}, after-effects {after:.3f}, "
        f"hospital {hosp:.0f} in [1500, 2100], deaths {lo:.0f}/{hi:.0f}",
    )


def check_inconsistency_witness() -> CheckResult:
    box = SearchBox(
        lockdown_factors=(0.4, 0.5, 0.6),
        easing_factors=(1.04, 1.05, 1.06),
        horizons=(11, 12, 13),
        cost_ratios=(1.0,),
    )
    witnesses = find_inconsistency(box)
    target = [w for w in witnesses
              if (w.model.lockdown_factor, w.model.easing_factor, w.model.horizon_weeks) == (0.5, 1.05, 12)]
    m = DecisionModel(1.0, 1.0, 1.0, 0.5, 1.05, 12)
    weekly = weekly_easing_condition(m, 12)
    block = block_easing_condition(m)
    ok = (
        len(target) == 1
        and len(target[0].weekly_verdicts) == 12
        and all(target[0].weekly_verdicts)
        and not target[0].block_verdict
        and weekly.ease and abs(weekly.lhs - 0.98776) < 1e-4
        and not block.ease and abs(block.lhs - 15.713) < 1e-3 and block.rhs == 12
    )
    return CheckResult("inconsistency_witness", ok,
                       f"{len(witnesses)} witnesses; weekly {weekly.lhs:.5f} < 1, block {block.lhs:.3f} > 12")


def _random_models(rng: np.random.Generator, n: int) -> list[DecisionModel]:
    models = []
    for _ in range(n):
        models.append(DecisionModel(
            lockdown_cost_per_week=float(rng.uniform(0.1, 10)),
            cost_per_death=float(rng.uniform(0.1, 10)),
            initial_weekly_deaths=float(rng.uniform(0.1, 10)),
            lockdown_factor=float(rng.uniform(0.05, 0.95)),
            easing_factor=float(rng.uniform(1.001, 1.5)),
            horizon_weeks=int(rng.integers(1, 40)),
        ))
    return models


def check_properties() -> CheckResult:
    rng = np.random.default_rng(PROPERTY_SEED)
    failures = []

    # closed form vs direct summation
    worst = 0.0
    for _ in range(1000):
        s = GeometricScenario(float(rng.uniform(1, 1e4)), float(rng.uniform(0.1, 2)), int(rng.integers(1, 101)))
        direct = math.fsum(weekly_deaths(s, k) for k in range(1, s.horizon_weeks + 1))
        worst = max(worst, _rel(cumulative_deaths(s), direct))
    if worst > 1e-9:
        failures.append(f"closed form rel err {worst:.2e}")

    # easing decisions form a prefix of 1..N
    models = _random_models(rng, 1000)
    for m in models:
        eases = [v.ease for v in weekly_verdicts(m)]
        if eases != sorted(eases, reverse=True):
            failures.append("weekly prefix")
            break

    # verdicts unchanged by a common scaling of (C*M, L)
    for m in models:
        k = float(rng.uniform(0.01, 100))
        scaled = DecisionModel(m.lockdown_cost_per_week * k, m.cost_per_death * k, m.initial_weekly_deaths,
                               m.lockdown_factor, m.easing_factor, m.horizon_weeks)
        same = [v.ease for v in weekly_verdicts(m)] == [v.ease for v in weekly_verdicts(scaled)]
        if not same or block_easing_condition(m).ease != block_easing_condition(scaled).ease:
            failures.append("scale invariance")
            break

    # final-size residual and overshoot
    for r0 in rng.uniform(1.0, 10.0, 200):
        r0 = float(r0) if r0 > 1.0 else 1.0 + 1e-6
        res = final_size(SirParams(r0))
        a = res.attack_rate
        if abs(a - (1 - math.exp(-r0 * a))) >= 1e-10 or not res.overshoot > 0:
            failures.append(f"final size at r0={r0}")
            break

    mc = check_monte_carlo()
    if not mc.passed:
        failures.append(mc.detail)
    zero = check_zero_variance()
    if not zero.passed:
        failures.append(zero.detail)

    return CheckResult("property_suites", not failures,
                       "; ".join(failures) if failures else f"all passed ({mc.detail}; {zero.detail})")


def check_monte_carlo(n_samples: int = 100_000, p: float = 0.3, seed: int = 12345) -> CheckResult:
    """Two-quarter vaccine lottery against its closed-form expectation."""
    state = EndState(7572.0, 1.15, 0.0, 26)
    no_treatment = TreatmentDiscoveryModel(mortality_multiplier_per_discovery=1.0)
    vac = VaccineModel(per_quarter_arrival_probability=p)
    val = mc_end_state_value(state, 26, no_treatment, vac, n_samples=n_samples, seed=seed)
    q1 = math.fsum(7572 * 1.15**n for n in range(1, 14))
    q2 = math.fsum(7572 * 1.15**n for n in range(14, 27))
    expected = q1 + (1 - p) * q2
    z = abs(val.expected_future_deaths - expected) / val.standard_error
    return CheckResult("monte_carlo_oracle", z <= 3.0, f"MC z-score {z:.2f} at {n_samples} samples")


def check_zero_variance() -> CheckResult:
    state = EndState(7572.0, 0.7, 0.0, 26)
    det = project_future_deaths(state, 26)
    val = mc_end_state_value(state, 26, n_samples=1000, seed=1)
    ok = val.standard_error == 0.0 and val.expected_future_deaths == det
    return CheckResult("zero_variance", ok, f"SE {val.standard_error}, mean == deterministic: {val.expected_future_deaths == det}")


CHECKS: list[Callable[[], CheckResult]] = [
    check_cumulative_39_weeks,
    check_week_13_rates,
    check_quarter_totals,
    check_monetization,
    check_treatment_multipliers,
    check_illness_accounting,
    check_inconsistency_witness,
    check_properties,
]


def run_checks() -> list[CheckResult]:
    results = []
    for check in CHECKS:
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(check.__name__.removeprefix("check_"), False, f"error: {exc!r}"))
    return results
