"""Acceptance criteria, one test each.

Each test prints a single ``criterion N: PASS|FAIL`` line (visible with
``pytest -s``) and then asserts. Reference values are recomputed here from
first principles rather than taken from the library's own check module.
"""

import math
import time

import numpy as np
import pytest

from lockdown_calculus import cli
from lockdown_calculus.decision import (
    DecisionModel,
    SearchBox,
    block_easing_condition,
    find_inconsistency,
    quarterly_comparison,
    weekly_easing_condition,
    weekly_verdicts,
)
from lockdown_calculus.epidemic import SirParams, final_size
from lockdown_calculus.option_value import (
    EndState,
    TreatmentDiscoveryModel,
    VaccineModel,
    mc_end_state_value,
    mortality_multiplier,
    project_future_deaths,
)
from lockdown_calculus.qaly import (
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
from lockdown_calculus.scenario import GeometricScenario, cumulative_deaths, excess_deaths, weekly_deaths


def verdict(number, title, ok, detail):
    print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'}  {title}  [{detail}]")
    assert ok, f"criterion {number} ({title}): {detail}"


def rel(a, b):
    return abs(a - b) / abs(b)


def summed(d, f, n):
    return math.fsum(d * f**k for k in range(1, n + 1))


def test_criterion_1_cumulative_39_weeks():
    total = cumulative_deaths(GeometricScenario(1230, 1.15, 39))
    ok = rel(total, 2_187_051) <= 1e-4 and rel(total, summed(1230, 1.15, 39)) <= 1e-12
    verdict(1, "cumulative 39-week projection", ok, f"{total:.1f} vs 2187051, tol 0.01%")


def test_criterion_2_week_13_rates():
    high = weekly_deaths(GeometricScenario(1230, 1.15, 13), 13)
    low = weekly_deaths(GeometricScenario(1230, 0.7, 13), 13)
    ok = rel(high, 7572) <= 2e-3 and 11 <= low <= 14
    verdict(2, "week-13 rates", ok, f"F=1.15 {high:.2f} vs 7572 tol 0.2%; F=0.7 {low:.2f} in [11, 14]")


def test_criterion_3_quarterly_totals():
    ease = GeometricScenario(7572, 1.15, 13)
    lock = GeometricScenario(7572, 0.7, 13)
    e, l, x = cumulative_deaths(ease), cumulative_deaths(lock), excess_deaths(ease, lock)
    ok = (rel(e, 299_100) <= 0.02 and rel(l, 17_497) <= 0.02 and rel(x, 282_500) <= 0.02
          and math.isclose(x, summed(7572, 1.15, 13) - summed(7572, 0.7, 13), rel_tol=1e-12))
    verdict(3, "quarterly totals", ok, f"ease {e:.0f}, lock {l:.0f}, excess {x:.0f}, tol 2%")


def test_criterion_4_monetization():
    v = QalyValuation(30000, 10)
    at_reference = monetize(death_qaly_cost(282_500, v), v)
    ease = GeometricScenario(7572, 1.15, 13)
    lock = GeometricScenario(7572, 0.7, 13)
    base = quarterly_comparison(ease, lock, 200e9, v)
    trebled = quarterly_comparison(ease, lock, 200e9, QalyValuation(90000, 10))
    ok = (math.isclose(at_reference, 84.75e9, rel_tol=1e-12)
          and 80e9 < base.monetized <= 85e9
          and base.verdict == "ease" and trebled.verdict == "lockdown")
    verdict(4, "monetization and verdict flip", ok,
            f"282500 deaths -> {at_reference / 1e9:.2f}bn; computed {base.monetized / 1e9:.2f}bn {base.verdict}; "
            f"at 90000/QALY {trebled.monetized / 1e9:.2f}bn {trebled.verdict}")


def test_criterion_5_treatment_multipliers():
    values = [mortality_multiplier(m) for m in (1, 2, 3)]
    exact = all(math.isclose(v, 0.92**m, rel_tol=1e-15) for m, v in zip((1, 2, 3), values))
    exact = exact and all(math.isclose(v, e, rel_tol=1e-12) for v, e in zip(values, (0.92, 0.8464, 0.778688)))
    rounded = [round(v, 2) for v in values]
    ok = exact and rounded == [0.92, 0.84, 0.78]
    verdict(5, "treatment multipliers", ok, f"exact {values}; 2-dp {rounded} vs required [0.92, 0.84, 0.78]")


def test_criterion_6_illness_accounting():
    bout = IllnessCostParams.derived().qaly_per_bout
    illness = illness_qaly_per_death(IllnessCostParams())
    after = aftereffect_qaly_per_death(AfterEffectParams())
    hosp = hospitalization_qaly_total(HospitalizationParams())
    lo = death_qaly_cost(40000, QalyValuation(30000, 5))
    hi = death_qaly_cost(40000, QalyValuation(30000, 10))
    ok = (math.isclose(bout, 0.005 * 2 * 2, rel_tol=1e-9) and math.isclose(bout, 0.02, rel_tol=1e-9)
          and math.isclose(illness, 150 * 0.02, rel_tol=1e-9) and math.isclose(illness, 3.0, rel_tol=1e-9)
          and math.isclose(after, (0.02 / 0.006) * (0.2 * 5 + 2), rel_tol=1e-9) and math.isclose(after, 10, rel_tol=1e-9)
          and 1500 <= hosp <= 2100 and lo == 200_000 and hi == 400_000)
    verdict(6, "illness accounting", ok,
            f"bout {bout}, illness {illness}, after-effects {after}, hospital {hosp:.1f}, deaths {lo}/{hi}")


def test_criterion_7_inconsistency_witness():
    box = SearchBox((0.4, 0.5, 0.6), (1.04, 1.05, 1.06), (11, 12, 13), (1.0,))
    hits = [w for w in find_inconsistency(box)
            if (w.model.lockdown_factor, w.model.easing_factor, w.model.horizon_weeks) == (0.5, 1.05, 12)]
    # independent evaluation of the two rules
    weekly = [1.05**n * (1.05 - 0.5) for n in range(1, 13)]
    block = math.fsum(1.05**k - 0.5**k for k in range(1, 13))
    m = DecisionModel(1.0, 1.0, 1.0, 0.5, 1.05, 12)
    ok = (len(hits) == 1 and len(hits[0].weekly_verdicts) == 12
          and all(hits[0].weekly_verdicts) and not hits[0].block_verdict
          and all(x < 1 for x in weekly) and abs(weekly[-1] - 0.98776) < 1e-4
          and block > 12 and abs(block - 15.713) < 1e-3
          and math.isclose(weekly_easing_condition(m, 12).lhs, weekly[-1], rel_tol=1e-12)
          and math.isclose(block_easing_condition(m).lhs, block, rel_tol=1e-12))
    verdict(7, "inconsistency witness", ok,
            f"{len(hits)} witness at (0.5, 1.05, 12); weekly {weekly[-1]:.5f} < 1; block {block:.3f} > 12")


def _random_model(rng):
    return DecisionModel(float(rng.uniform(0.1, 10)), float(rng.uniform(0.1, 10)), float(rng.uniform(0.1, 10)),
                         float(rng.uniform(0.05, 0.95)), float(rng.uniform(1.001, 1.5)), int(rng.integers(1, 40)))


def _enumerate_oracle(state, horizon, p, t):
    weekly = [state.weekly_deaths * state.weekly_factor_under_policy**n
              * t.mortality_multiplier_per_discovery ** t.discoveries_in_force(state.weeks_since_pandemic_start + n)
              for n in range(1, horizon + 1)]
    quarters = math.ceil(horizon / 13)
    expected = math.fsum(p * (1 - p) ** (q - 1) * math.fsum(weekly[: 13 * q]) for q in range(1, quarters + 1))
    return expected + (1 - p) ** quarters * math.fsum(weekly)


def test_criterion_8_property_suites():
    rng = np.random.default_rng(2187051)
    parts = {}

    worst = 0.0
    for _ in range(1000):
        s = GeometricScenario(float(rng.uniform(1, 1e4)), float(rng.uniform(0.1, 2)), int(rng.integers(1, 101)))
        direct = math.fsum(s.initial_weekly_deaths * s.weekly_factor**k for k in range(1, s.horizon_weeks + 1))
        worst = max(worst, rel(cumulative_deaths(s), direct))
    parts["a"] = worst <= 1e-9

    models = [_random_model(rng) for _ in range(1000)]
    parts["b"] = all(
        (eases := [v.ease for v in weekly_verdicts(m)]) == sorted(eases, reverse=True) for m in models)

    def scaled(m, k):
        return DecisionModel(m.lockdown_cost_per_week * k, m.cost_per_death * k, m.initial_weekly_deaths,
                             m.lockdown_factor, m.easing_factor, m.horizon_weeks)

    ks = rng.uniform(0.01, 100, len(models))
    parts["c"] = all(
        [v.ease for v in weekly_verdicts(m)] == [v.ease for v in weekly_verdicts(scaled(m, k))]
        and block_easing_condition(m).ease == block_easing_condition(scaled(m, k)).ease
        for m, k in zip(models, ks))

    r0s = np.append(rng.uniform(1.0, 10.0, 199), 10.0)
    ok_d = True
    for r0 in r0s:
        r0 = max(float(r0), 1.0 + 1e-6)
        res = final_size(SirParams(r0))
        a = res.attack_rate
        ok_d &= abs(a - (1 - math.exp(-r0 * a))) < 1e-10 and res.overshoot > 0
    parts["d"] = ok_d

    start = time.perf_counter()
    state = EndState(7572.0, 1.15, 0.0, 26)
    t = TreatmentDiscoveryModel()
    val = mc_end_state_value(state, 26, t, VaccineModel(0.3), n_samples=100_000, seed=12345)
    oracle = _enumerate_oracle(state, 26, 0.3, t)
    elapsed = time.perf_counter() - start
    z = abs(val.expected_future_deaths - oracle) / val.standard_error
    parts["e"] = z <= 3 and elapsed <= 10

    calm = EndState(7572.0, 0.7, 0.0, 26)
    flat = mc_end_state_value(calm, 26, n_samples=1000, seed=1)
    parts["f"] = flat.standard_error == 0.0 and flat.expected_future_deaths == project_future_deaths(calm, 26)

    verdict(8, "property suites", all(parts.values()),
            ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items())
            + f"; closed-form worst {worst:.1e}; MC z {z:.2f} in {elapsed:.1f}s")


def test_criterion_9_reproducibility(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"endstate{i}.csv"
        code = cli.run(["endstate", "--format", "csv", "--out", str(path)])
        outs.append((code, path.read_bytes()))
    identical = outs[0] == outs[1] and outs[0][0] == 0 and len(outs[0][1]) > 0
    check_code = cli.run(["paper-check"])
    capsys.readouterr()
    verdict(9, "reproducibility", identical and check_code == 0,
            f"endstate CSV byte-identical: {identical}; paper-check exit code {check_code}")
