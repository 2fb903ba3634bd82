import pytest
from hypothesis import given
from hypothesis import strategies as st

from lockdown_calculus.errors import DomainError
from lockdown_calculus.qaly import (
    VALUATION_PRESETS,
    AfterEffectParams,
    HospitalizationParams,
    IllnessCostParams,
    QalyValuation,
    aftereffect_qaly_per_death,
    death_qaly_cost,
    hospitalization_qaly_total,
    illness_qaly_per_death,
    monetize,
    total_qaly_per_death,
    valuation_preset,
)


def test_death_cost_examples():
    assert death_qaly_cost(40000, QalyValuation(30000, 5)) == 200_000
    assert death_qaly_cost(40000, QalyValuation(30000, 10)) == 400_000
    assert monetize(death_qaly_cost(282_500, QalyValuation()), QalyValuation()) == pytest.approx(84.75e9, rel=1e-12)


def test_illness_and_aftereffects():
    assert IllnessCostParams.derived().qaly_per_bout == pytest.approx(0.02, rel=1e-12)
    assert illness_qaly_per_death(IllnessCostParams()) == pytest.approx(3.0, rel=1e-12)
    assert IllnessCostParams().implied_bouts_per_death == pytest.approx(1 / 0.006)
    # (0.02 / 0.006) * (0.2 * 5 + 2)
    assert aftereffect_qaly_per_death(AfterEffectParams()) == pytest.approx(10.0, rel=1e-12)


def test_hospitalization_total():
    total = hospitalization_qaly_total(HospitalizationParams())
    assert total == pytest.approx(125000 * 5 / 365.25, rel=1e-12)
    assert 1500 <= total <= 2100
    assert hospitalization_qaly_total(HospitalizationParams(quality_during_stay=1.0)) == 0.0


def test_total_decomposition():
    v, i, a = QalyValuation(), IllnessCostParams(), AfterEffectParams()
    full = total_qaly_per_death(v, i, a)
    assert full == pytest.approx(v.qalys_per_death + illness_qaly_per_death(i) + aftereffect_qaly_per_death(a))
    assert full == pytest.approx(23.0)
    assert total_qaly_per_death(v, i, a, include_illness=False) == pytest.approx(20.0)
    assert total_qaly_per_death(v, i, a, include_aftereffects=False) == pytest.approx(13.0)
    assert total_qaly_per_death(v, include_illness=False, include_aftereffects=False) == 10.0


def test_presets():
    assert {k: p for k, (p, _) in VALUATION_PRESETS.items()} == {
        "nice": 30000, "end_of_life": 50000, "trebled": 90000, "very_rare": 300000}
    assert valuation_preset("trebled") == QalyValuation(90000, 10)
    with pytest.raises(DomainError):
        valuation_preset("priceless")


@given(st.floats(0, 1e7), st.floats(0, 1e7), st.floats(1, 1e6), st.floats(0.1, 50))
def test_linearity(d1, d2, pounds, qpd):
    v = QalyValuation(pounds, qpd)
    both = monetize(death_qaly_cost(d1 + d2, v), v)
    parts = monetize(death_qaly_cost(d1, v), v) + monetize(death_qaly_cost(d2, v), v)
    assert both == pytest.approx(parts, rel=1e-12, abs=1e-6)


def test_aftereffects_need_positive_mortality():
    with pytest.raises(DomainError):
        aftereffect_qaly_per_death(AfterEffectParams(mortality_rate=0.0))


@pytest.mark.parametrize("call", [
    lambda: QalyValuation(0, 10),
    lambda: QalyValuation(30000, -1),
    lambda: death_qaly_cost(-1, QalyValuation()),
    lambda: monetize(-1, QalyValuation()),
    lambda: IllnessCostParams(bouts_per_death=0),
    lambda: AfterEffectParams(prevalence_among_patients=1.5),
    lambda: HospitalizationParams(quality_during_stay=2),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()
