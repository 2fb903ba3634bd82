"""QALY accounting for deaths, illness bouts, hospital stays and after-effects.

All QALY sums are undiscounted and all money is nominal GBP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

DAYS_PER_YEAR = 365.25


def _require(cond: bool, name: str, value, why: str) -> None:
    if not cond:
        raise DomainError(f"{name} {why}, got {value!r}")


@dataclass(frozen=True)
class QalyValuation:
    pounds_per_qaly: float = 30000.0
    qalys_per_death: float = 10.0

    def __post_init__(self):
        _require(math.isfinite(self.pounds_per_qaly) and self.pounds_per_qaly > 0,
                 "pounds_per_qaly", self.pounds_per_qaly, "must be > 0")
        _require(math.isfinite(self.qalys_per_death) and self.qalys_per_death > 0,
                 "qalys_per_death", self.qalys_per_death, "must be > 0")


# name -> (pounds per QALY, description)
VALUATION_PRESETS: dict[str, tuple[float, str]] = {
    "nice": (30000.0, "NICE standard threshold"),
    "end_of_life": (50000.0, "NICE end-of-life threshold"),
    "trebled": (90000.0, "trebled NICE threshold"),
    "very_rare": (300000.0, "very rare diseases threshold"),
}


def valuation_preset(name: str, qalys_per_death: float = 10.0) -> QalyValuation:
    try:
        pounds, _ = VALUATION_PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown valuation preset {name!r}; choose from {sorted(VALUATION_PRESETS)}") from None
    return QalyValuation(pounds, qalys_per_death)


@dataclass(frozen=True)
class IllnessCostParams:
    """Cost of non-fatal illness bouts.

    ``qaly_per_bout`` is used directly; :meth:`derived` builds it from a flu
    baseline scaled for severity and duration.
    """

    qaly_per_bout: float = 0.02
    bouts_per_death: float = 150.0
    flu_baseline_qaly: float = 0.005
    severity_multiplier: float = 2.0
    duration_multiplier: float = 2.0
    implied_mortality_rate: float = 0.006

    def __post_init__(self):
        for name in ("bouts_per_death", "flu_baseline_qaly", "severity_multiplier",
                     "duration_multiplier", "implied_mortality_rate"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value > 0, name, value, "must be > 0")
        _require(math.isfinite(self.qaly_per_bout) and self.qaly_per_bout >= 0,
                 "qaly_per_bout", self.qaly_per_bout, "must be >= 0")

    @classmethod
    def derived(cls, **kwargs) -> IllnessCostParams:
        flu = kwargs.get("flu_baseline_qaly", cls.flu_baseline_qaly)
        sev = kwargs.get("severity_multiplier", cls.severity_multiplier)
        dur = kwargs.get("duration_multiplier", cls.duration_multiplier)
        kwargs["qaly_per_bout"] = flu * sev * dur
        return cls(**kwargs)

    @property
    def implied_bouts_per_death(self) -> float:
        return 1.0 / self.implied_mortality_rate


@dataclass(frozen=True)
class AfterEffectParams:
    prevalence_among_patients: float = 0.02
    quality_decrement: float = 0.2
    decrement_duration_years: float = 5.0
    life_expectancy_loss_years: float = 2.0
    mortality_rate: float = 0.006

    def __post_init__(self):
        _require(0 <= self.prevalence_among_patients <= 1, "prevalence_among_patients",
                 self.prevalence_among_patients, "must be in [0, 1]")
        _require(0 <= self.quality_decrement <= 1, "quality_decrement",
                 self.quality_decrement, "must be in [0, 1]")
        _require(self.decrement_duration_years >= 0, "decrement_duration_years",
                 self.decrement_duration_years, "must be >= 0")
        _require(self.life_expectancy_loss_years >= 0, "life_expectancy_loss_years",
                 self.life_expectancy_loss_years, "must be >= 0")
        _require(0 <= self.mortality_rate <= 1, "mortality_rate", self.mortality_rate, "must be in [0, 1]")


@dataclass(frozen=True)
class HospitalizationParams:
    hospitalized_count: float = 125000.0
    reference_deaths: float = 40000.0
    mean_stay_days: float = 5.0
    quality_during_stay: float = 0.0

    def __post_init__(self):
        for name in ("hospitalized_count", "reference_deaths", "mean_stay_days"):
            value = getattr(self, name)
            _require(math.isfinite(value) and value >= 0, name, value, "must be >= 0")
        _require(0 <= self.quality_during_stay <= 1, "quality_during_stay",
                 self.quality_during_stay, "must be in [0, 1]")


def death_qaly_cost(deaths: float, v: QalyValuation) -> float:
    if deaths < 0:
        raise DomainError(f"deaths must be >= 0, got {deaths!r}")
    return deaths * v.qalys_per_death


def illness_qaly_per_death(p: IllnessCostParams) -> float:
    return p.qaly_per_bout * p.bouts_per_death


def aftereffect_qaly_per_death(p: AfterEffectParams) -> float:
    """QALYs lost by survivors with lasting after-effects, per death.

    Affected survivors per death is prevalence / mortality; each loses the
    quality decrement over its duration plus the years of life expectancy.
    """
    if p.mortality_rate == 0:
        raise DomainError("mortality_rate must be > 0 to express after-effects per death")
    per_patient = p.quality_decrement * p.decrement_duration_years + p.life_expectancy_loss_years
    return (p.prevalence_among_patients / p.mortality_rate) * per_patient


def hospitalization_qaly_total(p: HospitalizationParams) -> float:
    return p.hospitalized_count * (p.mean_stay_days / DAYS_PER_YEAR) * (1.0 - p.quality_during_stay)


def total_qaly_per_death(
    v: QalyValuation,
    i: IllnessCostParams | None = None,
    a: AfterEffectParams | None = None,
    include_illness: bool = True,
    include_aftereffects: bool = True,
) -> float:
    total = v.qalys_per_death
    if include_illness:
        total += illness_qaly_per_death(i or IllnessCostParams())
    if include_aftereffects:
        total += aftereffect_qaly_per_death(a or AfterEffectParams())
    return total


def monetize(qalys: float, v: QalyValuation) -> float:
    if qalys < 0:
        raise DomainError(f"qalys must be >= 0, got {qalys!r}")
    return qalys * v.pounds_per_qaly
