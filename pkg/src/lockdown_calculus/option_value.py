"""Valuing epidemic end states under future treatment and vaccine arrival.

Treatment discoveries each scale mortality by a constant factor, so with
``m`` discoveries in force the death rate is ``multiplier**m`` of its
untreated level. The discovery clock counts weeks since the pandemic was
declared; a state's ``weekly_deaths`` is its untreated-equivalent rate.

Monte Carlo sampling uses numpy's PCG64 generator. Sample ``i`` draws from
its own substream seeded by ``SeedSequence(seed, spawn_key=(i,))``, so
adding samples never changes earlier ones and any partition of the samples
across workers gives the same draws. Means and variances are accumulated
with ``math.fsum`` and are therefore independent of summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .epidemic import SirParams, future_attack, herd_immunity_threshold
from .errors import DomainError
from .qaly import QalyValuation, death_qaly_cost, monetize

WEEKS_PER_QUARTER = 13

DETERMINISTIC_QUARTERLY = "deterministic_quarterly"
POISSON = "poisson"
ENDS_EPIDEMIC = "ends_epidemic"
TRANSMISSION_MULTIPLIER = "transmission_multiplier"

# per-discovery mortality multipliers for the 8% and 10% treatment effects
TREATMENT_PRESETS = {"lower": 0.92, "upper": 0.90}


@dataclass(frozen=True)
class TreatmentDiscoveryModel:
    mode: str = DETERMINISTIC_QUARTERLY
    discovery_interval_weeks: float = 13.0
    mortality_multiplier_per_discovery: float = 0.92
    poisson_rate_per_week: float = 1.0 / 13.0

    def __post_init__(self):
        if self.mode not in (DETERMINISTIC_QUARTERLY, POISSON):
            raise DomainError(f"mode must be {DETERMINISTIC_QUARTERLY!r} or {POISSON!r}, got {self.mode!r}")
        if not 0 < self.mortality_multiplier_per_discovery <= 1:
            raise DomainError(
                f"mortality_multiplier_per_discovery must be in (0, 1], got {self.mortality_multiplier_per_discovery!r}"
            )
        if not self.discovery_interval_weeks > 0:
            raise DomainError(f"discovery_interval_weeks must be > 0, got {self.discovery_interval_weeks!r}")
        if not (math.isfinite(self.poisson_rate_per_week) and self.poisson_rate_per_week >= 0):
            raise DomainError(f"poisson_rate_per_week must be >= 0, got {self.poisson_rate_per_week!r}")

    def discoveries_in_force(self, week: int) -> int:
        """Discoveries made strictly before absolute ``week`` (deterministic mode)."""
        return max(0, math.ceil(week / self.discovery_interval_weeks) - 1)

    @property
    def is_random(self) -> bool:
        return self.mode == POISSON and self.poisson_rate_per_week > 0 and self.mortality_multiplier_per_discovery < 1


@dataclass(frozen=True)
class VaccineModel:
    """Vaccine that may arrive in each quarter of the projection window.

    A vaccine arriving during quarter ``q`` acts from the first week of
    quarter ``q + 1``.
    """

    per_quarter_arrival_probability: float = 0.0
    effect: str = ENDS_EPIDEMIC
    transmission_multiplier_value: float = 1.0

    def __post_init__(self):
        if not 0 <= self.per_quarter_arrival_probability <= 1:
            raise DomainError(
                f"per_quarter_arrival_probability must be in [0, 1], got {self.per_quarter_arrival_probability!r}"
            )
        if self.effect not in (ENDS_EPIDEMIC, TRANSMISSION_MULTIPLIER):
            raise DomainError(f"effect must be {ENDS_EPIDEMIC!r} or {TRANSMISSION_MULTIPLIER!r}, got {self.effect!r}")
        if not 0 < self.transmission_multiplier_value <= 1:
            raise DomainError(
                f"transmission_multiplier_value must be in (0, 1], got {self.transmission_multiplier_value!r}"
            )

    @property
    def is_random(self) -> bool:
        return 0 < self.per_quarter_arrival_probability < 1


@dataclass(frozen=True)
class EndState:
    weekly_deaths: float
    weekly_factor_under_policy: float
    cumulative_infected_fraction: float = 0.0
    weeks_since_pandemic_start: int = 26
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.weekly_deaths) and self.weekly_deaths >= 0):
            raise DomainError(f"weekly_deaths must be >= 0, got {self.weekly_deaths!r}")
        if not (math.isfinite(self.weekly_factor_under_policy) and self.weekly_factor_under_policy > 0):
            raise DomainError(f"weekly_factor_under_policy must be > 0, got {self.weekly_factor_under_policy!r}")
        if not 0 <= self.cumulative_infected_fraction < 1:
            raise DomainError(
                f"cumulative_infected_fraction must be in [0, 1), got {self.cumulative_infected_fraction!r}"
            )
        if self.weeks_since_pandemic_start < 0:
            raise DomainError(f"weeks_since_pandemic_start must be >= 0, got {self.weeks_since_pandemic_start!r}")


@dataclass(frozen=True)
class EndStateValuation:
    """Expected future burden of an end state.

    ``standard_error`` is the standard error of the mean future deaths.
    """

    expected_future_deaths: float
    expected_future_qalys: float
    monetized: float
    standard_error: float
    samples: int


def mortality_multiplier(m: int, t: TreatmentDiscoveryModel | None = None) -> float:
    if m < 0:
        raise DomainError(f"discovery count must be >= 0, got {m!r}")
    per = 0.92 if t is None else t.mortality_multiplier_per_discovery
    return per**m


def _remaining_pool(
    state: EndState,
    cap: SirParams | None,
    ifr: float | None,
    include_overshoot: bool,
) -> float | None:
    """Infections still possible before the epidemic burns out, or None."""
    if cap is None:
        return None
    if cap.population is None:
        raise DomainError("cap needs a population")
    if ifr is None or not 0 < ifr < 1:
        raise DomainError(f"ifr must be in (0, 1) when a cap is given, got {ifr!r}")
    c = state.cumulative_infected_fraction
    if include_overshoot:
        fraction = future_attack(c, cap)
    else:
        fraction = max(0.0, herd_immunity_threshold(cap) - c)
    return cap.population * fraction


def _window_deaths(
    state: EndState,
    horizon_weeks: int,
    multiplier: float,
    discoveries: np.ndarray,
    vaccine_week: np.ndarray,
    vac: VaccineModel,
    pool: float | None,
    ifr: float | None,
) -> np.ndarray:
    """Future deaths per sample over the window.

    ``discoveries[s, n-1]`` is the treatment count in force in window week
    ``n``; ``vaccine_week[s]`` is the last week before the vaccine acts
    (``horizon_weeks`` when it never does). The week loop runs elementwise
    across samples, so a sample's total does not depend on how many others
    are computed alongside it.
    """
    n_samples = discoveries.shape[0]
    weeks = np.arange(1, horizon_weeks + 1)
    active = weeks[None, :] <= vaccine_week[:, None]
    base = state.weekly_deaths * state.weekly_factor_under_policy ** weeks[None, :]
    if vac.effect == TRANSMISSION_MULTIPLIER:
        after = np.clip(weeks[None, :] - vaccine_week[:, None], 0, None)
        base = base * vac.transmission_multiplier_value**after
        active = np.ones_like(active)
    base = np.where(active, base, 0.0)
    treated = multiplier**discoveries

    total = np.zeros(n_samples)
    if pool is None:
        for j in range(horizon_weeks):
            total += base[:, j] * treated[:, j]
        return total

    infected = np.zeros(n_samples)
    for j in range(horizon_weeks):
        infections = base[:, j] / ifr
        room = np.maximum(pool - infected, 0.0)
        infections = np.minimum(infections, room)
        infected += infections
        total += infections * ifr * treated[:, j]
    return total


def _deterministic_discoveries(state: EndState, horizon_weeks: int, t: TreatmentDiscoveryModel) -> np.ndarray:
    start = state.weeks_since_pandemic_start
    return np.array([[t.discoveries_in_force(start + n) for n in range(1, horizon_weeks + 1)]])


def _check_horizon(horizon_weeks: int) -> None:
    if horizon_weeks < 1:
        raise DomainError(f"horizon_weeks must be >= 1, got {horizon_weeks!r}")


def project_future_deaths(
    state: EndState,
    horizon_weeks: int,
    t: TreatmentDiscoveryModel | None = None,
    cap: SirParams | None = None,
    ifr: float | None = None,
    include_overshoot: bool = True,
) -> float:
    """Deaths over the next ``horizon_weeks`` with quarterly treatment discoveries.

    With a ``cap`` (reproduction number plus population) the projection
    stops once the infections it implies exhaust the pool still open to the
    epidemic, as in :func:`lockdown_calculus.scenario.project_with_cap`.
    ``include_overshoot=False`` sizes that pool by the herd-immunity
    threshold instead of the final size.
    """
    _check_horizon(horizon_weeks)
    t = t or TreatmentDiscoveryModel()
    if t.mode != DETERMINISTIC_QUARTERLY:
        raise DomainError("project_future_deaths needs deterministic discoveries; use mc_end_state_value")
    pool = _remaining_pool(state, cap, ifr, include_overshoot)
    deaths = _window_deaths(
        state,
        horizon_weeks,
        t.mortality_multiplier_per_discovery,
        _deterministic_discoveries(state, horizon_weeks, t),
        np.array([horizon_weeks]),
        VaccineModel(),
        pool,
        ifr,
    )
    return float(deaths[0])


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for Monte Carlo sample ``index``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _vaccine_week(u: np.ndarray, p: float, horizon_weeks: int) -> int:
    for q, draw in enumerate(u):
        if draw < p:
            return min(horizon_weeks, (q + 1) * WEEKS_PER_QUARTER)
    return horizon_weeks


def _draw(
    state: EndState,
    horizon_weeks: int,
    t: TreatmentDiscoveryModel,
    vac: VaccineModel,
    n_samples: int,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    quarters = math.ceil(horizon_weeks / WEEKS_PER_QUARTER)
    p = vac.per_quarter_arrival_probability
    poisson = t.mode == POISSON

    if not (vac.is_random or (poisson and t.is_random)):
        # nothing random: every sample is the same path
        if poisson:
            discoveries = np.zeros((1, horizon_weeks), dtype=int)
        else:
            discoveries = _deterministic_discoveries(state, horizon_weeks, t)
        vw = _vaccine_week(np.zeros(quarters), p, horizon_weeks) if p > 0 else horizon_weeks
        return np.repeat(discoveries, n_samples, axis=0), np.full(n_samples, vw)

    vaccine_week = np.empty(n_samples, dtype=int)
    if poisson:
        discoveries = np.empty((n_samples, horizon_weeks), dtype=int)
    else:
        discoveries = np.repeat(_deterministic_discoveries(state, horizon_weeks, t), n_samples, axis=0)
    rate = t.poisson_rate_per_week
    for i in range(n_samples):
        rng = sample_rng(seed, i)
        vaccine_week[i] = _vaccine_week(rng.random(quarters), p, horizon_weeks)
        if poisson:
            before = rng.poisson(rate * state.weeks_since_pandemic_start)
            weekly = rng.poisson(rate, horizon_weeks)
            # arrivals during window week n act from week n + 1
            discoveries[i, 0] = before
            discoveries[i, 1:] = before + np.cumsum(weekly[:-1])
    return discoveries, vaccine_week


def mc_end_state_value(
    state: EndState,
    horizon_weeks: int,
    t: TreatmentDiscoveryModel | None = None,
    vac: VaccineModel | None = None,
    cap: SirParams | None = None,
    ifr: float | None = None,
    v: QalyValuation | None = None,
    n_samples: int = 10000,
    seed: int = 0,
    include_overshoot: bool = True,
) -> EndStateValuation:
    """Monte Carlo expected future deaths, QALYs and cost of an end state."""
    _check_horizon(horizon_weeks)
    if n_samples < 1:
        raise DomainError(f"n_samples must be >= 1, got {n_samples!r}")
    if not 0 <= seed < 2**64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    t = t or TreatmentDiscoveryModel()
    vac = vac or VaccineModel()
    v = v or QalyValuation()

    pool = _remaining_pool(state, cap, ifr, include_overshoot)
    discoveries, vaccine_week = _draw(state, horizon_weeks, t, vac, n_samples, seed)
    deaths = _window_deaths(
        state, horizon_weeks, t.mortality_multiplier_per_discovery, discoveries, vaccine_week, vac, pool, ifr
    )

    if np.all(deaths == deaths[0]):
        mean, se = float(deaths[0]), 0.0
    else:
        mean = math.fsum(deaths) / n_samples
        if n_samples > 1:
            var = math.fsum((deaths - mean) ** 2) / (n_samples - 1)
            se = math.sqrt(var / n_samples)
        else:
            se = 0.0
    qalys = death_qaly_cost(mean, v)
    return EndStateValuation(mean, qalys, monetize(qalys, v), se, n_samples)


def end_state_value_difference(
    a: EndState,
    b: EndState,
    horizon_weeks: int,
    t: TreatmentDiscoveryModel | None = None,
    vac: VaccineModel | None = None,
    cap: SirParams | None = None,
    ifr: float | None = None,
    v: QalyValuation | None = None,
    n_samples: int = 1,
    seed: int = 0,
    include_overshoot: bool = True,
) -> float:
    """Monetized future burden of ``b`` minus that of ``a``.

    Both states are valued with the same models and the same random draws.
    Under a cap each state's remaining infection pool comes from its own
    infections so far, so a state with more infections behind it is
    credited with a smaller future epidemic.
    """
    if a.weeks_since_pandemic_start != b.weeks_since_pandemic_start:
        raise DomainError(
            "end states must share weeks_since_pandemic_start: "
            f"{a.weeks_since_pandemic_start} vs {b.weeks_since_pandemic_start}"
        )
    kw = dict(t=t, vac=vac, cap=cap, ifr=ifr, v=v, n_samples=n_samples, seed=seed,
              include_overshoot=include_overshoot)
    return mc_end_state_value(b, horizon_weeks, **kw).monetized - mc_end_state_value(a, horizon_weeks, **kw).monetized
