"""Weekly versus one-shot lockdown decisions, and the quarterly comparison.

The toy model: lockdown costs ``L`` per week, a death costs ``C``, there are
``M`` deaths in week zero, and each week multiplies deaths by ``F0 < 1``
under lockdown or ``F1 > 1`` under easing.

A rolling weekly rule keeps easing at decision ``n`` while::

    C*M * F1**n * (F1 - F0) < L

A single decision covering ``N`` weeks eases while::

    C*M * (F1*(F1**N - 1)/(F1 - 1) - F0*(F0**N - 1)/(F0 - 1)) < N*L

Both are strict; equality means lockdown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError
from .qaly import (
    AfterEffectParams,
    IllnessCostParams,
    QalyValuation,
    death_qaly_cost,
    monetize,
    total_qaly_per_death,
)
from .scenario import GeometricScenario, cumulative_deaths, excess_deaths


@dataclass(frozen=True)
class DecisionModel:
    lockdown_cost_per_week: float
    cost_per_death: float
    initial_weekly_deaths: float
    lockdown_factor: float
    easing_factor: float
    horizon_weeks: int

    def __post_init__(self):
        if not 0 < self.lockdown_factor < 1 < self.easing_factor:
            raise DomainError(
                "need 0 < lockdown_factor < 1 < easing_factor, got "
                f"lockdown_factor={self.lockdown_factor!r}, easing_factor={self.easing_factor!r}"
            )
        if not math.isfinite(self.easing_factor):
            raise DomainError(f"easing_factor must be finite, got {self.easing_factor!r}")
        for name in ("lockdown_cost_per_week", "cost_per_death", "initial_weekly_deaths"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be > 0, got {value!r}")
        if isinstance(self.horizon_weeks, bool) or int(self.horizon_weeks) != self.horizon_weeks or self.horizon_weeks < 1:
            raise DomainError(f"horizon_weeks must be an integer >= 1, got {self.horizon_weeks!r}")

    @property
    def death_cost_scale(self) -> float:
        """``C * M``."""
        return self.cost_per_death * self.initial_weekly_deaths


class Verdict(NamedTuple):
    ease: bool
    lhs: float
    rhs: float


def weekly_easing_condition(m: DecisionModel, n: int) -> Verdict:
    """Rolling-rule verdict at decision ``n``.

    ``n = 0`` is the opening decision (for week 1); ``n >= 1`` decides
    whether to keep easing into week ``n + 1``.
    """
    if not 0 <= n <= m.horizon_weeks:
        raise DomainError(f"decision index {n} outside 0..{m.horizon_weeks}")
    f0, f1 = m.lockdown_factor, m.easing_factor
    lhs = m.death_cost_scale * f1**n * (f1 - f0)
    rhs = m.lockdown_cost_per_week
    return Verdict(lhs < rhs, lhs, rhs)


def _geometric_sum(f: float, n: int) -> float:
    return f * (f**n - 1.0) / (f - 1.0)


def block_easing_condition(m: DecisionModel) -> Verdict:
    """Verdict of a single decision to ease for all ``horizon_weeks`` weeks."""
    n = m.horizon_weeks
    lhs = m.death_cost_scale * (_geometric_sum(m.easing_factor, n) - _geometric_sum(m.lockdown_factor, n))
    rhs = n * m.lockdown_cost_per_week
    return Verdict(lhs < rhs, lhs, rhs)


def weekly_verdicts(m: DecisionModel) -> list[Verdict]:
    """Rolling-rule verdicts for decisions 1..N."""
    return [weekly_easing_condition(m, n) for n in range(1, m.horizon_weeks + 1)]


def weekly_monotonicity_check(m: DecisionModel) -> bool:
    """True when easing at the last decision implies easing at every earlier one."""
    verdicts = weekly_verdicts(m)
    if not verdicts[-1].ease:
        return True
    return all(v.ease for v in verdicts[:-1])


@dataclass(frozen=True)
class InconsistencyWitness:
    model: DecisionModel
    weekly_verdicts: tuple[bool, ...]
    block_verdict: bool
    weekly_margin: Verdict
    block_margin: Verdict

    @property
    def valid(self) -> bool:
        return all(self.weekly_verdicts) and not self.block_verdict


def verify_witness(m: DecisionModel) -> InconsistencyWitness:
    weekly = weekly_verdicts(m)
    block = block_easing_condition(m)
    return InconsistencyWitness(
        model=m,
        weekly_verdicts=tuple(v.ease for v in weekly),
        block_verdict=block.ease,
        weekly_margin=weekly[-1],
        block_margin=block,
    )


@dataclass(frozen=True)
class SearchBox:
    """Grid of models to search for weekly/block disagreement.

    ``cost_ratios`` holds values of ``L / (C*M)``; ``C`` and ``M`` are fixed
    at ``cost_per_death`` and ``initial_weekly_deaths``.
    """

    lockdown_factors: Sequence[float]
    easing_factors: Sequence[float]
    horizons: Sequence[int]
    cost_ratios: Sequence[float] = (1.0,)
    cost_per_death: float = 1.0
    initial_weekly_deaths: float = 1.0

    def __post_init__(self):
        for name in ("lockdown_factors", "easing_factors", "horizons", "cost_ratios"):
            values = tuple(getattr(self, name))
            if not values:
                raise DomainError(f"search box axis {name} is empty")
            object.__setattr__(self, name, values)

    @property
    def size(self) -> int:
        return len(self.lockdown_factors) * len(self.easing_factors) * len(self.horizons) * len(self.cost_ratios)


def _screen(box: SearchBox) -> np.ndarray:
    """Vectorized pre-screen over the grid; returns candidate index tuples.

    Only a filter: every candidate is re-checked with the scalar rules.
    """
    f0 = np.asarray(box.lockdown_factors, dtype=float)[:, None, None, None]
    f1 = np.asarray(box.easing_factors, dtype=float)[None, :, None, None]
    n = np.asarray(box.horizons, dtype=float)[None, None, :, None]
    ratio = np.asarray(box.cost_ratios, dtype=float)[None, None, None, :]
    valid = (f0 > 0) & (f0 < 1) & (f1 > 1)
    with np.errstate(all="ignore"):
        weekly_all_ease = f1**n * (f1 - f0) < ratio
        block = f1 * (f1**n - 1) / (f1 - 1) - f0 * (f0**n - 1) / (f0 - 1)
        block_lock = block >= n * ratio
    # loose margin so rounding differences cannot drop a true witness
    near = np.isclose(f1**n * (f1 - f0), ratio, rtol=1e-9) | np.isclose(block, n * ratio, rtol=1e-9)
    return np.argwhere(valid & ((weekly_all_ease & block_lock) | near))


def find_inconsistency(box: SearchBox) -> list[InconsistencyWitness]:
    """All grid models where every weekly verdict eases but the block locks down.

    Witnesses are sorted by (horizon, easing factor, lockdown factor, cost
    ratio). An empty list is a valid answer.
    """
    found = []
    for i0, i1, i2, i3 in _screen(box):
        f0 = box.lockdown_factors[i0]
        f1 = box.easing_factors[i1]
        n = box.horizons[i2]
        ratio = box.cost_ratios[i3]
        scale = box.cost_per_death * box.initial_weekly_deaths
        m = DecisionModel(ratio * scale, box.cost_per_death, box.initial_weekly_deaths, f0, f1, int(n))
        w = verify_witness(m)
        if w.valid:
            found.append(w)
    found.sort(key=lambda w: (w.model.horizon_weeks, w.model.easing_factor, w.model.lockdown_factor,
                              w.model.lockdown_cost_per_week / w.model.death_cost_scale))
    return found


def linspace_axis(start: float, stop: float, num: int) -> tuple[float, ...]:
    return tuple(round(float(x), 12) for x in np.linspace(start, stop, num))


def default_search_box() -> SearchBox:
    return SearchBox(
        lockdown_factors=linspace_axis(0.3, 0.9, 7),
        easing_factors=linspace_axis(1.01, 1.10, 10),
        horizons=tuple(range(1, 27)),
    )


@dataclass(frozen=True)
class QuarterlyComparison:
    ease_deaths: float
    lock_deaths: float
    excess_deaths: float
    qalys_per_death: float
    qaly_cost: float
    monetized: float
    lockdown_cost: float
    verdict: str
    mode: str = "deaths_only"


def quarterly_comparison(
    ease: GeometricScenario,
    lock: GeometricScenario,
    lockdown_quarter_cost: float,
    v: QalyValuation,
    illness: IllnessCostParams | None = None,
    aftereffects: AfterEffectParams | None = None,
) -> QuarterlyComparison:
    """Weigh the QALY cost of easing's excess deaths against a lockdown's cost.

    With neither ``illness`` nor ``aftereffects`` only deaths are costed.
    Passing either adds that component to the QALYs charged per death.
    """
    if ease.initial_weekly_deaths != lock.initial_weekly_deaths:
        raise DomainError("ease and lock scenarios must start from the same weekly deaths")
    if not lockdown_quarter_cost > 0:
        raise DomainError(f"lockdown_quarter_cost must be > 0, got {lockdown_quarter_cost!r}")
    excess = excess_deaths(ease, lock)
    extended = illness is not None or aftereffects is not None
    if extended:
        per_death = total_qaly_per_death(
            v, illness, aftereffects,
            include_illness=illness is not None,
            include_aftereffects=aftereffects is not None,
        )
        qaly_cost = max(excess, 0.0) * per_death
    else:
        per_death = v.qalys_per_death
        qaly_cost = death_qaly_cost(max(excess, 0.0), v)
    money = monetize(qaly_cost, v)
    return QuarterlyComparison(
        ease_deaths=cumulative_deaths(ease),
        lock_deaths=cumulative_deaths(lock),
        excess_deaths=excess,
        qalys_per_death=per_death,
        qaly_cost=qaly_cost,
        monetized=money,
        lockdown_cost=lockdown_quarter_cost,
        verdict="ease" if money < lockdown_quarter_cost else "lockdown",
        mode="extended" if extended else "deaths_only",
    )
