"""Geometric weekly-death-rate scenarios.

A scenario starts from an initial weekly death rate ``D`` and multiplies it by
a constant factor ``F`` every week, so week ``n`` sees ``D * F**n`` deaths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError


@dataclass(frozen=True)
class GeometricScenario:
    """Two-parameter epidemic scenario over a fixed number of weeks."""

    initial_weekly_deaths: float
    weekly_factor: float
    horizon_weeks: int = 13
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.initial_weekly_deaths) and self.initial_weekly_deaths > 0):
            raise DomainError(f"initial_weekly_deaths must be > 0, got {self.initial_weekly_deaths!r}")
        if not (math.isfinite(self.weekly_factor) and self.weekly_factor > 0):
            raise DomainError(f"weekly_factor must be > 0, got {self.weekly_factor!r}")
        if isinstance(self.horizon_weeks, bool) or int(self.horizon_weeks) != self.horizon_weeks:
            raise DomainError(f"horizon_weeks must be an integer, got {self.horizon_weeks!r}")
        if self.horizon_weeks < 1:
            raise DomainError(f"horizon_weeks must be >= 1, got {self.horizon_weeks!r}")
        object.__setattr__(self, "horizon_weeks", int(self.horizon_weeks))


@dataclass(frozen=True)
class Trajectory:
    weekly_deaths: tuple[float, ...]
    cumulative_deaths: float
    capped: bool = False

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weekly_deaths, dtype=float)


def weekly_deaths(s: GeometricScenario, n: int) -> float:
    """Death rate in week ``n`` (1-based): ``D * F**n``."""
    if not 1 <= n <= s.horizon_weeks:
        raise DomainError(f"week index {n} outside 1..{s.horizon_weeks}")
    return s.initial_weekly_deaths * s.weekly_factor**n


def cumulative_deaths(s: GeometricScenario) -> float:
    """Total deaths over weeks 1..N from the closed-form geometric sum."""
    d, f, n = s.initial_weekly_deaths, s.weekly_factor, s.horizon_weeks
    if f == 1.0:
        return d * n
    # expm1 keeps precision for F close to 1
    return d * f * math.expm1(n * math.log(f)) / (f - 1.0)


def excess_deaths(ease: GeometricScenario, lock: GeometricScenario) -> float:
    """Cumulative deaths under ``ease`` minus those under ``lock``."""
    if ease.horizon_weeks != lock.horizon_weeks:
        raise DomainError(
            f"horizon mismatch: {ease.horizon_weeks} vs {lock.horizon_weeks} weeks"
        )
    return cumulative_deaths(ease) - cumulative_deaths(lock)


def project(s: GeometricScenario) -> Trajectory:
    """Uncapped week-by-week trajectory."""
    weeks = tuple(weekly_deaths(s, n) for n in range(1, s.horizon_weeks + 1))
    return Trajectory(weeks, math.fsum(weeks), capped=False)


def project_with_cap(
    s: GeometricScenario,
    population: float,
    max_infected_fraction: float,
    ifr: float,
) -> Trajectory:
    """Project ``s`` but stop once implied infections exhaust the population.

    Implied cumulative infections are ``cumulative deaths / ifr``. The week
    that would push them past ``population * max_infected_fraction`` emits
    only the residual deaths left under the ceiling; later weeks emit zero.
    """
    if not population > 0:
        raise DomainError(f"population must be > 0, got {population!r}")
    if not 0 < max_infected_fraction <= 1:
        raise DomainError(f"max_infected_fraction must be in (0, 1], got {max_infected_fraction!r}")
    if not 0 < ifr < 1:
        raise DomainError(f"ifr must be in (0, 1), got {ifr!r}")

    budget = population * max_infected_fraction * ifr
    weeks: list[float] = []
    total = 0.0
    capped = False
    for n in range(1, s.horizon_weeks + 1):
        if capped:
            weeks.append(0.0)
            continue
        d = weekly_deaths(s, n)
        if not math.isfinite(d):
            raise NumericError(f"non-finite death rate in week {n}")
        if total + d > budget:
            d = budget - total
            capped = True
        weeks.append(d)
        total += d
    return Trajectory(tuple(weeks), math.fsum(weeks), capped=capped)


def baseline_scenarios(initial_weekly_deaths: float = 1230.0, horizon_weeks: int = 13) -> list[GeometricScenario]:
    """The continued-lockdown scenario and the three easing scenarios."""
    return [
        GeometricScenario(initial_weekly_deaths, f, horizon_weeks, label)
        for label, f in (
            ("lockdown", 0.7),
            ("ease-0.9", 0.9),
            ("ease-1.0", 1.0),
            ("ease-1.15", 1.15),
        )
    ]
