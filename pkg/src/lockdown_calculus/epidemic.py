"""Herd-immunity threshold and closed-SIR final size with overshoot.

The final size is found from the relation for a closed SIR epidemic with
permanent immunity, seeded by a vanishing number of infectives::

    z = s0 * (1 - exp(-r0 * z))

where ``s0`` is the susceptible fraction at the start and ``z`` the fraction
of the whole population infected during the epidemic. With ``s0 = 1`` this is
the familiar ``r = 1 - exp(-r0 * r)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SolverError

TOLERANCE = 1e-12
MAX_ITER = 200
_LOWER_BRACKET = 1e-9


@dataclass(frozen=True)
class SirParams:
    r0: float
    initial_susceptible_fraction: float = 1.0
    population: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r0) and self.r0 > 0):
            raise DomainError(f"r0 must be > 0, got {self.r0!r}")
        if not 0 < self.initial_susceptible_fraction <= 1:
            raise DomainError(
                f"initial_susceptible_fraction must be in (0, 1], got {self.initial_susceptible_fraction!r}"
            )
        if self.population is not None and not self.population > 0:
            raise DomainError(f"population must be > 0, got {self.population!r}")


@dataclass(frozen=True)
class FinalSizeResult:
    """Outcome of an uncontrolled epidemic.

    ``attack_rate`` counts new infections as a fraction of the whole
    population. ``final_immune_fraction`` adds those already immune at the
    start, and ``overshoot`` is how far it ends above ``herd_threshold``.
    """

    attack_rate: float
    herd_threshold: float
    overshoot: float
    residual: float
    iterations: int
    final_immune_fraction: float


def herd_immunity_threshold(p: SirParams) -> float:
    return max(0.0, 1.0 - 1.0 / p.r0)


def _residual(z: float, r0: float, s0: float) -> float:
    return s0 * -math.expm1(-r0 * z) - z


def final_size(p: SirParams, tol: float = TOLERANCE, max_iter: int = MAX_ITER) -> FinalSizeResult:
    """Solve for the nontrivial final size by bisection.

    ``z = 0`` always solves the relation; when ``r0 * s0 > 1`` a second root
    exists in ``(0, s0)`` and that is the one returned. The bracket starts
    just above zero so bisection cannot fall onto the trivial root.
    """
    r0, s0 = p.r0, p.initial_susceptible_fraction
    threshold = herd_immunity_threshold(p)
    already_immune = 1.0 - s0
    if r0 * s0 <= 1.0:
        return FinalSizeResult(0.0, threshold, 0.0, 0.0, 0, already_immune)

    lo, hi = _LOWER_BRACKET, s0
    # near-critical epidemics have roots below the default lower bracket
    while _residual(lo, r0, s0) <= 0.0:
        lo *= 0.5
        if lo < 1e-300:
            return FinalSizeResult(0.0, threshold, 0.0, 0.0, 0, already_immune)

    z = 0.5 * (lo + hi)
    g = _residual(z, r0, s0)
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        z = 0.5 * (lo + hi)
        g = _residual(z, r0, s0)
        if abs(g) < tol and hi - lo < 4 * tol:
            break
        if g > 0.0:
            lo = z
        else:
            hi = z
        if hi - lo <= 2 * math.ulp(z):
            break
    if abs(g) >= tol:
        raise SolverError(f"final size did not converge for r0={r0}, s0={s0}: residual {g:.3e}")

    final_immune = already_immune + z
    return FinalSizeResult(
        attack_rate=z,
        herd_threshold=threshold,
        overshoot=max(0.0, final_immune - threshold),
        residual=g,
        iterations=iterations,
        final_immune_fraction=final_immune,
    )


def future_attack(already_infected: float, p: SirParams) -> float:
    """Fraction of the population infected by a fresh epidemic once
    ``already_infected`` of it is immune."""
    if not 0 <= already_infected < 1:
        raise DomainError(f"already-infected fraction must be in [0, 1), got {already_infected!r}")
    return final_size(SirParams(p.r0, 1.0 - already_infected, p.population)).attack_rate


def remaining_susceptible_advantage(
    already_infected_a: float,
    already_infected_b: float,
    p: SirParams,
) -> float:
    """Future attack from state ``a`` minus future attack from state ``b``.

    Positive when ``a`` has fewer infections behind it and so faces the larger
    future epidemic.
    """
    return future_attack(already_infected_a, p) - future_attack(already_infected_b, p)
