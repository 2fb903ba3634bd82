import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from lockdown_calculus.epidemic import (
    SirParams,
    final_size,
    future_attack,
    herd_immunity_threshold,
    remaining_susceptible_advantage,
)
from lockdown_calculus.errors import DomainError


def fixed_point(r0, s0=1.0, start=0.9, iters=200_000):
    z = start * s0
    for _ in range(iters):
        z = s0 * (1 - math.exp(-r0 * z))
    return z


@pytest.mark.parametrize("r0, expected", [(2.0, 0.5), (1.0, 0.0), (0.5, 0.0), (1.5, 1 / 3)])
def test_herd_threshold(r0, expected):
    assert herd_immunity_threshold(SirParams(r0)) == pytest.approx(expected, abs=1e-9)


def test_final_size_oracle_values():
    # frozen from fixed_point(): r = 1 - exp(-r0 r)
    r2 = final_size(SirParams(2.0))
    assert r2.attack_rate == pytest.approx(0.7968121300200199, abs=1e-11)
    assert r2.overshoot == pytest.approx(0.29681213002001994, abs=1e-11)
    r15 = final_size(SirParams(1.5))
    assert r15.attack_rate == pytest.approx(0.5828116438658113, abs=1e-11)
    assert r15.overshoot == pytest.approx(0.24947831053247793, abs=1e-11)


@pytest.mark.parametrize("r0", [1.2, 2.0, 3.3, 7.5])
def test_final_size_matches_independent_solvers(r0):
    res = final_size(SirParams(r0))
    assert res.attack_rate == pytest.approx(fixed_point(r0), abs=1e-10)
    root = brentq(lambda z: 1 - math.exp(-r0 * z) - z, 1e-6, 1.0, xtol=1e-15)
    assert res.attack_rate == pytest.approx(root, abs=1e-10)
    assert abs(res.residual) < 1e-12


def test_subcritical_epidemic():
    res = final_size(SirParams(0.8))
    assert res.attack_rate == 0.0 and res.overshoot == 0.0 and res.iterations == 0


def test_reduced_susceptibles():
    p = SirParams(2.0, 0.7)
    res = final_size(p)
    assert res.attack_rate == pytest.approx(fixed_point(2.0, 0.7), abs=1e-10)
    assert res.final_immune_fraction == pytest.approx(0.3 + res.attack_rate)
    assert final_size(SirParams(1.2, 0.8)).attack_rate == 0.0


def test_remaining_susceptible_advantage():
    p = SirParams(2.0)
    assert remaining_susceptible_advantage(0.2, 0.2, p) == 0.0
    adv = remaining_susceptible_advantage(0.0, 0.3, p)
    assert adv == pytest.approx(fixed_point(2.0, 1.0) - fixed_point(2.0, 0.7), abs=1e-10)
    assert adv > 0
    assert remaining_susceptible_advantage(0.0, 0.5, SirParams(0.9)) == 0.0


@pytest.mark.parametrize("bad", [-0.1, 1.0])
def test_advantage_domain(bad):
    with pytest.raises(DomainError):
        future_attack(bad, SirParams(2.0))


@pytest.mark.parametrize("kwargs", [dict(r0=0), dict(r0=-1), dict(r0=2, initial_susceptible_fraction=0),
                                    dict(r0=2, initial_susceptible_fraction=1.1), dict(r0=2, population=0)])
def test_invalid_params(kwargs):
    with pytest.raises(DomainError):
        SirParams(**kwargs)


@given(st.floats(1.0001, 10.0))
def test_fixed_point_and_overshoot(r0):
    res = final_size(SirParams(r0))
    a = res.attack_rate
    assert abs(a - (1 - math.exp(-r0 * a))) < 1e-10
    assert res.overshoot > 0
    assert 0 <= res.herd_threshold <= a <= 1


def test_overshoot_vanishes_near_threshold():
    overshoots = [final_size(SirParams(1 + eps)).overshoot for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert overshoots == sorted(overshoots, reverse=True)
    assert overshoots[-1] < 1e-3


@given(st.floats(1.01, 9.0), st.floats(0.01, 1.0))
def test_attack_rate_monotone_in_r0(r0, dr):
    assert final_size(SirParams(r0 + dr)).attack_rate > final_size(SirParams(r0)).attack_rate


@given(st.floats(1.5, 10.0), st.floats(0.7, 0.99), st.floats(0.001, 0.3))
def test_future_attack_monotone_in_susceptibles(r0, s0, ds):
    # s0 * r0 > 1 keeps both epidemics supercritical
    lo = final_size(SirParams(r0, s0 - ds)).attack_rate if (s0 - ds) * r0 > 1 else 0.0
    hi = final_size(SirParams(r0, s0)).attack_rate
    assert hi > lo
