import numpy as np
import pytest
from hypothesis import given, strategies as st

from sigfree import P0
from sigfree.dynamics import (
    Interval,
    NoiseKind,
    NoiseModel,
    Role,
    advance_position,
    clamp_target,
    realize_speed,
    speed_reachable_set,
)


@pytest.mark.parametrize("v_prev, u, expected", [(10, 12, 10.3), (10, 10.1, 10.1), (10, 5, 9.7)])
def test_clamp_target(p0, v_prev, u, expected):
    assert clamp_target(v_prev, u, p0) == pytest.approx(expected, abs=1e-12)


def test_reachable_examples(p0):
    r = speed_reachable_set(10, 12, p0)
    assert (r.lo, r.hi) == pytest.approx((10.25, 10.35))
    r = speed_reachable_set(10, 10, p0.replace(epsilon=0))
    assert (r.lo, r.hi) == (10, 10)
    # centre 0.1 - 0.3 -> floor 0 is below reach, centre = 0 ... cut at zero
    r = speed_reachable_set(0.1, 0, p0)
    assert (r.lo, r.hi) == pytest.approx((0, 0.05))


@pytest.mark.parametrize("x, v0, v1, expected", [(0, 10, 10.3, 1.015), (5, 0, 0, 5), (-100, 15, 15, -98.5)])
def test_advance_position(p0, x, v0, v1, expected):
    assert advance_position(x, v0, v1, p0) == pytest.approx(expected, abs=1e-12)


def test_advance_position_matches_quadrature(p0):
    # oracle: integrate a linearly varying speed on a fine grid
    rng = np.random.default_rng(0)
    for _ in range(50):
        x, v0, v1 = rng.uniform(-300, 300), rng.uniform(0, 15), rng.uniform(0, 15)
        t = np.linspace(0, p0.delta, 2001)
        v = v0 + (v1 - v0) * t / p0.delta
        integral = np.sum((v[1:] + v[:-1]) / 2 * np.diff(t))
        assert advance_position(x, v0, v1, p0) == pytest.approx(x + integral, abs=1e-9)


def test_realize_examples():
    r = Interval(10.25, 10.35)
    assert realize_speed(NoiseModel(NoiseKind.ZERO), r, Role.LEADER) == pytest.approx(10.3)
    assert realize_speed(NoiseModel(NoiseKind.ADVERSARIAL), r, Role.FOLLOWER) == 10.35
    assert realize_speed(NoiseModel(NoiseKind.ADVERSARIAL), r, Role.LEADER) == 10.25
    a = realize_speed(NoiseModel(NoiseKind.UNIFORM), r, "follower", np.random.default_rng(42))
    b = realize_speed(NoiseModel(NoiseKind.UNIFORM), r, "follower", np.random.default_rng(42))
    assert a == b and r.contains(a)


def test_zero_noise_prefers_nominal():
    r = Interval(14.95, 15.0)
    assert realize_speed(NoiseModel(), r, Role.LEADER, nominal=15.0) == 15.0
    assert realize_speed(NoiseModel(), r, Role.LEADER) == pytest.approx(14.975)


def test_uniform_needs_rng():
    with pytest.raises(ValueError):
        realize_speed(NoiseModel(NoiseKind.UNIFORM), Interval(0, 1), Role.LEADER)


speeds = st.floats(0, 15)


@given(speeds, st.floats(-5, 25), st.sampled_from(list(NoiseKind)), st.sampled_from(list(Role)),
       st.integers(0, 2**32 - 1))
def test_containment(v_prev, u, kind, role, seed):
    reach = speed_reachable_set(v_prev, u, P0)
    v = realize_speed(NoiseModel(kind), reach, role, np.random.default_rng(seed), clamp_target(v_prev, u, P0))
    assert reach.contains(v)
    assert 0 <= v <= P0.v_max


@given(speeds, st.floats(-5, 25))
def test_reachable_width(v_prev, u):
    reach = speed_reachable_set(v_prev, u, P0)
    assert reach.width <= 2 * P0.epsilon + 1e-12
    c = clamp_target(v_prev, u, P0)
    if P0.epsilon <= c <= P0.v_max - P0.epsilon:
        assert reach.width == pytest.approx(2 * P0.epsilon, abs=1e-12)


def test_clamp_target_identity_iff_within_reach(p0):
    # avoid the two boundary points, where rounding decides the side
    for u in np.linspace(8, 12, 81):
        if abs(abs(u - 10.0) - 0.3) < 1e-9:
            continue
        c = clamp_target(10.0, u, p0)
        assert (c == u) == (abs(u - 10.0) <= p0.a_max * p0.delta)


@given(st.fractions(0, 15), st.fractions(0, 15), st.fractions(0, 15), st.fractions(-300, 300))
def test_advance_position_linear_exact(a, b, c, x):
    from fractions import Fraction
    from sigfree import ModelParams
    p = ModelParams(Fraction(1, 10), Fraction(1, 50), Fraction(1, 20), 3, 15, 1, 2, 300, 30)
    lhs = advance_position(x, a + b, c, p) - x
    assert lhs == (advance_position(x, a, c, p) - x) + (advance_position(x, b, 0, p) - x)


def test_interval_basics():
    i = Interval(1, 3)
    assert i.width == 2 and i.center == 2 and i.contains(3) and not i.contains(3.1)
    assert (i + Interval(1, 1)) == Interval(2, 4)
    assert i.scale(-1) == Interval(-3, -1)
    assert i.clip(2, 10) == Interval(2, 3)
    assert Interval(5, 6).clip(0, 1) == Interval(1, 1)
    with pytest.raises(ValueError):
        Interval(2, 1)
