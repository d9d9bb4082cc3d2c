import math

import pytest
from hypothesis import given, strategies as st

from sigfree import InvalidParam, ModelParams, validate
from sigfree.params import PARAM_FIELDS

RAW = dict(delta=0.1, theta=0.02, epsilon=0.05, a_max=3, v_max=15, h=1, h_bar=2, big_l=300, big_r=30)


def test_p0_accepted():
    p = validate(RAW)
    assert p.delta == 0.1 and p.big_r == 30


@pytest.mark.parametrize("change, field", [
    (dict(epsilon=0.5), "epsilon"),       # 0.5 > a_max*delta = 0.3
    (dict(theta=0.1), "theta"),           # theta must be < delta
    (dict(delta=0), "delta"),
    (dict(theta=-0.01), "theta"),
    (dict(a_max=0), "a_max"),
    (dict(v_max=-1), "v_max"),
    (dict(h=0), "h"),
    (dict(h_bar=0.5), "h_bar"),
    (dict(big_l=30), "big_l"),
    (dict(big_r=0), "big_r"),
    (dict(epsilon=float("nan")), "epsilon"),
    (dict(h=math.inf), "h"),
])
def test_rejections_name_field(change, field):
    with pytest.raises(InvalidParam) as err:
        validate({**RAW, **change})
    assert err.value.field == field


def test_epsilon_rule_message():
    with pytest.raises(InvalidParam, match="epsilon <= a_max\\*delta"):
        validate({**RAW, "epsilon": 0.5})


def test_missing_and_unknown_keys():
    raw = dict(RAW)
    del raw["delta"]
    with pytest.raises(InvalidParam, match="delta"):
        validate(raw)
    with pytest.raises(InvalidParam, match="bogus"):
        validate({**RAW, "bogus": 1})


def test_boundaries_admitted():
    validate({**RAW, "theta": 0})
    validate({**RAW, "epsilon": 0.3})


valid_params = st.builds(
    lambda d, tf, ef, a, v, h, hb, r, lr: ModelParams(
        delta=d, theta=tf * d, epsilon=ef * a * d, a_max=a, v_max=v, h=h,
        h_bar=h + hb, big_l=r * (1 + lr), big_r=r),
    st.floats(0.01, 1), st.floats(0, 0.99), st.floats(0, 1), st.floats(0.1, 10),
    st.floats(1, 40), st.floats(0.1, 5), st.floats(0, 5), st.floats(1, 100), st.floats(0.1, 10),
)


@given(valid_params)
def test_idempotent(p):
    q = validate(p)
    assert validate(q) == q == p
    assert validate(q.as_dict()) == q


@given(valid_params)
def test_nonempty_control_set_margin(p):
    p = validate(p)
    margin = p.h * (p.a_max * p.delta - p.epsilon) + 0.5 * (p.a_max - p.epsilon / p.delta) * p.delta ** 2
    assert margin >= -1e-12
    if p.epsilon < p.a_max * p.delta * (1 - 1e-9):
        assert margin > 0


def test_field_order():
    assert PARAM_FIELDS == ("delta", "theta", "epsilon", "a_max", "v_max", "h", "h_bar", "big_l", "big_r")
