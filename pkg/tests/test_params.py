import math

import pytest
from hypothesis import given, strategies as st

from rsskit.core import RssParams, ScenarioState, validate_params
from rsskit.errors import (
    ConfigError,
    DomainError,
    Negative,
    NonPositive,
    OrderViolation,
    ParamError,
)


def test_valid_paper_set(params):
    assert params.rho == 0.3
    assert params.vehicle_length == 0.0


def test_rho_must_be_positive():
    with pytest.raises(NonPositive):
        RssParams(0.0, 2.0, 4.0, 8.0)
    with pytest.raises(NonPositive):
        RssParams(-0.1, 2.0, 4.0, 8.0)


def test_brake_min_must_be_positive():
    with pytest.raises(NonPositive):
        RssParams(0.3, 2.0, 0.0, 8.0)


def test_brake_ordering_strict():
    with pytest.raises(OrderViolation):
        RssParams(0.3, 2.0, 8.0, 8.0)
    with pytest.raises(OrderViolation):
        RssParams(0.3, 2.0, 9.0, 8.0)


def test_a_max_and_length_nonnegative():
    with pytest.raises(Negative):
        RssParams(0.3, -1.0, 4.0, 8.0)
    with pytest.raises(Negative):
        RssParams(0.3, 2.0, 4.0, 8.0, vehicle_length=-0.5)
    # a_max = 0 is admissible (no-acceleration rear vehicle)
    RssParams(0.3, 0.0, 4.0, 8.0)


def test_validate_params_defaults_length():
    p = validate_params({"rho": 0.3, "a_max": 2, "a_brake_min": 4, "a_brake_max": 8})
    assert p.vehicle_length == 0.0


@pytest.mark.parametrize(
    "raw",
    [
        [],
        {"rho": 0.3},
        {"rho": "x", "a_max": 2, "a_brake_min": 4, "a_brake_max": 8},
        {"rho": float("nan"), "a_max": 2, "a_brake_min": 4, "a_brake_max": 8},
    ],
)
def test_validate_params_rejects_malformed(raw):
    with pytest.raises(ConfigError):
        validate_params(raw)


def test_state_rejects_negative_velocity():
    with pytest.raises(DomainError):
        ScenarioState(10.0, -1.0, 0.0, 5.0)
    with pytest.raises(DomainError):
        ScenarioState(10.0, 1.0, 0.0, -5.0)


def test_state_gap():
    assert ScenarioState(40.0, 20.0, 5.0, 20.0).gap == 35.0


@given(
    rho=st.floats(-1.0, 2.0, allow_nan=False),
    a_max=st.floats(-1.0, 5.0, allow_nan=False),
    a_bmin=st.floats(-1.0, 10.0, allow_nan=False),
    a_bmax=st.floats(-1.0, 12.0, allow_nan=False),
)
def test_constructor_accepts_iff_invariants_hold(rho, a_max, a_bmin, a_bmax):
    valid = rho > 0 and a_bmin > 0 and a_bmin < a_bmax and a_max >= 0
    if valid:
        p = RssParams(rho, a_max, a_bmin, a_bmax)
        assert math.isfinite(p.rho)
    else:
        with pytest.raises(ParamError):
            RssParams(rho, a_max, a_bmin, a_bmax)
