"""Response families, objectives, thresholds.

Expected values are frozen from hand arithmetic on the linear and square
families (the closed forms are simple enough to derive on paper), so these
tests are independent of the implementation's own search machinery wherever
possible.
"""
import math

import pytest
from hypothesis import given, settings, strategies as st

from ridelab import (
    DomainError,
    PlatformParams,
    PricePolicy,
    RangeError,
    ResponseFunction,
    eval_f_inverse,
    eval_f_prime,
    eval_response,
    objective_values,
    thresholds,
    validate_response_function,
)

LIN = ResponseFunction.linear(0.1, phi_h=10.0 - 1e-9)
SQ = ResponseFunction.square(0.1, phi_h=9.9)


# ---------------------------------------------------------------- evaluation

def test_linear_eval_frozen_values():
    assert eval_response(LIN, 0.0) == 1.0
    assert eval_response(LIN, 5.0) == pytest.approx(0.5, abs=1e-15)
    assert eval_f_prime(LIN, 3.0) == -0.1


def test_square_eval_frozen_values():
    assert eval_response(SQ, 0.0) == 1.0
    assert eval_response(SQ, 5.0) == pytest.approx(0.75, abs=1e-15)
    assert eval_f_prime(SQ, 5.0) == pytest.approx(-0.1, abs=1e-15)


def test_eval_domain_errors():
    with pytest.raises(DomainError):
        eval_response(LIN, -0.01)
    with pytest.raises(DomainError):
        eval_response(LIN, 10.5)
    with pytest.raises(DomainError):
        eval_f_prime(SQ, -1.0)


def test_inverse_frozen_and_range_errors():
    assert eval_f_inverse(LIN, 0.5) == pytest.approx(5.0, abs=1e-12)
    assert eval_f_inverse(SQ, 0.75) == pytest.approx(5.0, abs=1e-12)
    with pytest.raises(RangeError):
        eval_f_inverse(LIN, 1.01)
    with pytest.raises(RangeError):
        # below the smallest attainable response level
        eval_f_inverse(LIN, eval_response(LIN, LIN.phi_h) - 1e-3)


@given(phi=st.floats(min_value=0.0, max_value=9.9))
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip_linear(phi):
    assert abs(eval_f_inverse(LIN, eval_response(LIN, phi)) - phi) <= 1e-10


@given(phi=st.floats(min_value=1e-3, max_value=9.9))
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip_square(phi):
    # below ~1e-3 the value 1 - (a*phi)^2 rounds away the price information
    # itself, so the roundtrip contract is only meaningful above that scale
    assert abs(eval_f_inverse(SQ, eval_response(SQ, phi)) - phi) <= 1e-10


def test_family_constructor_rejects_bad_params():
    with pytest.raises(DomainError):
        ResponseFunction.linear(0.2, phi_h=10.0)  # f hits zero inside
    with pytest.raises(DomainError):
        ResponseFunction.linear(-0.1, phi_h=1.0)
    with pytest.raises(DomainError):
        ResponseFunction.square(0.1, phi_h=-2.0)


# ---------------------------------------------------------------- objectives

def test_objective_values_frozen():
    ov = objective_values(LIN, e=0.4, Lambda=1.0, phi=3.0)
    assert ov.P == pytest.approx(2.1, abs=1e-14)
    assert ov.M == pytest.approx(1.05, abs=1e-14)
    assert ov.m == pytest.approx(0.9, abs=1e-14)
    assert ov.d == pytest.approx(1.1, abs=1e-14)


def test_objective_values_at_zero_price():
    ov = objective_values(SQ, e=0.7, Lambda=2.0, phi=0.0)
    assert ov.P == 0.0 and ov.M == 0.0 and ov.m == 0.0
    assert ov.d == pytest.approx(2.0, abs=1e-14)


def test_d_root_frozen_linear():
    # 2(1 - 0.1 phi) - 0.1 phi = 2 - 0.3 phi vanishes at 20/3
    ov = objective_values(LIN, e=0.4, Lambda=1.0, phi=20.0 / 3.0)
    assert ov.d == pytest.approx(0.0, abs=1e-14)


@given(
    a=st.floats(min_value=0.02, max_value=0.3),
    x=st.floats(min_value=0.0, max_value=1.0),
    y=st.floats(min_value=0.0, max_value=1.0),
)
@settings(max_examples=80, deadline=None)
def test_d_strictly_decreasing(a, x, y):
    phi_h = 0.9 / a
    rf = ResponseFunction.linear(a, phi_h=phi_h)
    p1, p2 = sorted((x * phi_h, y * phi_h))
    if p2 - p1 < 1e-9:
        return
    d1 = objective_values(rf, 0.5, 1.0, p1).d
    d2 = objective_values(rf, 0.5, 1.0, p2).d
    assert d1 > d2


@given(
    e=st.floats(min_value=0.05, max_value=0.9),
    lam=st.floats(min_value=0.5, max_value=3.0),
    t=st.floats(min_value=0.01, max_value=0.99),
)
@settings(max_examples=80, deadline=None)
def test_m_and_M_concavity_slope_test(e, lam, t):
    rf = SQ
    # three strictly increasing grid points; slopes must decrease
    left = t * 0.5 * rf.phi_h
    mid = left + 0.2 * rf.phi_h
    right = mid + 0.2 * rf.phi_h
    for key in ("m", "M"):
        v = [
            getattr(objective_values(rf, e, lam, x), key)
            for x in (left, mid, right)
        ]
        s1 = (v[1] - v[0]) / (mid - left)
        s2 = (v[2] - v[1]) / (right - mid)
        assert s1 > s2


@given(t=st.floats(min_value=1e-3, max_value=1.0))
@settings(max_examples=60, deadline=None)
def test_oscillatory_chain_above_saturation_price(t):
    # for prices strictly above phi_underbar: e*phi > (L/2)f*phi > (L*f-e)*phi
    e, lam = 0.4, 1.0
    th = thresholds(LIN, e, lam)
    phi = th.phi_underbar + t * (LIN.phi_h - th.phi_underbar)
    ov = objective_values(LIN, e, lam, phi)
    assert e * phi > ov.M > ov.m


# ---------------------------------------------------------------- thresholds

def test_thresholds_frozen_linear():
    rf = ResponseFunction.linear(0.1, phi_h=10.0 - 1e-9)
    th = thresholds(rf, e=0.4, Lambda=1.0)
    assert th.phi_underbar == pytest.approx(2.0, abs=1e-12)
    assert th.phi_bar == pytest.approx(6.0, abs=1e-12)
    assert th.phi_P_star == pytest.approx(5.0, abs=1e-8)
    assert th.phi_m_star == pytest.approx(3.0, abs=1e-8)
    assert th.phi_d_zero.kind == "interior"
    assert th.phi_d_zero.phi == pytest.approx(20.0 / 3.0, abs=1e-8)
    assert th.phi_L_star == pytest.approx(2.25, abs=1e-8)
    assert th.phi_U_star == pytest.approx(3.0, abs=1e-8)


def test_thresholds_frozen_square():
    th = thresholds(SQ, e=0.5, Lambda=1.0)
    assert th.phi_underbar == 0.0  # 2e/Lambda = 1 -> inverse at 1 is 0
    assert th.phi_bar == pytest.approx(math.sqrt(0.5) / 0.1, abs=1e-10)
    assert th.phi_P_star == pytest.approx(10.0 / math.sqrt(3.0), abs=1e-8)
    # closed forms for the square family
    assert th.phi_m_star == pytest.approx(math.sqrt(0.5 / 3.0) / 0.1, abs=1e-8)
    assert th.phi_d_zero.kind == "interior"
    assert th.phi_d_zero.phi == pytest.approx(1.0 / (math.sqrt(2.0) * 0.1), abs=1e-8)


def test_thresholds_zero_clamp_when_supply_abundant():
    th = thresholds(LIN, e=1.2, Lambda=1.0)
    assert th.phi_underbar == 0.0
    assert th.phi_bar == 0.0


def test_thresholds_can_exceed_price_cap():
    # scarce supply pushes the saturation price beyond the cap
    rf = ResponseFunction.linear(0.1, phi_h=9.0)
    th = thresholds(rf, e=0.04, Lambda=1.0)
    assert th.phi_underbar == pytest.approx(9.2, abs=1e-12)
    assert th.phi_underbar > rf.phi_h


def test_thresholds_d_root_above_range():
    # nearly price-insensitive passengers: d stays positive on [0, phi_h]
    rf = ResponseFunction.linear(0.01, phi_h=9.0)
    th = thresholds(rf, e=0.4, Lambda=1.0)
    assert th.phi_d_zero.kind == "above-range"
    assert th.phi_d_zero.phi is None


def test_thresholds_rejects_bad_rates():
    with pytest.raises(DomainError):
        thresholds(LIN, e=0.0, Lambda=1.0)
    with pytest.raises(DomainError):
        thresholds(LIN, e=0.4, Lambda=-1.0)


def test_cycle_endpoint_identity_and_ordering():
    th = thresholds(LIN, e=0.4, Lambda=1.0)
    m_at_U = objective_values(LIN, 0.4, 1.0, th.phi_U_star).m
    assert 0.4 * th.phi_L_star == pytest.approx(m_at_U, rel=1e-12)
    assert th.phi_L_star < th.phi_U_star


@given(e=st.floats(min_value=0.05, max_value=0.45))
@settings(max_examples=40, deadline=None)
def test_cycle_endpoints_ordered_whenever_regime_applies(e):
    lam = 1.0
    th = thresholds(LIN, e, lam)
    if th.phi_underbar < th.phi_m_star <= th.phi_bar:
        assert th.phi_L_star < th.phi_U_star


# ---------------------------------------------------------------- validation

def test_validator_accepts_builtin_families():
    rep_lin = validate_response_function(LIN, grid_size=64)
    assert rep_lin.passed
    assert not rep_lin.strictly_concave  # affine is only weakly concave
    rep_sq = validate_response_function(SQ, grid_size=64)
    assert rep_sq.passed
    assert rep_sq.strictly_concave


def test_validator_flags_increasing_curve():
    bad = ResponseFunction.custom(
        f=lambda x: 1.0 + x,
        f_prime=lambda x: 1.0,
        f_inverse=lambda y: y - 1.0,
        phi_h=2.0,
    )
    rep = validate_response_function(bad, grid_size=16)
    assert not rep.strictly_decreasing
    assert not rep.passed


def test_validator_grid_size_floor():
    with pytest.raises(DomainError):
        validate_response_function(LIN, grid_size=2)


# ---------------------------------------------------------------- params/policy

def test_platform_params_effective_rate_exact():
    pp = PlatformParams(Lambda=1.0, eta=0.5, p=0.5, nu=1.0, beta=1.0, phi_h=9.0)
    assert pp.e == 0.5 / 0.5  # == 1.0 exactly
    pp2 = PlatformParams.from_effective_rate(
        0.7, Lambda=1.0, nu=1.0, beta=0.1, phi_h=9.0, p=0.3
    )
    assert pp2.e == pytest.approx(0.7, rel=1e-15)


def test_platform_params_validation():
    with pytest.raises(DomainError):
        PlatformParams(Lambda=1.0, eta=0.5, p=1.0, nu=1.0, beta=1.0, phi_h=9.0)
    with pytest.raises(DomainError):
        PlatformParams(Lambda=-1.0, eta=0.5, p=0.0, nu=1.0, beta=1.0, phi_h=9.0)


def test_price_policy_lookup_and_constant_detection():
    st_pol = PricePolicy.static(4.0)
    dyn = PricePolicy.dynamic([3.0, 2.0], tail=1.0)
    flat = PricePolicy.dynamic([2.5, 2.5], tail=2.5)
    assert st_pol.price_at(1) == st_pol.price_at(17) == 4.0
    assert dyn.price_at(1) == 3.0 and dyn.price_at(2) == 2.0 and dyn.price_at(9) == 1.0
    assert st_pol.is_constant() and flat.is_constant() and not dyn.is_constant()
    assert flat.constant_price() == 2.5
    with pytest.raises(DomainError):
        dyn.price_at(0)
    with pytest.raises(DomainError):
        PricePolicy.static(-1.0)
