"""Game solvers against closed-form fixed points and grid oracles.

The Nash candidates returned by the solvers are re-verified here the dumb
way, by scanning unilateral deviations on a dense grid. Frozen numbers come
from the linear-family algebra (phi_underbar = (1-2e/L)/a and friends).
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ridelab import DomainError, PlatformParams, ResponseFunction
from ridelab.equilibria import (
    best_response_dynamics,
    cooperation_comparison,
    duopoly_B_equilibrium,
    duopoly_D_equilibrium,
    limit_B_payoff,
    limit_D_payoff,
    monopoly_optimum_exact,
    monopoly_optimum_limit,
    verify_equilibrium_cycle,
)
from ridelab.model import thresholds

LIN = ResponseFunction.linear(0.1, phi_h=9.0)


def params(e=1.0, beta=1.0, Lambda=7.0, phi_h=9.0):
    return PlatformParams.from_effective_rate(
        e, Lambda=Lambda, nu=1.0, beta=beta, phi_h=phi_h
    )


# ------------------------------------------------------------- monopoly

def test_monopoly_limit_supply_scarce():
    phi, mr = monopoly_optimum_limit(LIN, 1.0, 7.0)
    assert math.isclose(phi, 50.0 / 7.0, rel_tol=1e-12)
    assert math.isclose(mr, 50.0 / 7.0, rel_tol=1e-12)


def test_monopoly_limit_supply_abundant():
    # 2e/Lambda > 1 zeroes phi_underbar, the demand-side optimum rules
    phi, mr = monopoly_optimum_limit(LIN, 0.6, 1.0)
    assert abs(phi - 5.0) < 1e-6
    assert math.isclose(mr, 1.25, rel_tol=1e-9)


def test_monopoly_limit_square_family():
    sq = ResponseFunction.square(0.1, phi_h=9.0)
    phi, mr = monopoly_optimum_limit(sq, 0.2, 1.0)
    assert math.isclose(phi, 10.0 * math.sqrt(0.6), rel_tol=1e-12)
    assert math.isclose(mr, 0.2 * phi, rel_tol=1e-12)


def test_monopoly_limit_price_cap_binds():
    lin5 = ResponseFunction.linear(0.1, phi_h=5.0)
    phi, mr = monopoly_optimum_limit(lin5, 1.0, 7.0)
    assert phi == 5.0
    assert math.isclose(mr, 5.0, rel_tol=1e-12)


def test_monopoly_exact_approaches_limit():
    phi, mr = monopoly_optimum_exact(params(beta=1e-4), LIN)
    assert abs(phi - 50.0 / 7.0) < 1e-2
    assert mr < 50.0 / 7.0  # exact system earns less than the limit bound


def test_monopoly_exact_beta_sweep_tightens():
    gaps = []
    for beta in (1e-1, 1e-2, 1e-3, 1e-4):
        phi, _ = monopoly_optimum_exact(params(beta=beta), LIN)
        gaps.append(abs(phi - 50.0 / 7.0))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2


def test_monopoly_exact_impatient_drivers_push_toward_demand_optimum():
    # with beta huge the waiting pool barely matters and the optimizer
    # drifts to the demand-side argmax 5
    phi, _ = monopoly_optimum_exact(params(beta=100.0), LIN)
    assert abs(phi - 5.0) < 0.05


def test_monopoly_exact_cap_binds():
    lin5 = ResponseFunction.linear(0.1, phi_h=5.0)
    phi, _ = monopoly_optimum_exact(params(beta=0.1, phi_h=5.0), lin5)
    assert abs(phi - 5.0) < 1e-9


# ----------------------------------------------- duopoly, empty-queue QoS

def test_duopoly_D_interior_root():
    out = duopoly_D_equilibrium(LIN, 0.4, 1.0)
    assert out.kind == "nash-point"
    assert out.branch == "interior-stationarity"
    assert abs(out.phi1 - 20.0 / 3.0) < 1e-9
    assert out.phi1 == out.phi2
    # payoff is the shared-demand half: f(phi)*phi/2
    assert math.isclose(out.payoffs[0], 10.0 / 9.0, rel_tol=1e-9)


def test_duopoly_D_balance_point():
    out = duopoly_D_equilibrium(LIN, 0.05, 1.0)
    assert out.branch == "supply-demand-balance"
    assert math.isclose(out.phi1, 9.0, rel_tol=1e-12)
    assert math.isclose(out.payoffs[0], 0.45, rel_tol=1e-12)


def test_duopoly_D_price_insensitive_cap():
    rf = ResponseFunction.linear(0.01, phi_h=9.0)
    out = duopoly_D_equilibrium(rf, 0.4, 1.0)
    assert out.branch == "price-cap"
    assert out.phi1 == 9.0
    assert math.isclose(out.payoffs[0], 3.6, rel_tol=1e-12)


def test_duopoly_D_explicit_cap_must_match():
    with pytest.raises(DomainError):
        duopoly_D_equilibrium(LIN, 0.4, 1.0, phi_h=7.0)
    out = duopoly_D_equilibrium(LIN, 0.4, 1.0, phi_h=9.0)
    assert out.kind == "nash-point"


def test_duopoly_D_no_profitable_deviation():
    for e in (0.4, 0.05):
        out = duopoly_D_equilibrium(LIN, e, 1.0)
        pay = limit_D_payoff(LIN, e, 1.0)
        base = pay(out.phi1, out.phi2)
        worst = max(pay(x, out.phi2) for x in np.linspace(0.0, 9.0, 1000))
        assert worst <= base + 1e-8


# ------------------------------------------------- duopoly, blocking QoS

def test_duopoly_B_cycle_running_example():
    out = duopoly_B_equilibrium(LIN, 0.4, 1.0)
    assert out.kind == "equilibrium-cycle"
    assert out.branch == "undercut-cycle"
    assert abs(out.cycle_lo - 2.25) < 1e-9
    assert abs(out.cycle_hi - 3.0) < 1e-9
    assert math.isclose(out.payoffs[0], 0.9, rel_tol=1e-9)
    assert math.isclose(out.payoffs[1], 0.9, rel_tol=1e-9)


def test_duopoly_B_cycle_second_example():
    out = duopoly_B_equilibrium(LIN, 0.45, 1.0)
    assert abs(out.cycle_lo - 121.0 / 72.0) < 1e-9
    assert abs(out.cycle_hi - 2.75) < 1e-9
    # endpoint identity: revenue at the bottom equals the spill revenue
    # at the top
    assert math.isclose(0.45 * out.cycle_lo, out.payoffs[0], rel_tol=1e-12)


def test_duopoly_B_nash_point():
    out = duopoly_B_equilibrium(LIN, 0.2, 1.0)
    assert out.kind == "nash-point"
    assert out.branch == "supply-demand-balance"
    assert math.isclose(out.phi1, 6.0, rel_tol=1e-12)
    assert math.isclose(out.payoffs[0], 1.2, rel_tol=1e-12)


def test_duopoly_B_nash_no_profitable_deviation():
    out = duopoly_B_equilibrium(LIN, 0.2, 1.0)
    pay = limit_B_payoff(LIN, 0.2, 1.0)
    base = pay(out.phi1, out.phi2)
    worst = max(pay(x, out.phi2) for x in np.linspace(0.0, 9.0, 1000))
    assert worst <= base + 1e-8


def test_duopoly_B_supply_rich_epsilon_ne():
    out = duopoly_B_equilibrium(LIN, 1.2, 1.0, epsilon=0.01)
    assert out.kind == "epsilon-ne"
    assert out.branch == "low-price-cluster"
    assert math.isclose(out.delta, (1.0 - 1e-6) * 0.01, rel_tol=1e-12)
    assert out.payoffs[0] < 0.01


def test_duopoly_B_epsilon_ne_deviation_bound():
    out = duopoly_B_equilibrium(LIN, 1.2, 1.0, epsilon=0.01)
    pay = limit_B_payoff(LIN, 1.2, 1.0)
    base = pay(out.delta, out.delta)
    for x in np.linspace(0.0, 9.0, 2000):
        assert pay(x, out.delta) - base <= 0.01


def test_duopoly_B_supply_rich_requires_epsilon():
    with pytest.raises(DomainError):
        duopoly_B_equilibrium(LIN, 1.2, 1.0)


def test_duopoly_B_unresolved_sliver():
    out = duopoly_B_equilibrium(LIN, 0.04, 1.0)
    assert out.kind == "no-equilibrium-known"
    assert out.branch == "unresolved"
    assert out.payoffs is None
    assert "phi_underbar" in out.detail


def test_duopoly_B_regime_map_linear():
    kinds = {
        0.03: "no-equilibrium-known",
        0.2: "nash-point",
        0.45: "equilibrium-cycle",
        0.9: "equilibrium-cycle",
    }
    for e, kind in kinds.items():
        assert duopoly_B_equilibrium(LIN, e, 1.0).kind == kind


@settings(max_examples=120, deadline=None)
@given(e=st.floats(0.01, 0.99))
def test_duopoly_B_partition_property(e):
    out = duopoly_B_equilibrium(LIN, e, 1.0)
    assert out.kind in {"nash-point", "equilibrium-cycle", "no-equilibrium-known"}
    if out.kind == "nash-point":
        assert out.phi1 == out.phi2
        assert 0.0 <= out.phi1 <= 9.0
        assert out.payoffs[0] == out.payoffs[1]
    elif out.kind == "equilibrium-cycle":
        assert 0.0 <= out.cycle_lo < out.cycle_hi <= 9.0
        assert math.isclose(out.payoffs[0], e * out.cycle_lo, rel_tol=1e-9)
    else:
        assert out.payoffs is None and out.detail


# ----------------------------------------------------- cycle verification

def test_cycle_verification_passes_on_running_example():
    th = thresholds(LIN, 0.4, 1.0)
    pay = limit_B_payoff(LIN, 0.4, 1.0)
    rep = verify_equilibrium_cycle(
        pay,
        2.25,
        3.0,
        9.0,
        extra_candidates=(th.phi_underbar, th.phi_bar, th.phi_m_star),
    )
    assert rep.stable and rep.cyclic and rep.passed
    assert rep.stability_counterexample is None
    assert rep.cyclicity_counterexample is None
    assert rep.pairs_checked == 100 * 100


def test_cycle_verification_rejects_nash_interval():
    # an interval around a D-game Nash point is stable (outside deviations
    # lose) but not cyclic: at the fixed point itself neither player has a
    # strict improvement, which is exactly what separates a NE from a cycle
    pay = limit_D_payoff(LIN, 0.4, 1.0)
    root = 20.0 / 3.0
    rep = verify_equilibrium_cycle(pay, root, root + 0.1, 9.0)
    assert rep.stable
    assert not rep.cyclic
    assert not rep.passed
    p1, p2 = rep.cyclicity_counterexample
    assert abs(p1 - root) < 1e-9 and abs(p2 - root) < 1e-9


def test_cycle_verification_input_validation():
    pay = limit_B_payoff(LIN, 0.4, 1.0)
    with pytest.raises(DomainError):
        verify_equilibrium_cycle(pay, 2.25, 2.25, 9.0)
    with pytest.raises(DomainError):
        verify_equilibrium_cycle(pay, 3.0, 2.25, 9.0)
    with pytest.raises(DomainError):
        verify_equilibrium_cycle(pay, 2.25, 3.0, 9.0, grid_n=10)


# --------------------------------------------------- best-response paths

def test_br_converges_to_interior_nash():
    pay = limit_D_payoff(LIN, 0.4, 1.0)
    path = best_response_dynamics(pay, (1.0, 1.0), 9.0, max_iter=200, tol=1e-6)
    assert path.classification == "converged"
    assert abs(path.point[0] - 20.0 / 3.0) < 1e-2
    assert abs(path.point[1] - 20.0 / 3.0) < 1e-2


def test_br_oscillates_inside_cycle_interval():
    pay = limit_B_payoff(LIN, 0.4, 1.0)
    path = best_response_dynamics(pay, (2.6, 2.6), 9.0, max_iter=150, tol=1e-6)
    assert path.classification == "oscillating"
    lo, hi = path.window
    assert abs(lo - 2.25) < 1e-3
    assert abs(hi - 3.0) < 1e-3
    for p1, p2 in path.profiles:
        assert 2.25 - 1e-3 <= p1 <= 3.0 + 1e-3
        assert 2.25 - 1e-3 <= p2 <= 3.0 + 1e-3


def test_br_constant_payoff_stays_put():
    path = best_response_dynamics(lambda x, o: 1.0, (4.0, 7.0), 9.0)
    assert path.classification == "converged"
    assert path.point == (4.0, 7.0)
    assert len(path.profiles) == 3


def test_br_input_validation():
    with pytest.raises(DomainError):
        best_response_dynamics(lambda x, o: 1.0, (4.0, 7.0), 9.0, max_iter=0)
    with pytest.raises(DomainError):
        best_response_dynamics(lambda x, o: 1.0, (4.0, 10.0), 9.0)


# ----------------------------------------------- cooperation comparison

def test_cooperation_gaps_at_moderate_impatience():
    c1 = cooperation_comparison(LIN, 1.0, 7.0, beta=1.0)
    assert c1.coop_phi > c1.mono_phi > 0.0
    assert abs(c1.price_gap - 0.046) < 0.02
    c05 = cooperation_comparison(LIN, 1.0, 7.0, beta=0.5)
    assert abs(c05.mr_gap - 0.17) < 0.04
    assert c05.coop_mr_per_platform > c05.mono_mr
