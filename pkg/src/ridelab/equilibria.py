"""Game-level solvers for the pricing competition.

Covers the monopoly optimum (exact and limiting), the symmetric duopoly
under both QoS metrics, the undercutting cycle that replaces a Nash point
under the blocking metric, epsilon-equilibria for the supply-rich regime,
plus two empirical companions: a grid verifier for the cycle definition and
alternating best-response dynamics.

All limit-regime payoffs are in closed form; only monopoly_optimum_exact
and cooperation_comparison touch the product-form route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from ._search import grid_golden_max, golden_max
from .errors import DomainError
from .limit import _split_table, duopoly_D_payoff, limit_MR_single, limit_WE_MR_B
from .model import (
    PlatformParams,
    PricePolicy,
    ResponseFunction,
    eval_f_prime,
    eval_response,
    thresholds,
)
from . import bcmp

__all__ = [
    "EquilibriumOutcome",
    "CycleVerification",
    "BestResponsePath",
    "CooperationComparison",
    "monopoly_optimum_limit",
    "monopoly_optimum_exact",
    "duopoly_D_equilibrium",
    "duopoly_B_equilibrium",
    "limit_D_payoff",
    "limit_B_payoff",
    "verify_equilibrium_cycle",
    "best_response_dynamics",
    "cooperation_comparison",
]

PayoffMap = Callable[[float, float], float]


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Resolved outcome of the symmetric duopoly pricing game.

    kind is one of "nash-point" (phi1, phi2 set), "equilibrium-cycle"
    (cycle_lo, cycle_hi set), "epsilon-ne" (delta, epsilon set) and
    "no-equilibrium-known" (detail explains which branch conditions
    failed). payoffs holds the per-platform revenue at the reported point,
    at the cycle endpoints (equal there by the endpoint identity), or at
    the clustered profile (delta, delta). branch names the structural
    reason for the outcome.
    """

    kind: str
    branch: str
    payoffs: Optional[tuple[float, float]]
    phi1: Optional[float] = None
    phi2: Optional[float] = None
    cycle_lo: Optional[float] = None
    cycle_hi: Optional[float] = None
    delta: Optional[float] = None
    epsilon: Optional[float] = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.kind == "equilibrium-cycle" and not (self.cycle_lo < self.cycle_hi):
            raise DomainError(
                f"cycle endpoints must satisfy lo < hi, got "
                f"({self.cycle_lo!r}, {self.cycle_hi!r})"
            )


def _price_cap(rf: ResponseFunction, phi_h: Optional[float]) -> float:
    if phi_h is None:
        return rf.phi_h
    if phi_h != rf.phi_h:
        raise DomainError(
            "the price cap is carried by the response function; "
            f"got phi_h={phi_h!r} against rf.phi_h={rf.phi_h!r}"
        )
    return phi_h


# ------------------------------------------------------------- monopoly

def monopoly_optimum_limit(
    rf: ResponseFunction, e: float, Lambda: float
) -> tuple[float, float]:
    """Optimal flat price and revenue of a half-market platform, limit regime.

    The optimizer is max(phi_P_star, phi_underbar) capped at phi_h: below
    phi_underbar the platform is supply limited and revenue e*phi keeps
    increasing, above it the demand-side optimum phi_P_star rules. The cap
    matters when supply is so scarce that phi_underbar exceeds the largest
    admissible price.
    """
    th = thresholds(rf, e, Lambda)
    phi = max(th.phi_P_star, th.phi_underbar)
    phi = min(phi, rf.phi_h)
    return phi, limit_MR_single(e, 0.5 * Lambda, phi, rf)


def monopoly_optimum_exact(
    params: PlatformParams,
    rf: ResponseFunction,
    grid_n: int = 256,
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Optimal flat price and revenue at arrival rate Lambda/2, exact route.

    Grid scan plus golden-section refinement of the product-form revenue
    over [0, phi_h]. Approaches monopoly_optimum_limit as beta shrinks.
    """
    lam = 0.5 * params.Lambda

    def mr(phi: float) -> float:
        return bcmp.matching_revenue(params, PricePolicy.static(phi), rf, lam)

    return grid_golden_max(mr, 0.0, rf.phi_h, grid_n=grid_n, xtol=tol)


# -------------------------------------------------- duopoly, metric D

def duopoly_D_equilibrium(
    rf: ResponseFunction,
    e: float,
    Lambda: float,
    phi_h: Optional[float] = None,
) -> EquilibriumOutcome:
    """Symmetric Nash point of the duopoly under the empty-queue metric.

    The game always has a pure symmetric NE: at the supply-demand balance
    price phi_underbar when the marginal index d is already nonpositive
    there, at the root of d when d turns negative inside the price range,
    and at the cap when passengers are too price insensitive for d to turn
    (or when phi_underbar itself is out of range).
    """
    phi_h = _price_cap(rf, phi_h)
    th = thresholds(rf, e, Lambda)

    def outcome(phi: float, branch: str) -> EquilibriumOutcome:
        pay = duopoly_D_payoff(e, Lambda, rf, phi, phi)
        return EquilibriumOutcome(
            kind="nash-point",
            branch=branch,
            payoffs=(pay, pay),
            phi1=phi,
            phi2=phi,
        )

    def d_of(phi: float) -> float:
        return 2.0 * eval_response(rf, phi) + phi * eval_f_prime(rf, phi)

    if th.phi_underbar <= phi_h and d_of(th.phi_underbar) <= 0.0:
        return outcome(th.phi_underbar, "supply-demand-balance")
    if th.phi_underbar > phi_h:
        # every admissible price is supply limited, revenue e*phi rises
        # all the way to the cap
        return outcome(phi_h, "price-cap")
    if d_of(phi_h) <= 0.0:
        return outcome(th.phi_d_zero.phi, "interior-stationarity")
    return outcome(phi_h, "price-cap")


# -------------------------------------------------- duopoly, metric B

def duopoly_B_equilibrium(
    rf: ResponseFunction,
    e: float,
    Lambda: float,
    phi_h: Optional[float] = None,
    epsilon: Optional[float] = None,
) -> EquilibriumOutcome:
    """Outcome of the duopoly under the blocking metric, limit regime.

    Supply-rich markets (e >= Lambda) admit no positive-price NE but any
    profile clustered near zero price is an epsilon-NE; epsilon must be
    supplied there. Otherwise the game either pins both platforms at the
    balance price phi_underbar, or enters an undercutting cycle on
    [phi_L_star, phi_U_star], or (for a narrow parameter sliver) has no
    equilibrium of either kind, which is reported honestly rather than
    papered over.
    """
    phi_h = _price_cap(rf, phi_h)
    if not (e > 0.0 and Lambda > 0.0):
        raise DomainError("e and Lambda must be positive")

    if e >= Lambda:
        if epsilon is None or not (epsilon > 0.0):
            raise DomainError(
                "epsilon > 0 is required for the supply-rich branch (e >= Lambda)"
            )
        delta = min(phi_h, (1.0 - 1e-6) * epsilon / Lambda)
        pay = 0.5 * Lambda * eval_response(rf, delta) * delta
        return EquilibriumOutcome(
            kind="epsilon-ne",
            branch="low-price-cluster",
            payoffs=(pay, pay),
            delta=delta,
            epsilon=epsilon,
        )

    th = thresholds(rf, e, Lambda)
    if th.phi_m_star <= th.phi_underbar <= phi_h:
        split = limit_WE_MR_B(e, Lambda, rf, th.phi_underbar, th.phi_underbar)
        return EquilibriumOutcome(
            kind="nash-point",
            branch="supply-demand-balance",
            payoffs=(split.mr1, split.mr2),
            phi1=th.phi_underbar,
            phi2=th.phi_underbar,
        )
    if th.phi_underbar < th.phi_m_star <= min(phi_h, th.phi_bar):
        pay = e * th.phi_L_star  # equals m(phi_U_star) by construction
        return EquilibriumOutcome(
            kind="equilibrium-cycle",
            branch="undercut-cycle",
            payoffs=(pay, pay),
            cycle_lo=th.phi_L_star,
            cycle_hi=th.phi_U_star,
        )
    detail = (
        "no NE and no equilibrium cycle is known here: "
        f"phi_m_star={th.phi_m_star:.6g} vs phi_underbar={th.phi_underbar:.6g} "
        f"fails both orderings given phi_h={phi_h:.6g} and "
        f"phi_bar={th.phi_bar:.6g}"
    )
    return EquilibriumOutcome(
        kind="no-equilibrium-known",
        branch="unresolved",
        payoffs=None,
        detail=detail,
    )


# ------------------------------------------------------ payoff builders

def limit_D_payoff(rf: ResponseFunction, e: float, Lambda: float) -> PayoffMap:
    """payoff(phi_i, phi_other) under the empty-queue metric, limit regime."""

    def payoff(phi_i: float, phi_other: float) -> float:
        return duopoly_D_payoff(e, Lambda, rf, phi_i, phi_other)

    return payoff


def limit_B_payoff(rf: ResponseFunction, e: float, Lambda: float) -> PayoffMap:
    """payoff(phi_i, phi_other) under the blocking metric, limit regime.

    Thresholds are computed once here, not per call; best-response search
    and cycle verification evaluate this map tens of thousands of times.
    """
    th = thresholds(rf, e, Lambda)

    def payoff(phi_i: float, phi_other: float) -> float:
        return _split_table(e, Lambda, rf, phi_i, phi_other, th).mr1

    return payoff


# -------------------------------------------------- cycle verification

@dataclass(frozen=True)
class CycleVerification:
    """Grid check of the two defining conditions of an equilibrium cycle.

    stable: from any price outside [lo, hi], against any opponent price
    inside, some response inside the interval does strictly better.
    cyclic: at every profile inside the square, at least one platform has a
    strict improvement available inside the interval. Counterexamples are
    (deviation, opponent) for stability and a full profile for cyclicity.
    """

    stable: bool
    cyclic: bool
    stability_counterexample: Optional[tuple[float, float]]
    cyclicity_counterexample: Optional[tuple[float, float]]
    outside_checked: int
    pairs_checked: int

    @property
    def passed(self) -> bool:
        return self.stable and self.cyclic


def verify_equilibrium_cycle(
    payoff: PayoffMap,
    lo: float,
    hi: float,
    phi_h: float,
    grid_n: int = 100,
    extra_candidates: Sequence[float] = (),
) -> CycleVerification:
    """Check stability and cyclicity of [lo, hi] under a two-player payoff.

    Improving responses are searched on a 400-point grid over [lo, hi]
    together with the interval endpoints and any extra_candidates supplied
    by the caller (threshold prices are good candidates, the defining
    witnesses tend to be those named points). Both failures report the
    first counterexample found.
    """
    if not (0.0 <= lo < hi <= phi_h):
        raise DomainError(
            f"need 0 <= lo < hi <= phi_h, got lo={lo!r} hi={hi!r} phi_h={phi_h!r}"
        )
    if grid_n < 50:
        raise DomainError(f"grid_n must be at least 50, got {grid_n!r}")

    inside = [float(x) for x in np.linspace(lo, hi, grid_n)]
    outside = [
        float(x) for x in np.linspace(0.0, phi_h, grid_n) if x < lo or x > hi
    ]
    cands = set(float(x) for x in np.linspace(lo, hi, 400))
    cands.add(lo)
    cands.add(hi)
    for c in extra_candidates:
        if lo <= c <= hi:
            cands.add(float(c))
    cands = sorted(cands)

    best_inside = {po: max(payoff(x, po) for x in cands) for po in inside}

    stable = True
    stab_cx = None
    for po in inside:
        v_star = best_inside[po]
        for x in outside:
            if payoff(x, po) >= v_star:
                stable = False
                stab_cx = (x, po)
                break
        if not stable:
            break

    cyclic = True
    cyc_cx = None
    for p1 in inside:
        for p2 in inside:
            if (
                payoff(p1, p2) >= best_inside[p2]
                and payoff(p2, p1) >= best_inside[p1]
            ):
                cyclic = False
                cyc_cx = (p1, p2)
                break
        if not cyclic:
            break

    return CycleVerification(
        stable=stable,
        cyclic=cyclic,
        stability_counterexample=stab_cx,
        cyclicity_counterexample=cyc_cx,
        outside_checked=len(outside),
        pairs_checked=grid_n * grid_n,
    )


# ------------------------------------------------ best-response dynamics

@dataclass(frozen=True)
class BestResponsePath:
    """Trajectory of alternating exact best responses.

    profiles records every visited profile starting from the initial one
    (one entry per single-player move). classification is "converged"
    (point set), "oscillating" (window set to the min/max prices visited
    in the trajectory tail) or "max-iter-exceeded".
    """

    profiles: tuple[tuple[float, float], ...]
    classification: str
    point: Optional[tuple[float, float]] = None
    window: Optional[tuple[float, float]] = None


def _best_response(
    payoff: PayoffMap,
    other: float,
    current: float,
    phi_h: float,
    grid_n: int,
    tol: float,
) -> float:
    spacing = phi_h / (grid_n - 1)
    cands = {i * spacing for i in range(grid_n)}
    cands.add(current)
    cands.add(other)
    if other - spacing >= 0.0:
        cands.add(other - spacing)

    grid_x, grid_v = current, -math.inf
    for x in sorted(cands):
        if not (0.0 <= x <= phi_h):
            continue
        v = payoff(x, other)
        if v > grid_v:
            grid_x, grid_v = x, v

    best_x, best_v = grid_x, grid_v
    b_lo = max(0.0, grid_x - spacing)
    b_hi = min(phi_h, grid_x + spacing)
    gx, gv = golden_max(lambda x: payoff(x, other), b_lo, b_hi, xtol=1e-9 * max(1.0, phi_h))
    if gv > best_v:
        best_x, best_v = gx, gv

    # Undercutting payoffs jump down at x = other; golden refinement then
    # crawls arbitrarily close to the opponent's price, and the dynamics
    # would stall in vanishing steps. When that happened (the refined point
    # sits between the scan winner and the opponent's price, and the payoff
    # genuinely drops at the opponent's price), fall back to the honest
    # scan winner. A smooth interior maximum near the opponent's price has
    # no drop and keeps its refinement.
    scale = max(1.0, abs(other))
    if grid_x < best_x < other:
        probe = other - 1e-7 * scale
        if probe >= 0.0 and payoff(probe, other) > payoff(other, other) + 1e-12 * scale:
            best_x, best_v = grid_x, grid_v

    if best_v <= payoff(current, other) + tol:
        return current
    return best_x


def best_response_dynamics(
    payoff: PayoffMap,
    phi_init: tuple[float, float],
    phi_h: float,
    max_iter: int = 200,
    tol: float = 1e-6,
    grid_n: int = 601,
) -> BestResponsePath:
    """Alternate exact best responses from phi_init until they settle.

    Each move maximizes over a uniform grid on [0, phi_h] (plus the
    opponent's price, one spacing below it, and the mover's current price)
    refined by golden section. A move is only made when it improves the
    payoff by more than tol, so fixed points are kept exactly. The run is
    "converged" when neither player moved more than tol in a round, and
    "oscillating" when the tail of the trajectory keeps revisiting a
    stable sub-interval well short of the full price range.
    """
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter!r}")
    prices = [float(phi_init[0]), float(phi_init[1])]
    for q in prices:
        if not (0.0 <= q <= phi_h):
            raise DomainError(f"initial price {q!r} outside [0, {phi_h!r}]")
    profiles = [(prices[0], prices[1])]

    for _ in range(max_iter):
        moved = 0.0
        for i in (0, 1):
            new = _best_response(
                payoff, prices[1 - i], prices[i], phi_h, grid_n, tol
            )
            moved = max(moved, abs(new - prices[i]))
            prices[i] = new
            profiles.append((prices[0], prices[1]))
        if moved <= tol:
            return BestResponsePath(
                profiles=tuple(profiles),
                classification="converged",
                point=(prices[0], prices[1]),
            )

    def window(chunk):
        vals = [v for pr in chunk for v in pr]
        return min(vals), max(vals)

    half = window(profiles[len(profiles) // 2 :])
    quarter = window(profiles[(3 * len(profiles)) // 4 :])
    wtol = max(10.0 * tol, 1e-3 * phi_h)
    settled = (
        abs(half[0] - quarter[0]) <= wtol
        and abs(half[1] - quarter[1]) <= wtol
        and (half[1] - half[0]) < 0.25 * phi_h
    )
    if settled:
        return BestResponsePath(
            profiles=tuple(profiles),
            classification="oscillating",
            window=half,
        )
    return BestResponsePath(
        profiles=tuple(profiles), classification="max-iter-exceeded"
    )


# ----------------------------------------------- cooperation comparison

@dataclass(frozen=True)
class CooperationComparison:
    """Optimal prices and per-platform revenues, merged vs standalone.

    The standalone platform serves half the market with driver rate e; the
    merged entity serves the whole market with the pooled rate 2e. Gaps
    are relative to the standalone values.
    """

    beta: float
    mono_phi: float
    mono_mr: float
    coop_phi: float
    coop_mr_per_platform: float
    price_gap: float
    mr_gap: float


def cooperation_comparison(
    rf: ResponseFunction,
    e: float,
    Lambda: float,
    beta: float,
    nu: float = 1.0,
    grid_n: int = 256,
) -> CooperationComparison:
    """Compare the merged system (Lambda, 2e) with a standalone (Lambda/2, e).

    In the limit regime both have the same e/Lambda ratio and therefore the
    same optimizer; for beta away from zero pooling the driver fleets does
    help, and this quantifies by how much at the revenue optimum.
    """
    mono = PlatformParams.from_effective_rate(
        e, Lambda=Lambda, nu=nu, beta=beta, phi_h=rf.phi_h
    )
    # market field doubled so that the optimizer's Lambda/2 arrival rate
    # equals the full passenger base served by the merged entity
    coop = PlatformParams.from_effective_rate(
        2.0 * e, Lambda=2.0 * Lambda, nu=nu, beta=beta, phi_h=rf.phi_h
    )
    mono_phi, mono_mr = monopoly_optimum_exact(mono, rf, grid_n=grid_n)
    coop_phi, coop_mr = monopoly_optimum_exact(coop, rf, grid_n=grid_n)
    per_platform = 0.5 * coop_mr
    return CooperationComparison(
        beta=beta,
        mono_phi=mono_phi,
        mono_mr=mono_mr,
        coop_phi=coop_phi,
        coop_mr_per_platform=per_platform,
        price_gap=(coop_phi - mono_phi) / mono_phi,
        mr_gap=(per_platform - mono_mr) / mono_mr,
    )
