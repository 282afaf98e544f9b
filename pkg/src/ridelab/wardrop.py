"""Passenger split equalizing quality of service across two platforms.

Passengers distribute themselves so that neither platform offers a strictly
better QoS, where QoS is any curve that worsens (increases) with the
platform's own arrival rate. With both curves strictly increasing the gap
g(lam) = Q1(lam) - Q2(Lambda - lam) is strictly increasing in lam, so the
split is unique: an interior root of g, or a corner when g keeps one sign
on the whole interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import AssumptionViolationError, DomainError
from .model import PlatformParams, PricePolicy, ResponseFunction, eval_response
from . import bcmp

__all__ = ["WardropSplit", "solve_WE", "we_D_closed_form", "we_B_exact"]

_MAX_ITER = 200
_PROBE_POINTS = 9


@dataclass(frozen=True)
class WardropSplit:
    """Split of the aggregate passenger rate across the two platforms.

    residual is |Q1(lambda1) - Q2(lambda2)| at the returned split; it is
    at most the solver tolerance for an interior split, while at a corner
    it records the (sign-consistent) QoS gap that keeps every passenger on
    one side. corner is "interior", "all-to-platform-1" or
    "all-to-platform-2".
    """

    lambda1: float
    lambda2: float
    residual: float
    corner: str


def _probe_increasing(q: Callable[[float], float], Lambda: float, which: str) -> None:
    xs = [Lambda * i / (_PROBE_POINTS - 1) for i in range(_PROBE_POINTS)]
    vals = [q(x) for x in xs]
    for a, b in zip(vals, vals[1:]):
        if b < a - 1e-12 * max(1.0, abs(a)):
            raise AssumptionViolationError(
                f"QoS curve {which} is not increasing on [0, {Lambda!r}]: "
                f"observed {a!r} -> {b!r}"
            )


def solve_WE(
    q1: Callable[[float], float],
    q2: Callable[[float], float],
    Lambda: float,
    tol: float | None = None,
) -> WardropSplit:
    """Unique QoS-equalizing split by bisection on g(lam) = Q1(lam) - Q2(Lambda-lam).

    Q1 and Q2 must be continuous and strictly increasing in their own
    arrival rate; a coarse probe raises AssumptionViolationError when a
    decrease is detected. Corners are detected from the endpoint signs
    before iterating.
    """
    if Lambda <= 0.0:
        raise DomainError(f"Lambda must be positive, got {Lambda!r}")
    if tol is None:
        tol = 1e-9 * Lambda
    if tol <= 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    _probe_increasing(q1, Lambda, "Q1")
    _probe_increasing(q2, Lambda, "Q2")

    g_lo = q1(0.0) - q2(Lambda)
    if g_lo >= 0.0:
        # platform 2 is weakly better even with all traffic on it
        return WardropSplit(0.0, Lambda, abs(g_lo), "all-to-platform-2")
    g_hi = q1(Lambda) - q2(0.0)
    if g_hi <= 0.0:
        return WardropSplit(Lambda, 0.0, abs(g_hi), "all-to-platform-1")

    lo, hi = 0.0, Lambda
    mid = 0.5 * Lambda
    g_mid = q1(mid) - q2(Lambda - mid)
    for _ in range(_MAX_ITER):
        if abs(g_mid) <= tol or (hi - lo) < 1e-12 * Lambda:
            break
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
        mid = 0.5 * (lo + hi)
        g_mid = q1(mid) - q2(Lambda - mid)
    return WardropSplit(mid, Lambda - mid, abs(g_mid), "interior")


def we_D_closed_form(
    rf: ResponseFunction, phi1: float, phi2: float, Lambda: float
) -> WardropSplit:
    """Split equalizing the empty-queue probability, in closed form.

    lambda1 = Lambda * f(phi2) / (f(phi1) + f(phi2)). The empty-queue
    probability of a flat-priced platform depends on the arrival rate only
    through lam * f(phi), so equalizing it equalizes the effective rates
    and the result holds for every impatience rate beta > 0.
    """
    if Lambda <= 0.0:
        raise DomainError(f"Lambda must be positive, got {Lambda!r}")
    f1 = eval_response(rf, phi1)
    f2 = eval_response(rf, phi2)
    lam1 = Lambda * f2 / (f1 + f2)
    return WardropSplit(lam1, Lambda - lam1, 0.0, "interior")


def we_B_exact(
    params1: PlatformParams,
    params2: PlatformParams,
    rf: ResponseFunction,
    phi1: float,
    phi2: float,
    tol: float | None = None,
) -> WardropSplit:
    """Split equalizing the exact blocking probability at flat prices.

    Builds the two blocking curves from the product-form route and hands
    them to solve_WE. Requires beta > 0 on both platforms (the exact route
    does not cover beta = 0).
    """
    if params1.Lambda != params2.Lambda:
        raise DomainError(
            "platforms disagree on the market size: "
            f"{params1.Lambda!r} vs {params2.Lambda!r}"
        )
    pol1 = PricePolicy.static(phi1)
    pol2 = PricePolicy.static(phi2)

    def q1(lam: float) -> float:
        return bcmp.blocking_probability(params1, pol1, rf, lam)

    def q2(lam: float) -> float:
        return bcmp.blocking_probability(params2, pol2, rf, lam)

    return solve_WE(q1, q2, params1.Lambda, tol)
