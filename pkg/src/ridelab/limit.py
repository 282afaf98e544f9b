"""Vanishing-impatience closed forms.

As driver impatience beta goes to zero the platform's stationary quantities
collapse to simple supply/demand expressions: the waiting pool either absorbs
all surplus demand (lam*f > e, the supercritical case) or grows without
bound and serves everyone (lam*f <= e). This module holds those closed forms
for a single platform plus the two-platform splits and revenues they induce,
including the passenger-split table used throughout the competitive
analysis under the blocking metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .model import ResponseFunction, eval_response, thresholds

__all__ = [
    "LimitDuopolyOutcome",
    "limit_D",
    "limit_MR_single",
    "limit_B",
    "duopoly_D_payoff",
    "limit_WE_MR_B",
]


@dataclass(frozen=True)
class LimitDuopolyOutcome:
    """Passenger split and revenue pair for one static price profile.

    case_tag names the branch that applied after ordering the platforms by
    price: "supply-limited-pair" (both prices below the saturation
    threshold, both platforms sell all their supply), "even-split" (equal
    prices at or above saturation), "partial-spill" (the pricier platform
    keeps only the demand the cheaper one cannot absorb), or
    "cheaper-takes-all" (the pricier platform is priced out entirely).
    """

    lambda1: float
    lambda2: float
    mr1: float
    mr2: float
    case_tag: str


def limit_D(e: float, lam: float, f_phi: float) -> float:
    """Limiting probability of an empty driver queue: (1 - e/(lam*f))^+."""
    if not (0.0 < f_phi <= 1.0):
        raise DomainError(f"response value must be in (0, 1], got {f_phi!r}")
    if lam < 0.0:
        raise DomainError(f"arrival rate must be >= 0, got {lam!r}")
    lf = lam * f_phi
    if lf <= e:
        return 0.0
    return 1.0 - e / lf


def limit_MR_single(e: float, lam: float, phi: float, rf: ResponseFunction) -> float:
    """Limiting revenue rate of a lone platform at arrival rate lam.

    e*phi when demand exceeds supply (e < lam*f(phi)), else lam*f(phi)*phi.
    The boundary e = lam*f(phi) lands in the second branch, where the two
    expressions coincide.
    """
    f_phi = eval_response(rf, phi)
    if e < lam * f_phi:
        return e * phi
    return lam * f_phi * phi


def limit_B(e: float, lam: float, phi: float, rf: ResponseFunction) -> float:
    """Limiting blocking probability: 1 - e/lam if supply binds, else 1 - f."""
    f_phi = eval_response(rf, phi)
    if e < lam * f_phi:
        return 1.0 - e / lam
    return 1.0 - f_phi


def duopoly_D_payoff(
    e: float, Lambda: float, rf: ResponseFunction, phi_i: float, phi_other: float
) -> float:
    """Limiting revenue of platform i under the unavailability-split duopoly.

    The empty-queue metric splits passengers so that lam_i * f(phi_i) is
    equalized, giving platform i the demand share
    h = Lambda * f(phi_i) * f(phi_other) * phi_i / (f(phi_i) + f(phi_other)),
    capped by its supply revenue e * phi_i.
    """
    f_i = eval_response(rf, phi_i)
    f_o = eval_response(rf, phi_other)
    h = Lambda * f_i * f_o * phi_i / (f_i + f_o)
    return min(e * phi_i, h)


def limit_WE_MR_B(
    e: float, Lambda: float, rf: ResponseFunction, phi1: float, phi2: float
) -> LimitDuopolyOutcome:
    """Passenger split and revenues under the blocking metric, in the limit.

    Implements the price-profile table with the saturation threshold
    phi_underbar and the spill threshold phi_bar (both zero-clamped when
    supply is abundant). The cheaper platform's blocking advantage is worth
    all residual demand once the rival crosses phi_bar; between the
    thresholds the split leaves the pricier platform exactly the demand the
    cheaper one cannot serve; below phi_underbar both platforms are supply
    limited and the split is even.
    """
    if not (e > 0.0 and Lambda > 0.0):
        raise DomainError("e and Lambda must be positive")
    return _split_table(e, Lambda, rf, phi1, phi2, thresholds(rf, e, Lambda))


def _split_table(e, Lambda, rf, phi1, phi2, th) -> LimitDuopolyOutcome:
    # core of limit_WE_MR_B with the thresholds precomputed, so that game
    # solvers evaluating the split tens of thousands of times do not redo
    # the two argmax searches on every call
    swapped = phi1 < phi2
    hi, lo = (phi2, phi1) if swapped else (phi1, phi2)

    f_hi = eval_response(rf, hi)
    f_lo = eval_response(rf, lo)

    if hi < th.phi_underbar:
        tag = "supply-limited-pair"
        lam_hi = 0.5 * Lambda
        mr_hi, mr_lo = e * hi, e * lo
    elif hi == lo:
        tag = "even-split"
        lam_hi = 0.5 * Lambda
        mr_hi = mr_lo = 0.5 * Lambda * f_hi * hi
    elif hi < th.phi_bar:
        tag = "partial-spill"
        lam_hi = Lambda - e / f_hi
        mr_hi = (Lambda * f_hi - e) * hi
        mr_lo = e * lo
    else:
        tag = "cheaper-takes-all"
        lam_hi = 0.0
        mr_hi = 0.0
        mr_lo = min(Lambda * f_lo, e) * lo

    lam_lo = Lambda - lam_hi
    if swapped:
        return LimitDuopolyOutcome(
            lambda1=lam_lo, lambda2=lam_hi, mr1=mr_lo, mr2=mr_hi, case_tag=tag
        )
    return LimitDuopolyOutcome(
        lambda1=lam_hi, lambda2=lam_lo, mr1=mr_hi, mr2=mr_lo, case_tag=tag
    )
