"""Exact stationary analysis of one platform with impatient waiting drivers.

The platform is a two-station product-form network: waiting drivers queue at
a station whose departure rate at level n is lam*f(phi(n)) + n*beta (matches
plus abandonments), and drivers on a ride or break occupy an infinite-server
station with rate nu whose stationary marginal is Poisson(e/nu),
independent of the waiting-queue level. Everything observable here (the
unavailability probability D, the blocking probability B, and the matching
revenue rate) depends only on the waiting-queue marginal, i.e. on the
unnormalized weights

    w_0 = 1,   w_n = e * w_{n-1} / (lam * f(phi(n)) + n * beta).

For beta > 0 the series always terminates under the truncation rule below;
beta = 0 is the limit module's territory.

Numerics: the running sums use Neumaier compensated accumulation, and the
whole accumulation is dynamically rescaled by 2^-1024 whenever the current
term outgrows 2^500. Subcritical price points (lam*f < e) at small beta grow
astronomically large intermediate terms (ln of the normalizer in the
thousands) before the abandonment term turns the series around; the rescaled
sums stay finite and the ratios D, B, MR remain correct even when the true
normalizer overflows float64. In that regime the reported `normalizer` and
the affected `weights` entries saturate to inf, and D may underflow to 0.0
when the true value lies below the smallest subnormal; B and MR are computed
from the scaled accumulators and remain accurate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, TruncationOverflowError, UnsupportedRegimeError
from .model import PlatformParams, PricePolicy, ResponseFunction, eval_response

__all__ = [
    "StationaryDistribution",
    "stationary_waiting_distribution",
    "driver_unavailability",
    "blocking_probability",
    "matching_revenue",
]

_N_CAP = 10**6
_TRIGGER = 2.0**500
_SCALE_DOWN = 2.0**-1024
_SHIFT_BITS = 1024


@dataclass(frozen=True)
class StationaryDistribution:
    """Truncated waiting-queue weights plus the independent riding marginal.

    weights[n] is the unnormalized product-form term for n waiting drivers
    (weights[0] == 1); normalizer is their sum. The riding-driver count is
    Poisson(riding_mean) independent of n, so the joint probability of
    (n, r) is (weights[n]/normalizer) * Poisson(r; riding_mean). tail_bound
    dominates the mass truncated beyond N_trunc and is below 1e-10 of the
    normalizer by construction. In extreme subcritical regimes both
    weights entries and the normalizer may saturate to inf; see the module
    docstring.
    """

    weights: tuple[float, ...]
    normalizer: float
    riding_mean: float
    tail_bound: float
    N_trunc: int


class _Series:
    """Result of one accumulation pass, in rescaled coordinates."""

    __slots__ = ("s", "shift", "b_num", "mr_num", "weights", "n", "tail")

    def __init__(self, s, shift, b_num, mr_num, weights, n, tail):
        self.s = s
        self.shift = shift
        self.b_num = b_num
        self.mr_num = mr_num
        self.weights = weights
        self.n = n
        self.tail = tail


def _true_scale(x: float, shift: int) -> float:
    """Undo the accumulation rescaling, saturating to inf on overflow."""
    if shift == 0:
        return x
    try:
        return math.ldexp(x, shift * _SHIFT_BITS)
    except OverflowError:
        return math.inf


def _check_regime(params: PlatformParams, lam: float) -> None:
    if params.beta == 0.0:
        raise UnsupportedRegimeError(
            "beta = 0 has no stationary product form here; "
            "use the limit module for the vanishing-impatience regime"
        )
    if not math.isfinite(lam) or lam < 0.0:
        raise DomainError(f"arrival rate must be finite and >= 0, got {lam!r}")


def _accumulate_constant(e: float, lam_f: float, beta: float) -> _Series:
    """Series pass for a flat price: f(phi(n)) is the same for every n."""
    w = 1.0
    s, c = 1.0, 0.0
    shift = 0
    weights = [1.0]
    append = weights.append
    n = 0
    while True:
        n += 1
        if n > _N_CAP:
            raise TruncationOverflowError(
                f"stationary series did not converge within {_N_CAP} terms "
                f"(e={e}, lam*f={lam_f}, beta={beta}); beta is too small for "
                "the exact series at this operating point"
            )
        denom = lam_f + n * beta
        w = w * e / denom
        append(w if shift == 0 else _true_scale(w, shift))
        t = s + w
        c += (s - t) + w if s >= w else (w - t) + s
        s = t
        if w > _TRIGGER:
            w *= _SCALE_DOWN
            s *= _SCALE_DOWN
            c *= _SCALE_DOWN
            shift += 1
        if e < 0.5 * denom and w < 1e-14 * s:
            break
    s += c
    rho = e / (lam_f + (n + 1) * beta)
    tail = w * rho / (1.0 - rho)
    return _Series(s, shift, math.nan, math.nan, weights, n, tail)


def _accumulate_general(
    e: float,
    lam: float,
    beta: float,
    policy: PricePolicy,
    rf: ResponseFunction,
) -> _Series:
    """Series pass for level-dependent prices; also accumulates the blocking
    and revenue numerators, which have no closed form in this case."""
    f_levels = [eval_response(rf, v) for v in policy.values]
    f_tail = eval_response(rf, policy.tail)
    f_min = min(f_levels + [f_tail])
    w = 1.0
    s, sc = 1.0, 0.0
    b, bc = 0.0, 0.0
    m, mc = 0.0, 0.0
    shift = 0
    weights = [1.0]
    n = 0
    n_levels = len(policy.values)
    while True:
        n += 1
        if n > _N_CAP:
            raise TruncationOverflowError(
                f"stationary series did not converge within {_N_CAP} terms "
                f"(e={e}, beta={beta}, dynamic policy)"
            )
        if n <= n_levels:
            phi_n = policy.values[n - 1]
            f_n = f_levels[n - 1]
        else:
            phi_n = policy.tail
            f_n = f_tail
        denom = lam * f_n + n * beta
        w = w * e / denom
        weights.append(w if shift == 0 else _true_scale(w, shift))
        t = s + w
        sc += (s - t) + w if s >= w else (w - t) + s
        s = t
        x = (1.0 - f_n) * w
        t = b + x
        bc += (b - t) + x if b >= x else (x - t) + b
        b = t
        x = lam * f_n * phi_n * w
        t = m + x
        mc += (m - t) + x if m >= x else (x - t) + m
        m = t
        if w > _TRIGGER:
            w *= _SCALE_DOWN
            s *= _SCALE_DOWN
            sc *= _SCALE_DOWN
            b *= _SCALE_DOWN
            bc *= _SCALE_DOWN
            m *= _SCALE_DOWN
            mc *= _SCALE_DOWN
            shift += 1
        # the printed rule: current ratio < 1/2 and the term negligible; the
        # third clause guards the tail bound when later levels could see a
        # lower response than the current one
        if (
            e < 0.5 * denom
            and w < 1e-14 * s
            and e < 0.5 * (lam * f_min + (n + 1) * beta)
        ):
            break
    s += sc
    b += bc
    m += mc
    rho = e / (lam * f_min + (n + 1) * beta)
    tail = w * rho / (1.0 - rho)
    return _Series(s, shift, b, m, weights, n, tail)


def _series(
    params: PlatformParams,
    policy: PricePolicy,
    rf: ResponseFunction,
    lam: float,
) -> _Series:
    _check_regime(params, lam)
    if policy.is_constant():
        f_const = eval_response(rf, policy.constant_price())
        return _accumulate_constant(params.e, lam * f_const, params.beta)
    return _accumulate_general(params.e, lam, params.beta, policy, rf)


def stationary_waiting_distribution(
    params: PlatformParams,
    policy: PricePolicy,
    rf: ResponseFunction,
    lam: float,
) -> StationaryDistribution:
    """Truncated stationary weights of the waiting-driver queue.

    Raises UnsupportedRegimeError for beta = 0 and TruncationOverflowError
    when the series needs more than 10^6 terms (beta far too small for the
    exact route).
    """
    acc = _series(params, policy, rf, lam)
    return StationaryDistribution(
        weights=tuple(acc.weights),
        normalizer=_true_scale(acc.s, acc.shift),
        riding_mean=params.e / params.nu if params.nu > 0.0 else math.inf,
        tail_bound=_true_scale(acc.tail, acc.shift),
        N_trunc=acc.n,
    )


def driver_unavailability(
    params: PlatformParams,
    policy: PricePolicy,
    rf: ResponseFunction,
    lam: float,
) -> float:
    """Stationary probability an arriving passenger finds zero waiting drivers.

    Equals 1/normalizer. Strictly increasing in lam at a fixed policy. May
    underflow to exactly 0.0 in deeply subcritical small-beta regimes where
    the true value is below float64's smallest subnormal.
    """
    acc = _series(params, policy, rf, lam)
    d = 1.0 / acc.s
    if acc.shift:
        try:
            d = math.ldexp(d, -acc.shift * _SHIFT_BITS)
        except OverflowError:  # cannot happen for shift > 0, kept for symmetry
            d = math.inf
    return d


def blocking_probability(
    params: PlatformParams,
    policy: PricePolicy,
    rf: ResponseFunction,
    lam: float,
) -> float:
    """Probability an arriving passenger is not served at all.

    A passenger is lost either to an empty driver queue or by declining the
    quoted price. For a flat price phi this is (1-f(phi)) + f(phi)*D,
    computed in exactly that affine form; for level-dependent prices it is
    D + sum_{n>=1} (1-f(phi(n))) * P(n).
    """
    acc = _series(params, policy, rf, lam)
    d = 1.0 / acc.s
    if acc.shift:
        d = math.ldexp(d, -acc.shift * _SHIFT_BITS)
    if policy.is_constant():
        f_const = eval_response(rf, policy.constant_price())
        return (1.0 - f_const) + f_const * d
    return d + acc.b_num / acc.s


def matching_revenue(
    params: PlatformParams,
    policy: PricePolicy,
    rf: ResponseFunction,
    lam: float,
) -> float:
    """Long-run revenue rate from accepted rides.

    Flat price: lam * f(phi) * phi * (1 - D). Level-dependent prices:
    sum_{n>=1} lam * f(phi(n)) * phi(n) * P(n).
    """
    acc = _series(params, policy, rf, lam)
    if policy.is_constant():
        phi = policy.constant_price()
        f_const = eval_response(rf, phi)
        d = 1.0 / acc.s
        if acc.shift:
            d = math.ldexp(d, -acc.shift * _SHIFT_BITS)
        return lam * f_const * phi * (1.0 - d)
    return acc.mr_num / acc.s
