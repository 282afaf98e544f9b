"""Domain types for a two-sided ride-hailing platform market.

Holds the passenger price-response families, the platform rate bundle, price
policies (flat or queue-length dependent), and the closed-form price
thresholds that organize the competitive analysis: the demand-saturation
price ``phi_underbar`` (below it a platform is supply-constrained), the
spill price ``phi_bar`` (above it an undercut rival absorbs all demand), the
revenue-optimal price ``phi_P_star``, the residual-demand optimum
``phi_m_star``, the stationarity root ``phi_d_zero``, and the price-cycle
endpoints ``phi_L_star``/``phi_U_star``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from ._search import bisect_root, grid_golden_max
from .errors import DomainError, RangeError

__all__ = [
    "ResponseFunction",
    "PlatformParams",
    "PricePolicy",
    "ThresholdSet",
    "DZeroRoot",
    "ObjectiveValues",
    "ValidationReport",
    "eval_response",
    "eval_f_prime",
    "eval_f_inverse",
    "objective_values",
    "thresholds",
    "validate_response_function",
]


@dataclass(frozen=True)
class ResponseFunction:
    """Passenger price-response curve f on [0, phi_h].

    f(phi) is the probability that a passenger quoted price phi accepts the
    ride. Valid curves satisfy f(0) = 1, 0 < f <= 1, strictly decreasing,
    concave. Two parametric families are built in; arbitrary curves can be
    wrapped with `custom`, in which case the caller supplies the derivative
    and the inverse as well.
    """

    family: str  # "linear" | "square" | "custom"
    a: float = 0.0
    phi_h: float = 1.0
    f: Optional[Callable[[float], float]] = None
    f_prime: Optional[Callable[[float], float]] = None
    f_inverse: Optional[Callable[[float], float]] = None

    @classmethod
    def linear(cls, a: float, phi_h: float) -> "ResponseFunction":
        """f(phi) = 1 - a*phi. Requires a*phi_h < 1 so f stays positive."""
        _check_family_params(a, phi_h)
        return cls(family="linear", a=a, phi_h=phi_h)

    @classmethod
    def square(cls, a: float, phi_h: float) -> "ResponseFunction":
        """f(phi) = 1 - (a*phi)^2. Requires a*phi_h < 1 so f stays positive."""
        _check_family_params(a, phi_h)
        return cls(family="square", a=a, phi_h=phi_h)

    @classmethod
    def custom(
        cls,
        f: Callable[[float], float],
        f_prime: Callable[[float], float],
        f_inverse: Callable[[float], float],
        phi_h: float,
    ) -> "ResponseFunction":
        """Wrap caller-supplied f, f', and f^-1 on [0, phi_h].

        No symbolic checking is attempted; run
        :func:`validate_response_function` to probe the assumptions
        numerically.
        """
        if not (phi_h > 0.0) or not math.isfinite(phi_h):
            raise DomainError("phi_h must be positive and finite")
        return cls(
            family="custom", a=math.nan, phi_h=phi_h,
            f=f, f_prime=f_prime, f_inverse=f_inverse,
        )


def _check_family_params(a: float, phi_h: float) -> None:
    if not (phi_h > 0.0) or not math.isfinite(phi_h):
        raise DomainError("phi_h must be positive and finite")
    if not (a > 0.0) or not math.isfinite(a):
        raise DomainError("sensitivity a must be positive and finite")
    if a * phi_h >= 1.0:
        raise DomainError(
            "need a*phi_h < 1 so the response stays positive on [0, phi_h]"
        )


def eval_response(rf: ResponseFunction, phi: float) -> float:
    """Evaluate f(phi) for phi in [0, phi_h]. Raises DomainError outside."""
    if not (0.0 <= phi <= rf.phi_h):
        raise DomainError(f"price {phi!r} outside [0, {rf.phi_h}]")
    if rf.family == "linear":
        return 1.0 - rf.a * phi
    if rf.family == "square":
        return 1.0 - (rf.a * phi) ** 2
    assert rf.f is not None
    return rf.f(phi)


def eval_f_prime(rf: ResponseFunction, phi: float) -> float:
    """Evaluate f'(phi) for phi in [0, phi_h]."""
    if not (0.0 <= phi <= rf.phi_h):
        raise DomainError(f"price {phi!r} outside [0, {rf.phi_h}]")
    if rf.family == "linear":
        return -rf.a
    if rf.family == "square":
        return -2.0 * rf.a * rf.a * phi
    assert rf.f_prime is not None
    return rf.f_prime(phi)


def eval_f_inverse(rf: ResponseFunction, y: float) -> float:
    """Price phi in [0, phi_h] with f(phi) = y.

    The attainable range is (f(phi_h), 1]; y outside it (up to a hair of
    rounding at the bottom end) raises RangeError. The result round-trips
    through :func:`eval_response` to 1e-10.
    """
    f_min = eval_response(rf, rf.phi_h)
    if not (f_min - 1e-12 <= y <= 1.0):
        raise RangeError(f"response level {y!r} outside ({f_min}, 1]")
    phi = _inverse_unbounded(rf, y)
    if phi < 0.0:
        phi = 0.0
    elif phi > rf.phi_h:
        phi = rf.phi_h
    return phi


def _inverse_unbounded(rf: ResponseFunction, y: float) -> float:
    """Inverse of f without the [0, phi_h] clamp (thresholds may exceed the cap)."""
    if rf.family == "linear":
        return (1.0 - y) / rf.a
    if rf.family == "square":
        return math.sqrt(max(0.0, 1.0 - y)) / rf.a
    assert rf.f_inverse is not None
    return rf.f_inverse(y)


@dataclass(frozen=True)
class PlatformParams:
    """Rate bundle for one platform.

    Lambda is the aggregate passenger arrival rate of the whole market (the
    platform itself serves whatever share the split assigns). eta is the
    dedicated driver arrival rate, p the probability a driver rejoins after
    finishing a ride or break, nu the ride/break completion rate, beta the
    per-driver abandonment rate while waiting. The effective driver supply
    rate is e = eta/(1-p), accounting for geometric rejoins.
    """

    Lambda: float
    eta: float
    p: float
    nu: float
    beta: float
    phi_h: float

    def __post_init__(self) -> None:
        for name in ("Lambda", "eta", "nu", "beta"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
        if not (0.0 <= self.p < 1.0):
            raise DomainError(f"rejoin probability p must be in [0, 1), got {self.p!r}")
        if not (self.phi_h > 0.0) or not math.isfinite(self.phi_h):
            raise DomainError("phi_h must be positive and finite")

    @property
    def e(self) -> float:
        """Effective driver rate eta/(1-p)."""
        return self.eta / (1.0 - self.p)

    @classmethod
    def from_effective_rate(
        cls,
        e: float,
        *,
        Lambda: float,
        nu: float,
        beta: float,
        phi_h: float,
        p: float = 0.0,
    ) -> "PlatformParams":
        """Build params with a target effective rate e (eta = e*(1-p))."""
        return cls(Lambda=Lambda, eta=e * (1.0 - p), p=p, nu=nu, beta=beta, phi_h=phi_h)


@dataclass(frozen=True)
class PricePolicy:
    """Quoted price as a function of the waiting-driver count n >= 1.

    Static policies quote one flat price. Dynamic policies hold a vector of
    prices for n = 1..len(values) and a tail price for every larger n.
    """

    kind: str  # "static" | "dynamic"
    phi: float = 0.0
    values: tuple[float, ...] = field(default=())
    tail: float = 0.0

    @classmethod
    def static(cls, phi: float) -> "PricePolicy":
        if not math.isfinite(phi) or phi < 0.0:
            raise DomainError(f"price must be finite and >= 0, got {phi!r}")
        return cls(kind="static", phi=phi)

    @classmethod
    def dynamic(cls, values, tail: float) -> "PricePolicy":
        vals = tuple(float(v) for v in values)
        for v in vals + (tail,):
            if not math.isfinite(v) or v < 0.0:
                raise DomainError(f"price must be finite and >= 0, got {v!r}")
        return cls(kind="dynamic", values=vals, tail=float(tail))

    def price_at(self, n: int) -> float:
        """Price quoted when n waiting drivers are present (n >= 1)."""
        if n < 1:
            raise DomainError("prices are quoted only when drivers wait (n >= 1)")
        if self.kind == "static":
            return self.phi
        if n <= len(self.values):
            return self.values[n - 1]
        return self.tail

    def is_constant(self) -> bool:
        """True when every queue length sees the same price."""
        if self.kind == "static":
            return True
        return all(v == self.tail for v in self.values)

    def constant_price(self) -> float:
        if self.kind == "static":
            return self.phi
        if not self.is_constant():
            raise DomainError("policy is not constant")
        return self.tail


@dataclass(frozen=True)
class ObjectiveValues:
    """The four scalar objectives the pricing analysis revolves around.

    P = f(phi)*phi            per-acceptance revenue curve
    M = (Lambda/2)*f(phi)*phi revenue at an even demand split
    m = (Lambda*f(phi)-e)*phi revenue on residual demand after the rival
                              serves e worth of it
    d = 2*f(phi)+phi*f'(phi)  stationarity expression whose root marks the
                              interior equilibrium price
    """

    P: float
    M: float
    m: float
    d: float


def objective_values(
    rf: ResponseFunction, e: float, Lambda: float, phi: float
) -> ObjectiveValues:
    """Evaluate P, M, m, d at one price. DomainError if phi is out of range."""
    fphi = eval_response(rf, phi)
    fp = eval_f_prime(rf, phi)
    return ObjectiveValues(
        P=fphi * phi,
        M=0.5 * Lambda * fphi * phi,
        m=(Lambda * fphi - e) * phi,
        d=2.0 * fphi + phi * fp,
    )


@dataclass(frozen=True)
class DZeroRoot:
    """Root of d on [0, phi_h], or a sentinel when d has no root there.

    d(0) = 2 for any valid response curve and d is strictly decreasing, so
    the root is unique when it exists. kind is "interior" (phi holds the
    root), "above-range" (d > 0 on the whole interval, root beyond phi_h),
    or "below-range" (d < 0 already at 0; unreachable for valid curves but
    kept for malformed custom ones).
    """

    kind: str
    phi: Optional[float] = None


@dataclass(frozen=True)
class ThresholdSet:
    """Closed-form price thresholds for effective supply e and demand Lambda.

    phi_underbar and phi_bar are inverse-response levels and may exceed
    phi_h when supply is scarce (they are 0 when the level exceeds 1, i.e.
    supply is abundant). The argmax fields are confined to [0, phi_h].
    """

    phi_underbar: float
    phi_bar: float
    phi_P_star: float
    phi_m_star: float
    phi_d_zero: DZeroRoot
    phi_L_star: float
    phi_U_star: float


def _argmax_concave(fun, dfun, lo, hi, *, grid_n: int, xtol: float) -> tuple[float, float]:
    """Argmax of a concave objective with a known derivative.

    The grid + golden-section pass brackets the maximum; a value-based search
    alone flattens out around sqrt(eps) of the optimum (the objective is
    locally quadratic), so when the derivative changes sign on [lo, hi] the
    result is polished by bisecting the derivative, which pins the argmax to
    near machine precision. Whichever candidate evaluates at least as well
    wins, so an inconsistent caller-supplied derivative cannot make things
    worse than the plain search.
    """
    x0, f0 = grid_golden_max(fun, lo, hi, grid_n=grid_n, xtol=xtol)
    d_lo, d_hi = dfun(lo), dfun(hi)
    if d_lo <= 0.0:
        cand = lo
    elif d_hi >= 0.0:
        cand = hi
    else:
        cand = bisect_root(dfun, lo, hi, f_lo=d_lo, f_hi=d_hi, xtol=1e-13 * max(1.0, hi))
    f_cand = fun(cand)
    # a few ulps of slack: near the optimum the values sit on a float plateau
    # and the golden point can "win" by rounding noise alone
    if f_cand >= f0 - 1e-12 * max(1.0, abs(f0)):
        return cand, f_cand
    return x0, f0


def thresholds(
    rf: ResponseFunction,
    e: float,
    Lambda: float,
    *,
    grid_n: int = 64,
    xtol: float = 1e-10,
) -> ThresholdSet:
    """Compute the threshold set for one (response, e, Lambda) triple.

    Each optimization-based entry is exact to well under 1e-8 (grid pre-scan
    plus golden-section refinement on the concave objective). The cycle
    endpoints satisfy e * phi_L_star == m(phi_U_star) by construction.
    """
    if not (e > 0.0) or not math.isfinite(e):
        raise DomainError(f"effective rate e must be positive, got {e!r}")
    if not (Lambda > 0.0) or not math.isfinite(Lambda):
        raise DomainError(f"Lambda must be positive, got {Lambda!r}")

    y_under = 2.0 * e / Lambda
    phi_under = 0.0 if y_under > 1.0 else _inverse_unbounded(rf, y_under)
    y_bar = e / Lambda
    phi_bar = 0.0 if y_bar > 1.0 else _inverse_unbounded(rf, y_bar)

    phi_P, _ = _argmax_concave(
        lambda x: eval_response(rf, x) * x,
        lambda x: eval_response(rf, x) + x * eval_f_prime(rf, x),
        0.0,
        rf.phi_h,
        grid_n=grid_n,
        xtol=xtol,
    )

    def m_of(x: float) -> float:
        return (Lambda * eval_response(rf, x) - e) * x

    phi_m, m_star = _argmax_concave(
        m_of,
        lambda x: Lambda * eval_response(rf, x) - e + Lambda * x * eval_f_prime(rf, x),
        0.0,
        rf.phi_h,
        grid_n=grid_n,
        xtol=xtol,
    )

    d0 = objective_values(rf, e, Lambda, 0.0).d
    dh = objective_values(rf, e, Lambda, rf.phi_h).d
    if d0 < 0.0:
        d_zero = DZeroRoot(kind="below-range")
    elif dh > 0.0:
        d_zero = DZeroRoot(kind="above-range")
    else:
        root = bisect_root(
            lambda x: objective_values(rf, e, Lambda, x).d,
            0.0,
            rf.phi_h,
            f_lo=d0,
            f_hi=dh,
            xtol=1e-12,
        )
        d_zero = DZeroRoot(kind="interior", phi=root)

    return ThresholdSet(
        phi_underbar=phi_under,
        phi_bar=phi_bar,
        phi_P_star=phi_P,
        phi_m_star=phi_m,
        phi_d_zero=d_zero,
        phi_L_star=m_star / e,
        phi_U_star=phi_m,
    )


@dataclass(frozen=True)
class ValidationReport:
    """Numeric probe of the response-curve assumptions on a grid.

    passed requires: f(0)=1, positivity, strictly decreasing, and weak
    concavity (second differences <= 0). Strict concavity is reported
    separately because the linear family is only weakly concave yet fully
    supported.
    """

    f0_is_one: bool
    positive: bool
    strictly_decreasing: bool
    weakly_concave: bool
    strictly_concave: bool
    grid_size: int

    @property
    def passed(self) -> bool:
        return (
            self.f0_is_one
            and self.positive
            and self.strictly_decreasing
            and self.weakly_concave
        )


def validate_response_function(rf: ResponseFunction, grid_size: int = 64) -> ValidationReport:
    """Check the response-curve assumptions on a uniform grid over [0, phi_h]."""
    if grid_size < 3:
        raise DomainError("grid_size must be at least 3")
    step = rf.phi_h / (grid_size - 1)
    xs = [i * step for i in range(grid_size - 1)] + [rf.phi_h]
    fs = [eval_response(rf, x) for x in xs]
    dfs = [eval_f_prime(rf, x) for x in xs]

    f0_ok = abs(fs[0] - 1.0) <= 1e-12
    pos_ok = all(v > 0.0 for v in fs)
    # the derivative may legitimately vanish at phi = 0 (e.g. the square
    # family), so strict negativity is demanded only away from the origin,
    # together with strictly decreasing values across the whole grid
    dec_ok = (
        dfs[0] <= 0.0
        and all(v < 0.0 for v in dfs[1:])
        and all(fs[i + 1] < fs[i] for i in range(len(fs) - 1))
    )
    second = [fs[i + 1] - 2.0 * fs[i] + fs[i - 1] for i in range(1, len(fs) - 1)]
    weak_ok = all(s <= 1e-12 for s in second)
    strict_ok = all(s < -1e-12 for s in second)
    return ValidationReport(
        f0_is_one=f0_ok,
        positive=pos_ok,
        strictly_decreasing=dec_ok,
        weakly_concave=weak_ok,
        strictly_concave=strict_ok,
        grid_size=grid_size,
    )
