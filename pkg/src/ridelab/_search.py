"""Scalar search primitives: grid-bracketed golden-section maximization and bisection.

These are deliberately plain implementations. The callers all optimize
unimodal (concave) objectives or find roots of monotone functions on a
bounded interval, so nothing cleverer is warranted and determinism is easy
to reason about.
"""
from __future__ import annotations

import math
from typing import Callable

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi ~ 0.618
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2 ~ 0.382


def golden_max(
    fun: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = 1e-10,
) -> tuple[float, float]:
    """Maximize a unimodal ``fun`` on [lo, hi] by golden-section search.

    Returns ``(x, fun(x))`` with the interval narrowed below ``xtol``. The
    returned point is the best point actually evaluated, so the value is
    never an interpolation.
    """
    if hi < lo:
        lo, hi = hi, lo
    a, b = lo, hi
    h = b - a
    if h <= xtol:
        x = 0.5 * (a + b)
        return x, fun(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = fun(c)
    fd = fun(d)
    while h > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = fun(d)
    if fc >= fd:
        return c, fc
    return d, fd


def grid_golden_max(
    fun: Callable[[float], float],
    lo: float,
    hi: float,
    grid_n: int = 64,
    xtol: float = 1e-10,
) -> tuple[float, float]:
    """Maximize ``fun`` on [lo, hi]: coarse grid scan, then golden refinement.

    The grid pre-scan picks the bracket around the best grid point; the
    golden stage refines inside that bracket. Works for any continuous
    function that is unimodal at the grid resolution. Ties on the grid go to
    the smaller abscissa, which keeps results deterministic.
    """
    if grid_n < 3:
        raise ValueError("grid_n must be at least 3")
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        return lo, fun(lo)
    step = (hi - lo) / (grid_n - 1)
    best_i = 0
    best_x = lo
    best_f = fun(lo)
    for i in range(1, grid_n):
        x = lo + i * step if i < grid_n - 1 else hi
        fx = fun(x)
        if fx > best_f:
            best_i, best_x, best_f = i, x, fx
    a = lo if best_i == 0 else lo + (best_i - 1) * step
    b = hi if best_i >= grid_n - 2 else lo + (best_i + 1) * step
    x, fx = golden_max(fun, a, b, xtol=xtol)
    if best_f > fx:
        return best_x, best_f
    return x, fx


def bisect_root(
    fun: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    f_lo: float | None = None,
    f_hi: float | None = None,
    xtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Find a sign change of ``fun`` on [lo, hi] by plain bisection.

    Requires fun(lo) and fun(hi) to have opposite (or zero) signs; either
    endpoint value may be passed in to save an evaluation. The bracket is
    halved until it is narrower than ``xtol`` or ``max_iter`` is hit, and the
    midpoint of the final bracket is returned.
    """
    a, b = float(lo), float(hi)
    fa = fun(a) if f_lo is None else f_lo
    fb = fun(b) if f_hi is None else f_hi
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise ValueError("bisect_root: no sign change on the bracket")
    for _ in range(max_iter):
        if (b - a) <= xtol:
            break
        m = 0.5 * (a + b)
        fm = fun(m)
        if fm == 0.0:
            return m
        if (fm > 0.0) == (fa > 0.0):
            a, fa = m, fm
        else:
            b, fb = m, fm
    return 0.5 * (a + b)
