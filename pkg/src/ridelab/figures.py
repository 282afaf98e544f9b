"""Figure rendering for the CLI report path.

Each CSV the CLI writes gets a PNG next to it. The CSV stays the
machine-readable contract; these plots are for eyeballing a sweep
without firing up a notebook.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "render_monopoly",
    "render_coop",
    "render_duopoly",
    "render_simulate",
    "render_cycle_verify",
]


def _col(rows, name):
    return [float("nan") if r[name] is None else float(r[name]) for r in rows]


def _save(fig, path: Path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_monopoly(rows, path: Path) -> None:
    betas = _col(rows, "beta")
    log_x = len(betas) > 1 and min(betas) > 0 and max(betas) / min(betas) > 30
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax1.plot(betas, _col(rows, "phi_star_exact"), "o-", ms=3, label="exact")
    ax1.axhline(rows[0]["phi_star_limit"], color="tab:red", ls="--", lw=1, label="limit")
    ax1.set_xlabel("beta")
    ax1.set_ylabel("optimal price")
    ax1.legend()
    ax2.plot(betas, _col(rows, "mr_exact"), "o-", ms=3, label="exact")
    ax2.axhline(rows[0]["mr_limit"], color="tab:red", ls="--", lw=1, label="limit")
    ax2.set_xlabel("beta")
    ax2.set_ylabel("optimal revenue rate")
    ax2.legend()
    if log_x:
        ax1.set_xscale("log")
        ax2.set_xscale("log")
    _save(fig, path)


def render_coop(rows, path: Path) -> None:
    betas = _col(rows, "beta")
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(betas, [100 * g for g in _col(rows, "price_gap")], "o-", ms=3, label="price gap %")
    ax.plot(betas, [100 * g for g in _col(rows, "mr_gap")], "s-", ms=3, label="revenue gap %")
    ax.axhline(0.0, color="gray", lw=0.8)
    if len(betas) > 1 and min(betas) > 0 and max(betas) / min(betas) > 30:
        ax.set_xscale("log")
    ax.set_xlabel("beta")
    ax.set_ylabel("merged vs standalone gap (%)")
    ax.legend()
    _save(fig, path)


def render_duopoly(rows, path: Path, metric: str) -> None:
    xs = _col(rows, "e_over_lambda")
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(xs, _col(rows, "phi_underbar"), ls=":", color="gray", lw=1, label="phi_underbar")
    ax.plot(xs, _col(rows, "phi_bar"), ls="--", color="gray", lw=1, label="phi_bar")
    ne_x = [x for x, r in zip(xs, rows) if r["outcome_kind"] == "nash-point"]
    ne_y = [r["phi1"] for r in rows if r["outcome_kind"] == "nash-point"]
    if ne_x:
        ax.plot(ne_x, ne_y, "o", ms=4, color="tab:blue", label="NE price")
    cyc = [(x, r) for x, r in zip(xs, rows) if r["outcome_kind"] == "equilibrium-cycle"]
    if cyc:
        cx = [x for x, _ in cyc]
        lo = [r["cycle_lo"] for _, r in cyc]
        hi = [r["cycle_hi"] for _, r in cyc]
        ax.fill_between(cx, lo, hi, alpha=0.25, color="tab:orange", label="cycle interval")
    eps = [(x, r) for x, r in zip(xs, rows) if r["outcome_kind"] == "epsilon-ne"]
    if eps:
        ax.plot(
            [x for x, _ in eps],
            [r["phi1"] for _, r in eps],
            "^",
            ms=4,
            color="tab:green",
            label="eps-NE price",
        )
    ax.set_xlabel("e / Lambda")
    ax.set_ylabel("price")
    ax.set_title(f"duopoly outcomes, metric {metric}")
    ax.legend(fontsize=8)
    _save(fig, path)


def render_simulate(rows, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 3.8))
    idx = list(range(len(rows)))
    for name, marker in (("D", "o"), ("B", "s"), ("MR", "^")):
        zs = []
        for r in rows:
            se = r[f"{name}_se"]
            gap = r[f"{name}_hat"] - r[f"{name}_analytic"]
            zs.append(gap / se if se and not math.isnan(se) and se > 0 else float("nan"))
        ax.plot(idx, zs, marker, ms=4, label=name)
    for y in (-3.0, 3.0):
        ax.axhline(y, color="tab:red", ls="--", lw=1)
    ax.axhline(0.0, color="gray", lw=0.8)
    ax.set_xlabel("parameter set")
    ax.set_ylabel("(simulated - analytic) / SE")
    ax.legend()
    _save(fig, path)


def render_cycle_verify(payoff, lo: float, hi: float, phi_h: float, passed: bool, path: Path) -> None:
    # payoff response to one platform parked at the interval midpoint;
    # the shaded band is the candidate cycle.
    mid = 0.5 * (lo + hi)
    n = 400
    xs = [phi_h * i / (n - 1) for i in range(n)]
    ys = [payoff(x, mid) for x in xs]
    fig, ax = plt.subplots(figsize=(6.5, 3.8))
    ax.plot(xs, ys, lw=1.2)
    ax.axvspan(lo, hi, alpha=0.2, color="tab:orange", label="interval")
    ax.set_xlabel("own price (other at interval midpoint)")
    ax.set_ylabel("payoff")
    ax.set_title("cycle verification: " + ("PASSED" if passed else "FAILED"))
    ax.legend()
    _save(fig, path)
