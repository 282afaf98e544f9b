"""Command line interface: sweeps, simulation batteries, cycle checks.

Subcommands
-----------
monopoly      optimal price and revenue across a beta sweep, exact vs limit,
              plus a merged-vs-standalone cooperation comparison
duopoly       equilibrium outcomes across an e/Lambda sweep (--metric D | B)
simulate      randomized simulation battery cross-checked against the
              analytic stationary formulas
cycle-verify  check an interval for the two equilibrium-cycle conditions

Every command reads a flat key=value config (--config), writes CSV files
with a companion PNG into the output directory, and is deterministic:
identical config and seed give byte-identical CSV.

Exit codes: 0 success, 1 config error, 2 numeric failure, 3 verification
or oracle mismatch.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import figures
from .bcmp import blocking_probability, driver_unavailability, matching_revenue
from .config import RunConfig, load_config
from .equilibria import (
    cooperation_comparison,
    duopoly_B_equilibrium,
    duopoly_D_equilibrium,
    limit_B_payoff,
    monopoly_optimum_exact,
    monopoly_optimum_limit,
    verify_equilibrium_cycle,
)
from .errors import (
    AssumptionViolationError,
    ConfigError,
    DomainError,
    InsufficientDataError,
    RangeError,
    TruncationOverflowError,
    UnsupportedRegimeError,
)
from .model import PricePolicy, thresholds
from .sim import SimConfig, simulate_platform

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERIC = 2
EXIT_MISMATCH = 3

_NAN = float("nan")


# ----------------------------------------------------------- plumbing


def _thread_cap() -> int:
    raw = os.environ.get("RIDE_LAB_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"RIDE_LAB_THREADS: expected an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"RIDE_LAB_THREADS: must be >= 1, got {n}")
    return n


def _pmap(fn, xs):
    """Map preserving order; sweep points are independent pure calls."""
    xs = list(xs)
    if len(xs) <= 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=min(_thread_cap(), len(xs))) as ex:
        return list(ex.map(fn, xs))


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "1" if v else "0"
    if v is None:
        return "nan"
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if v == 0.0:
        v = 0.0  # never print the sign of a negative zero
    return format(v, ".10g")


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[dict]) -> None:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(_fmt(r[h]) for h in header))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def _nn(v: Optional[float]) -> float:
    return _NAN if v is None else v


# ----------------------------------------------------------- monopoly


_MONOPOLY_HEADER = ["beta", "phi_star_exact", "mr_exact", "phi_star_limit", "mr_limit"]
_COOP_HEADER = [
    "beta",
    "mono_phi",
    "mono_mr",
    "coop_phi",
    "coop_mr_per_platform",
    "price_gap",
    "mr_gap",
]


def cmd_monopoly(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.sweep.parameter != "beta":
        raise ConfigError(
            f"sweep.parameter: monopoly sweeps beta, got {cfg.sweep.parameter!r}"
        )
    if not (cfg.sweep.lo > 0.0):
        raise ConfigError(
            "sweep.lo: the exact stationary route needs beta > 0; "
            "the limit columns already cover beta = 0"
        )
    rf = cfg.response()
    e = cfg.e
    phi_limit, mr_limit = monopoly_optimum_limit(rf, e, cfg.Lambda)
    betas = cfg.sweep.values()

    def row(beta: float) -> dict:
        phi, mr = monopoly_optimum_exact(cfg.params(beta=beta), rf)
        return {
            "beta": beta,
            "phi_star_exact": phi,
            "mr_exact": mr,
            "phi_star_limit": phi_limit,
            "mr_limit": mr_limit,
        }

    rows = _pmap(row, betas)
    _write_csv(out_dir / "monopoly.csv", _MONOPOLY_HEADER, rows)
    figures.render_monopoly(rows, out_dir / "monopoly.png")

    def coop_row(beta: float) -> dict:
        c = cooperation_comparison(rf, e, cfg.Lambda, beta, nu=cfg.nu)
        return {
            "beta": c.beta,
            "mono_phi": c.mono_phi,
            "mono_mr": c.mono_mr,
            "coop_phi": c.coop_phi,
            "coop_mr_per_platform": c.coop_mr_per_platform,
            "price_gap": c.price_gap,
            "mr_gap": c.mr_gap,
        }

    coop_rows = _pmap(coop_row, betas)
    _write_csv(out_dir / "coop_comparison.csv", _COOP_HEADER, coop_rows)
    figures.render_coop(coop_rows, out_dir / "coop_comparison.png")
    return EXIT_OK


# ----------------------------------------------------------- duopoly


_DUOPOLY_HEADER = [
    "e_over_lambda",
    "outcome_kind",
    "phi1",
    "phi2",
    "cycle_lo",
    "cycle_hi",
    "mr1",
    "mr2",
    "phi_underbar",
    "phi_bar",
    "phi_P_star",
    "phi_m_star",
    "phi_d_root",
    "phi_L_star",
    "phi_U_star",
]


def cmd_duopoly(cfg: RunConfig, metric: str, out_dir: Path) -> int:
    if cfg.sweep.parameter != "e_over_lambda":
        raise ConfigError(
            f"sweep.parameter: duopoly sweeps e_over_lambda, got {cfg.sweep.parameter!r}"
        )
    rf = cfg.response()
    Lambda = cfg.Lambda
    ratios = cfg.sweep.values()
    if metric == "B" and cfg.epsilon is None and any(r * Lambda >= Lambda for r in ratios):
        raise ConfigError(
            "game.epsilon: required for metric B once the sweep reaches e/Lambda >= 1"
        )

    def row(ratio: float) -> dict:
        ee = ratio * Lambda
        th = thresholds(rf, ee, Lambda)
        if metric == "D":
            out = duopoly_D_equilibrium(rf, ee, Lambda)
        else:
            out = duopoly_B_equilibrium(rf, ee, Lambda, epsilon=cfg.epsilon)
        phi1, phi2 = out.phi1, out.phi2
        if out.kind == "epsilon-ne":
            phi1 = phi2 = out.delta
        pay = out.payoffs or (None, None)
        return {
            "e_over_lambda": ratio,
            "outcome_kind": out.kind,
            "phi1": _nn(phi1),
            "phi2": _nn(phi2),
            "cycle_lo": _nn(out.cycle_lo),
            "cycle_hi": _nn(out.cycle_hi),
            "mr1": _nn(pay[0]),
            "mr2": _nn(pay[1]),
            "phi_underbar": th.phi_underbar,
            "phi_bar": th.phi_bar,
            "phi_P_star": th.phi_P_star,
            "phi_m_star": th.phi_m_star,
            "phi_d_root": _nn(th.phi_d_zero.phi),
            "phi_L_star": th.phi_L_star,
            "phi_U_star": th.phi_U_star,
        }

    rows = _pmap(row, ratios)
    name = f"duopoly_{metric}"
    _write_csv(out_dir / f"{name}.csv", _DUOPOLY_HEADER, rows)
    figures.render_duopoly(rows, out_dir / f"{name}.png", metric)
    return EXIT_OK


# ----------------------------------------------------------- simulate


_SIM_HEADER = [
    "beta",
    "phi",
    "lam",
    "D_analytic",
    "B_analytic",
    "MR_analytic",
    "D_hat",
    "B_hat",
    "MR_hat",
    "D_se",
    "B_se",
    "MR_se",
    "D_pass",
    "B_pass",
    "MR_pass",
    "all_pass",
]


def cmd_simulate(cfg: RunConfig, out_dir: Path, seed_override: Optional[int]) -> int:
    if cfg.sim is None:
        raise ConfigError("sim.horizon: a sim block is required for the simulate command")
    if cfg.sweep.parameter != "beta":
        raise ConfigError(
            f"sweep.parameter: simulate randomizes beta, got {cfg.sweep.parameter!r}"
        )
    if not (cfg.sweep.lo > 0.0):
        raise ConfigError(
            "sweep.lo: the analytic reference needs beta > 0 throughout the range"
        )
    rf = cfg.response()
    seed = cfg.sim.seed if seed_override is None else seed_override
    k = cfg.sweep.points
    rng = np.random.default_rng(seed)
    if cfg.sweep.log:
        betas = np.exp(
            rng.uniform(math.log(cfg.sweep.lo), math.log(cfg.sweep.hi), size=k)
        ).tolist()
    else:
        betas = rng.uniform(cfg.sweep.lo, cfg.sweep.hi, size=k).tolist()
    if cfg.policy_phi is not None:
        phis = [cfg.policy_phi] * k
    else:
        phis = rng.uniform(0.2 * cfg.phi_h, 0.9 * cfg.phi_h, size=k).tolist()
    row_seeds = rng.integers(0, 2**63, size=k).tolist()
    lam = cfg.lambda1

    def row(args) -> dict:
        beta, phi, row_seed = args
        params = cfg.params(beta=beta)
        policy = PricePolicy.static(phi)
        try:
            d_ref = driver_unavailability(params, policy, rf, lam)
            b_ref = blocking_probability(params, policy, rf, lam)
            mr_ref = matching_revenue(params, policy, rf, lam)
        except (UnsupportedRegimeError, DomainError):
            d_ref = b_ref = mr_ref = _NAN
        sim_cfg = SimConfig(
            seed=row_seed,
            horizon=cfg.sim.horizon,
            warmup=cfg.sim.warmup,
            replications=cfg.sim.replications,
        )
        try:
            est = simulate_platform(params, policy, rf, lam, sim_cfg)
            hats = (est.D_hat, est.B_hat, est.MR_hat)
            ses = (est.D_se, est.B_se, est.MR_se)
        except InsufficientDataError:
            hats = (_NAN, _NAN, _NAN)
            ses = (_NAN, _NAN, _NAN)
        refs = (d_ref, b_ref, mr_ref)
        passes = tuple(
            math.isfinite(h) and math.isfinite(s) and abs(h - r) <= 3.0 * s
            for r, h, s in zip(refs, hats, ses)
        )
        return {
            "beta": beta,
            "phi": phi,
            "lam": lam,
            "D_analytic": refs[0],
            "B_analytic": refs[1],
            "MR_analytic": refs[2],
            "D_hat": hats[0],
            "B_hat": hats[1],
            "MR_hat": hats[2],
            "D_se": ses[0],
            "B_se": ses[1],
            "MR_se": ses[2],
            "D_pass": passes[0],
            "B_pass": passes[1],
            "MR_pass": passes[2],
            "all_pass": all(passes),
        }

    rows = _pmap(row, list(zip(betas, phis, row_seeds)))
    _write_csv(out_dir / "simulate.csv", _SIM_HEADER, rows)
    figures.render_simulate(rows, out_dir / "simulate.png")
    return EXIT_OK if all(r["all_pass"] for r in rows) else EXIT_MISMATCH


# ------------------------------------------------------- cycle-verify


_CYCLE_HEADER = [
    "lo",
    "hi",
    "stable",
    "cyclic",
    "passed",
    "outside_checked",
    "pairs_checked",
    "stab_cx_inside",
    "stab_cx_outside",
    "cyc_cx_1",
    "cyc_cx_2",
]


def cmd_cycle_verify(cfg: RunConfig, lo: float, hi: float, out_dir: Path) -> int:
    rf = cfg.response()
    if not (0.0 <= lo < hi <= rf.phi_h):
        raise ConfigError(
            f"--lo/--hi: need 0 <= lo < hi <= phi_h={rf.phi_h!r}, got ({lo!r}, {hi!r})"
        )
    e = cfg.e
    th = thresholds(rf, e, cfg.Lambda)
    payoff = limit_B_payoff(rf, e, cfg.Lambda)
    rep = verify_equilibrium_cycle(
        payoff,
        lo,
        hi,
        rf.phi_h,
        grid_n=100,
        extra_candidates=(
            th.phi_L_star,
            th.phi_U_star,
            th.phi_underbar,
            th.phi_bar,
            th.phi_m_star,
        ),
    )
    stab_cx = rep.stability_counterexample or (None, None)
    cyc_cx = rep.cyclicity_counterexample or (None, None)
    row = {
        "lo": lo,
        "hi": hi,
        "stable": rep.stable,
        "cyclic": rep.cyclic,
        "passed": rep.passed,
        "outside_checked": rep.outside_checked,
        "pairs_checked": rep.pairs_checked,
        "stab_cx_inside": _nn(stab_cx[0]),
        "stab_cx_outside": _nn(stab_cx[1]),
        "cyc_cx_1": _nn(cyc_cx[0]),
        "cyc_cx_2": _nn(cyc_cx[1]),
    }
    _write_csv(out_dir / "cycle_verify.csv", _CYCLE_HEADER, [row])
    figures.render_cycle_verify(
        payoff, lo, hi, rf.phi_h, rep.passed, out_dir / "cycle_verify.png"
    )
    if not rep.passed:
        print(
            f"cycle verification failed: stable={rep.stable} cyclic={rep.cyclic}",
            file=sys.stderr,
        )
        return EXIT_MISMATCH
    return EXIT_OK


# ----------------------------------------------------------- argparse


class _Parser(argparse.ArgumentParser):
    """Argparse variant whose usage errors map onto the config exit code."""

    def error(self, message):  # noqa: D102 - argparse hook
        raise ConfigError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="path to key=value config file")
    common.add_argument("--out", default=None, help="output directory (overrides output.dir)")
    common.add_argument("--seed", type=int, default=None, help="override sim.seed")

    parser = _Parser(prog="ridelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("monopoly", parents=[common], help="beta sweep of the single-platform optimum")
    p_duo = sub.add_parser("duopoly", parents=[common], help="e/Lambda sweep of game outcomes")
    p_duo.add_argument("--metric", choices=["D", "B"], required=True)
    sub.add_parser("simulate", parents=[common], help="randomized simulation battery")
    p_cv = sub.add_parser("cycle-verify", parents=[common], help="check a candidate cycle interval")
    p_cv.add_argument("--lo", type=float, required=True)
    p_cv.add_argument("--hi", type=float, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        _thread_cap()  # reject a malformed RIDE_LAB_THREADS before any work
        cfg = load_config(args.config)
        out_dir = Path(args.out) if args.out is not None else Path(cfg.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "monopoly":
            return cmd_monopoly(cfg, out_dir)
        if args.command == "duopoly":
            return cmd_duopoly(cfg, args.metric, out_dir)
        if args.command == "simulate":
            return cmd_simulate(cfg, out_dir, args.seed)
        return cmd_cycle_verify(cfg, args.lo, args.hi, out_dir)
    except ConfigError as ex:
        print(f"config error: {ex}", file=sys.stderr)
        return EXIT_CONFIG
    except (
        TruncationOverflowError,
        RangeError,
        DomainError,
        AssumptionViolationError,
        UnsupportedRegimeError,
    ) as ex:
        print(f"numeric failure: {ex}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
