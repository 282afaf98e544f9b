"""Run configuration for the CLI: flat dotted key=value text files.

The format is a plain text file, one assignment per line::

    response.family = linear
    response.a = 0.1
    response.phi_h = 9.0
    rates.Lambda = 7.0
    rates.eta = 0.5
    rates.p = 0.5
    sweep.parameter = beta
    sweep.lo = 1e-3
    sweep.hi = 1.0
    sweep.points = 25
    sweep.log = true

Blank lines and lines starting with '#' are skipped. Every key is
checked against the schema; anything unrecognized is an error naming the
offending key, as is a missing required key or a value of the wrong
type. The point is that a typo in an experiment file fails loudly
instead of silently running with a default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .errors import ConfigError, DomainError
from .model import PlatformParams, ResponseFunction, validate_response_function
from .sim import SimConfig

__all__ = ["RunConfig", "SweepSpec", "parse_kv_text", "build_config", "load_config"]

_FAMILIES = ("linear", "square")
_SWEEP_PARAMETERS = ("beta", "e_over_lambda")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter sweep: which knob, its range, how many points."""

    parameter: str
    lo: float
    hi: float
    points: int
    log: bool

    def values(self) -> list[float]:
        if self.points == 1:
            return [self.lo]
        if self.log:
            ratio = (self.hi / self.lo) ** (1.0 / (self.points - 1))
            vals = [self.lo * ratio**i for i in range(self.points)]
        else:
            step = (self.hi - self.lo) / (self.points - 1)
            vals = [self.lo + step * i for i in range(self.points)]
        vals[-1] = self.hi  # endpoint exact regardless of rounding
        return vals


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration shared by every CLI subcommand."""

    family: str
    a: float
    phi_h: float
    Lambda: float
    eta: float
    p: float
    nu: float
    beta: float
    lambda1: float
    sweep: SweepSpec
    sim: Optional[SimConfig]
    epsilon: Optional[float]
    policy_phi: Optional[float]
    out_dir: str

    @property
    def e(self) -> float:
        return self.eta / (1.0 - self.p)

    def response(self) -> ResponseFunction:
        if self.family == "linear":
            return ResponseFunction.linear(self.a, phi_h=self.phi_h)
        return ResponseFunction.square(self.a, phi_h=self.phi_h)

    def params(self, beta: Optional[float] = None, eta: Optional[float] = None) -> PlatformParams:
        return PlatformParams(
            Lambda=self.Lambda,
            eta=self.eta if eta is None else eta,
            p=self.p,
            nu=self.nu,
            beta=self.beta if beta is None else beta,
            phi_h=self.phi_h,
        )


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse 'key = value' lines into a string map, tracking duplicates."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key}")
        out[key] = value
    return out


def _as_float(key: str, raw: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if math.isnan(v):
        raise ConfigError(f"{key}: must not be NaN")
    return v


def _as_int(key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None


def _as_bool(key: str, raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {raw!r}")


def _as_choice(key: str, raw: str, choices: tuple[str, ...]) -> str:
    if raw not in choices:
        raise ConfigError(f"{key}: expected one of {'/'.join(choices)}, got {raw!r}")
    return raw


_KNOWN_KEYS = frozenset(
    [
        "response.family",
        "response.a",
        "response.phi_h",
        "rates.Lambda",
        "rates.eta",
        "rates.p",
        "rates.nu",
        "rates.beta",
        "rates.lambda1",
        "sweep.parameter",
        "sweep.lo",
        "sweep.hi",
        "sweep.points",
        "sweep.log",
        "sim.seed",
        "sim.horizon",
        "sim.warmup",
        "sim.replications",
        "game.epsilon",
        "policy.phi",
        "output.dir",
    ]
)

_REQUIRED_KEYS = (
    "response.family",
    "response.a",
    "response.phi_h",
    "rates.Lambda",
    "rates.eta",
    "rates.p",
    "sweep.parameter",
    "sweep.lo",
    "sweep.hi",
    "sweep.points",
)

_SIM_KEYS = ("sim.seed", "sim.horizon", "sim.warmup", "sim.replications")


def build_config(raw: dict[str, str]) -> RunConfig:
    """Validate a raw key->string map and assemble a RunConfig."""
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key: {', '.join(unknown)}")
    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing required config key: {', '.join(missing)}")

    family = _as_choice("response.family", raw["response.family"], _FAMILIES)
    a = _as_float("response.a", raw["response.a"])
    phi_h = _as_float("response.phi_h", raw["response.phi_h"])
    try:
        rf = (
            ResponseFunction.linear(a, phi_h=phi_h)
            if family == "linear"
            else ResponseFunction.square(a, phi_h=phi_h)
        )
    except DomainError as ex:
        raise ConfigError(f"response.a / response.phi_h: {ex}") from ex
    report = validate_response_function(rf)
    if not report.passed:
        raise ConfigError(
            f"response.family: curve fails the response assumptions ({report!r})"
        )

    Lambda = _as_float("rates.Lambda", raw["rates.Lambda"])
    eta = _as_float("rates.eta", raw["rates.eta"])
    p = _as_float("rates.p", raw["rates.p"])
    nu = _as_float("rates.nu", raw.get("rates.nu", "1.0"))
    beta = _as_float("rates.beta", raw.get("rates.beta", "1.0"))
    if not (Lambda > 0.0):
        raise ConfigError(f"rates.Lambda: must be positive, got {Lambda!r}")
    if not (eta > 0.0):
        raise ConfigError(f"rates.eta: must be positive, got {eta!r}")
    try:
        PlatformParams(Lambda=Lambda, eta=eta, p=p, nu=nu, beta=beta, phi_h=phi_h)
    except DomainError as ex:
        raise ConfigError(f"rates.*: {ex}") from ex
    lambda1 = _as_float("rates.lambda1", raw.get("rates.lambda1", repr(0.5 * Lambda)))
    if lambda1 < 0.0:
        raise ConfigError(f"rates.lambda1: must be >= 0, got {lambda1!r}")

    parameter = _as_choice("sweep.parameter", raw["sweep.parameter"], _SWEEP_PARAMETERS)
    lo = _as_float("sweep.lo", raw["sweep.lo"])
    hi = _as_float("sweep.hi", raw["sweep.hi"])
    points = _as_int("sweep.points", raw["sweep.points"])
    log = _as_bool("sweep.log", raw.get("sweep.log", "false"))
    if points < 1:
        raise ConfigError(f"sweep.points: must be >= 1, got {points}")
    if points >= 2 and not (lo < hi):
        raise ConfigError(f"sweep.lo/sweep.hi: need lo < hi, got {lo!r} >= {hi!r}")
    if points == 1 and lo > hi:
        raise ConfigError(f"sweep.lo/sweep.hi: need lo <= hi, got {lo!r} > {hi!r}")
    if log and not (lo > 0.0):
        raise ConfigError(f"sweep.lo: log spacing needs lo > 0, got {lo!r}")
    if parameter == "beta" and lo < 0.0:
        raise ConfigError(f"sweep.lo: beta sweep needs lo >= 0, got {lo!r}")
    if parameter == "e_over_lambda" and not (lo > 0.0):
        raise ConfigError(f"sweep.lo: e_over_lambda sweep needs lo > 0, got {lo!r}")
    sweep = SweepSpec(parameter=parameter, lo=lo, hi=hi, points=points, log=log)

    sim: Optional[SimConfig] = None
    if any(k in raw for k in _SIM_KEYS):
        seed = _as_int("sim.seed", raw.get("sim.seed", "0"))
        horizon = _as_float("sim.horizon", raw.get("sim.horizon", "1e5"))
        warmup = _as_float("sim.warmup", raw.get("sim.warmup", repr(0.1 * horizon)))
        replications = _as_int("sim.replications", raw.get("sim.replications", "1"))
        try:
            sim = SimConfig(seed=seed, horizon=horizon, warmup=warmup, replications=replications)
        except DomainError as ex:
            raise ConfigError(f"sim.*: {ex}") from ex

    epsilon: Optional[float] = None
    if "game.epsilon" in raw:
        epsilon = _as_float("game.epsilon", raw["game.epsilon"])
        if not (epsilon > 0.0):
            raise ConfigError(f"game.epsilon: must be positive, got {epsilon!r}")

    policy_phi: Optional[float] = None
    if "policy.phi" in raw:
        policy_phi = _as_float("policy.phi", raw["policy.phi"])
        if not (0.0 <= policy_phi <= phi_h):
            raise ConfigError(
                f"policy.phi: must lie in [0, phi_h={phi_h!r}], got {policy_phi!r}"
            )

    out_dir = raw.get("output.dir", "out")

    return RunConfig(
        family=family,
        a=a,
        phi_h=phi_h,
        Lambda=Lambda,
        eta=eta,
        p=p,
        nu=nu,
        beta=beta,
        lambda1=lambda1,
        sweep=sweep,
        sim=sim,
        epsilon=epsilon,
        policy_phi=policy_phi,
        out_dir=out_dir,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as ex:
        raise ConfigError(f"cannot read config file {p}: {ex}") from ex
    return build_config(parse_kv_text(text))
