"""Run configuration: INI-style ``key = value`` file with sections
``[rates] [solver] [network] [output]``.

Example::

    [rates]
    lambda = expscale(0.00113, 10.27)
    mu = expscale(0.000753333, -6.5)

    [solver]
    gamma = 0.4
    k_max = 7

Unknown sections or keys are errors.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import keychain, meanfield
from .errors import ConfigError, KeynodesError
from .rates import RatePair, parse_rate, preset


def _int(v):
    return int(v)


def _float(v):
    return float(v)


def _opt_float(v):
    return None if v.strip().lower() in ("", "none") else float(v)


def _mode(v):
    if v not in keychain.MODES:
        raise ValueError(f"mode must be one of {keychain.MODES}")
    return v


_SCHEMA = {
    "rates": {"preset": str, "lambda": str, "mu": str},
    "solver": {
        "gamma": _float, "k": _int, "k_min": _int, "k_max": _int, "mode": _mode,
        "rtol": _float, "atol": _float, "horizon": _opt_float,
        "eps_tail": _float, "t_max": _opt_float, "points": _int,
    },
    "network": {
        "n": _int, "m": _int, "replicates": _int, "seed": _int,
        "assortativity_target": _opt_float, "k": _int, "horizon": _opt_float,
        "threads": _int, "max_swaps": _int, "edgelist": str,
        "curve_points": _int, "curve_t_max": _opt_float,
    },
    "output": {"dir": str},
}


@dataclass(frozen=True)
class NetworkSection:
    n: int = 10_000
    m: int = 3
    replicates: int = 100
    seed: int = 0
    assortativity_target: float | None = None
    k: int | None = None
    horizon: float | None = None
    threads: int = 1
    max_swaps: int = 1_000_000
    edgelist: str | None = None
    curve_points: int = 41
    curve_t_max: float | None = None


@dataclass(frozen=True)
class RunConfig:
    rates: RatePair | None = None
    gamma: float = 0.4
    k: int | None = None
    k_min: int = 1
    k_max: int = keychain.DEFAULT_K_MAX
    mode: str = keychain.ABSORBING
    rtol: float = meanfield.DEFAULT_RTOL
    atol: float = meanfield.DEFAULT_ATOL
    horizon: float | None = None
    eps_tail: float = keychain.DEFAULT_EPS_TAIL
    t_max: float | None = None
    points: int = 201
    network: NetworkSection = field(default_factory=NetworkSection)
    out: Path | None = None

    def k_range(self) -> range:
        if self.k is not None:
            return range(self.k, self.k + 1)
        return range(self.k_min, self.k_max + 1)

    def require_rates(self) -> RatePair:
        if self.rates is None:
            raise ConfigError("no rates given: set [rates] preset, or lambda and mu")
        return self.rates

    def validate(self) -> "RunConfig":
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.rtol <= 0 or self.atol <= 0 or self.eps_tail <= 0:
            raise ConfigError("tolerances must be positive")
        if self.k is not None and self.k < 1:
            raise ConfigError("k must be >= 1")
        if not 1 <= self.k_min <= self.k_max:
            raise ConfigError("need 1 <= k_min <= k_max")
        if self.points < 2:
            raise ConfigError("points must be >= 2")
        return self


def _rates_from(section: dict) -> RatePair | None:
    if "preset" in section:
        if "lambda" in section or "mu" in section:
            raise ConfigError("give either preset or lambda/mu, not both")
        return preset(section["preset"].strip())
    if "lambda" in section or "mu" in section:
        if not ("lambda" in section and "mu" in section):
            raise ConfigError("lambda and mu must be given together")
        return RatePair(parse_rate(section["lambda"]), parse_rate(section["mu"]))
    return None


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser(
        inline_comment_prefixes=("#",), comment_prefixes=("#",),
        interpolation=None, strict=True)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    values: dict[str, dict] = {}
    for sect in cp.sections():
        if sect not in _SCHEMA:
            raise ConfigError(f"unknown section [{sect}]")
        values[sect] = {}
        for key, raw in cp.items(sect):
            if key not in _SCHEMA[sect]:
                raise ConfigError(f"unknown key {key!r} in [{sect}]")
            try:
                values[sect][key] = _SCHEMA[sect][key](raw)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"[{sect}] {key} = {raw!r}: {exc}") from None
    try:
        rates = _rates_from(values.get("rates", {}))
    except KeynodesError as exc:
        raise ConfigError(str(exc)) from None
    out = values.get("output", {}).get("dir")
    cfg = RunConfig(rates=rates, network=NetworkSection(**values.get("network", {})),
                    out=Path(out) if out else None, **values.get("solver", {}))
    return cfg.validate()


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    """Apply non-None overrides; ``preset`` replaces the rates."""
    kw = {k: v for k, v in kw.items() if v is not None}
    if "preset" in kw:
        try:
            kw["rates"] = preset(kw.pop("preset"))
        except KeynodesError as exc:
            raise ConfigError(str(exc)) from None
    if "out" in kw:
        kw["out"] = Path(kw["out"])
    return replace(cfg, **kw).validate()
