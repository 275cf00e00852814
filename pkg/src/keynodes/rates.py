"""Parametric activation / deactivation rate functions.

A :class:`RateSpec` maps the activation fraction ``a`` in ``[0, 1]`` to a
positive rate. Five closed-form families are supported::

    constant(c)            c
    expscale(c, r)         c * exp(r * a)
    powershift(c, p)       c * (a + 1) ** p
    logshift(c, b)         c * log(b + a)
    logshiftinverse(c, b)  c / log(b + a)

Every family is monotone in ``a``, so extrema over ``[0, 1]`` sit at the
endpoints. The compiled kernels identify a family by its integer ``code``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SpecError, UnknownPreset

__all__ = [
    "Family",
    "RateSpec",
    "RatePair",
    "evaluate",
    "preset",
    "PRESETS",
    "parse_rate",
]


class Family(enum.IntEnum):
    CONSTANT = 0
    EXPSCALE = 1
    POWERSHIFT = 2
    LOGSHIFT = 3
    LOGSHIFTINVERSE = 4


_ARITY = {
    Family.CONSTANT: 1,
    Family.EXPSCALE: 2,
    Family.POWERSHIFT: 2,
    Family.LOGSHIFT: 2,
    Family.LOGSHIFTINVERSE: 2,
}


@dataclass(frozen=True)
class RateSpec:
    """One rate function ``f: [0, 1] -> (0, inf)``.

    Parameters are validated at construction; evaluation never re-checks
    them.
    """

    family: Family
    params: tuple[float, ...]

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != _ARITY[family]:
            raise SpecError(
                f"{family.name.lower()} takes {_ARITY[family]} parameter(s), "
                f"got {len(params)}"
            )
        if not all(math.isfinite(p) for p in params):
            raise SpecError(f"non-finite parameter in {params}")
        if params[0] <= 0:
            raise SpecError(f"scale c must be positive, got {params[0]}")
        if family in (Family.LOGSHIFT, Family.LOGSHIFTINVERSE) and params[1] <= 1:
            raise SpecError(f"log shift b must exceed 1, got {params[1]}")

    # constructors mirroring the family names
    @classmethod
    def constant(cls, c):
        return cls(Family.CONSTANT, (c,))

    @classmethod
    def expscale(cls, c, r):
        return cls(Family.EXPSCALE, (c, r))

    @classmethod
    def powershift(cls, c, p):
        return cls(Family.POWERSHIFT, (c, p))

    @classmethod
    def logshift(cls, c, b):
        return cls(Family.LOGSHIFT, (c, b))

    @classmethod
    def logshiftinverse(cls, c, b):
        return cls(Family.LOGSHIFTINVERSE, (c, b))

    @property
    def code(self) -> int:
        return int(self.family)

    @property
    def c(self) -> float:
        return self.params[0]

    @property
    def x(self) -> float:
        """Second family parameter (0.0 for constant)."""
        return self.params[1] if len(self.params) > 1 else 0.0

    def __call__(self, a):
        if np.ndim(a) == 0:
            a = float(a)
            if not 0.0 <= a <= 1.0:
                raise DomainError(f"activation fraction {a!r} outside [0, 1]")
            return _eval_scalar(self.code, self.c, self.x, a)
        arr = np.asarray(a, dtype=float)
        if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
            raise DomainError("activation fraction outside [0, 1]")
        return _eval_array(self.code, self.c, self.x, arr)

    def bounds(self) -> tuple[float, float]:
        """(min, max) of the rate over [0, 1]."""
        lo, hi = self(0.0), self(1.0)
        return (min(lo, hi), max(lo, hi))

    def __str__(self):
        args = ", ".join(repr(p) for p in self.params)
        return f"{self.family.name.lower()}({args})"


def _eval_scalar(code, c, x, a):
    if code == 0:
        return c
    if code == 1:
        return c * math.exp(x * a)
    if code == 2:
        return c * (a + 1.0) ** x
    if code == 3:
        return c * math.log(x + a)
    return c / math.log(x + a)


def _eval_array(code, c, x, a):
    if code == 0:
        return np.full_like(a, c)
    if code == 1:
        return c * np.exp(x * a)
    if code == 2:
        return c * (a + 1.0) ** x
    if code == 3:
        return c * np.log(x + a)
    return c / np.log(x + a)


def evaluate(spec: RateSpec, a):
    """Evaluate ``spec`` at activation fraction ``a`` (scalar or array)."""
    return spec(a)


@dataclass(frozen=True)
class RatePair:
    """Passive-to-active rate ``lam`` and active-to-passive rate ``mu``."""

    lam: RateSpec
    mu: RateSpec
    name: str | None = field(default=None, compare=False)

    @property
    def stable(self) -> bool:
        """Advisory: whether lam(a) < mu(a) on a grid over (0, 1].

        Not enforced anywhere; the aging preset is deliberately unstable.
        """
        grid = np.linspace(0.0, 1.0, 1001)[1:]
        return bool(np.all(self.lam(grid) < self.mu(grid)))

    def label(self) -> str:
        return self.name or f"lambda={self.lam}, mu={self.mu}"


_AGING_GAMMA0 = 0.00113
_AGING_R_PLUS = 10.27
_AGING_R_MINUS = 6.5
_AGING_R = 1.5

PRESETS = {
    "const": (RateSpec.constant(0.45), RateSpec.constant(0.65)),
    "exp-const": (RateSpec.expscale(1.0, -1.0), RateSpec.constant(1.0)),
    "const-exp": (RateSpec.constant(1.0), RateSpec.expscale(1.0, 1.0)),
    "power-const": (RateSpec.powershift(1.0, -1.0), RateSpec.constant(1.0)),
    "log-log": (RateSpec.logshiftinverse(1.0, 3.0), RateSpec.logshift(1.0, 3.0)),
    "aging": (
        RateSpec.expscale(_AGING_GAMMA0, _AGING_R_PLUS),
        RateSpec.expscale(_AGING_GAMMA0 / _AGING_R, -_AGING_R_MINUS),
    ),
}

# column order used by the five-family comparison table
TABLE1_PRESETS = ("const", "exp-const", "const-exp", "power-const", "log-log")


def preset(name: str) -> RatePair:
    try:
        lam, mu = PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None
    return RatePair(lam, mu, name=name)


_RATE_RE = re.compile(r"^\s*([A-Za-z_]+)\s*\((.*)\)\s*$")


def parse_rate(text: str) -> RateSpec:
    """Parse ``family(p1, p2)``, e.g. ``expscale(0.00113, 10.27)``."""
    m = _RATE_RE.match(text)
    if m is None:
        raise SpecError(f"cannot parse rate spec {text!r}")
    fam_name = m.group(1).lower()
    try:
        family = Family[fam_name.upper()]
    except KeyError:
        raise SpecError(f"unknown rate family {fam_name!r}") from None
    raw = [s.strip() for s in m.group(2).split(",") if s.strip()]
    try:
        params = tuple(float(s) for s in raw)
    except ValueError:
        raise SpecError(f"non-numeric parameter in {text!r}") from None
    return RateSpec(family, params)
