"""Mean-field activation fraction and network trigger time.

The activation fraction obeys the scalar autonomous ODE

    da/dt = (1 - a) * lam(a) - a * mu(a),    a(0) = 0,

and the trigger time is the first t with a(t) >= gamma. Because the right
hand side is positive at 0 and negative at 1, the trajectory climbs
monotonically towards the smallest fixed point; thresholds above it are
never reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _ode
from .errors import HorizonExceeded, NumericalFailure
from .rates import RatePair

DEFAULT_RTOL = 1e-8
DEFAULT_ATOL = 1e-12
HORIZON_CAP = 1e6


def rhs(rates: RatePair, a):
    """Right-hand side of the activation ODE at ``a`` (scalar or array)."""
    return (1.0 - a) * rates.lam(a) - a * rates.mu(a)


def default_horizon(rates: RatePair) -> float:
    return min(50.0 / rates.lam(0.0), HORIZON_CAP)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray
    rtol: float
    atol: float
    horizon: float
    dense: _ode.DenseSolution = field(repr=False, compare=False)

    def __call__(self, t):
        """Interpolated activation fraction at ``t`` (clamped to [0, 1])."""
        if np.ndim(t) == 0:
            return float(min(max(self.dense(t)[0], 0.0), 1.0))
        return np.clip(self.dense(t)[:, 0], 0.0, 1.0)


@dataclass(frozen=True)
class Reached:
    tau_hat: float
    gamma: float

    reached = True


@dataclass(frozen=True)
class Unreachable:
    fixed_point: float
    gamma: float

    reached = False


TriggerResult = Reached | Unreachable


def _checked_values(values, atol, times):
    lo, hi = values.min(), values.max()
    if lo < -atol or hi > 1.0 + atol:
        bad = np.nonzero((values < -atol) | (values > 1.0 + atol))[0][0]
        raise NumericalFailure(
            f"activation fraction left [0, 1] at t={times[bad]:.6g} "
            f"(value {values[bad]!r})", t=float(times[bad]))
    return np.clip(values, 0.0, 1.0)


def solve_activation(rates: RatePair, horizon: float | None = None,
                     rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL,
                     *, backend: str | None = None) -> Trajectory:
    """Integrate the activation ODE from 0 to ``horizon`` (DOPRI5, dense)."""
    if horizon is None:
        horizon = default_horizon(rates)
    _, sol = _ode.integrate(rates, 0, t_end=horizon, rtol=rtol, atol=atol,
                            backend=backend)
    values = _checked_values(sol.ys[:, 0], atol, sol.ts)
    return Trajectory(sol.ts, values, rtol, atol, float(horizon), sol)


def fixed_points(rates: RatePair, grid_points: int = 10_000,
                 width: float = 1e-12) -> list[float]:
    """All roots of the activation right-hand side on [0, 1], ascending.

    Sign changes on a uniform grid are refined by bisection.
    """
    grid = np.linspace(0.0, 1.0, grid_points + 1)
    vals = rhs(rates, grid)
    roots = []
    for i in range(grid_points):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            roots.append(float(grid[i]))
            continue
        if f0 * f1 < 0.0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            flo = f0
            while hi - lo > width:
                mid = 0.5 * (lo + hi)
                fm = rhs(rates, mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm > 0.0) == (flo > 0.0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))
    if vals[-1] == 0.0:
        roots.append(1.0)
    return roots


def trigger_time(rates: RatePair, gamma: float, rtol: float = DEFAULT_RTOL,
                 atol: float = DEFAULT_ATOL, horizon: float | None = None,
                 *, backend: str | None = None) -> TriggerResult:
    """First time the mean-field activation fraction reaches ``gamma``."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    a_star = fixed_points(rates)[0]
    if a_star <= gamma - atol:
        return Unreachable(a_star, gamma)
    if horizon is None:
        horizon = default_horizon(rates)
    status, sol = _ode.integrate(rates, 0, t_end=horizon, rtol=rtol, atol=atol,
                                 stop_index=0, stop_value=gamma, backend=backend)
    if status != _ode.STOPPED:
        raise HorizonExceeded(
            f"activation fraction did not reach {gamma} by t={horizon:g}",
            partial=float(sol.ys[-1, 0]), t=sol.t_final)
    return Reached(sol.first_crossing(0, gamma), gamma)


def closed_form_constant(lam: float, mu: float, t):
    """Activation fraction for constant rates: a*(1 - exp(-(lam+mu) t))."""
    s = lam + mu
    return lam / s * (1.0 - np.exp(-s * np.asarray(t, dtype=float)))


def tau_constant(lam: float, mu: float, gamma: float) -> float:
    """Closed-form trigger time for constant rates (requires gamma < a*)."""
    s = lam + mu
    return -math.log(1.0 - gamma * s / lam) / s
