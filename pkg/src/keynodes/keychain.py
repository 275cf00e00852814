"""Aggregated key-node chain coupled to the mean-field activation fraction.

State ``S_i`` counts the active key nodes. From ``S_i`` the chain moves up at
rate ``(k - i) * lam(a(t))`` and down at rate ``i * mu(a(t))``; the expected
hitting time of ``S_k`` is the integral of its survival ``1 - p_k(t)``.

Two modes are offered:

``absorbing``
    ``S_k`` absorbs, total probability is conserved. Default for every k.
``literal-k1``
    For k = 1 only: the down-flow ``p_1 * mu`` into ``S_0`` is kept while
    ``p_1`` still only gains mass, so the total grows. The survival integral
    is taken up to the first time ``p_1`` reaches 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _ode, meanfield
from .errors import (
    DegenerateSurvival,
    HorizonExceeded,
    InvalidK,
    ModeError,
    UnreachableGamma,
)
from .rates import RatePair

ABSORBING = "absorbing"
LITERAL_K1 = "literal-k1"
MODES = (ABSORBING, LITERAL_K1)

DEFAULT_K_MAX = 8
DEFAULT_EPS_TAIL = 1e-8
DEFAULT_HORIZON = 1e6


def _check(k, mode):
    if mode not in MODES:
        raise ModeError(f"unknown mode {mode!r}; expected one of {MODES}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidK(f"k must be an integer >= 1, got {k!r}")
    if mode == LITERAL_K1 and k != 1:
        raise ModeError("literal-k1 mode is defined for k = 1 only")


def build_generator(k: int, lam: float, mu: float, mode: str = ABSORBING) -> np.ndarray:
    """Rate matrix of the aggregated chain at frozen rates ``lam``, ``mu``.

    Row ``i`` holds the rates out of ``S_i``. In absorbing mode the row of
    ``S_k`` is zero. In literal-k1 mode the matrix is not a generator: the
    return flow ``mu`` into ``S_0`` is kept but ``S_1`` loses nothing, so
    ``dp/dt = p @ Q`` reproduces the displayed k = 1 equations.
    """
    _check(k, mode)
    if not (lam > 0 and mu > 0):
        raise ValueError("rates must be positive")
    q = np.zeros((k + 1, k + 1))
    for i in range(k):
        q[i, i + 1] = (k - i) * lam
        if i > 0:
            q[i, i - 1] = i * mu
        q[i, i] = -q[i].sum()
    if mode == LITERAL_K1:
        q[1, 0] = mu
    return q


@dataclass(frozen=True)
class OccupancyTrajectory:
    k: int
    mode: str
    times: np.ndarray
    p: np.ndarray
    cum_survival: np.ndarray
    a_hat: np.ndarray
    dense: _ode.DenseSolution = field(repr=False, compare=False)

    def at(self, t):
        """Dense state ``[a_hat, p_0..p_k, cum_survival]`` at ``t``."""
        return self.dense(t)


def solve_occupancy(rates: RatePair, k: int, horizon: float,
                    rtol: float = meanfield.DEFAULT_RTOL,
                    atol: float = meanfield.DEFAULT_ATOL,
                    mode: str = ABSORBING, *, backend: str | None = None
                    ) -> OccupancyTrajectory:
    """Integrate activation fraction, occupation probabilities and the
    running survival integral jointly from 0 to ``horizon``."""
    _check(k, mode)
    _, sol = _ode.integrate(rates, k, literal=(mode == LITERAL_K1), t_end=horizon,
                            rtol=rtol, atol=atol, backend=backend)
    ys = sol.ys
    return OccupancyTrajectory(k, mode, sol.ts, ys[:, 1:k + 2], ys[:, k + 2],
                               ys[:, 0], sol)


def absorption_times(k: int, lam: float, mu: float) -> np.ndarray:
    """Expected time to reach ``S_k`` from each of ``S_0..S_{k-1}`` at
    constant rates (first-step linear system)."""
    q = build_generator(k, lam, mu)[:k, :k]
    return np.linalg.solve(q, -np.ones(k))


@dataclass(frozen=True)
class HittingTime:
    value: float
    tail_bound: float
    t_stop: float


def expected_hitting_time(rates: RatePair, k: int,
                          rtol: float = meanfield.DEFAULT_RTOL,
                          eps_tail: float = DEFAULT_EPS_TAIL,
                          mode: str = ABSORBING,
                          atol: float = meanfield.DEFAULT_ATOL,
                          horizon: float = DEFAULT_HORIZON,
                          *, backend: str | None = None) -> HittingTime:
    """Expected time until all ``k`` key nodes are active.

    Absorbing mode integrates until the survival drops below ``eps_tail``
    and closes the remaining tail with the constant-rate chain at the
    slowest rates (``lam`` at its minimum, ``mu`` at its maximum):
    the estimate restarts it from ``S_{k-1}``, the bound from ``S_0``.
    """
    _check(k, mode)
    if not eps_tail > 0:
        raise ValueError("eps_tail must be positive")
    if mode == LITERAL_K1:
        status, sol = _ode.integrate(rates, 1, literal=True, t_end=horizon,
                                     rtol=rtol, atol=atol, stop_index=2,
                                     stop_value=1.0, backend=backend)
        if status != _ode.STOPPED:
            raise HorizonExceeded(
                f"p_1 did not reach 1 by t={horizon:g}",
                partial=float(sol.ys[-1, 3]), t=sol.t_final)
        t_hit = sol.first_crossing(2, 1.0)
        return HittingTime(float(sol(t_hit)[3]), 0.0, t_hit)

    status, sol = _ode.integrate(rates, k, t_end=horizon, rtol=rtol, atol=atol,
                                 stop_index=k + 1, stop_value=1.0 - eps_tail,
                                 backend=backend)
    survival = max(0.0, 1.0 - float(sol.ys[-1, k + 1]))
    lam_min = rates.lam.bounds()[0]
    mu_max = rates.mu.bounds()[1]
    worst = absorption_times(k, lam_min, mu_max)
    cum = float(sol.ys[-1, k + 2])
    estimate = cum + survival * worst[k - 1]
    bound = survival * worst[0]
    if status != _ode.STOPPED:
        raise HorizonExceeded(
            f"survival {survival:.3g} still above {eps_tail:g} at t={horizon:g}",
            partial=estimate, bound=bound, t=sol.t_final)
    return HittingTime(estimate, bound, sol.t_final)


def activation_rate(rates: RatePair, k: int, t_grid, mode: str = ABSORBING,
                    rtol: float = meanfield.DEFAULT_RTOL,
                    atol: float = meanfield.DEFAULT_ATOL,
                    *, min_survival: float = 1e-12,
                    backend: str | None = None) -> np.ndarray:
    """Hazard ``m_k(t) = lam(a(t)) p_{k-1}(t) / (1 - p_k(t))`` on ``t_grid``.

    Grid points past the first one where the survival falls to
    ``min_survival`` are dropped with a warning; the returned array is then
    shorter than ``t_grid``.
    """
    _check(k, mode)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d sequence")
    if np.any(t_grid < 0) or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be non-negative and non-decreasing")
    t_max = float(t_grid[-1])
    if t_max > 0:
        occ = solve_occupancy(rates, k, t_max, rtol, atol, mode, backend=backend)
        state = occ.at(t_grid)
    else:
        state = np.zeros((t_grid.size, k + 3))
        state[:, 1] = 1.0
    a = np.clip(state[:, 0], 0.0, 1.0)
    survival = 1.0 - state[:, k + 1]
    bad = np.nonzero(survival <= min_survival)[0]
    if bad.size:
        if bad[0] == 0:
            raise DegenerateSurvival(
                f"survival {survival[0]:.3g} at t={t_grid[0]:g} is below "
                f"{min_survival:g}")
        warnings.warn(
            f"survival underflows at t={t_grid[bad[0]]:g}; activation rate "
            f"truncated to {bad[0]} grid points", RuntimeWarning, stacklevel=2)
        a, state, survival = a[:bad[0]], state[:bad[0]], survival[:bad[0]]
    return rates.lam(a) * state[:, k] / survival


@dataclass(frozen=True)
class HittingRecord:
    k: int
    expected_hitting_time: float
    tail_bound: float


@dataclass(frozen=True)
class HittingSummary:
    gamma: float
    tau_hat_gamma: float
    records: tuple[HittingRecord, ...]
    k_c_minus: int
    k_c_plus: int
    k_c: int
    mode: str = ABSORBING

    def times(self) -> np.ndarray:
        return np.array([r.expected_hitting_time for r in self.records])


def select_k(tau_hat: float, hitting: list[float] | np.ndarray):
    """``(k_minus, k_plus, k_c)`` for hitting times indexed k = 1, 2, ...

    ``k_minus`` is the largest k with E[tau_k] <= tau_hat (1 if none),
    ``k_plus`` the smallest with E[tau_k] >= tau_hat (k_max if none); ties
    in distance go to ``k_minus``.
    """
    e = list(hitting)
    k_max = len(e)
    below = [k for k in range(1, k_max + 1) if e[k - 1] <= tau_hat]
    above = [k for k in range(1, k_max + 1) if e[k - 1] >= tau_hat]
    k_minus = max(below) if below else 1
    k_plus = min(above) if above else k_max
    d_minus = abs(tau_hat - e[k_minus - 1])
    d_plus = abs(tau_hat - e[k_plus - 1])
    return k_minus, k_plus, (k_minus if d_minus <= d_plus else k_plus)


def optimal_k(rates: RatePair, gamma: float, k_max: int = DEFAULT_K_MAX,
              mode: str = ABSORBING, rtol: float = meanfield.DEFAULT_RTOL,
              atol: float = meanfield.DEFAULT_ATOL,
              eps_tail: float = DEFAULT_EPS_TAIL,
              *, backend: str | None = None) -> HittingSummary:
    """Key-node count whose expected hitting time is closest to the
    mean-field trigger time. ``mode`` applies to k = 1 only."""
    if mode not in MODES:
        raise ModeError(f"unknown mode {mode!r}")
    if k_max < 1:
        raise InvalidK(f"k_max must be >= 1, got {k_max}")
    trig = meanfield.trigger_time(rates, gamma, rtol, atol, backend=backend)
    if not trig.reached:
        raise UnreachableGamma(gamma, trig.fixed_point)
    records = []
    for k in range(1, k_max + 1):
        km = mode if k == 1 else ABSORBING
        ht = expected_hitting_time(rates, k, rtol, eps_tail, km, atol,
                                   backend=backend)
        records.append(HittingRecord(k, ht.value, ht.tail_bound))
    kminus, kplus, kc = select_k(trig.tau_hat,
                                 [r.expected_hitting_time for r in records])
    return HittingSummary(gamma, trig.tau_hat, tuple(records), kminus, kplus,
                          kc, mode)


__all__ = [
    "ABSORBING",
    "LITERAL_K1",
    "MODES",
    "build_generator",
    "OccupancyTrajectory",
    "solve_occupancy",
    "absorption_times",
    "HittingTime",
    "expected_hitting_time",
    "activation_rate",
    "HittingRecord",
    "HittingSummary",
    "select_k",
    "optimal_k",
]
