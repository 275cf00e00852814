"""Thin wrapper around the compiled stepper: dense-output evaluation and
first-crossing location."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NumericalFailure
from .rates import RatePair

MAX_STEPS = 50_000_000

REACHED_END, STOPPED, UNDERFLOW, MAX_STEPS_HIT, NONFINITE = range(5)


@dataclass(frozen=True, eq=False)
class DenseSolution:
    """Piecewise quartic interpolant over the accepted steps.

    ``ts`` has one more entry than ``cont``; step ``n`` spans
    ``[ts[n], ts[n+1]]``.
    """

    ts: np.ndarray
    ys: np.ndarray
    cont: np.ndarray

    @property
    def t_final(self) -> float:
        return float(self.ts[-1])

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        nsteps = self.cont.shape[0]
        if nsteps == 0:
            out = np.broadcast_to(self.ys[0], (t_arr.size, self.ys.shape[1])).copy()
        else:
            idx = np.searchsorted(self.ts, t_arr, side="right") - 1
            idx = np.clip(idx, 0, nsteps - 1)
            h = self.ts[idx + 1] - self.ts[idx]
            s = ((t_arr - self.ts[idx]) / h)[:, None]
            s1 = 1.0 - s
            c = self.cont[idx]
            out = c[:, 0] + s * (c[:, 1] + s1 * (c[:, 2] + s * (c[:, 3] + s1 * c[:, 4])))
            # exact values at the mesh points
            exact = np.isin(t_arr, self.ts)
            if exact.any():
                pos = np.searchsorted(self.ts, t_arr[exact])
                out[exact] = self.ys[pos]
        if np.ndim(t) == 0:
            return out[0]
        return out

    def first_crossing(self, index: int, value: float, rel_tol: float = 1e-9) -> float:
        """Earliest t where component ``index`` reaches ``value``.

        The crossing is bracketed between consecutive mesh points and refined
        by bisection on the interpolant to ``rel_tol * max(1, t)``.
        """
        col = self.ys[:, index]
        hits = np.nonzero(col >= value)[0]
        if hits.size == 0:
            raise ValueError("component never reaches the requested value")
        n = int(hits[0])
        if n == 0:
            return float(self.ts[0])
        lo, hi = float(self.ts[n - 1]), float(self.ts[n])
        while hi - lo > rel_tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if self(mid)[index] >= value:
                hi = mid
            else:
                lo = mid
        return hi


def integrate(rates: RatePair, k: int, *, literal: bool = False, t_end: float,
              rtol: float, atol: float, stop_index: int = -1,
              stop_value: float = 0.0, backend: str | None = None):
    """Run the stepper; returns ``(status, DenseSolution)``.

    Raises NumericalFailure on step underflow or non-finite state.
    """
    if not t_end > 0:
        raise ValueError(f"horizon must be positive, got {t_end}")
    if not (rtol > 0 and atol > 0):
        raise ValueError("tolerances must be positive")
    kern = _backend.kernels if backend is None else _backend.get(backend)
    lam, mu = rates.lam, rates.mu
    status, ts, ys, cont = kern.integrate(
        lam.code, lam.c, lam.x, mu.code, mu.c, mu.x,
        int(k), int(bool(literal)), float(t_end), float(rtol), float(atol),
        int(stop_index), float(stop_value), MAX_STEPS,
    )
    sol = DenseSolution(ts, ys, cont)
    if status == UNDERFLOW:
        raise NumericalFailure(
            f"step size underflow at t={sol.t_final:.6g}", t=sol.t_final)
    if status == NONFINITE:
        raise NumericalFailure(
            f"non-finite state near t={sol.t_final:.6g}", t=sol.t_final)
    if status == MAX_STEPS_HIT:
        raise NumericalFailure(
            f"step budget exhausted at t={sol.t_final:.6g}", t=sol.t_final)
    return status, sol
