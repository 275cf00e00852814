"""Exact event-driven simulation of the full n-node signal network.

Between events every node flips at a constant rate: ``lam(a_i)`` when
passive, ``mu(a_i)`` when active, where ``a_i`` is the active fraction of
its neighbours. Per-node rates live in a sum tree, so drawing the next node
and updating a flipped node's neighbourhood cost O(log n) per touched node.

Each replicate draws uniforms from its own generator, seeded from
``(master_seed, replicate)``; results are assembled in replicate order and
do not depend on thread count or buffer size.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import _backend, meanfield
from ..errors import EmptyOverlap, InvalidK, InvalidParams, DegenerateVariance
from ..rates import RatePair
from .graph import (
    NetworkGraph,
    assortativity,
    generate_pa,
    rewire_disassortative,
    select_key_nodes,
)

NEED_MORE, DONE, HORIZON = 0, 1, 2
CHUNK_EVENTS = 1 << 16
_FIRST_CHUNK = 1 << 12

_GRAPH_TAG = 0x67726170
_REWIRE_TAG = 0x72657769


def stream(master_seed: int, replicate: int) -> np.random.Generator:
    """Independent generator for one replicate."""
    ss = np.random.SeedSequence(int(master_seed), spawn_key=(int(replicate),))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SimConfig:
    rates: RatePair
    gamma: float
    k: int
    replicates: int
    master_seed: int
    n: int = 10_000
    m: int = 3
    assortativity_target: float | None = None
    horizon: float | None = None
    curve_times: tuple[float, ...] | None = None
    max_swaps: int = 1_000_000

    def __post_init__(self):
        if not self.n > self.m >= 1:
            raise InvalidParams(f"need n > m >= 1, got n={self.n}, m={self.m}")
        if self.replicates < 1:
            raise InvalidParams("replicates must be >= 1")
        if not 0.0 < self.gamma < 1.0:
            raise InvalidParams(f"gamma must lie in (0, 1), got {self.gamma}")
        if not 1 <= self.k <= self.n:
            raise InvalidK(f"k must lie in [1, n], got {self.k}")
        if self.assortativity_target is not None and not -1.0 <= self.assortativity_target <= 0.0:
            raise InvalidParams("assortativity_target must lie in [-1, 0]")


def build_graph(config: SimConfig) -> NetworkGraph:
    """Preferential-attachment graph, rewired when a target is configured."""
    g = generate_pa(config.n, config.m,
                    np.random.SeedSequence([config.master_seed, _GRAPH_TAG]))
    if config.assortativity_target is not None:
        g = rewire_disassortative(
            g, config.assortativity_target, config.max_swaps,
            np.random.SeedSequence([config.master_seed, _REWIRE_TAG]))
    return g


@dataclass(frozen=True)
class TargetStats:
    mean: float
    std: float
    stderr: float
    censored: int
    samples: np.ndarray = field(repr=False)

    @classmethod
    def from_samples(cls, samples):
        samples = np.asarray(samples, dtype=float)
        ok = samples[~np.isnan(samples)]
        censored = int(samples.size - ok.size)
        if ok.size == 0:
            return cls(math.nan, math.nan, math.nan, censored, samples)
        mean = float(ok.mean())
        std = float(ok.std(ddof=1)) if ok.size > 1 else math.nan
        return cls(mean, std, std / math.sqrt(ok.size), censored, samples)


@dataclass(frozen=True)
class SimEstimate:
    """Monte Carlo summary. Censored runs carry NaN samples and are
    excluded from means."""

    targets: dict[str, TargetStats]
    key_times: np.ndarray
    curve_t: np.ndarray
    curve_a_bar: np.ndarray
    assortativity: float
    key_nodes: tuple[int, ...]
    horizon: float

    @property
    def replicates(self) -> int:
        return int(self.key_times.shape[0])

    def all_censored(self) -> bool:
        """True if some target was censored in every replicate."""
        return any(s.censored == self.replicates for s in self.targets.values())


@dataclass(frozen=True)
class _Replicate:
    tau_gamma: float
    key_times: np.ndarray
    curve_counts: np.ndarray


def _need_active(gamma: float, n: int) -> int:
    need = math.ceil(gamma * n)
    if (need - 1) / n >= gamma:
        need -= 1
    return max(need, 1)


class _Problem:
    """Immutable per-simulation arrays shared read-only by all replicates."""

    def __init__(self, graph, config, key_nodes, horizon, curve_times):
        self.graph = graph
        self.indptr = np.ascontiguousarray(graph.indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(graph.indices, dtype=np.int64)
        self.deg = np.ascontiguousarray(graph.degrees, dtype=np.int64)
        lam, mu = config.rates.lam, config.rates.mu
        self.lam, self.mu = lam, mu
        self.kargs = (lam.code, lam.c, lam.x, mu.code, mu.c, mu.x)
        self.key_rank = np.full(graph.n, -1, dtype=np.int64)
        for r, i in enumerate(key_nodes):
            self.key_rank[i] = r
        self.k = len(key_nodes)
        self.need_active = _need_active(config.gamma, graph.n)
        self.horizon = float(horizon)
        self.curve_times = np.ascontiguousarray(curve_times, dtype=float)
        self.size = 1 << max(0, (graph.n - 1).bit_length())
        self.tree0 = _initial_tree(self.size, graph.n, float(lam(0.0)))


def _initial_tree(size: int, n: int, rate0: float) -> np.ndarray:
    """Sum tree with every node passive; parents are built level by level
    so each entry is exactly ``left + right``."""
    tree = np.zeros(2 * size)
    tree[size:size + n] = rate0
    lo = size
    while lo > 1:
        hi, lo = lo, lo // 2
        tree[lo:hi] = tree[2 * lo:2 * hi:2] + tree[2 * lo + 1:2 * hi:2]
    return tree


def check_rates(prob: _Problem, x: np.ndarray, cnt: np.ndarray, tree: np.ndarray,
                tol: float = 1e-12) -> None:
    """Recompute every node rate from the state vector and compare with the
    incrementally maintained tree. Raises AssertionError on mismatch."""
    g = prob.graph
    src = np.repeat(np.arange(g.n), g.degrees)
    fresh_cnt = np.bincount(src, weights=x[g.indices].astype(float),
                            minlength=g.n).astype(np.int64)
    if not np.array_equal(fresh_cnt, cnt):
        raise AssertionError("active-neighbour counts drifted")
    a = fresh_cnt / prob.deg
    fresh = np.where(x == 0, prob.lam(a), prob.mu(a))
    leaves = tree[prob.size:prob.size + g.n]
    if not np.allclose(leaves, fresh, rtol=tol, atol=0.0):
        raise AssertionError("per-node rates drifted")
    if not math.isclose(tree[1], fresh.sum(), rel_tol=1e-9):
        raise AssertionError("total rate drifted")


def _run_replicate(prob: _Problem, kern, rng: np.random.Generator,
                   chunk_events: int, debug_every: int | None) -> _Replicate:
    n = prob.graph.n
    x = np.zeros(n, dtype=np.uint8)
    cnt = np.zeros(n, dtype=np.int64)
    tree = prob.tree0.copy()
    curve_counts = np.zeros(prob.curve_times.size, dtype=np.int64)
    key_counts = np.zeros(prob.k, dtype=np.int64)
    key_times = np.full(prob.k, np.nan)
    fstate = np.array([0.0, np.nan])
    istate = np.zeros(2, dtype=np.int64)
    # buffers grow geometrically; consecutive draws from one generator give
    # the same stream however they are split
    events = debug_every if debug_every else min(_FIRST_CHUNK, chunk_events)
    while True:
        u = rng.random(2 * events)
        status = kern.advance(
            prob.indptr, prob.indices, prob.deg, *prob.kargs,
            prob.key_rank, prob.need_active, prob.horizon, prob.curve_times,
            x, cnt, tree, curve_counts, key_counts, key_times, fstate, istate, u)
        if debug_every:
            check_rates(prob, x, cnt, tree)
        if status != NEED_MORE:
            break
        if not debug_every:
            events = min(2 * events, chunk_events)
    if status == HORIZON:
        # points at exactly the horizon see the final state
        nc = int(istate[1])
        curve_counts[nc:] = istate[0]
    return _Replicate(float(fstate[1]), key_times, curve_counts)


def default_horizon(config: SimConfig) -> float:
    if config.horizon is not None:
        return float(config.horizon)
    trig = meanfield.trigger_time(config.rates, config.gamma)
    if not trig.reached:
        raise InvalidParams(
            "gamma is unreachable in mean field; an explicit horizon is required")
    return 10.0 * trig.tau_hat


def default_curve(config: SimConfig, horizon: float) -> np.ndarray:
    if config.curve_times is not None:
        return np.asarray(config.curve_times, dtype=float)
    end = horizon
    if config.horizon is None:
        end = horizon / 5.0  # twice the mean-field trigger time
    return np.linspace(0.0, end, 41)


def simulate(graph: NetworkGraph, config: SimConfig, *, threads: int = 1,
             key_nodes=None, backend: str | None = None,
             chunk_events: int = CHUNK_EVENTS,
             debug_every: int | None = None) -> SimEstimate:
    """Gillespie replicates on ``graph``; returns summary statistics.

    ``debug_every`` re-derives all rates from scratch every that many
    events and raises on drift.
    """
    if graph.n != config.n:
        raise InvalidParams(f"graph has {graph.n} nodes, config says {config.n}")
    if key_nodes is None:
        key_nodes = select_key_nodes(graph, config.k)
    key_nodes = tuple(int(i) for i in key_nodes)
    if len(key_nodes) != config.k or len(set(key_nodes)) != config.k:
        raise InvalidK("key_nodes must be k distinct node ids")
    horizon = default_horizon(config)
    curve = default_curve(config, horizon)
    if curve.size and (np.any(np.diff(curve) < 0) or curve[0] < 0 or curve[-1] > horizon):
        raise InvalidParams("curve times must be ascending within [0, horizon]")
    prob = _Problem(graph, config, key_nodes, horizon, curve)
    kern = _backend.kernels if backend is None else _backend.get(backend)

    def one(r):
        return _run_replicate(prob, kern, stream(config.master_seed, r),
                              chunk_events, debug_every)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, range(config.replicates)))
    else:
        runs = [one(r) for r in range(config.replicates)]

    tau_gamma = np.array([r.tau_gamma for r in runs])
    key_times = np.vstack([r.key_times for r in runs])
    counts = np.vstack([r.curve_counts for r in runs]).astype(float)
    a_bar = counts.mean(axis=0) / graph.n if curve.size else np.empty(0)
    try:
        assort = assortativity(graph)
    except DegenerateVariance:
        assort = math.nan
    targets = {
        "tau_gamma": TargetStats.from_samples(tau_gamma),
        "tau_k": TargetStats.from_samples(key_times[:, -1]),
    }
    return SimEstimate(targets, key_times, curve, a_bar, assort, key_nodes, horizon)


def meanfield_gap(estimate: SimEstimate, traj: meanfield.Trajectory) -> float:
    """Sup-norm distance between the empirical and mean-field activation
    curves over the shared grid."""
    t = estimate.curve_t
    mask = (t >= 0.0) & (t <= traj.horizon)
    if not mask.any():
        raise EmptyOverlap("no curve point lies within the trajectory's range")
    return float(np.max(np.abs(estimate.curve_a_bar[mask] - traj(t[mask]))))
