"""Undirected simple graphs in CSR form, preferential attachment, degree
assortativity and disassortative rewiring."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateVariance, InvalidK, InvalidParams

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NetworkGraph:
    """Simple undirected graph; ``indices[indptr[i]:indptr[i+1]]`` are the
    sorted neighbours of node ``i``."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def n_edges(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.n)]

    def edges(self) -> np.ndarray:
        """Edge array of shape (E, 2) with ``i < j``, sorted ascending."""
        src = np.repeat(np.arange(self.n), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def __eq__(self, other):
        if not isinstance(other, NetworkGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    @classmethod
    def from_edges(cls, n: int, edges) -> "NetworkGraph":
        """Build from an iterable of ``(i, j)`` pairs.

        Rejects self-loops, repeated edges and isolated nodes.
        """
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise InvalidParams("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise InvalidParams("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = lo * n + hi
        if np.unique(key).size != key.size:
            raise InvalidParams("multi-edges are not allowed")
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        counts = np.bincount(src, minlength=n)
        if np.any(counts == 0):
            raise InvalidParams(
                f"node {int(np.argmin(counts))} has no neighbours")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(int(n), indptr, dst.astype(np.int64))


def star(n: int) -> NetworkGraph:
    return NetworkGraph.from_edges(n, [(0, j) for j in range(1, n)])


def cycle(n: int) -> NetworkGraph:
    return NetworkGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> NetworkGraph:
    return NetworkGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def generate_pa(n: int, m: int, seed) -> NetworkGraph:
    """Preferential attachment: a complete graph on ``m + 1`` nodes, then
    each new node links to ``m`` distinct existing nodes drawn with
    probability proportional to degree.

    Edge count is ``m (m + 1) / 2 + m (n - m - 1)``.
    """
    if m < 1 or n < m + 2:
        raise InvalidParams(f"need m >= 1 and n >= m + 2, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    # every node appears once per incident edge
    pool = [v for e in edges for v in e]
    for v in range(m + 1, n):
        chosen: list[int] = []
        seen = set()
        while len(chosen) < m:
            u = pool[int(rng.integers(len(pool)))]
            if u not in seen:
                seen.add(u)
                chosen.append(u)
        for u in chosen:
            edges.append((u, v))
            pool.append(u)
            pool.append(v)
    return NetworkGraph.from_edges(n, edges)


def _edge_degree_moments(graph: NetworkGraph):
    d = graph.degrees.astype(float)
    e = graph.edges()
    du, dv = d[e[:, 0]], d[e[:, 1]]
    n_e = len(e)
    mean = (du.sum() + dv.sum()) / (2 * n_e)
    second = ((du * du).sum() + (dv * dv).sum()) / (2 * n_e)
    return e, du, dv, n_e, mean, second - mean * mean


def assortativity(graph: NetworkGraph) -> float:
    """Pearson correlation of the degrees at either end of an edge, each
    edge counted in both orientations."""
    if graph.n_edges == 0:
        raise InvalidParams("graph has no edges")
    _, du, dv, n_e, mean, var = _edge_degree_moments(graph)
    if var <= 1e-12 * max(1.0, mean * mean):
        raise DegenerateVariance("all edge-endpoint degrees are equal")
    cov = (du * dv).sum() / n_e - mean * mean
    return float(cov / var)


def rewire_disassortative(graph: NetworkGraph, target: float,
                          max_swaps: int = 1_000_000, seed=None) -> NetworkGraph:
    """Degree-preserving double-edge swaps, kept only when they lower the
    assortativity, until ``target`` is reached or ``max_swaps`` attempts
    have been made.

    With the degree sequence fixed the coefficient is an increasing affine
    function of the sum of ``d_u * d_v`` over edges, so only that sum is
    tracked.
    """
    try:
        current = assortativity(graph)
    except DegenerateVariance:
        return graph
    if current <= target:
        return graph
    rng = np.random.default_rng(seed)
    e, du, dv, n_e, mean, var = _edge_degree_moments(graph)
    deg = graph.degrees.tolist()
    a_end = e[:, 0].tolist()
    b_end = e[:, 1].tolist()
    present = {(a, b) if a < b else (b, a) for a, b in zip(a_end, b_end)}
    s = float((du * dv).sum())
    # r = (s / n_e - mean^2) / var  <=  target
    s_target = (target * var + mean * mean) * n_e

    batch = 65536
    done = 0
    accepted = 0
    while done < max_swaps and s > s_target:
        size = min(batch, max_swaps - done)
        picks = rng.integers(0, n_e, size=(size, 2)).tolist()
        flips = rng.integers(0, 2, size=size).tolist()
        for (x, y), flip in zip(picks, flips):
            done += 1
            if x == y:
                continue
            a, b = a_end[x], b_end[x]
            c, d = a_end[y], b_end[y]
            if flip:
                c, d = d, c
            # (a,b),(c,d) -> (a,d),(c,b)
            if a == d or c == b or a == c or b == d:
                continue
            delta = (deg[a] - deg[c]) * (deg[d] - deg[b])
            if delta >= 0:
                continue
            e1 = (a, d) if a < d else (d, a)
            e2 = (c, b) if c < b else (b, c)
            if e1 in present or e2 in present:
                continue
            present.discard((a, b) if a < b else (b, a))
            present.discard((c, d) if c < d else (d, c))
            present.add(e1)
            present.add(e2)
            a_end[x], b_end[x] = e1
            a_end[y], b_end[y] = e2
            s += delta
            accepted += 1
            if s <= s_target:
                break
    out = NetworkGraph.from_edges(graph.n, list(zip(a_end, b_end)))
    log.info("rewiring: %d attempts, %d accepted, assortativity %.4f -> %.4f",
             done, accepted, current, assortativity(out))
    return out


def select_key_nodes(graph: NetworkGraph, k: int) -> list[int]:
    """The ``k`` highest-degree nodes, ties broken by ascending id."""
    if not 1 <= k <= graph.n:
        raise InvalidK(f"k must lie in [1, {graph.n}], got {k}")
    order = np.lexsort((np.arange(graph.n), -graph.degrees))
    return [int(i) for i in order[:k]]


def write_edgelist(graph: NetworkGraph, path) -> None:
    """One ``i j`` pair per line, 0-based, ``i < j``, ascending."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in graph.edges():
            fh.write(f"{i} {j}\n")


def read_edgelist(path, n: int | None = None) -> NetworkGraph:
    pairs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        i, j = line.split()
        pairs.append((int(i), int(j)))
    if n is None:
        n = 1 + max(max(p) for p in pairs) if pairs else 0
    return NetworkGraph.from_edges(n, pairs)
