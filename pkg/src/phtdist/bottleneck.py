"""Bottleneck distance between diagrams via bipartite threshold matching.

The finite points of the two diagrams are embedded in a balanced bipartite
graph with diagonal copies (U = X + proj(Y), V = Y + proj(X)); a perfect
matching among edges of weight <= lam exists iff the finite-part bottleneck
is <= lam.  Essential classes form a separate layer matched by sorted
births; mismatched essential counts make the distance infinite.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .persistence import Diagram


@dataclass
class BipartiteInstance:
    """Threshold-matching instance for one homology dimension."""

    dim: int
    u_points: np.ndarray  # rows: X points then projections of Y
    v_points: np.ndarray  # rows: Y points then projections of X
    n_x: int
    n_y: int
    weights: np.ndarray   # (|U|, |V|)
    ess_x: np.ndarray     # sorted essential births of X
    ess_y: np.ndarray
    infinite: bool        # essential counts differ

    @property
    def size(self) -> int:
        return self.u_points.shape[0]

    def essential_cost(self) -> float:
        if self.infinite:
            return math.inf
        if self.ess_x.size == 0:
            return 0.0
        return float(np.abs(self.ess_x - self.ess_y).max())


def _diagonal_projection(points: np.ndarray) -> np.ndarray:
    mid = 0.5 * (points[:, 0] + points[:, 1])
    return np.column_stack([mid, mid])


def _instance_weights(
    xf: np.ndarray, yf: np.ndarray, u_points: np.ndarray, v_points: np.ndarray
) -> np.ndarray:
    """L-inf weight matrix with canonical own-projection costs.

    A point matched to its own diagonal copy costs exactly half its
    persistence; writing that value directly (instead of the algebraically
    equal L-inf form) keeps the candidate floats bit-identical with the
    matching-enumeration oracle.
    """
    n_x, n_y = xf.shape[0], yf.shape[0]
    n = n_x + n_y
    if n == 0:
        return np.zeros((0, 0))
    diff = u_points[:, None, :] - v_points[None, :, :]
    weights = np.abs(diff).max(axis=2)
    weights[n_x:, n_y:] = 0.0  # diagonal copy to diagonal copy is free
    for i in range(n_x):
        weights[i, n_y + i] = 0.5 * (xf[i, 1] - xf[i, 0])
    for j in range(n_y):
        weights[n_x + j, j] = 0.5 * (yf[j, 1] - yf[j, 0])
    return weights


def build_instance(x: Diagram, y: Diagram, dim: int) -> BipartiteInstance:
    """Lemma-style bipartite construction for the points of one dimension.

    Finite zero-persistence points are dropped (they cost nothing); the
    weight of an edge is the L-inf distance unless both endpoints are
    diagonal copies, in which case it is 0.
    """
    xf = np.array(
        [[p.birth, p.death] for p in x.finite(dim)], dtype=float
    ).reshape(-1, 2)
    yf = np.array(
        [[p.birth, p.death] for p in y.finite(dim)], dtype=float
    ).reshape(-1, 2)
    u_points = np.vstack([xf, _diagonal_projection(yf)])
    v_points = np.vstack([yf, _diagonal_projection(xf)])
    n_x, n_y = xf.shape[0], yf.shape[0]
    weights = _instance_weights(xf, yf, u_points, v_points)
    ess_x = np.sort([p.birth for p in x.essentials(dim)])
    ess_y = np.sort([p.birth for p in y.essentials(dim)])
    return BipartiteInstance(
        dim,
        u_points,
        v_points,
        n_x,
        n_y,
        weights,
        np.asarray(ess_x, dtype=float),
        np.asarray(ess_y, dtype=float),
        ess_x.size != ess_y.size,
    )


# -- Hopcroft-Karp on an adjacency-list graph ---------------------------------


def hopcroft_karp(n_u: int, n_v: int, adj: list[list[int]]) -> tuple[int, list[int], list[int]]:
    """Maximum bipartite matching; returns (size, match_u, match_v) with -1 for exposed."""
    INF = float("inf")
    match_u = [-1] * n_u
    match_v = [-1] * n_v
    dist = [0.0] * n_u
    size = 0

    def bfs() -> bool:
        queue = deque()
        for u in range(n_u):
            if match_u[u] == -1:
                dist[u] = 0.0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_v[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_v[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_u[u] = v
                match_v[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in range(n_u):
            if match_u[u] == -1 and dfs(u):
                size += 1
    return size, match_u, match_v


def _threshold_adjacency(inst: BipartiteInstance, lam: float) -> list[list[int]]:
    n = inst.size
    w = inst.weights
    return [[v for v in range(n) if w[u, v] <= lam] for u in range(n)]


def decide_matching(inst: BipartiteInstance, lam: float) -> bool:
    """True iff the threshold graph at lam has a perfect matching and the
    essential layer can be matched within lam."""
    if inst.infinite:
        return False
    if inst.essential_cost() > lam:
        return False
    n = inst.size
    if n == 0:
        return True
    size, _, _ = hopcroft_karp(n, n, _threshold_adjacency(inst, lam))
    return size == n


def _instance_candidates(inst: BipartiteInstance) -> np.ndarray:
    """Sorted unique candidate thresholds: edge weights, essential gaps, zero."""
    vals = [np.ravel(inst.weights), np.array([0.0])]
    if not inst.infinite and inst.ess_x.size:
        vals.append(np.abs(inst.ess_x - inst.ess_y))
    return np.unique(np.concatenate(vals))


def _instance_bottleneck(inst: BipartiteInstance) -> float:
    if inst.infinite:
        return math.inf
    cands = _instance_candidates(inst)
    lo, hi = 0, cands.size - 1
    if decide_matching(inst, float(cands[lo])):
        return float(cands[lo])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if decide_matching(inst, float(cands[mid])):
            hi = mid
        else:
            lo = mid
    return float(cands[hi])


def bottleneck_distance(x: Diagram, y: Diagram) -> float:
    """Bottleneck distance, taken per homology dimension with an outer max.

    Returns +inf when the essential counts differ in any dimension present.
    Exact up to floating-point weight computation: the answer is always one
    of the candidate values (an edge weight or an essential birth gap).
    """
    dims = sorted(set(x.dims()) | set(y.dims()))
    best = 0.0
    for dim in dims:
        val = _instance_bottleneck(build_instance(x, y, dim))
        if math.isinf(val):
            return math.inf
        best = max(best, val)
    return best


def finite_bottleneck_arrays(xf: np.ndarray, yf: np.ndarray) -> float:
    """Finite-part bottleneck for raw (n, 2) point arrays (no essential layer)."""
    xf = np.asarray(xf, dtype=float).reshape(-1, 2)
    yf = np.asarray(yf, dtype=float).reshape(-1, 2)
    u_points = np.vstack([xf, _diagonal_projection(yf)])
    v_points = np.vstack([yf, _diagonal_projection(xf)])
    n_x, n_y = xf.shape[0], yf.shape[0]
    weights = _instance_weights(xf, yf, u_points, v_points)
    inst = BipartiteInstance(
        -1, u_points, v_points, n_x, n_y, weights,
        np.empty(0), np.empty(0), False,
    )
    return _instance_bottleneck(inst)


# -- incremental repair --------------------------------------------------------


@dataclass
class Matching:
    """Perfect matching in the threshold graph at ``lam``."""

    pairs: dict[int, int]  # u index -> v index
    lam: float

    def is_perfect(self, inst: BipartiteInstance) -> bool:
        n = inst.size
        if len(self.pairs) != n or set(self.pairs.values()) != set(range(n)):
            return False
        return all(inst.weights[u, v] <= self.lam for u, v in self.pairs.items())


def initial_matching(inst: BipartiteInstance, lam: float) -> Matching | None:
    n = inst.size
    size, match_u, _ = hopcroft_karp(n, n, _threshold_adjacency(inst, lam))
    if size != n:
        return None
    return Matching({u: match_u[u] for u in range(n)}, lam)


def _augment_from(
    u0: int,
    adj: list[list[int]],
    pairs: dict[int, int],
    owner: dict[int, int],
) -> bool:
    """Single alternating BFS from exposed u0; applies the augmenting path."""
    parent: dict[int, tuple[int, int]] = {}
    seen_v: set[int] = set()
    queue = deque([u0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in seen_v:
                continue
            seen_v.add(v)
            parent[v] = (u, owner.get(v, -1))
            w = owner.get(v, -1)
            if w == -1:
                # augment along the path ending at v
                while True:
                    u_prev, _ = parent[v]
                    old = pairs.get(u_prev)
                    pairs[u_prev] = v
                    owner[v] = u_prev
                    if u_prev == u0:
                        return True
                    v = old
            else:
                queue.append(w)
    return False


def repair_matching(
    matching: Matching,
    removed: tuple[int, int],
    inst: BipartiteInstance,
    lam: float,
) -> Matching | None:
    """Restore a perfect matching after ``removed`` left the threshold graph.

    Returns the input unchanged when the edge was unmatched; otherwise
    searches for one augmenting path between the two exposed vertices.
    ``None`` signals that no perfect matching exists any more.
    """
    u_rm, v_rm = removed
    if matching.pairs.get(u_rm) != v_rm:
        return matching
    pairs = dict(matching.pairs)
    del pairs[u_rm]
    n = inst.size
    w = inst.weights
    adj = [
        [
            v
            for v in range(n)
            if w[u, v] <= lam and not (u == u_rm and v == v_rm)
        ]
        for u in range(n)
    ]
    owner = {v: u for u, v in pairs.items()}
    if _augment_from(u_rm, adj, pairs, owner):
        return Matching(pairs, lam)
    return None
