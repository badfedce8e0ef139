"""Sparse spanners over visibility graphs.

Two constructions: the path-greedy spanner (works on any weighted graph,
used over visibility graphs at stretch 6) and the theta-graph (cone-based,
meant for points in convex position where every pair sees each other).
Both report measured stretch and max degree rather than trusting theory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .geodesic import WeightedGraph

INF = math.inf


@dataclass
class SpannerGraph:
    base: WeightedGraph
    w: np.ndarray
    t_target: float
    t_measured: float
    k_measured: int
    neighbor_order: tuple[tuple[int, ...], ...]
    method: str

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def graph(self) -> WeightedGraph:
        return WeightedGraph(self.base.points, self.w, self.base.kinds)

    def edges(self):
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                if self.w[u, v] != INF:
                    yield u, v, float(self.w[u, v])

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())


def _neighbor_order(w: np.ndarray) -> tuple[tuple[int, ...], ...]:
    # per-vertex visit order: ascending edge weight, ties by neighbor id
    n = w.shape[0]
    out = []
    for u in range(n):
        nbrs = [(float(w[u, v]), v) for v in range(n) if v != u and w[u, v] != INF]
        nbrs.sort()
        out.append(tuple(v for _, v in nbrs))
    return tuple(out)


def verify_spanner(g: WeightedGraph, s: Union["SpannerGraph", np.ndarray]
                   ) -> tuple[float, int]:
    """Recompute (t_measured, k_measured) for spanner s over base g.

    Stretch is certified on base edges: if every base edge (u,v) satisfies
    dist_s(u,v) <= t * w(u,v), concatenation along base shortest paths gives
    the same bound for every vertex pair."""
    w_s = s.w if isinstance(s, SpannerGraph) else np.asarray(s, dtype=np.float64)
    dist_s = kernels.all_pairs_dense(w_s)
    t_measured = 1.0
    n = g.n
    for u in range(n):
        for v in range(u + 1, n):
            wb = g.w[u, v]
            if wb == INF:
                continue
            ds = dist_s[u, v]
            if wb <= 1e-15:
                ratio = 1.0 if ds <= 1e-12 else INF
            else:
                ratio = ds / wb
            if ratio > t_measured:
                t_measured = ratio
    k_measured = 0
    for u in range(n):
        deg = int(np.sum(np.isfinite(w_s[u])) - 1)
        if deg > k_measured:
            k_measured = deg
    return float(t_measured), k_measured


def greedy_spanner(g: WeightedGraph, t_target: float) -> SpannerGraph:
    """Path-greedy spanner: scan edges by ascending weight, keep an edge iff
    the kept subgraph's endpoint distance still exceeds t_target times its
    weight."""
    if t_target < 1.0:
        raise ValueError("stretch target must be >= 1")
    edge_list = sorted(((w, u, v) for u, v, w in g.edges()))
    m = len(edge_list)
    eu = np.array([u for _, u, _ in edge_list], dtype=np.int64)
    ev = np.array([v for _, _, v in edge_list], dtype=np.int64)
    ew = np.array([w for w, _, _ in edge_list], dtype=np.float64)
    if m:
        keep = kernels.greedy_spanner_keep(g.n, eu, ev, ew, float(t_target))
    else:
        keep = np.zeros(0, dtype=np.uint8)
    w_s = np.full((g.n, g.n), INF)
    np.fill_diagonal(w_s, 0.0)
    for e in range(m):
        if keep[e]:
            w_s[eu[e], ev[e]] = ew[e]
            w_s[ev[e], eu[e]] = ew[e]
    t_meas, k_meas = verify_spanner(g, w_s)
    return SpannerGraph(base=g, w=w_s, t_target=float(t_target),
                        t_measured=t_meas, k_measured=k_meas,
                        neighbor_order=_neighbor_order(w_s), method="greedy")


def theta_stretch_bound(k: int) -> Optional[float]:
    """Worst-case stretch of the theta-graph with k cones; only claimed for
    k >= 9 (cone angle below pi/4), None otherwise."""
    if k < 9:
        return None
    theta = 2.0 * math.pi / k
    return 1.0 / (math.cos(theta) - math.sin(theta))


def _cone_index(angle: float, k: int) -> int:
    # cone j covers [j*width, (j+1)*width); a direction exactly on a cone
    # boundary belongs to the lower-indexed cone (except angle 0)
    width = 2.0 * math.pi / k
    q = angle / width
    r = round(q)
    if abs(q - r) <= 1e-12:
        j = int(r) - 1 if r > 0 else 0
    else:
        j = int(math.floor(q))
    if j >= k:
        j = k - 1
    if j < 0:
        j = 0
    return j


def theta_graph(points: np.ndarray, k: int) -> SpannerGraph:
    """Theta-graph over points in convex position (every pair assumed
    mutually visible): per point and per cone, keep the edge to the nearest
    neighbor whose direction falls in that cone.  Cone 0 starts at angle 0;
    distance ties break toward the smaller point id."""
    if k < 2:
        raise ValueError("theta graph needs at least 2 cones")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = pts.shape[0]
    diff = pts[None, :, :] - pts[:, None, :]
    eu = np.sqrt(np.sum(diff * diff, axis=2))
    np.fill_diagonal(eu, 0.0)
    base = WeightedGraph(pts, eu)

    w_s = np.full((n, n), INF)
    np.fill_diagonal(w_s, 0.0)
    for i in range(n):
        best_d = [INF] * k
        best_j = [-1] * k
        for j in range(n):
            if j == i:
                continue
            dx = pts[j, 0] - pts[i, 0]
            dy = pts[j, 1] - pts[i, 1]
            ang = math.atan2(dy, dx) % (2.0 * math.pi)
            cone = _cone_index(ang, k)
            d = math.hypot(dx, dy)
            if d < best_d[cone] - 1e-12 or \
               (abs(d - best_d[cone]) <= 1e-12 and j < best_j[cone]):
                best_d[cone] = d
                best_j[cone] = j
        for cone in range(k):
            if best_j[cone] >= 0:
                j = best_j[cone]
                w_s[i, j] = best_d[cone]
                w_s[j, i] = best_d[cone]

    t_meas, k_meas = verify_spanner(base, w_s)
    bound = theta_stretch_bound(k)
    return SpannerGraph(base=base, w=w_s,
                        t_target=bound if bound is not None else t_meas,
                        t_measured=t_meas, k_measured=k_meas,
                        neighbor_order=_neighbor_order(w_s), method="theta")
