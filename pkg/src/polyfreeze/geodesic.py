"""Geodesic shortest paths inside the domain.

Paths between two domain points bend only at corner sites: reflex vertices
of the outer ring plus hole vertices.  Per-pair queries therefore run a
shortest path over the visibility graph of {a, b} plus those corners, which
keeps interior waypoints structurally inside the corner set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .geometry import EPS_GEOM, Point, PolygonDomain, visibility_weights

INF = math.inf


class WeightedGraph:
    """Dense undirected graph: w[i, j] is the edge weight, inf if absent,
    0 on the diagonal.  Vertex ids are row indices into ``points``."""

    def __init__(self, points: np.ndarray, w: np.ndarray,
                 kinds: Optional[Sequence[str]] = None):
        self.points = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        self.w = np.asarray(w, dtype=np.float64)
        n = self.points.shape[0]
        if self.w.shape != (n, n):
            raise ValueError("weight matrix shape mismatch")
        self.kinds: tuple[str, ...] = tuple(kinds) if kinds is not None else ("point",) * n
        self._dist: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def point(self, i: int) -> Point:
        return Point(float(self.points[i, 0]), float(self.points[i, 1]))

    def edges(self):
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                if self.w[u, v] != INF:
                    yield u, v, float(self.w[u, v])

    def edge_count(self) -> int:
        n = self.n
        return int(np.sum(np.isfinite(self.w[np.triu_indices(n, k=1)])))

    def neighbors(self, u: int) -> list[int]:
        return [v for v in range(self.n) if v != u and self.w[u, v] != INF]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def max_degree(self) -> int:
        return max((self.degree(u) for u in range(self.n)), default=0)

    def all_pairs(self) -> np.ndarray:
        if self._dist is None:
            self._dist = kernels.all_pairs_dense(self.w)
        return self._dist

    def connected(self) -> bool:
        if self.n == 0:
            return True
        return bool(np.all(np.isfinite(self.all_pairs()[0])))


def build_visibility_graph(points: np.ndarray, d: PolygonDomain,
                           kinds: Optional[Sequence[str]] = None) -> WeightedGraph:
    """Visibility graph over exactly the given points: an edge wherever the
    pair sees each other inside d, weighted by Euclidean distance."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return WeightedGraph(pts, visibility_weights(pts, d), kinds)


@dataclass(frozen=True)
class GeodesicPath:
    waypoints: tuple[Point, ...]
    length: float

    @property
    def source(self) -> Point:
        return self.waypoints[0]

    @property
    def target(self) -> Point:
        return self.waypoints[-1]


def _lex_vertex_path(w: np.ndarray, dist: np.ndarray, u: int, v: int) -> Optional[list[int]]:
    """Lexicographically smallest simple vertex sequence realizing the
    shortest u-v distance (greedy front extension, ascending vertex id)."""
    if not math.isfinite(dist[u, v]):
        return None
    tol = 1e-12 * max(1.0, float(dist[u, v]))
    n = w.shape[0]
    path = [u]
    visited = {u}
    cur = u
    while cur != v:
        nxt = -1
        for nb in range(n):
            if nb == cur or nb in visited or w[cur, nb] == INF:
                continue
            if w[cur, nb] + dist[nb, v] <= dist[cur, v] + tol:
                nxt = nb
                break
        if nxt < 0:
            return None
        path.append(nxt)
        visited.add(nxt)
        cur = nxt
    return path


def shortest_path_in_graph(g: WeightedGraph, u: int, v: int
                           ) -> tuple[Optional[list[int]], float]:
    """(vertex id path, length); (None, inf) when u and v are disconnected."""
    dist = g.all_pairs()
    path = _lex_vertex_path(g.w, dist, u, v)
    if path is None:
        return None, INF
    return path, float(dist[u, v])


def _pair_graph(a: Point, b: Point, d: PolygonDomain) -> WeightedGraph:
    pts = np.array([[a.x, a.y], [b.x, b.y]] +
                   [[c.x, c.y] for c in d.corners], dtype=np.float64)
    kinds = ("query", "query") + ("corner",) * len(d.corners)
    return build_visibility_graph(pts, d, kinds)


def geodesic_path(a: Sequence[float], b: Sequence[float],
                  d: PolygonDomain) -> Optional[GeodesicPath]:
    """Shortest path inside d from a to b; None if no path exists (points
    outside the domain, degenerate cases)."""
    pa = Point(float(a[0]), float(a[1]))
    pb = Point(float(b[0]), float(b[1]))
    if not (d.contains(pa) and d.contains(pb)):
        return None
    if pa.dist(pb) <= EPS_GEOM:
        return GeodesicPath((pa,), 0.0)
    g = _pair_graph(pa, pb, d)
    ids, length = shortest_path_in_graph(g, 0, 1)
    if ids is None:
        return None
    return GeodesicPath(tuple(g.point(i) for i in ids), length)


def gvp(a: Sequence[float], b: Sequence[float],
        d: PolygonDomain) -> Optional[GeodesicPath]:
    """Prefix of the geodesic a->b up to the last interior waypoint, i.e.
    the travel needed before b becomes visible.  Zero-length (single
    waypoint) exactly when b is already visible from a."""
    from .geometry import is_visible

    pa = Point(float(a[0]), float(a[1]))
    pb = Point(float(b[0]), float(b[1]))
    if is_visible(pa, pb, d):
        return GeodesicPath((pa,), 0.0)
    full = geodesic_path(pa, pb, d)
    if full is None:
        return None
    prefix = full.waypoints[:-1]
    length = sum(prefix[i].dist(prefix[i + 1]) for i in range(len(prefix) - 1))
    return GeodesicPath(prefix, length)


class GeodesicMetric:
    """All-pairs geodesic distances over a fixed set of query points.

    Internally one visibility graph over query points plus all corner sites,
    so query-to-query distances equal true geodesic distances.  Query points
    occupy vertex ids 0..K-1; corners follow."""

    def __init__(self, points: np.ndarray, d: PolygonDomain):
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
        self.domain = d
        self.k = pts.shape[0]
        allpts = np.vstack([pts, np.array([[c.x, c.y] for c in d.corners],
                                          dtype=np.float64).reshape(-1, 2)]) \
            if d.corners else pts
        kinds = ("query",) * self.k + ("corner",) * len(d.corners)
        self.graph = build_visibility_graph(allpts, d, kinds)
        self._dist = self.graph.all_pairs()

    def distance(self, i: int, j: int) -> float:
        return float(self._dist[i, j])

    def matrix(self) -> np.ndarray:
        return self._dist[:self.k, :self.k].copy()

    def path(self, i: int, j: int) -> Optional[GeodesicPath]:
        ids = _lex_vertex_path(self.graph.w, self._dist, i, j)
        if ids is None:
            return None
        return GeodesicPath(tuple(self.graph.point(v) for v in ids),
                            float(self._dist[i, j]))

    def diameter(self) -> float:
        if self.k == 0:
            return 0.0
        sub = self._dist[:self.k, :self.k]
        return float(np.max(sub))


def diameter(points: np.ndarray, d: PolygonDomain) -> float:
    """Largest geodesic distance between any two of the given points."""
    return GeodesicMetric(points, d).diameter()
