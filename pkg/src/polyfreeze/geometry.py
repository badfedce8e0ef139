"""Polygonal domain with holes and the planar predicates built on it.

The domain is a closed set: boundary points belong to it.  Every tolerance
decision goes through the single global EPS_GEOM.  Sight lines may run along
a wall or start/end on the boundary, but a ring vertex lying strictly
between the two query points blocks visibility (paths bend at corners,
sight lines do not pass through them).
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from . import kernels

EPS_GEOM = 1e-9


class Point(NamedTuple):
    x: float
    y: float

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class GeometryError(ValueError):
    """Invalid domain geometry; ``code`` is machine-readable."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _as_points(ring: Iterable[Sequence[float]]) -> tuple[Point, ...]:
    return tuple(Point(float(p[0]), float(p[1])) for p in ring)


def signed_area(ring: Sequence[Point]) -> float:
    total = 0.0
    n = len(ring)
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return 0.5 * total


def _cross(ox: float, oy: float, ax: float, ay: float, bx: float, by: float) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _seg_point_dist(a: Point, b: Point, p: Point) -> float:
    vx, vy = b.x - a.x, b.y - a.y
    seg2 = vx * vx + vy * vy
    if seg2 <= 0.0:
        return p.dist(a)
    t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy))


def segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point,
                       eps: float = EPS_GEOM) -> bool:
    """Closed-segment intersection test, endpoint touches included."""
    o1 = _cross(p1.x, p1.y, p2.x, p2.y, p3.x, p3.y)
    o2 = _cross(p1.x, p1.y, p2.x, p2.y, p4.x, p4.y)
    o3 = _cross(p3.x, p3.y, p4.x, p4.y, p1.x, p1.y)
    o4 = _cross(p3.x, p3.y, p4.x, p4.y, p2.x, p2.y)
    if ((o1 > eps and o2 < -eps) or (o1 < -eps and o2 > eps)) and \
       ((o3 > eps and o4 < -eps) or (o3 < -eps and o4 > eps)):
        return True
    if abs(o1) <= eps and _seg_point_dist(p1, p2, p3) <= eps:
        return True
    if abs(o2) <= eps and _seg_point_dist(p1, p2, p4) <= eps:
        return True
    if abs(o3) <= eps and _seg_point_dist(p3, p4, p1) <= eps:
        return True
    if abs(o4) <= eps and _seg_point_dist(p3, p4, p2) <= eps:
        return True
    return False


def _validate_ring(ring: Sequence[Point], label: str) -> None:
    n = len(ring)
    if n < 3:
        raise GeometryError("ring-degenerate", f"{label} has fewer than 3 vertices")
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        if a.dist(b) <= EPS_GEOM:
            raise GeometryError("ring-degenerate",
                                f"{label} has a zero-length edge at vertex {i}")
    for i in range(n):
        a = ring[(i - 1) % n]
        b = ring[i]
        c = ring[(i + 1) % n]
        if abs(_cross(a.x, a.y, b.x, b.y, c.x, c.y)) <= EPS_GEOM:
            raise GeometryError("ring-collinear",
                                f"{label} has collinear consecutive vertices at {i}")
    for i in range(n):
        for j in range(i + 1, n):
            # adjacent edges share a vertex; skip those pairs
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if segments_intersect(ring[i], ring[(i + 1) % n],
                                  ring[j], ring[(j + 1) % n]):
                raise GeometryError("ring-self-intersect",
                                    f"{label} edges {i} and {j} intersect")


def _point_strictly_in_ring(p: Point, ring: Sequence[Point]) -> bool:
    for i in range(len(ring)):
        if _seg_point_dist(ring[i], ring[(i + 1) % len(ring)], p) <= EPS_GEOM:
            return False
    inside = False
    j = len(ring) - 1
    for i in range(len(ring)):
        yi, yj = ring[i].y, ring[j].y
        if (yi > p.y) != (yj > p.y):
            xcross = ring[j].x + (p.y - yj) * (ring[i].x - ring[j].x) / (yi - yj)
            if p.x < xcross:
                inside = not inside
        j = i
    return inside


class PolygonDomain:
    """Closed polygonal region: one CCW outer ring, zero or more CW holes
    strictly inside it and pairwise disjoint."""

    def __init__(self, outer: Iterable[Sequence[float]],
                 holes: Iterable[Iterable[Sequence[float]]] = ()):
        self.outer: tuple[Point, ...] = _as_points(outer)
        self.holes: tuple[tuple[Point, ...], ...] = tuple(_as_points(h) for h in holes)

        _validate_ring(self.outer, "outer ring")
        if signed_area(self.outer) <= EPS_GEOM:
            raise GeometryError("outer-orientation", "outer ring must be CCW")
        for hi, hole in enumerate(self.holes):
            _validate_ring(hole, f"hole {hi}")
            if signed_area(hole) >= -EPS_GEOM:
                raise GeometryError("hole-orientation", f"hole {hi} must be CW")
            for p in hole:
                if not _point_strictly_in_ring(p, self.outer):
                    raise GeometryError("hole-placement",
                                        f"hole {hi} is not strictly inside the outer ring")
            for i in range(len(hole)):
                for j in range(len(self.outer)):
                    if segments_intersect(hole[i], hole[(i + 1) % len(hole)],
                                          self.outer[j], self.outer[(j + 1) % len(self.outer)]):
                        raise GeometryError("hole-placement",
                                            f"hole {hi} touches the outer ring")
        for ai in range(len(self.holes)):
            for bi in range(ai + 1, len(self.holes)):
                ha, hb = self.holes[ai], self.holes[bi]
                for p in ha:
                    if _point_strictly_in_ring(p, hb):
                        raise GeometryError("hole-overlap",
                                            f"holes {ai} and {bi} overlap")
                for p in hb:
                    if _point_strictly_in_ring(p, ha):
                        raise GeometryError("hole-overlap",
                                            f"holes {ai} and {bi} overlap")
                for i in range(len(ha)):
                    for j in range(len(hb)):
                        if segments_intersect(ha[i], ha[(i + 1) % len(ha)],
                                              hb[j], hb[(j + 1) % len(hb)]):
                            raise GeometryError("hole-overlap",
                                                f"holes {ai} and {bi} touch")

        self.reflex: tuple[Point, ...] = self._outer_reflex()
        self.hole_vertex_list: tuple[Point, ...] = tuple(
            p for hole in self.holes for p in hole)
        self.corners: tuple[Point, ...] = self.reflex + self.hole_vertex_list

        rings = [self.outer, *self.holes]
        xy = np.array([[p.x, p.y] for ring in rings for p in ring], dtype=np.float64)
        starts = np.zeros(len(rings) + 1, dtype=np.int64)
        for i, ring in enumerate(rings):
            starts[i + 1] = starts[i] + len(ring)
        nxt = np.empty(len(xy), dtype=np.int64)
        for r in range(len(rings)):
            lo, hi = int(starts[r]), int(starts[r + 1])
            for i in range(lo, hi):
                nxt[i] = i + 1 if i + 1 < hi else lo
        self._ring_xy = xy
        self._ring_start = starts
        self._ring_hole = np.array([0] + [1] * len(self.holes), dtype=np.uint8)
        self._ring_next = nxt

        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))

    def _outer_reflex(self) -> tuple[Point, ...]:
        out = []
        ring = self.outer
        n = len(ring)
        for i in range(n):
            a, b, c = ring[(i - 1) % n], ring[i], ring[(i + 1) % n]
            if _cross(a.x, a.y, b.x, b.y, c.x, c.y) < -EPS_GEOM:
                out.append(b)
        return tuple(out)

    def packed(self):
        return self._ring_xy, self._ring_start, self._ring_hole, self._ring_next

    def contains(self, p: Point) -> bool:
        return bool(kernels.point_in_domain(
            float(p[0]), float(p[1]),
            self._ring_xy, self._ring_start, self._ring_hole, EPS_GEOM))

    def on_boundary(self, p: Point) -> bool:
        return bool(kernels.point_on_boundary(
            float(p[0]), float(p[1]), self._ring_xy, self._ring_start, EPS_GEOM))

    def __repr__(self) -> str:
        return f"PolygonDomain(outer={len(self.outer)} vertices, holes={len(self.holes)})"


def point_in_domain(p: Sequence[float], d: PolygonDomain) -> bool:
    return d.contains(Point(float(p[0]), float(p[1])))


def is_visible(p: Sequence[float], q: Sequence[float], d: PolygonDomain) -> bool:
    xy, starts, holeflags, nxt = d.packed()
    return bool(kernels.segment_visible(
        float(p[0]), float(p[1]), float(q[0]), float(q[1]),
        xy, starts, holeflags, nxt, EPS_GEOM))


def reflex_vertices(d: PolygonDomain) -> tuple[Point, ...]:
    return d.reflex


def hole_vertices(d: PolygonDomain) -> tuple[Point, ...]:
    return d.hole_vertex_list


def visibility_weights(points: np.ndarray, d: PolygonDomain) -> np.ndarray:
    """Pairwise weight matrix over ``points``: Euclidean distance where the
    pair sees each other inside d, inf otherwise, 0 on the diagonal."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    xy, starts, holeflags, nxt = d.packed()
    return kernels.visibility_weight_matrix(pts, xy, starts, holeflags, nxt, EPS_GEOM)


def convex_position(points: Sequence[Point], eps: float = EPS_GEOM) -> bool:
    """True when the closed ring through ``points`` is convex (no right turn
    for a CCW ring, no left turn for a CW one)."""
    n = len(points)
    if n < 3:
        return True
    signs = []
    for i in range(n):
        a, b, c = points[i], points[(i + 1) % n], points[(i + 2) % n]
        cr = _cross(a.x, a.y, b.x, b.y, c.x, c.y)
        if abs(cr) > eps:
            signs.append(cr > 0)
    return len(set(signs)) <= 1
