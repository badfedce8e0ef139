"""Constant-factor awakening over a spanner of the visibility graph.

Steiner robots fill every corner site (outer-ring reflex vertices and hole
vertices) not already hosting a robot.  Each woken robot then serially wakes
its still-asleep spanner neighbors in ascending edge-weight order under the
return-home model: travel to the neighbor, touch it awake, travel back.
Commits happen chronologically; when several robots race for the same
sleeper the earliest arrival wins, ties broken by waker id, and losers skip
it with no travel spent.

In the visibility metric a spanner neighbor is already visible, so every
wake costs zero time; connected spanners thus collapse to makespan 0 (the
known degeneracy of the visibility variant, reported as-is).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import EPS_GEOM, Point, PolygonDomain, is_visible
from .geodesic import WeightedGraph
from .spanner import SpannerGraph

ORIGINAL = "original"
STEINER = "steiner"


@dataclass(frozen=True)
class Robot:
    id: int
    point: Point
    origin: str = ORIGINAL


@dataclass(frozen=True)
class RobotSet:
    robots: tuple[Robot, ...]
    source_id: int

    def __post_init__(self):
        ids = [r.id for r in self.robots]
        if len(set(ids)) != len(ids):
            raise ValueError("robot ids must be unique")
        if self.source_id not in set(ids):
            raise ValueError("source id not present")
        if self.by_id(self.source_id).origin != ORIGINAL:
            raise ValueError("source must be an original robot")

    @staticmethod
    def from_points(points: Sequence[Sequence[float]], source: int = 0) -> "RobotSet":
        robots = tuple(Robot(i, Point(float(p[0]), float(p[1])), ORIGINAL)
                       for i, p in enumerate(points))
        return RobotSet(robots, source)

    def by_id(self, rid: int) -> Robot:
        for r in self.robots:
            if r.id == rid:
                return r
        raise KeyError(rid)

    def ids(self) -> tuple[int, ...]:
        return tuple(r.id for r in self.robots)

    def points(self) -> np.ndarray:
        return np.array([[r.point.x, r.point.y] for r in self.robots],
                        dtype=np.float64).reshape(-1, 2)

    def originals(self) -> tuple[Robot, ...]:
        return tuple(r for r in self.robots if r.origin == ORIGINAL)

    def steiner(self) -> tuple[Robot, ...]:
        return tuple(r for r in self.robots if r.origin == STEINER)

    def __len__(self) -> int:
        return len(self.robots)


def place_steiner(d: PolygonDomain, s: RobotSet) -> RobotSet:
    """Add a Steiner robot at every corner site (reflex and hole vertices)
    not already hosting a robot; ids continue past the current maximum."""
    existing = [r.point for r in s.robots]
    next_id = max(s.ids()) + 1 if s.robots else 0
    added = []
    for c in d.corners:
        if any(c.dist(p) <= EPS_GEOM for p in existing):
            continue
        added.append(Robot(next_id, c, STEINER))
        existing.append(c)
        next_id += 1
    return RobotSet(s.robots + tuple(added), s.source_id)


@dataclass
class AwakeningSchedule:
    metric: str
    model: str
    source: int
    wake_times: dict[int, float]
    parents: dict[int, int]
    child_order: dict[int, list[int]]
    itineraries: dict[int, list[tuple[float, float, float]]]
    makespan_all: float
    makespan_original: float

    def tree_edges(self) -> list[tuple[int, int]]:
        kids = sorted(self.parents, key=lambda c: (self.wake_times[c], c))
        return [(self.parents[c], c) for c in kids]


def _edge_cost(vt: SpannerGraph, metric: str, u: int, v: int) -> float:
    if metric == "visibility":
        return 0.0
    return float(vt.w[u, v])


def cfa_schedule(s: RobotSet, vt: SpannerGraph, metric: str = "geodesic"
                 ) -> AwakeningSchedule:
    """Simulate the serial awakening strategy on spanner vt (vertex i of vt
    must be robot i of s, in order)."""
    if metric not in ("geodesic", "visibility"):
        raise ValueError(f"unknown metric {metric!r}")
    n = len(s)
    if vt.n != n:
        raise ValueError("spanner vertex count does not match robot count")
    pts = s.points()
    if n and not np.allclose(pts, vt.base.points, atol=1e-9):
        raise ValueError("spanner vertices are not the robot positions")
    if not vt.graph.connected():
        raise ValueError("spanner graph is disconnected; cannot wake every robot")

    ids = s.ids()
    src = ids.index(s.source_id)
    order = vt.neighbor_order

    wake = {src: 0.0}
    free = {src: 0.0}
    parents: dict[int, int] = {}
    child_order: dict[int, list[int]] = {i: [] for i in range(n)}
    moves: dict[int, list[tuple[float, int, float]]] = {i: [] for i in range(n)}
    ptr = [0] * n

    while len(wake) < n:
        best: Optional[tuple[float, int, int, float]] = None
        for p in wake:
            while ptr[p] < len(order[p]) and order[p][ptr[p]] in wake:
                ptr[p] += 1
            if ptr[p] >= len(order[p]):
                continue
            u = order[p][ptr[p]]
            c = _edge_cost(vt, metric, p, u)
            t = free[p] + c
            if best is None or (t, p) < (best[0], best[1]):
                best = (t, p, u, c)
        if best is None:
            raise RuntimeError("awakening stalled with asleep robots remaining")
        t, p, u, c = best
        wake[u] = t
        free[u] = t
        parents[u] = p
        child_order[p].append(u)
        moves[p].append((free[p], u, c))
        free[p] += 2.0 * c

    wake_times = {ids[i]: wake[i] for i in range(n)}
    itineraries: dict[int, list[tuple[float, float, float]]] = {}
    for i in range(n):
        home = s.robots[i].point
        pts_i: list[tuple[float, float, float]] = [(wake[i], home.x, home.y)]
        for depart, u, c in moves[i]:
            if c > 0.0:
                tgt = s.robots[u].point
                pts_i.append((depart + c, tgt.x, tgt.y))
                pts_i.append((depart + 2.0 * c, home.x, home.y))
        itineraries[ids[i]] = pts_i

    makespan_all = max(wake.values())
    originals = [ids.index(r.id) for r in s.originals()]
    makespan_original = max(wake[i] for i in originals)
    return AwakeningSchedule(
        metric=metric, model="return-home", source=s.source_id,
        wake_times=wake_times,
        parents={ids[c]: ids[p] for c, p in parents.items()},
        child_order={ids[p]: [ids[c] for c in kids]
                     for p, kids in child_order.items() if kids},
        itineraries=itineraries,
        makespan_all=float(makespan_all),
        makespan_original=float(makespan_original),
    )


def awakedist(schedule: AwakeningSchedule, robot_id: int) -> float:
    """Time at which the given robot is woken under the schedule."""
    return float(schedule.wake_times[robot_id])


def _position_at(itinerary: Sequence[tuple[float, float, float]], t: float
                 ) -> Optional[Point]:
    if not itinerary or t < itinerary[0][0] - 1e-9:
        return None
    prev = itinerary[0]
    for cur in itinerary[1:]:
        if t <= cur[0]:
            span = cur[0] - prev[0]
            if span <= 0.0:
                return Point(cur[1], cur[2])
            a = (t - prev[0]) / span
            return Point(prev[1] + a * (cur[1] - prev[1]),
                         prev[2] + a * (cur[2] - prev[2]))
        prev = cur
    return Point(prev[1], prev[2])


def validate_schedule(schedule: AwakeningSchedule, s: RobotSet,
                      d: PolygonDomain) -> list[str]:
    """Check physical and causal consistency; returns human-readable
    violations, each prefixed with its category."""
    out: list[str] = []
    ids = set(s.ids())
    tol = 1e-6

    if schedule.source not in ids:
        out.append("tree: source robot is not in the robot set")
        return out
    if abs(schedule.wake_times.get(schedule.source, math.nan)) > 1e-9:
        out.append("tree: source wake time is not zero")
    woken = set(schedule.wake_times)
    if woken - ids:
        out.append(f"tree: unknown robot ids {sorted(woken - ids)}")
    for c, p in schedule.parents.items():
        if c == schedule.source:
            out.append("tree: source has a parent")
        if p not in woken or c not in woken:
            out.append(f"tree: edge ({p},{c}) references unwoken robot")
    for c in woken:
        if c != schedule.source and c not in schedule.parents:
            out.append(f"tree: robot {c} woken without a parent")
    # reachability from the source through parent links (cycle-safe)
    for c in woken:
        node = c
        steps = 0
        while node != schedule.source and node in schedule.parents and steps <= len(woken):
            node = schedule.parents[node]
            steps += 1
        if node != schedule.source:
            out.append(f"tree: robot {c} not connected to the source")

    for c, p in schedule.parents.items():
        if c in schedule.wake_times and p in schedule.wake_times:
            if schedule.wake_times[c] < schedule.wake_times[p] - 1e-9:
                out.append(f"causality: {c} wakes before its parent {p}")

    for rid, itin in schedule.itineraries.items():
        if rid not in ids:
            out.append(f"itinerary: unknown robot {rid}")
            continue
        home = s.by_id(rid).point
        if not itin:
            out.append(f"itinerary: robot {rid} has an empty itinerary")
            continue
        t0, x0, y0 = itin[0]
        if rid in schedule.wake_times and abs(t0 - schedule.wake_times[rid]) > tol:
            out.append(f"itinerary: robot {rid} starts at t={t0}, woken at "
                       f"{schedule.wake_times[rid]}")
        if math.hypot(x0 - home.x, y0 - home.y) > tol:
            out.append(f"itinerary: robot {rid} does not start at its home point")
        for a, b in zip(itin, itin[1:]):
            dt = b[0] - a[0]
            if dt < -1e-9:
                out.append(f"itinerary: robot {rid} time goes backwards at t={b[0]}")
                continue
            step = math.hypot(b[1] - a[1], b[2] - a[2])
            if step > dt + tol:
                out.append(f"itinerary: robot {rid} exceeds unit speed near t={b[0]}")
            if step > EPS_GEOM and not is_visible((a[1], a[2]), (b[1], b[2]), d):
                out.append(f"containment: robot {rid} leaves the domain near t={b[0]}")

    for c, p in schedule.parents.items():
        if p not in schedule.itineraries or c not in ids:
            continue
        tc = schedule.wake_times.get(c)
        if tc is None:
            continue
        pos = _position_at(schedule.itineraries[p], tc)
        child_home = s.by_id(c).point
        if pos is None:
            out.append(f"wake: parent {p} has no position at t={tc}")
            continue
        if schedule.metric == "geodesic":
            if pos.dist(child_home) > tol:
                out.append(f"wake: parent {p} is {pos.dist(child_home):.3g} away "
                           f"from robot {c} at its wake time")
        else:
            if not is_visible(pos, child_home, d):
                out.append(f"wake: robot {c} not visible from parent {p} "
                           f"at its wake time")
    return out
