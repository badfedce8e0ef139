"""Pixel-grid awakening: near-optimal schedules for normalized domains.

The unit square is cut into an m x m grid; each grid cell clipped against
the domain yields one pixel per connected component.  The lowest-id robot
of each occupied pixel (the source's pixel uses the source) represents it
in an exhaustive search over awakening trees under the continue movement
model; inside each pixel the woken representative runs the constant-factor
strategy.  Representatives finish their intra-pixel duties before departing
to their children, which keeps itineraries physically realizable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import shapely.geometry as _shg
from shapely.geometry.polygon import orient as _sh_orient

from .geometry import EPS_GEOM, Point, PolygonDomain, convex_position, is_visible
from .geodesic import (GeodesicMetric, GeodesicPath, WeightedGraph,
                       build_visibility_graph, geodesic_path, gvp)
from .spanner import greedy_spanner, theta_graph
from .cfa import AwakeningSchedule, Robot, RobotSet, cfa_schedule

REP_CAP = 8


@dataclass
class Pixel:
    i: int
    j: int
    comp: int
    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...]
    members: tuple[int, ...] = ()
    representative: Optional[int] = None
    region: object = field(default=None, repr=False, compare=False)

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.i, self.j, self.comp)

    def diameter(self) -> float:
        best = 0.0
        for a in range(len(self.outer)):
            for b in range(a + 1, len(self.outer)):
                d = self.outer[a].dist(self.outer[b])
                if d > best:
                    best = d
        return best

    def is_convex(self) -> bool:
        return not self.holes and convex_position(self.outer)

    def covers(self, p: Point, tol: float = EPS_GEOM) -> bool:
        return self.region is not None and \
            self.region.distance(_shg.Point(p.x, p.y)) <= tol

    def distance_to(self, p: Point) -> float:
        return float(self.region.distance(_shg.Point(p.x, p.y)))


def _ring_points(coords) -> tuple[Point, ...]:
    pts = [Point(float(x), float(y)) for x, y in coords]
    if len(pts) > 1 and pts[0].dist(pts[-1]) <= 1e-15:
        pts = pts[:-1]
    return tuple(pts)


def pixelize(d: PolygonDomain, m: int) -> list[Pixel]:
    """Clip the domain against the m x m unit-square grid.  Each connected
    component of a cell's intersection becomes its own pixel; zero-area
    slivers are dropped.  Requires a normalized domain (bbox inside the
    unit square)."""
    if m < 1:
        raise ValueError("grid resolution m must be >= 1")
    x0, y0, x1, y1 = d.bbox
    if x0 < -1e-9 or y0 < -1e-9 or x1 > 1.0 + 1e-9 or y1 > 1.0 + 1e-9:
        raise ValueError("domain must be normalized to the unit square before pixelization")
    dom = _shg.Polygon([(p.x, p.y) for p in d.outer],
                       [[(p.x, p.y) for p in h] for h in d.holes])
    pixels: list[Pixel] = []
    for i in range(m):
        for j in range(m):
            cell = _shg.box(i / m, j / m, (i + 1) / m, (j + 1) / m)
            inter = dom.intersection(cell)
            comps = []
            if inter.geom_type == "Polygon":
                comps = [inter]
            elif inter.geom_type in ("MultiPolygon", "GeometryCollection"):
                comps = [g for g in inter.geoms if g.geom_type == "Polygon"]
            comps = [c for c in comps if c.area > 1e-12]
            comps = [_sh_orient(c, 1.0) for c in comps]
            comps.sort(key=lambda c: min(_ring_points(c.exterior.coords)))
            for ci, c in enumerate(comps):
                pixels.append(Pixel(
                    i=i, j=j, comp=ci,
                    outer=_ring_points(c.exterior.coords),
                    holes=tuple(_ring_points(r.coords) for r in c.interiors),
                    region=c))
    return pixels


def choose_representatives(pixels: Sequence[Pixel], s: RobotSet) -> list[Pixel]:
    """Assign robots to pixels (boundary ties go to the lexicographically
    smallest cell key) and pick each occupied pixel's representative: its
    lowest-id member, except the source's pixel which uses the source."""
    if not pixels:
        raise ValueError("no pixels to assign robots to")
    members: dict[tuple[int, int, int], list[int]] = {}
    for r in s.robots:
        covering = [px for px in pixels if px.covers(r.point)]
        if covering:
            chosen = min(covering, key=lambda px: px.key)
        else:
            chosen = min(pixels, key=lambda px: (px.distance_to(r.point), px.key))
        members.setdefault(chosen.key, []).append(r.id)
    out = []
    for px in pixels:
        mem = tuple(sorted(members.get(px.key, ())))
        rep: Optional[int] = None
        if mem:
            rep = s.source_id if s.source_id in mem else mem[0]
        out.append(Pixel(i=px.i, j=px.j, comp=px.comp, outer=px.outer,
                         holes=px.holes, members=mem, representative=rep,
                         region=px.region))
    return out


class GeodesicContinueProvider:
    """Continue-model movement over a fixed point set: a waker travels the
    geodesic to the sleeper's home and stays there.  Position states are
    vertex ids of the underlying metric graph (points first, then corners)."""

    def __init__(self, points: np.ndarray, d: PolygonDomain):
        self.metric = GeodesicMetric(points, d)
        self.k = self.metric.k

    def pos0(self, i: int) -> int:
        return i

    def cost(self, pos: int, target: int) -> float:
        return self.metric.distance(pos, target)

    def next_pos(self, pos: int, target: int) -> int:
        return target

    def polyline(self, pos: int, target: int) -> tuple[Point, ...]:
        path = self.metric.path(pos, target)
        if path is None:
            raise ValueError("disconnected geodesic metric")
        return path.waypoints

    def point(self, pos: int) -> Point:
        return self.metric.graph.point(pos)


class VisibilityContinueProvider:
    """Continue-model movement in the visibility metric: a waker travels
    only until the sleeper becomes visible (the geodesic prefix through
    corner sites) and stops there."""

    def __init__(self, points: np.ndarray, d: PolygonDomain):
        self.metric = GeodesicMetric(points, d)
        self.k = self.metric.k
        self.domain = d
        self._cache: dict[tuple[int, int], tuple[float, int, tuple[Point, ...]]] = {}

    def _corner_index(self, p: Point) -> int:
        for ci, c in enumerate(self.domain.corners):
            if c.dist(p) <= EPS_GEOM:
                return self.k + ci
        raise ValueError("sight-path waypoint is not a corner site")

    def _lookup(self, pos: int, target: int) -> tuple[float, int, tuple[Point, ...]]:
        key = (pos, target)
        if key not in self._cache:
            a = self.point(pos)
            b = self.point(target)
            path = gvp(a, b, self.domain)
            if path is None:
                raise ValueError("disconnected visibility metric")
            if len(path.waypoints) == 1:
                self._cache[key] = (0.0, pos, (a,))
            else:
                end = path.waypoints[-1]
                self._cache[key] = (path.length, self._corner_index(end),
                                    path.waypoints)
        return self._cache[key]

    def pos0(self, i: int) -> int:
        return i

    def cost(self, pos: int, target: int) -> float:
        return self._lookup(pos, target)[0]

    def next_pos(self, pos: int, target: int) -> int:
        return self._lookup(pos, target)[1]

    def polyline(self, pos: int, target: int) -> tuple[Point, ...]:
        return self._lookup(pos, target)[2]

    def point(self, pos: int) -> Point:
        return self.metric.graph.point(pos)


def make_provider(points: np.ndarray, d: PolygonDomain, metric: str):
    if metric == "geodesic":
        return GeodesicContinueProvider(points, d)
    if metric == "visibility":
        return VisibilityContinueProvider(points, d)
    raise ValueError(f"unknown metric {metric!r}")


@dataclass
class AwakeningTree:
    root: int
    parents: dict[int, int]
    children: dict[int, list[int]]
    wake_times: dict[int, float]
    makespan: float
    metric: str
    model: str = "continue"

    def nodes(self) -> list[int]:
        return sorted(self.wake_times)

    def depth(self) -> int:
        def go(node: int) -> int:
            kids = self.children.get(node, [])
            return 1 + max((go(c) for c in kids), default=0)
        return go(self.root) - 1


def simulate_tree(children: dict[int, list[int]], root: int, provider,
                  index_of: dict[int, int], cutoff: float = math.inf
                  ) -> Optional[dict[int, float]]:
    """Wake times for an ordered awakening tree under the continue model;
    None as soon as any wake time reaches the cutoff."""
    wake = {root: 0.0}

    def go(node: int, t: float, pos: int) -> bool:
        for c in children.get(node, []):
            ci = index_of[c]
            t = t + provider.cost(pos, ci)
            if t >= cutoff:
                return False
            wake[c] = t
            nxt = provider.next_pos(pos, ci)
            if not go(c, t, provider.pos0(ci)):
                return False
            pos = nxt
        return True

    if not go(root, 0.0, provider.pos0(index_of[root])):
        return None
    return wake


def _ordered_trees(root: int, mask: int, k: int):
    """All ordered rooted trees on {root} + vertices of mask, as children
    dicts; deterministic ascending enumeration."""
    def forests(m: int):
        # ordered forests covering exactly the vertices of m
        if m == 0:
            yield ()
            return
        for r in range(k):
            if not (m >> r) & 1:
                continue
            rest = m & ~(1 << r)
            sub = rest
            while True:
                for tree in trees(r, sub):
                    for tail in forests(rest & ~sub):
                        yield ((r, tree),) + tail
                if sub == 0:
                    break
                sub = (sub - 1) & rest

    def trees(r: int, m: int):
        # ordered trees rooted at r over {r} + vertices of m
        for forest in forests(m):
            yield forest

    for forest in forests(mask):
        yield ((root, forest),)


def _forest_to_children(node: int, forest, out: dict[int, list[int]]) -> None:
    out[node] = [r for r, _ in forest]
    for r, sub in forest:
        _forest_to_children(r, sub, out)


def sbat_search(reps: Sequence[int], root: int, provider,
                depth_cap: Optional[int] = None) -> AwakeningTree:
    """Exhaustive search over ordered awakening trees on the representative
    ids, continue model, minimizing the last wake time.  First tree found
    at the optimum wins, so results are deterministic.  Capped at REP_CAP
    representatives."""
    reps = list(reps)
    k = len(reps)
    if k == 0:
        raise ValueError("no representatives to schedule")
    if root not in reps:
        raise ValueError("root must be one of the representatives")
    if k > REP_CAP:
        raise ValueError(
            f"{k} representatives exceed the search cap of {REP_CAP}; "
            f"lower the pixel grid resolution m (or raise the cap)")
    index_of = {rid: i for i, rid in enumerate(reps)}
    root_idx = index_of[root]
    full_mask = 0
    for i in range(k):
        if i != root_idx:
            full_mask |= (1 << i)

    best_makespan = math.inf
    best_children: Optional[dict[int, list[int]]] = None
    best_wake: Optional[dict[int, float]] = None

    def tree_depth(children: dict[int, list[int]], node: int) -> int:
        return 1 + max((tree_depth(children, c) for c in children.get(node, [])),
                       default=0)

    for wrapped in _ordered_trees(root_idx, full_mask, k):
        _, forest = wrapped[0]
        children_idx: dict[int, list[int]] = {}
        _forest_to_children(root_idx, forest, children_idx)
        children = {reps[p]: [reps[c] for c in kids]
                    for p, kids in children_idx.items()}
        if depth_cap is not None and tree_depth(children, root) - 1 > depth_cap:
            continue
        wake = simulate_tree(children, root, provider, index_of,
                             cutoff=best_makespan)
        if wake is None:
            continue
        mk = max(wake.values())
        if mk < best_makespan:
            best_makespan = mk
            best_children = children
            best_wake = wake

    if best_children is None:
        raise ValueError("depth cap excludes every awakening tree")
    parents = {c: p for p, kids in best_children.items() for c in kids}
    return AwakeningTree(root=root, parents=parents,
                         children=best_children, wake_times=best_wake,
                         makespan=float(best_makespan),
                         metric="geodesic" if isinstance(provider, GeodesicContinueProvider)
                         else "visibility")


def _pixel_spanner(member_points: np.ndarray, px: Pixel, d: PolygonDomain,
                   theta_k: int = 9, t_stretch: float = 6.0):
    if px.is_convex():
        return theta_graph(member_points, theta_k)
    # members of a nonconvex pixel need not see each other, so span the
    # geodesic metric (always finite) instead of the bare visibility graph
    w = GeodesicMetric(member_points, d).matrix()
    return greedy_spanner(WeightedGraph(member_points, w), t_stretch)


def _expand_legs(itin: list[tuple[float, float, float]], d: PolygonDomain
                 ) -> list[tuple[float, float, float]]:
    """Replace straight itinerary hops that cut through obstacles with their
    geodesic waypoints, keeping endpoint times exact."""
    if len(itin) < 2:
        return itin
    out = [itin[0]]
    for (t0, x0, y0), (t1, x1, y1) in zip(itin, itin[1:]):
        a, b = Point(x0, y0), Point(x1, y1)
        if a.dist(b) <= EPS_GEOM or is_visible(a, b, d):
            out.append((t1, x1, y1))
            continue
        path = geodesic_path(a, b, d)
        if path is None or path.length <= 0.0:
            out.append((t1, x1, y1))
            continue
        scale = (t1 - t0) / path.length
        acc = 0.0
        for u, v in zip(path.waypoints, path.waypoints[1:]):
            acc += u.dist(v)
            out.append((t0 + acc * scale, v.x, v.y))
        out[-1] = (t1, x1, y1)
    return out


def compose_ptas(tree: AwakeningTree, pixels: Sequence[Pixel], s: RobotSet,
                 d: PolygonDomain, metric: str = "geodesic",
                 theta_k: int = 9, t_stretch: float = 6.0) -> AwakeningSchedule:
    """Combine the inter-pixel awakening tree with intra-pixel constant-factor
    schedules into one full schedule.  A woken representative first wakes its
    own pixel (return-home, so it ends at its home point), then departs to
    its tree children in order under the continue model."""
    by_rep: dict[int, Pixel] = {}
    for px in pixels:
        if px.representative is not None:
            by_rep[px.representative] = px
    tree_nodes = set(tree.nodes())
    for rid in tree_nodes:
        if rid not in by_rep:
            raise ValueError(f"tree node {rid} is not a pixel representative")
    missing = sorted(set(by_rep) - tree_nodes)
    if missing:
        raise ValueError(f"representatives {missing} are absent from the tree")

    rep_ids = sorted(by_rep)
    rep_points = np.array([[s.by_id(r).point.x, s.by_id(r).point.y]
                           for r in rep_ids], dtype=np.float64)
    provider = make_provider(rep_points, d, metric)
    index_of = {rid: i for i, rid in enumerate(rep_ids)}

    # intra-pixel schedules, computed once per occupied pixel
    intra: dict[int, AwakeningSchedule] = {}
    for rep, px in by_rep.items():
        if len(px.members) <= 1:
            continue
        sub_robots = tuple(s.by_id(rid) for rid in px.members)
        sub = RobotSet(sub_robots, rep)
        sp = _pixel_spanner(sub.points(), px, d, theta_k, t_stretch)
        intra[rep] = cfa_schedule(sub, sp, metric)

    wake_times: dict[int, float] = {}
    parents: dict[int, int] = {}
    child_order: dict[int, list[int]] = {}
    itineraries: dict[int, list[tuple[float, float, float]]] = {}

    def visit(rep: int, tau: float) -> None:
        home = s.by_id(rep).point
        wake_times[rep] = tau
        itineraries[rep] = [(tau, home.x, home.y)]
        kids: list[int] = []
        if rep in intra:
            sub = intra[rep]
            for rid, t in sub.wake_times.items():
                if rid == rep:
                    continue
                wake_times[rid] = tau + t
                parents[rid] = sub.parents[rid]
                itineraries[rid] = _expand_legs(
                    [(tt + tau, x, y) for tt, x, y in sub.itineraries[rid]], d)
            for p, ko in sub.child_order.items():
                if p == rep:
                    kids.extend(ko)
                else:
                    child_order[p] = list(ko)
            rep_itin = sub.itineraries[rep]
            itineraries[rep].extend((tt + tau, x, y) for tt, x, y in rep_itin[1:])
            itineraries[rep] = _expand_legs(itineraries[rep], d)
        duty_end = itineraries[rep][-1][0]

        t = duty_end
        pos = provider.pos0(index_of[rep])
        for child in tree.children.get(rep, []):
            ci = index_of[child]
            c = provider.cost(pos, ci)
            poly = provider.polyline(pos, ci)
            t0 = t
            acc = 0.0
            for a, b in zip(poly, poly[1:]):
                acc += a.dist(b)
                itineraries[rep].append((t0 + acc, b.x, b.y))
            t = t0 + c
            parents[child] = rep
            kids.append(child)
            pos = provider.next_pos(pos, ci)
            visit(child, t)
        if kids:
            child_order[rep] = kids

    visit(tree.root, 0.0)

    makespan_all = max(wake_times.values())
    originals = [r.id for r in s.originals() if r.id in wake_times]
    makespan_original = max(wake_times[r] for r in originals)
    return AwakeningSchedule(
        metric=metric, model="continue", source=s.source_id,
        wake_times=wake_times, parents=parents, child_order=child_order,
        itineraries=itineraries, makespan_all=float(makespan_all),
        makespan_original=float(makespan_original))


def tree_to_schedule(tree: AwakeningTree, s: RobotSet, d: PolygonDomain,
                     metric: str = "geodesic") -> AwakeningSchedule:
    """Full schedule (itineraries included) for a bare awakening tree over
    individual robots, continue model: composition with every robot its own
    singleton pixel."""
    fake = [Pixel(i=0, j=0, comp=idx, outer=(), holes=(),
                  members=(rid,), representative=rid, region=None)
            for idx, rid in enumerate(sorted(tree.wake_times))]
    return compose_ptas(tree, fake, s, d, metric)


def ptas_pipeline(s: RobotSet, d: PolygonDomain, m: int,
                  metric: str = "geodesic", depth_cap: Optional[int] = None,
                  theta_k: int = 9, t_stretch: float = 6.0
                  ) -> tuple[list[Pixel], AwakeningTree, AwakeningSchedule]:
    """End-to-end pixel pipeline: pixelize, assign robots, search awakening
    trees over the representatives, compose the full schedule.  The search
    and the composition share one provider ordering (representatives sorted
    by id) so composed times match the searched times exactly when every
    pixel is a singleton."""
    pixels = choose_representatives(pixelize(d, m), s)
    reps = sorted(px.representative for px in pixels
                  if px.representative is not None)
    if not reps:
        raise ValueError("no occupied pixels")
    rep_points = np.array([[s.by_id(r).point.x, s.by_id(r).point.y]
                           for r in reps], dtype=np.float64)
    provider = make_provider(rep_points, d, metric)
    root = s.source_id
    tree = sbat_search(reps, root, provider, depth_cap)
    schedule = compose_ptas(tree, pixels, s, d, metric, theta_k, t_stretch)
    return pixels, tree, schedule
