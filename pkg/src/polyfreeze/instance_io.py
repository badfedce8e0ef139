"""Instance and schedule files: loading, validation, canonical output.

Instances normalize on load: a uniform scale and translation (never a
rotation) maps the outer ring's bounding box into the unit square.  The
transform is exact identity once a file has been normalized, and floats
serialize at 12 significant digits, so save -> load -> save is
byte-stable after the first round trip.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence, Union

from .cfa import AwakeningSchedule, Robot, RobotSet, ORIGINAL
from .geometry import EPS_GEOM, GeometryError, Point, PolygonDomain

SCHEMA_VERSION = 1
PROFILES = ("convex", "lshape", "orthogonal")


class InstanceError(ValueError):
    """Invalid instance; ``errors`` lists (code, detail) pairs."""

    def __init__(self, errors: Sequence[tuple[str, str]]):
        self.errors = list(errors)
        super().__init__("; ".join(f"{c}: {m}" for c, m in self.errors))

    @property
    def codes(self) -> list[str]:
        return [c for c, _ in self.errors]


@dataclass
class Instance:
    domain: PolygonDomain
    robots: RobotSet
    metric: str = "geodesic"


def _round12(value: Any) -> Any:
    if isinstance(value, float):
        v = float(f"{value:.12g}")
        return 0.0 if v == 0.0 else v
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def canonical_json(obj: Any) -> str:
    return json.dumps(_round12(obj), sort_keys=True, separators=(",", ":")) + "\n"


def _coerce_pairs(raw: Any, what: str, errors: list) -> list[tuple[float, float]]:
    out = []
    if not isinstance(raw, list):
        errors.append(("schema", f"{what} must be a list of [x, y] pairs"))
        return out
    for i, item in enumerate(raw):
        if (not isinstance(item, (list, tuple)) or len(item) != 2 or
                not all(isinstance(c, (int, float)) and math.isfinite(c) for c in item)):
            errors.append(("schema", f"{what}[{i}] is not a finite [x, y] pair"))
            continue
        out.append((float(item[0]), float(item[1])))
    return out


def _strip_closed(ring: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if len(ring) > 1 and ring[0] == ring[-1]:
        return ring[:-1]
    return ring


def normalize_coordinates(outer, holes, robots):
    """Uniform scale + translation taking the outer bbox into [0,1]^2."""
    xs = [p[0] for p in outer]
    ys = [p[1] for p in outer]
    minx, miny = min(xs), min(ys)
    extent = max(max(xs) - minx, max(ys) - miny)
    if extent <= 0.0:
        raise InstanceError([("schema", "outer ring has zero extent")])
    scale = 1.0 / extent
    def tx(p):
        return ((p[0] - minx) * scale, (p[1] - miny) * scale)
    return ([tx(p) for p in outer],
            [[tx(p) for p in h] for h in holes],
            [tx(p) for p in robots])


def load_instance(source: Union[str, Path, dict]) -> Instance:
    """Parse, validate, and normalize an instance.  Raises InstanceError
    carrying machine-readable codes and offending indices."""
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = source
    errors: list[tuple[str, str]] = []
    if not isinstance(raw, dict):
        raise InstanceError([("schema", "instance must be a JSON object")])
    if raw.get("version") != SCHEMA_VERSION:
        errors.append(("schema", f"version must be {SCHEMA_VERSION}"))

    outer = _strip_closed(_coerce_pairs(raw.get("outer"), "outer", errors))
    holes_raw = raw.get("holes", [])
    holes: list[list[tuple[float, float]]] = []
    if not isinstance(holes_raw, list):
        errors.append(("schema", "holes must be a list of rings"))
    else:
        for hi, h in enumerate(holes_raw):
            holes.append(_strip_closed(_coerce_pairs(h, f"holes[{hi}]", errors)))
    robots = _coerce_pairs(raw.get("robots"), "robots", errors)
    if not robots and not errors:
        errors.append(("schema", "at least one robot is required"))
    source_idx = raw.get("source", 0)
    if not isinstance(source_idx, int) or isinstance(source_idx, bool):
        errors.append(("schema", "source must be an integer index"))
        source_idx = 0
    metric = raw.get("metric", "geodesic")
    if metric not in ("geodesic", "visibility"):
        errors.append(("metric", f"unknown metric {metric!r}"))
    if errors:
        raise InstanceError(errors)

    outer, holes, robots = normalize_coordinates(outer, holes, robots)

    try:
        domain = PolygonDomain(outer, holes)
    except GeometryError as exc:
        raise InstanceError([(exc.code, str(exc))]) from exc

    for i, p in enumerate(robots):
        if not domain.contains(Point(*p)):
            errors.append(("robot-outside", f"robot {i} lies outside the domain"))
    seen: dict[tuple[float, float], int] = {}
    for i, p in enumerate(robots):
        if p in seen:
            errors.append(("robot-duplicate",
                           f"robots {seen[p]} and {i} share a position"))
        else:
            seen[p] = i
    if not (0 <= source_idx < len(robots)):
        errors.append(("source-index", f"source index {source_idx} out of range"))
    if errors:
        raise InstanceError(errors)

    rset = RobotSet(tuple(Robot(i, Point(*p), ORIGINAL)
                          for i, p in enumerate(robots)), source_idx)
    return Instance(domain=domain, robots=rset, metric=metric)


def save_instance(inst: Instance) -> dict:
    """Schema dict for an instance; original robots only (Steiner robots
    are derived, never stored)."""
    return {
        "version": SCHEMA_VERSION,
        "outer": [[p.x, p.y] for p in inst.domain.outer],
        "holes": [[[p.x, p.y] for p in h] for h in inst.domain.holes],
        "robots": [[r.point.x, r.point.y] for r in inst.robots.originals()],
        "source": inst.robots.ids().index(inst.robots.source_id),
        "metric": inst.metric,
    }


def write_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(canonical_json(save_instance(inst)), encoding="utf-8")


def schedule_to_dict(schedule: AwakeningSchedule) -> dict:
    return {
        "metric": schedule.metric,
        "model": schedule.model,
        "wake_times": {str(rid): t for rid, t in schedule.wake_times.items()},
        "tree": [[p, c] for p, c in schedule.tree_edges()],
        "itineraries": {str(rid): [[t, x, y] for t, x, y in itin]
                        for rid, itin in schedule.itineraries.items()},
        "makespan_all": schedule.makespan_all,
        "makespan_original": schedule.makespan_original,
    }


def schedule_from_dict(raw: dict) -> AwakeningSchedule:
    wake_times = {int(k): float(v) for k, v in raw["wake_times"].items()}
    parents = {int(c): int(p) for p, c in raw["tree"]}
    children: dict[int, list[int]] = {}
    for p, c in raw["tree"]:
        children.setdefault(int(p), []).append(int(c))
    for p in children:
        children[p].sort(key=lambda c: (wake_times[c], c))
    roots = [rid for rid in wake_times if rid not in parents]
    if len(roots) != 1:
        raise InstanceError([("schedule", "schedule must have exactly one root")])
    itineraries = {int(k): [(float(t), float(x), float(y)) for t, x, y in v]
                   for k, v in raw["itineraries"].items()}
    return AwakeningSchedule(
        metric=raw["metric"], model=raw["model"], source=roots[0],
        wake_times=wake_times, parents=parents, child_order=children,
        itineraries=itineraries,
        makespan_all=float(raw["makespan_all"]),
        makespan_original=float(raw["makespan_original"]))


def write_schedule(schedule: AwakeningSchedule, path: Union[str, Path]) -> None:
    Path(path).write_text(canonical_json(schedule_to_dict(schedule)),
                          encoding="utf-8")


def load_schedule(path: Union[str, Path]) -> AwakeningSchedule:
    with open(path, "r", encoding="utf-8") as fh:
        return schedule_from_dict(json.load(fh))


def _convex_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _rect_cw(x0, y0, x1, y1):
    return [(x0, y0), (x0, y1), (x1, y1), (x1, y0)]


def _try_domain(outer, holes) -> Optional[PolygonDomain]:
    try:
        return PolygonDomain(outer, holes)
    except GeometryError:
        return None


def _gen_outer(rng: random.Random, profile: str) -> list[tuple[float, float]]:
    if profile == "convex":
        pts = [(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)) for _ in range(14)]
        hull = _convex_hull(pts)
        while len(hull) < 5:
            pts.append((rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)))
            hull = _convex_hull(pts)
        return hull
    if profile == "lshape":
        a = rng.uniform(0.3, 0.7)
        b = rng.uniform(0.3, 0.7)
        return [(0.0, 0.0), (1.0, 0.0), (1.0, a), (b, a), (b, 1.0), (0.0, 1.0)]
    if profile == "orthogonal":
        # unit square with 1-2 rectangular corner notches
        notches = rng.randint(1, 2)
        corners = rng.sample(["ne", "nw", "se", "sw"], notches)
        ring = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        for c in corners:
            w = rng.uniform(0.2, 0.4)
            h = rng.uniform(0.2, 0.4)
            if c == "ne":
                repl = {(1.0, 1.0): [(1.0, 1.0 - h), (1.0 - w, 1.0 - h), (1.0 - w, 1.0)]}
            elif c == "nw":
                repl = {(0.0, 1.0): [(w, 1.0), (w, 1.0 - h), (0.0, 1.0 - h)]}
            elif c == "se":
                repl = {(1.0, 0.0): [(1.0 - w, 0.0), (1.0 - w, h), (1.0, h)]}
            else:
                repl = {(0.0, 0.0): [(0.0, h), (w, h), (w, 0.0)]}
            out = []
            for v in ring:
                out.extend(repl.get(v, [v]))
            ring = out
        return ring
    raise ValueError(f"unknown profile {profile!r}; choose from {PROFILES}")


def generate_instance(seed: int, n_robots: int = 6, n_holes: int = 0,
                      profile: str = "convex") -> dict:
    """Deterministic random instance in schema form (already normalized)."""
    if profile == "convex" and n_holes > 0:
        raise ValueError("convex profile does not take holes")
    if n_holes > 2:
        raise ValueError("at most 2 holes are supported by the generator")
    if n_robots < 1:
        raise ValueError("need at least one robot")
    rng = random.Random(seed)
    outer = _gen_outer(rng, profile)

    holes: list[list[tuple[float, float]]] = []
    attempts = 0
    while len(holes) < n_holes and attempts < 500:
        attempts += 1
        w = rng.uniform(0.06, 0.16)
        h = rng.uniform(0.06, 0.16)
        x0 = rng.uniform(0.05, 0.95 - w)
        y0 = rng.uniform(0.05, 0.95 - h)
        cand = holes + [_rect_cw(x0, y0, x0 + w, y0 + h)]
        if _try_domain(outer, cand) is not None:
            holes = cand
    if len(holes) < n_holes:
        raise ValueError(f"could not place {n_holes} holes for seed {seed}")
    domain = PolygonDomain(outer, holes)

    x0b, y0b, x1b, y1b = domain.bbox
    robots: list[tuple[float, float]] = []
    attempts = 0
    while len(robots) < n_robots and attempts < 20000:
        attempts += 1
        p = (rng.uniform(x0b, x1b), rng.uniform(y0b, y1b))
        if not domain.contains(Point(*p)):
            continue
        if any(math.hypot(p[0] - q[0], p[1] - q[1]) < 1e-6 for q in robots):
            continue
        robots.append(p)
    if len(robots) < n_robots:
        raise ValueError(f"could not place {n_robots} robots for seed {seed}")

    outer_n, holes_n, robots_n = normalize_coordinates(outer, holes, robots)
    return _round12({
        "version": SCHEMA_VERSION,
        "outer": [[x, y] for x, y in outer_n],
        "holes": [[[x, y] for x, y in h] for h in holes_n],
        "robots": [[x, y] for x, y in robots_n],
        "source": 0,
        "metric": "geodesic",
    })
