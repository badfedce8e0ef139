"""Static SVG rendering of domains, robots, spanners, and schedules.

Plain string assembly, no drawing dependencies.  The y axis is flipped so
renders match the usual math orientation.
"""
from __future__ import annotations

from typing import Optional, Sequence

from .cfa import AwakeningSchedule, RobotSet, STEINER
from .geodesic import GeodesicPath
from .geometry import PolygonDomain
from .spanner import SpannerGraph

_SIZE = 800.0
_MARGIN = 0.06


class _Mapper:
    def __init__(self, d: PolygonDomain):
        x0, y0, x1, y1 = d.bbox
        extent = max(x1 - x0, y1 - y0, 1e-12)
        pad = extent * _MARGIN
        self.x0 = x0 - pad
        self.y1 = y1 + pad
        self.scale = _SIZE / (extent + 2 * pad)

    def pt(self, x: float, y: float) -> tuple[float, float]:
        return ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)

    def fmt(self, x: float, y: float) -> str:
        px, py = self.pt(x, y)
        return f"{px:.2f},{py:.2f}"


def _ring_path(mp: _Mapper, ring) -> str:
    return "M " + " L ".join(mp.fmt(p.x, p.y) for p in ring) + " Z"


def render_svg(d: PolygonDomain,
               s: Optional[RobotSet] = None,
               schedule: Optional[AwakeningSchedule] = None,
               spanner: Optional[SpannerGraph] = None,
               paths: Sequence[GeodesicPath] = ()) -> str:
    mp = _Mapper(d)
    out: list[str] = []
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" '
               f'height="{_SIZE:.0f}" viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">')
    out.append('<defs>'
               '<pattern id="hatch" width="8" height="8" patternUnits="userSpaceOnUse" '
               'patternTransform="rotate(45)">'
               '<line x1="0" y1="0" x2="0" y2="8" stroke="#999" stroke-width="2"/>'
               '</pattern>'
               '<marker id="arrow" markerWidth="9" markerHeight="7" refX="8" refY="3.5" '
               'orient="auto"><polygon points="0 0, 9 3.5, 0 7" fill="#c0392b"/></marker>'
               '</defs>')
    out.append('<rect width="100%" height="100%" fill="white"/>')

    domain_path = " ".join([_ring_path(mp, d.outer)] +
                           [_ring_path(mp, h) for h in d.holes])
    out.append(f'<path d="{domain_path}" fill="#eef3f7" fill-rule="evenodd" '
               f'stroke="#2c3e50" stroke-width="2"/>')
    for h in d.holes:
        out.append(f'<path d="{_ring_path(mp, h)}" fill="url(#hatch)" '
                   f'stroke="#2c3e50" stroke-width="1.5"/>')

    if spanner is not None:
        for u, v, _w in spanner.edges():
            a = spanner.base.point(u)
            b = spanner.base.point(v)
            out.append(f'<line x1="{mp.pt(a.x, a.y)[0]:.2f}" y1="{mp.pt(a.x, a.y)[1]:.2f}" '
                       f'x2="{mp.pt(b.x, b.y)[0]:.2f}" y2="{mp.pt(b.x, b.y)[1]:.2f}" '
                       f'stroke="#b0bec5" stroke-width="1"/>')

    for gp in paths:
        pts = " ".join(mp.fmt(p.x, p.y) for p in gp.waypoints)
        out.append(f'<polyline points="{pts}" fill="none" stroke="#2980b9" '
                   f'stroke-width="2" stroke-dasharray="7,4"/>')

    if schedule is not None and s is not None:
        for parent, child in schedule.tree_edges():
            a = s.by_id(parent).point
            b = s.by_id(child).point
            out.append(f'<line x1="{mp.pt(a.x, a.y)[0]:.2f}" y1="{mp.pt(a.x, a.y)[1]:.2f}" '
                       f'x2="{mp.pt(b.x, b.y)[0]:.2f}" y2="{mp.pt(b.x, b.y)[1]:.2f}" '
                       f'stroke="#c0392b" stroke-width="1.5" marker-end="url(#arrow)"/>')
            midx = (a.x + b.x) / 2
            midy = (a.y + b.y) / 2
            t = schedule.wake_times.get(child)
            if t is not None:
                px, py = mp.pt(midx, midy)
                out.append(f'<text x="{px:.2f}" y="{py:.2f}" font-size="11" '
                           f'fill="#7f1d1d">{t:.3f}</text>')

    if s is not None:
        for r in s.robots:
            px, py = mp.pt(r.point.x, r.point.y)
            if r.id == s.source_id:
                out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="9" fill="none" '
                           f'stroke="#27ae60" stroke-width="2"/>')
                fill = "#27ae60"
            elif r.origin == STEINER:
                fill = "#8e44ad"
            else:
                fill = "#e67e22"
            out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="5" fill="{fill}" '
                       f'stroke="#2c3e50" stroke-width="1"/>')
            out.append(f'<text x="{px + 7:.2f}" y="{py - 7:.2f}" font-size="12" '
                       f'fill="#2c3e50">{r.id}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
