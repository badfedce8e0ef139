"""Numba lane for the numeric kernels.

Twin of ``_kernels_py``: same names, signatures, and decision logic, written
as explicit loops so numba compiles them to tight machine code.  fastmath is
off on purpose; both lanes must produce bit-identical comparisons.
"""
from __future__ import annotations

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def _seg_point_dist2(ax, ay, bx, by, px, py):
    vx = bx - ax
    vy = by - ay
    seg2 = vx * vx + vy * vy
    if seg2 <= 0.0:
        dx = px - ax
        dy = py - ay
        return dx * dx + dy * dy
    t = ((px - ax) * vx + (py - ay) * vy) / seg2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = px - (ax + t * vx)
    dy = py - (ay + t * vy)
    return dx * dx + dy * dy


@njit(cache=True)
def point_on_boundary(px, py, ring_xy, ring_start, eps):
    eps2 = eps * eps
    nrings = ring_start.shape[0] - 1
    for r in range(nrings):
        lo = ring_start[r]
        hi = ring_start[r + 1]
        for i in range(lo, hi):
            j = i + 1 if i + 1 < hi else lo
            if _seg_point_dist2(ring_xy[i, 0], ring_xy[i, 1],
                                ring_xy[j, 0], ring_xy[j, 1], px, py) <= eps2:
                return True
    return False


@njit(cache=True)
def _in_ring(px, py, ring_xy, lo, hi):
    inside = False
    j = hi - 1
    for i in range(lo, hi):
        yi = ring_xy[i, 1]
        yj = ring_xy[j, 1]
        if (yi > py) != (yj > py):
            xcross = ring_xy[j, 0] + (py - yj) * (ring_xy[i, 0] - ring_xy[j, 0]) / (yi - yj)
            if px < xcross:
                inside = not inside
        j = i
    return inside


@njit(cache=True)
def point_in_domain(px, py, ring_xy, ring_start, ring_hole, eps):
    if point_on_boundary(px, py, ring_xy, ring_start, eps):
        return True
    nrings = ring_start.shape[0] - 1
    for r in range(nrings):
        lo = ring_start[r]
        hi = ring_start[r + 1]
        ins = _in_ring(px, py, ring_xy, lo, hi)
        if ring_hole[r] == 0:
            if not ins:
                return False
        else:
            if ins:
                return False
    return True


@njit(cache=True)
def points_in_domain(pts, ring_xy, ring_start, ring_hole, eps):
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        if point_in_domain(pts[i, 0], pts[i, 1], ring_xy, ring_start, ring_hole, eps):
            out[i] = 1
    return out


@njit(cache=True)
def _seg_visible_core(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps):
    eps2 = eps * eps
    dx = bx - ax
    dy = by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= eps2:
        return True

    m = ring_xy.shape[0]

    for i in range(m):
        px = ring_xy[i, 0]
        py = ring_xy[i, 1]
        wx = px - ax
        wy = py - ay
        d2a = wx * wx + wy * wy
        vbx = px - bx
        vby = py - by
        d2b = vbx * vbx + vby * vby
        if d2a > eps2 and d2b > eps2:
            t = (wx * dx + wy * dy) / seg2
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            ex = ax + t * dx - px
            ey = ay + t * dy - py
            if ex * ex + ey * ey <= eps2:
                return False

    for i in range(m):
        j = ring_next[i]
        x1 = ring_xy[i, 0]
        y1 = ring_xy[i, 1]
        x2 = ring_xy[j, 0]
        y2 = ring_xy[j, 1]
        o1 = dx * (y1 - ay) - dy * (x1 - ax)
        o2 = dx * (y2 - ay) - dy * (x2 - ax)
        if ((o1 > eps and o2 < -eps) or (o1 < -eps and o2 > eps)):
            ux = x2 - x1
            uy = y2 - y1
            o3 = ux * (ay - y1) - uy * (ax - x1)
            o4 = ux * (by - y1) - uy * (bx - x1)
            if ((o3 > eps and o4 < -eps) or (o3 < -eps and o4 > eps)):
                return False

    for i in range(m):
        j = ring_next[i]
        x1 = ring_xy[i, 0]
        y1 = ring_xy[i, 1]
        x2 = ring_xy[j, 0]
        y2 = ring_xy[j, 1]
        if _seg_point_dist2(x1, y1, x2, y2, ax, ay) <= eps2 and \
           _seg_point_dist2(x1, y1, x2, y2, bx, by) <= eps2:
            return True

    return point_in_domain(0.5 * (ax + bx), 0.5 * (ay + by),
                           ring_xy, ring_start, ring_hole, eps)


@njit(cache=True)
def segment_visible(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps):
    if not point_in_domain(ax, ay, ring_xy, ring_start, ring_hole, eps):
        return False
    if not point_in_domain(bx, by, ring_xy, ring_start, ring_hole, eps):
        return False
    return _seg_visible_core(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps)


@njit(cache=True)
def visibility_weight_matrix(pts, ring_xy, ring_start, ring_hole, ring_next, eps):
    n = pts.shape[0]
    w = np.full((n, n), INF)
    indom = points_in_domain(pts, ring_xy, ring_start, ring_hole, eps)
    for i in range(n):
        if indom[i]:
            w[i, i] = 0.0
        for j in range(i + 1, n):
            if indom[i] == 0 or indom[j] == 0:
                continue
            if _seg_visible_core(pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1],
                                 ring_xy, ring_start, ring_hole, ring_next, eps):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                d = np.sqrt(dx * dx + dy * dy)
                w[i, j] = d
                w[j, i] = d
    return w


@njit(cache=True)
def dijkstra_dense(w, src):
    n = w.shape[0]
    dist = np.full(n, INF)
    done = np.zeros(n, dtype=np.bool_)
    dist[src] = 0.0
    for _ in range(n):
        u = -1
        du = INF
        for i in range(n):
            if not done[i] and dist[i] < du:
                du = dist[i]
                u = i
        if u < 0:
            break
        done[u] = True
        for v in range(n):
            if not done[v] and w[u, v] != INF:
                nd = du + w[u, v]
                if nd < dist[v]:
                    dist[v] = nd
    return dist


@njit(cache=True)
def all_pairs_dense(w):
    n = w.shape[0]
    d = w.copy()
    for i in range(n):
        d[i, i] = 0.0
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            if dik == INF:
                continue
            for j in range(n):
                nd = dik + d[k, j]
                if nd < d[i, j]:
                    d[i, j] = nd
    return d


@njit(cache=True)
def _bounded_dijkstra(adj, src, dst, cutoff):
    n = adj.shape[0]
    dist = np.full(n, INF)
    done = np.zeros(n, dtype=np.bool_)
    dist[src] = 0.0
    while True:
        u = -1
        du = INF
        for i in range(n):
            if not done[i] and dist[i] < du:
                du = dist[i]
                u = i
        if u < 0 or du > cutoff:
            return INF
        if u == dst:
            return du
        done[u] = True
        for v in range(n):
            if not done[v] and adj[u, v] != INF:
                nd = du + adj[u, v]
                if nd < dist[v]:
                    dist[v] = nd


@njit(cache=True)
def greedy_spanner_keep(n, eu, ev, ew, t):
    m = eu.shape[0]
    keep = np.zeros(m, dtype=np.uint8)
    adj = np.full((n, n), INF)
    for i in range(n):
        adj[i, i] = 0.0
    for e in range(m):
        u = eu[e]
        v = ev[e]
        wt = ew[e]
        cutoff = t * wt + 1e-12
        if _bounded_dijkstra(adj, u, v, cutoff) > cutoff:
            keep[e] = 1
            if wt < adj[u, v]:
                adj[u, v] = wt
                adj[v, u] = wt
    return keep
