"""Pure numpy lane for the numeric kernels.

Every function here has a numba twin in ``_kernels_jit`` with the same name,
signature, and decision logic.  Keep the two in lockstep: any change to a
tolerance or branch must land in both modules.

Ring packing convention (shared with geometry.PolygonDomain):
  ring_xy    float64 (M, 2)  all ring vertices, outer ring first
  ring_start int64  (R+1,)   ring r occupies rows [ring_start[r], ring_start[r+1])
  ring_hole  uint8  (R,)     0 = outer ring, 1 = hole
  ring_next  int64  (M,)     index of the successor vertex within the same ring
"""
from __future__ import annotations

import numpy as np

INF = np.inf


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


def point_on_boundary(px, py, ring_xy, ring_start, eps):
    eps2 = eps * eps
    nrings = ring_start.shape[0] - 1
    for r in range(nrings):
        lo = int(ring_start[r])
        hi = int(ring_start[r + 1])
        for i in range(lo, hi):
            j = i + 1 if i + 1 < hi else lo
            if _seg_point_dist2(ring_xy[i, 0], ring_xy[i, 1],
                                ring_xy[j, 0], ring_xy[j, 1], px, py) <= eps2:
                return True
    return False


def _in_ring(px, py, ring_xy, lo, hi):
    # even-odd ray cast; callers must resolve boundary points beforehand
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


def point_in_domain(px, py, ring_xy, ring_start, ring_hole, eps):
    if point_on_boundary(px, py, ring_xy, ring_start, eps):
        return True
    nrings = ring_start.shape[0] - 1
    for r in range(nrings):
        lo = int(ring_start[r])
        hi = int(ring_start[r + 1])
        ins = _in_ring(px, py, ring_xy, lo, hi)
        if ring_hole[r] == 0:
            if not ins:
                return False
        else:
            if ins:
                return False
    return True


def points_in_domain(pts, ring_xy, ring_start, ring_hole, eps):
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        if point_in_domain(pts[i, 0], pts[i, 1], ring_xy, ring_start, ring_hole, eps):
            out[i] = 1
    return out


def _seg_visible_core(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps):
    # assumes both endpoints already known to lie in the closed domain
    eps2 = eps * eps
    dx = bx - ax
    dy = by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= eps2:
        return True

    X = ring_xy[:, 0]
    Y = ring_xy[:, 1]

    # a ring vertex strictly between the endpoints blocks the sight line
    wx = X - ax
    wy = Y - ay
    t = np.clip((wx * dx + wy * dy) / seg2, 0.0, 1.0)
    ex = ax + t * dx - X
    ey = ay + t * dy - Y
    d2seg = ex * ex + ey * ey
    d2a = wx * wx + wy * wy
    vbx = X - bx
    vby = Y - by
    d2b = vbx * vbx + vby * vby
    if np.any((d2seg <= eps2) & (d2a > eps2) & (d2b > eps2)):
        return False

    # proper interior-interior crossing with any boundary edge blocks
    X2 = X[ring_next]
    Y2 = Y[ring_next]
    o1 = dx * (Y - ay) - dy * (X - ax)
    o2 = dx * (Y2 - ay) - dy * (X2 - ax)
    ux = X2 - X
    uy = Y2 - Y
    o3 = ux * (ay - Y) - uy * (ax - X)
    o4 = ux * (by - Y) - uy * (bx - X)
    crossing = (((o1 > eps) & (o2 < -eps)) | ((o1 < -eps) & (o2 > eps))) & \
               (((o3 > eps) & (o4 < -eps)) | ((o3 < -eps) & (o4 > eps)))
    if np.any(crossing):
        return False

    # a sight line running along a single wall edge stays inside the closed domain
    u2 = ux * ux + uy * uy
    u2safe = np.where(u2 <= 0.0, 1.0, u2)
    ta = np.clip(((ax - X) * ux + (ay - Y) * uy) / u2safe, 0.0, 1.0)
    tb = np.clip(((bx - X) * ux + (by - Y) * uy) / u2safe, 0.0, 1.0)
    dax = X + ta * ux - ax
    day = Y + ta * uy - ay
    dbx = X + tb * ux - bx
    dby = Y + tb * uy - by
    on_edge = (dax * dax + day * day <= eps2) & (dbx * dbx + dby * dby <= eps2)
    if np.any(on_edge):
        return True

    # past the gates the open segment avoids the boundary entirely,
    # so the midpoint decides inside vs outside
    return point_in_domain(0.5 * (ax + bx), 0.5 * (ay + by),
                           ring_xy, ring_start, ring_hole, eps)


def segment_visible(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps):
    if not point_in_domain(ax, ay, ring_xy, ring_start, ring_hole, eps):
        return False
    if not point_in_domain(bx, by, ring_xy, ring_start, ring_hole, eps):
        return False
    return _seg_visible_core(ax, ay, bx, by, ring_xy, ring_start, ring_hole, ring_next, eps)


def visibility_weight_matrix(pts, ring_xy, ring_start, ring_hole, ring_next, eps):
    """Pairwise weights: Euclidean length where the pair sees each other, inf
    otherwise, 0 on the diagonal.  Points outside the domain see nothing."""
    n = pts.shape[0]
    w = np.full((n, n), INF)
    indom = points_in_domain(pts, ring_xy, ring_start, ring_hole, eps)
    for i in range(n):
        if indom[i]:
            w[i, i] = 0.0
        for j in range(i + 1, n):
            if not (indom[i] and indom[j]):
                continue
            if _seg_visible_core(pts[i, 0], pts[i, 1], pts[j, 0], pts[j, 1],
                                 ring_xy, ring_start, ring_hole, ring_next, eps):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                d = np.sqrt(dx * dx + dy * dy)
                w[i, j] = d
                w[j, i] = d
    return w


def dijkstra_dense(w, src):
    n = w.shape[0]
    dist = np.full(n, INF)
    done = np.zeros(n, dtype=np.bool_)
    dist[src] = 0.0
    for _ in range(n):
        cand = np.where(done, INF, dist)
        u = int(np.argmin(cand))
        du = cand[u]
        if du == INF:
            break
        done[u] = True
        nd = du + w[u]
        dist = np.where(~done & (nd < dist), nd, dist)
    return dist


def all_pairs_dense(w):
    d = w.copy()
    np.fill_diagonal(d, 0.0)
    n = d.shape[0]
    for k in range(n):
        np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :], out=d)
    return d


def _bounded_dijkstra(adj, src, dst, cutoff):
    n = adj.shape[0]
    dist = np.full(n, INF)
    done = np.zeros(n, dtype=np.bool_)
    dist[src] = 0.0
    while True:
        cand = np.where(done, INF, dist)
        u = int(np.argmin(cand))
        du = cand[u]
        if du == INF or du > cutoff:
            return INF
        if u == dst:
            return du
        done[u] = True
        nd = du + adj[u]
        dist = np.where(~done & (nd < dist), nd, dist)


def greedy_spanner_keep(n, eu, ev, ew, t):
    """Path-greedy spanner over edges presorted by (weight, endpoints).

    Returns a keep flag per edge: kept iff the partial spanner's u-v distance
    exceeds t * weight (small absolute slack so exact-multiple ties drop)."""
    m = eu.shape[0]
    keep = np.zeros(m, dtype=np.uint8)
    adj = np.full((n, n), INF)
    np.fill_diagonal(adj, 0.0)
    for e in range(m):
        u = int(eu[e])
        v = int(ev[e])
        wt = ew[e]
        cutoff = t * wt + 1e-12
        if _bounded_dijkstra(adj, u, v, cutoff) > cutoff:
            keep[e] = 1
            if wt < adj[u, v]:
                adj[u, v] = wt
                adj[v, u] = wt
    return keep
