#!/usr/bin/env python3
"""Benchmark the numba kernel lane against the pure numpy lane.

Runs each kernel on identical seeded inputs, reports wall times and the
worst output difference between lanes (which must be zero or float noise).

    python3 benchmarks/bench_kernels.py --points 300 --graph 120 --repeats 5
"""
import argparse
import math
import statistics
import time

import numpy as np

from polyfreeze import _kernels_py as lane_py
from polyfreeze.geometry import EPS_GEOM, PolygonDomain

try:
    from polyfreeze import _kernels_jit as lane_jit
except ImportError:  # pragma: no cover - numba missing
    lane_jit = None


def timed(fn, args, repeats):
    out = fn(*args)  # warmup; also the value used for the diff check
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        samples.append((time.perf_counter() - t0) * 1e3)
    return out, statistics.mean(samples), (statistics.stdev(samples)
                                           if len(samples) > 1 else 0.0)


def max_diff(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    mask = np.isfinite(a) & np.isfinite(b)
    if not np.array_equal(np.isfinite(a), np.isfinite(b)):
        return math.inf
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(a[mask] - b[mask])))


def bench(name, fn_py, fn_jit, args, repeats):
    out_py, mean_py, sd_py = timed(fn_py, args, repeats)
    print(f"-- {name} --")
    print(f"  numpy : {mean_py:9.3f} ms +- {sd_py:.3f}")
    if fn_jit is None:
        print("  numba : unavailable")
        return
    out_jit, mean_jit, sd_jit = timed(fn_jit, args, repeats)
    speedup = mean_py / mean_jit if mean_jit > 0 else math.inf
    print(f"  numba : {mean_jit:9.3f} ms +- {sd_jit:.3f}   "
          f"speedup {speedup:5.1f}x   max|diff| {max_diff(out_py, out_jit):.3g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=300,
                    help="point count for the geometry kernels")
    ap.add_argument("--graph", type=int, default=120,
                    help="vertex count for the graph kernels")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    domain = PolygonDomain(
        [(0, 0), (1, 0), (1, 0.6), (0.7, 0.6), (0.7, 1), (0, 1)],
        [[(0.15, 0.15), (0.15, 0.35), (0.35, 0.35), (0.35, 0.15)],
         [(0.45, 0.65), (0.45, 0.85), (0.6, 0.85), (0.6, 0.65)]])
    ring_xy, ring_start, ring_hole, ring_next = domain.packed()
    pts = rng.random((args.points, 2)) * 1.2 - 0.1

    g = rng.random((args.graph, args.graph)) + 0.05
    g = (g + g.T) / 2
    g[rng.random(g.shape) < 0.5] = np.inf
    g = np.minimum(g, g.T)
    np.fill_diagonal(g, 0.0)

    npts = min(args.points, 120)
    vis_pts = pts[:npts][lane_py.points_in_domain(
        pts[:npts], ring_xy, ring_start, ring_hole, EPS_GEOM) == 1]
    edges = sorted((float(math.hypot(*(vis_pts[u] - vis_pts[v]))), u, v)
                   for u in range(len(vis_pts))
                   for v in range(u + 1, len(vis_pts)))
    eu = np.array([u for _, u, _ in edges], dtype=np.int64)
    ev = np.array([v for _, _, v in edges], dtype=np.int64)
    ew = np.array([w for w, _, _ in edges], dtype=np.float64)

    print(f"kernel lanes over {args.points} points / {args.graph} graph "
          f"vertices, {args.repeats} repeats")
    jit = lane_jit
    bench("points_in_domain", lane_py.points_in_domain,
          jit.points_in_domain if jit else None,
          (pts, ring_xy, ring_start, ring_hole, EPS_GEOM), args.repeats)
    bench("visibility_weight_matrix", lane_py.visibility_weight_matrix,
          jit.visibility_weight_matrix if jit else None,
          (vis_pts, ring_xy, ring_start, ring_hole, ring_next, EPS_GEOM),
          args.repeats)
    bench("dijkstra_dense", lane_py.dijkstra_dense,
          jit.dijkstra_dense if jit else None, (g, 0), args.repeats)
    bench("all_pairs_dense", lane_py.all_pairs_dense,
          jit.all_pairs_dense if jit else None, (g,), args.repeats)
    bench("greedy_spanner_keep", lane_py.greedy_spanner_keep,
          jit.greedy_spanner_keep if jit else None,
          (len(vis_pts), eu, ev, ew, 6.0), args.repeats)


if __name__ == "__main__":
    main()
