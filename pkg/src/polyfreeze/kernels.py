"""Kernel lane selection.

The jitted lane is the default.  Set POLYFREEZE_PURE_NUMPY=1 to force the
pure numpy lane (reference implementation, also used as the baseline in
benchmarks/bench_kernels.py).  If numba is unavailable the numpy lane is
selected silently.  ``BACKEND`` names the active lane.
"""
from __future__ import annotations

import os

_force_pure = os.environ.get("POLYFREEZE_PURE_NUMPY", "") not in ("", "0")

if _force_pure:
    from . import _kernels_py as _impl
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_jit as _impl
        BACKEND = "numba"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "numpy"

point_on_boundary = _impl.point_on_boundary
point_in_domain = _impl.point_in_domain
points_in_domain = _impl.points_in_domain
segment_visible = _impl.segment_visible
visibility_weight_matrix = _impl.visibility_weight_matrix
dijkstra_dense = _impl.dijkstra_dense
all_pairs_dense = _impl.all_pairs_dense
greedy_spanner_keep = _impl.greedy_spanner_keep

__all__ = [
    "BACKEND",
    "point_on_boundary",
    "point_in_domain",
    "points_in_domain",
    "segment_visible",
    "visibility_weight_matrix",
    "dijkstra_dense",
    "all_pairs_dense",
    "greedy_spanner_keep",
]
