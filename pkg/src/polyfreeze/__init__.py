"""Awakening schedules for sleeping robots inside polygonal domains.

One robot starts awake; woken robots help wake the rest; the makespan is
the last wake time.  The package provides the geometry and geodesic layers,
spanner constructions, a constant-factor strategy with Steiner robots at
corner sites, a pixel-grid near-optimal scheduler, an exact oracle for
small instances, and a CLI (``polyfreeze``).
"""

from .geometry import (EPS_GEOM, GeometryError, Point, PolygonDomain,
                       hole_vertices, is_visible, point_in_domain,
                       reflex_vertices)
from .geodesic import (GeodesicMetric, GeodesicPath, WeightedGraph,
                       build_visibility_graph, diameter, geodesic_path, gvp,
                       shortest_path_in_graph)
from .spanner import (SpannerGraph, greedy_spanner, theta_graph,
                      theta_stretch_bound, verify_spanner)
from .cfa import (AwakeningSchedule, Robot, RobotSet, awakedist, cfa_schedule,
                  place_steiner, validate_schedule)
from .ptas import (AwakeningTree, Pixel, choose_representatives, compose_ptas,
                   pixelize, ptas_pipeline, sbat_search, tree_to_schedule)
from .exact import OracleResult, optimal_makespan
from .instance_io import (Instance, InstanceError, canonical_json,
                          generate_instance, load_instance, load_schedule,
                          save_instance, schedule_from_dict, schedule_to_dict,
                          write_instance, write_schedule)
from .render import render_svg
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "EPS_GEOM", "GeometryError", "Point", "PolygonDomain",
    "hole_vertices", "is_visible", "point_in_domain", "reflex_vertices",
    "GeodesicMetric", "GeodesicPath", "WeightedGraph",
    "build_visibility_graph", "diameter", "geodesic_path", "gvp",
    "shortest_path_in_graph",
    "SpannerGraph", "greedy_spanner", "theta_graph", "theta_stretch_bound",
    "verify_spanner",
    "AwakeningSchedule", "Robot", "RobotSet", "awakedist", "cfa_schedule",
    "place_steiner", "validate_schedule",
    "AwakeningTree", "Pixel", "choose_representatives", "compose_ptas",
    "pixelize", "ptas_pipeline", "sbat_search", "tree_to_schedule",
    "OracleResult", "optimal_makespan",
    "Instance", "InstanceError", "canonical_json", "generate_instance",
    "load_instance", "load_schedule", "save_instance", "schedule_from_dict",
    "schedule_to_dict", "write_instance", "write_schedule",
    "render_svg", "BACKEND", "__version__",
]
