"""Command-line interface.

Subcommands: gen (seeded instance generator), solve (cfa | ptas | exact),
verify (schedule against instance), stats (instance report), render (SVG).
Exit codes: 0 success, 1 usage, 2 validation failure, 3 certified bound
violated by a computed schedule.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import kernels
from .cfa import RobotSet, cfa_schedule, place_steiner, validate_schedule
from .exact import SIZE_CAP, optimal_makespan
from .geodesic import GeodesicMetric, build_visibility_graph, geodesic_path
from .geometry import GeometryError
from .instance_io import (Instance, InstanceError, canonical_json,
                          generate_instance, load_instance, load_schedule,
                          schedule_to_dict, write_schedule)
from .ptas import ptas_pipeline, tree_to_schedule
from .render import render_svg
from .spanner import greedy_spanner

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_BOUND = 3


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _print_stats(stats: dict) -> None:
    sys.stdout.write(json.dumps(stats, sort_keys=True, indent=2) + "\n")


def _cmd_gen(args) -> int:
    data = generate_instance(args.seed, n_robots=args.robots,
                             n_holes=args.holes, profile=args.profile)
    _emit(canonical_json(data), args.out)
    return EXIT_OK


def _solve_cfa(inst: Instance, args) -> tuple[int, dict, object]:
    robots = place_steiner(inst.domain, inst.robots)
    graph = build_visibility_graph(robots.points(), inst.domain)
    vt = greedy_spanner(graph, args.t)
    schedule = cfa_schedule(robots, vt, args.metric)

    metric = GeodesicMetric(robots.points(), inst.domain)
    ids = robots.ids()
    src = ids.index(robots.source_id)
    factor = args.t * (2 * vt.k_measured - 1)
    diam = metric.diameter()
    violations = []
    for i, rid in enumerate(ids):
        bound = factor * metric.distance(src, i) + 1e-9
        if schedule.wake_times[rid] > bound:
            violations.append(f"robot {rid}: wake {schedule.wake_times[rid]:.9g} "
                              f"exceeds {bound:.9g}")
    if schedule.makespan_all > factor * diam + 1e-9:
        violations.append(f"makespan {schedule.makespan_all:.9g} exceeds "
                          f"{factor * diam:.9g}")
    stats = {
        "algo": "cfa",
        "metric": args.metric,
        "n_robots": len(inst.robots),
        "n_steiner": len(robots.steiner()),
        "t_target": args.t,
        "t_measured": vt.t_measured,
        "k_measured": vt.k_measured,
        "bound_factor": factor,
        "diameter": diam,
        "makespan_all": schedule.makespan_all,
        "makespan_original": schedule.makespan_original,
        "vftp_degenerate": bool(args.metric == "visibility"
                                and schedule.makespan_all == 0.0
                                and len(robots) > 1),
        "bound_violations": violations,
    }
    code = EXIT_BOUND if violations else EXIT_OK
    if stats["vftp_degenerate"]:
        sys.stderr.write("note: visibility metric collapsed to makespan 0 "
                         "(all spanner neighbors mutually visible)\n")
    return code, stats, (schedule, robots)


def _solve_ptas(inst: Instance, args) -> tuple[int, dict, object]:
    pixels, tree, schedule = ptas_pipeline(inst.robots, inst.domain, args.m,
                                           args.metric, args.depth_cap,
                                           theta_k=args.k, t_stretch=args.t)
    occupied = [px for px in pixels if px.members]
    stats = {
        "algo": "ptas",
        "metric": args.metric,
        "m": args.m,
        "n_robots": len(inst.robots),
        "n_pixels": len(pixels),
        "n_occupied_pixels": len(occupied),
        "representatives": sorted(px.representative for px in occupied),
        "tree_makespan": tree.makespan,
        "makespan_all": schedule.makespan_all,
        "makespan_original": schedule.makespan_original,
        "vftp_degenerate": bool(args.metric == "visibility"
                                and schedule.makespan_all == 0.0
                                and len(inst.robots) > 1),
    }
    return EXIT_OK, stats, (schedule, inst.robots)


def _solve_exact(inst: Instance, args) -> tuple[int, dict, object]:
    hint = None
    try:
        robots_st = place_steiner(inst.domain, inst.robots)
        vt = greedy_spanner(build_visibility_graph(robots_st.points(), inst.domain),
                            args.t)
        hint = cfa_schedule(robots_st, vt, args.metric).makespan_all
    except ValueError:
        pass
    result = optimal_makespan(inst.robots, inst.domain, args.metric,
                              incumbent_hint=hint)
    schedule = tree_to_schedule(result.tree, inst.robots, inst.domain, args.metric)
    stats = {
        "algo": "exact",
        "metric": args.metric,
        "n_robots": len(inst.robots),
        "makespan_all": schedule.makespan_all,
        "makespan_original": schedule.makespan_original,
        "optimal_makespan": result.makespan,
        "lower_bound": result.lower_bound,
        "nodes_explored": result.nodes_explored,
        "cfa_hint": hint,
    }
    return EXIT_OK, stats, (schedule, inst.robots)


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.metric is None:
        args.metric = inst.metric
    if args.algo == "cfa":
        code, stats, payload = _solve_cfa(inst, args)
    elif args.algo == "ptas":
        code, stats, payload = _solve_ptas(inst, args)
    else:
        code, stats, payload = _solve_exact(inst, args)
    schedule, robots = payload
    stats["backend"] = kernels.BACKEND
    _print_stats(stats)
    if args.out:
        write_schedule(schedule, args.out)
    return code


def _cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    schedule = load_schedule(args.schedule)
    ids = set(schedule.wake_times)
    robots = inst.robots
    known = set(robots.ids())
    extra = ids - known
    if extra:
        # schedules over S + Steiner robots: rebuild the augmented set
        robots = place_steiner(inst.domain, inst.robots)
        known = set(robots.ids())
        if ids - known:
            sys.stderr.write(f"unknown robot ids in schedule: {sorted(ids - known)}\n")
            return EXIT_INVALID
    violations = validate_schedule(schedule, robots, inst.domain)
    for v in violations:
        sys.stdout.write(v + "\n")
    if violations:
        sys.stderr.write(f"{len(violations)} violation(s)\n")
        return EXIT_INVALID
    sys.stdout.write("ok\n")
    return EXIT_OK


def _cmd_stats(args) -> int:
    inst = load_instance(args.instance)
    d = inst.domain
    robots = place_steiner(d, inst.robots)
    graph = build_visibility_graph(robots.points(), d)
    vt = greedy_spanner(graph, args.t)
    stats = {
        "n_robots": len(inst.robots),
        "n_steiner": len(robots.steiner()),
        "n_reflex": len(d.reflex),
        "n_hole_vertices": len(d.hole_vertex_list),
        "n_holes": len(d.holes),
        "metric": inst.metric,
        "visibility_edges": graph.edge_count(),
        "spanner_edges": vt.edge_count(),
        "t_target": args.t,
        "t_measured": vt.t_measured,
        "k_measured": vt.k_measured,
        "diameter": GeodesicMetric(robots.points(), d).diameter(),
        "backend": kernels.BACKEND,
    }
    schedule = cfa_schedule(robots, vt, inst.metric)
    stats["cfa_makespan"] = schedule.makespan_all
    if len(inst.robots) <= SIZE_CAP:
        res = optimal_makespan(inst.robots, d, inst.metric,
                               incumbent_hint=schedule.makespan_all)
        stats["optimal_makespan"] = res.makespan
        if res.makespan > 0:
            stats["cfa_over_optimal"] = schedule.makespan_all / res.makespan
    _print_stats(stats)
    return EXIT_OK


def _cmd_render(args) -> int:
    inst = load_instance(args.instance)
    robots = inst.robots
    spanner = None
    schedule = None
    paths = []
    if args.spanner or args.schedule:
        robots = place_steiner(inst.domain, inst.robots)
    if args.spanner:
        spanner = greedy_spanner(build_visibility_graph(robots.points(), inst.domain),
                                 args.t)
    if args.schedule:
        schedule = load_schedule(args.schedule)
        missing = set(schedule.wake_times) - set(robots.ids())
        if missing:
            sys.stderr.write(f"schedule references unknown robots {sorted(missing)}\n")
            return EXIT_INVALID
    if args.path:
        try:
            i, j = (int(x) for x in args.path.split(","))
        except ValueError:
            sys.stderr.write("--path expects 'i,j' robot indices\n")
            return EXIT_USAGE
        pts = inst.robots.points()
        if not (0 <= i < len(pts) and 0 <= j < len(pts)):
            sys.stderr.write("--path indices out of range\n")
            return EXIT_INVALID
        gp = geodesic_path(pts[i], pts[j], inst.domain)
        if gp is not None:
            paths.append(gp)
    svg = render_svg(inst.domain, robots, schedule, spanner, paths)
    _emit(svg, args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyfreeze",
        description="Awakening schedules for sleeping robots inside "
                    "polygonal domains with holes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--robots", type=int, default=6)
    p.add_argument("--holes", type=int, default=0)
    p.add_argument("--profile", choices=("convex", "lshape", "orthogonal"),
                   default="convex")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="compute an awakening schedule")
    p.add_argument("instance")
    p.add_argument("--algo", choices=("cfa", "ptas", "exact"), default="cfa")
    p.add_argument("--metric", choices=("geodesic", "visibility"), default=None,
                   help="override the instance's metric tag")
    p.add_argument("--t", type=float, default=6.0, help="spanner stretch target")
    p.add_argument("--k", type=int, default=9,
                   help="theta-graph cone count (convex pixel spanners)")
    p.add_argument("--m", type=int, default=3, help="pixel grid resolution")
    p.add_argument("--depth-cap", type=int, default=None,
                   help="max awakening-tree depth for the pixel search")
    p.add_argument("--out", default=None, help="write the schedule JSON here")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="validate a schedule against an instance")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("stats", help="report instance and strategy figures")
    p.add_argument("instance")
    p.add_argument("--t", type=float, default=6.0)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("render", help="render an instance to SVG")
    p.add_argument("instance")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--schedule", default=None, help="overlay a schedule")
    p.add_argument("--spanner", action="store_true", help="overlay the spanner")
    p.add_argument("--path", default=None, help="overlay a geodesic: 'i,j'")
    p.add_argument("--t", type=float, default=6.0)
    p.set_defaults(func=_cmd_render)
    return parser


def run_command(argv) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except InstanceError as exc:
        for code, msg in exc.errors:
            sys.stderr.write(f"{code}: {msg}\n")
        return EXIT_INVALID
    except GeometryError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_INVALID
    except FileNotFoundError as exc:
        sys.stderr.write(f"file not found: {exc.filename}\n")
        return EXIT_INVALID
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"invalid JSON: {exc}\n")
        return EXIT_INVALID
    except ValueError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
