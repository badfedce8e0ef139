import copy
import math

import numpy as np
import pytest

from polyfreeze.cfa import (ORIGINAL, STEINER, Robot, RobotSet, awakedist,
                            cfa_schedule, place_steiner, validate_schedule)
from polyfreeze.geodesic import WeightedGraph, build_visibility_graph
from polyfreeze.geometry import Point
from polyfreeze.spanner import SpannerGraph, _neighbor_order, greedy_spanner

INF = math.inf


def manual_spanner(points, edges):
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    w = np.full((n, n), INF)
    np.fill_diagonal(w, 0.0)
    for u, v in edges:
        d = math.hypot(*(pts[u] - pts[v]))
        w[u, v] = w[v, u] = d
    base = WeightedGraph(pts, w.copy())
    return SpannerGraph(base=base, w=w, t_target=1.0, t_measured=1.0,
                        k_measured=max(int(np.sum(np.isfinite(w[u])) - 1)
                                       for u in range(n)),
                        neighbor_order=_neighbor_order(w), method="manual")


def solve(points, domain, t=6.0, metric="geodesic", source=0):
    s = RobotSet.from_points(points, source)
    s = place_steiner(domain, s)
    g = build_visibility_graph(s.points(), domain)
    sp = greedy_spanner(g, t)
    return s, cfa_schedule(s, sp, metric)


# --- robot sets and steiner placement ---------------------------------------

def test_robotset_validation():
    with pytest.raises(ValueError):
        RobotSet((Robot(0, Point(0, 0)), Robot(0, Point(1, 1))), 0)
    with pytest.raises(ValueError):
        RobotSet((Robot(0, Point(0, 0)),), 3)
    with pytest.raises(ValueError):
        RobotSet((Robot(0, Point(0, 0), STEINER),), 0)


def test_place_steiner_lshape(lshape):
    s = RobotSet.from_points([[0.5, 0.5], [1.5, 0.5]])
    s2 = place_steiner(lshape, s)
    assert len(s2.steiner()) == 1
    st = s2.steiner()[0]
    assert st.point == Point(1.0, 1.0)
    assert st.id == 2
    assert s2.source_id == 0


def test_place_steiner_skips_occupied_corner(lshape):
    s = RobotSet.from_points([[0.5, 0.5], [1.0, 1.0]])
    s2 = place_steiner(lshape, s)
    assert len(s2.steiner()) == 0
    assert s2 is not s  # still a fresh set, just no additions


def test_place_steiner_hole(square_with_hole):
    s = RobotSet.from_points([[0.1, 0.1]])
    s2 = place_steiner(square_with_hole, s)
    assert len(s2.steiner()) == 4
    assert [r.id for r in s2.steiner()] == [1, 2, 3, 4]


def test_steiner_count_bounded_by_corners(corpus50):
    for inst in corpus50:
        s2 = place_steiner(inst.domain, inst.robots)
        assert len(s2.steiner()) <= len(inst.domain.corners)
        assert len(s2.originals()) == len(inst.robots)


# --- the serial awakening simulation ----------------------------------------

def test_star_schedule_frozen(unit_square):
    pts = [[0.5, 0.5], [0.6, 0.5], [0.5, 0.8], [0.1, 0.5]]
    s, sched = solve(pts, unit_square)
    assert sched.wake_times == pytest.approx(
        {0: 0.0, 1: 0.1, 2: 0.5, 3: 1.2}, abs=1e-12)
    assert sched.parents == {1: 0, 2: 0, 3: 0}
    assert sched.child_order == {0: [1, 2, 3]}
    assert sched.makespan_all == pytest.approx(1.2, abs=1e-12)
    assert sched.makespan_original == pytest.approx(1.2, abs=1e-12)
    assert sched.tree_edges() == [(0, 1), (0, 2), (0, 3)]
    assert awakedist(sched, 3) == pytest.approx(1.2, abs=1e-12)
    # source returns home between trips: out, back, out, back, out, back
    itin = sched.itineraries[0]
    assert len(itin) == 7
    assert itin[-1][0] == pytest.approx(1.6, abs=1e-12)
    assert (itin[-1][1], itin[-1][2]) == (0.5, 0.5)
    assert validate_schedule(sched, s, unit_square) == []


def test_race_earliest_arrival_wins(unit_square):
    # triangle spanner: after 2 wakes, it reaches 1 before the source can
    pts = [[0.1, 0.2], [0.9, 0.2], [0.5, 0.8]]
    s, sched = solve(pts, unit_square, t=1.0)
    w02 = math.hypot(0.4, 0.6)
    assert sched.parents == {2: 0, 1: 2}
    assert sched.wake_times[1] == pytest.approx(2 * w02, abs=1e-12)
    # the losing source never travels toward 1
    assert len(sched.itineraries[0]) == 3
    assert len(sched.itineraries[1]) == 1
    assert validate_schedule(sched, s, unit_square) == []


def test_arrival_tie_breaks_by_waker_id(unit_square):
    # exact binary fractions so both arrival times are exactly 0.875
    pts = [[0.5, 0.5], [0.25, 0.5], [0.75, 0.5], [0.875, 0.5]]
    sp = manual_spanner(pts, [(0, 1), (0, 2), (1, 3), (2, 3)])
    s = RobotSet.from_points(pts)
    sched = cfa_schedule(s, sp)
    assert sched.wake_times == pytest.approx(
        {0: 0.0, 1: 0.25, 2: 0.75, 3: 0.875}, abs=0)
    assert sched.parents[3] == 1  # tie goes to the smaller waker id
    assert len(sched.itineraries[2]) == 1  # loser spends no travel
    assert validate_schedule(sched, s, unit_square) == []


def test_neighbor_ties_by_id(unit_square):
    pts = [[0.5, 0.5], [0.75, 0.5], [0.25, 0.5]]
    sp = manual_spanner(pts, [(0, 1), (0, 2)])
    sched = cfa_schedule(RobotSet.from_points(pts), sp)
    # equal weights 0.25 exactly: id 1 is visited before id 2
    assert sched.wake_times[1] == pytest.approx(0.25)
    assert sched.wake_times[2] == pytest.approx(0.75)


def test_cfa_input_validation(unit_square):
    pts = [[0.2, 0.2], [0.8, 0.8]]
    s = RobotSet.from_points(pts)
    g = build_visibility_graph(s.points(), unit_square)
    sp = greedy_spanner(g, 6.0)
    with pytest.raises(ValueError, match="metric"):
        cfa_schedule(s, sp, "euclid")
    s3 = RobotSet.from_points(pts + [[0.5, 0.5]])
    with pytest.raises(ValueError, match="count"):
        cfa_schedule(s3, sp)
    moved = RobotSet.from_points([[0.2, 0.2], [0.7, 0.8]])
    with pytest.raises(ValueError, match="positions"):
        cfa_schedule(moved, sp)
    lonely = manual_spanner([[0.1, 0.1], [0.5, 0.5], [0.9, 0.9]], [(0, 1)])
    with pytest.raises(ValueError, match="disconnected"):
        cfa_schedule(RobotSet.from_points(lonely.base.points), lonely)


def test_schedules_validate_on_corpus(corpus50):
    for inst in corpus50[:10]:
        s = place_steiner(inst.domain, inst.robots)
        g = build_visibility_graph(s.points(), inst.domain)
        sched = cfa_schedule(s, greedy_spanner(g, 6.0))
        assert validate_schedule(sched, s, inst.domain) == []
        assert sched.makespan_original <= sched.makespan_all + 1e-12
        for c, p in sched.parents.items():
            assert sched.wake_times[c] >= sched.wake_times[p] - 1e-12


def test_visibility_metric_collapses_to_zero(unit_square):
    pts = [[0.2, 0.2], [0.8, 0.2], [0.5, 0.9], [0.1, 0.7]]
    s, sched = solve(pts, unit_square, metric="visibility")
    assert sched.makespan_all == 0.0
    assert all(t == 0.0 for t in sched.wake_times.values())
    assert all(len(i) == 1 for i in sched.itineraries.values())
    assert validate_schedule(sched, s, unit_square) == []


# --- schedule validation catches corruption ---------------------------------

@pytest.fixture
def good(unit_square):
    pts = [[0.5, 0.5], [0.6, 0.5], [0.5, 0.8], [0.1, 0.5]]
    s, sched = solve(pts, unit_square)
    return s, sched, unit_square


def _violations(sched, s, d, mutate):
    bad = copy.deepcopy(sched)
    mutate(bad)
    return validate_schedule(bad, s, d)


def test_detects_nonzero_source_wake(good):
    s, sched, d = good
    out = _violations(sched, s, d,
                      lambda b: b.wake_times.__setitem__(0, 0.5))
    assert any(v.startswith("tree: source wake") for v in out)


def test_detects_source_parent(good):
    s, sched, d = good
    out = _violations(sched, s, d, lambda b: b.parents.__setitem__(0, 1))
    assert any("source has a parent" in v for v in out)


def test_detects_orphan(good):
    s, sched, d = good
    out = _violations(sched, s, d, lambda b: b.parents.pop(3))
    assert any("without a parent" in v for v in out)


def test_detects_causality_break(good):
    s, sched, d = good
    out = _violations(sched, s, d,
                      lambda b: b.wake_times.__setitem__(1, 0.9))
    # child 1 now "wakes" later than its recorded itinerary start
    assert any(v.startswith("itinerary:") for v in out)
    out2 = _violations(sched, s, d,
                       lambda b: b.parents.__setitem__(1, 2))
    assert any(v.startswith("causality:") for v in out2)


def test_detects_speed_violation(good):
    s, sched, d = good

    def warp(b):
        b.itineraries[0].append((b.itineraries[0][-1][0] + 0.01, 0.9, 0.9))

    out = _violations(sched, s, d, warp)
    assert any("unit speed" in v for v in out)


def test_detects_wrong_start_point(good):
    s, sched, d = good

    def shift(b):
        t, _, _ = b.itineraries[2][0]
        b.itineraries[2][0] = (t, 0.45, 0.8)

    out = _violations(sched, s, d, shift)
    assert any("home point" in v for v in out)


def test_detects_domain_exit(lshape):
    pts = [[0.5, 1.5], [0.5, 0.5], [1.5, 0.5]]
    s, sched = solve(pts, lshape)
    assert validate_schedule(sched, s, lshape) == []

    def cut_corner(b):
        # replace source's first trip with a straight shot across the notch
        t0 = b.itineraries[0][0][0]
        b.itineraries[0] = [(t0, 0.5, 1.5), (t0 + 2.0, 1.5, 0.5)]

    out = _violations(sched, s, lshape, cut_corner)
    assert any(v.startswith("containment:") for v in out)


def test_detects_parent_not_at_child(good):
    s, sched, d = good
    out = _violations(sched, s, d,
                      lambda b: b.wake_times.__setitem__(3, 0.9))
    assert any(v.startswith("wake:") or v.startswith("itinerary:")
               for v in out)
