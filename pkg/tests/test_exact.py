import math

import numpy as np
import pytest

from polyfreeze.cfa import RobotSet, cfa_schedule, place_steiner
from polyfreeze.exact import SIZE_CAP, OracleResult, optimal_makespan
from polyfreeze.geodesic import build_visibility_graph
from polyfreeze.geometry import PolygonDomain
from polyfreeze.ptas import make_provider, sbat_search, tree_to_schedule
from polyfreeze.cfa import validate_schedule
from polyfreeze.spanner import greedy_spanner


def test_single_robot(unit_square):
    s = RobotSet.from_points([[0.5, 0.5]])
    res = optimal_makespan(s, unit_square)
    assert res.makespan == 0.0
    assert res.tree.wake_times == {0: 0.0}
    assert res.lower_bound == 0.0


def test_two_robots_distance(unit_square):
    s = RobotSet.from_points([[0.1, 0.5], [0.9, 0.5]])
    res = optimal_makespan(s, unit_square)
    assert res.makespan == pytest.approx(0.8, abs=1e-12)
    assert res.tree.parents == {1: 0}
    assert res.lower_bound == pytest.approx(0.8, abs=1e-12)


def test_collinear_chain(unit_square):
    s = RobotSet.from_points([[0.1, 0.5], [0.5, 0.5], [0.9, 0.5]])
    res = optimal_makespan(s, unit_square)
    assert res.makespan == pytest.approx(0.8, abs=1e-12)
    assert res.lower_bound == pytest.approx(0.8, abs=1e-12)


def test_branching_beats_serial(unit_square):
    s = RobotSet.from_points([[0.5, 0.1], [0.5, 0.5], [0.1, 0.9], [0.9, 0.9]])
    res = optimal_makespan(s, unit_square)
    assert res.makespan == pytest.approx(0.4 + 0.4 * math.sqrt(2), abs=1e-12)


def test_geodesic_around_corner(lshape):
    s = RobotSet.from_points([[0.5, 1.5], [1.5, 0.5]])
    res = optimal_makespan(s, lshape)
    assert res.makespan == pytest.approx(math.sqrt(2), abs=1e-12)


def test_visibility_oracle_lshape():
    d = PolygonDomain([(0, 0), (1, 0), (1, 0.5), (0.5, 0.5), (0.5, 1), (0, 1)])
    s = RobotSet.from_points([[0.25, 0.75], [0.75, 0.25]])
    res = optimal_makespan(s, d, metric="visibility")
    # walk to the reflex corner, sight the sleeper, done
    assert res.makespan == pytest.approx(math.sqrt(0.125), abs=1e-12)
    assert res.makespan > 0.0


def test_matches_tree_search_on_corpus(corpus30):
    # two independent enumerations of the same model must agree exactly
    for inst in corpus30[:12]:
        s = inst.robots
        if len(s) > SIZE_CAP:
            continue
        prov = make_provider(s.points(), inst.domain, "geodesic")
        tree = sbat_search(list(s.ids()), s.source_id, prov)
        res = optimal_makespan(s, inst.domain)
        assert res.makespan == tree.makespan  # bit-identical, no tolerance


def test_never_beaten_by_cfa(corpus30):
    for inst in corpus30[:10]:
        s = place_steiner(inst.domain, inst.robots)
        if len(s) > SIZE_CAP:
            continue
        g = build_visibility_graph(s.points(), inst.domain)
        sched = cfa_schedule(s, greedy_spanner(g, 6.0))
        res = optimal_makespan(s, inst.domain)
        assert res.makespan <= sched.makespan_all + 1e-9
        assert res.lower_bound <= res.makespan + 1e-12


def test_incumbent_hint_does_not_change_result(corpus30):
    for inst in corpus30[:6]:
        s = inst.robots
        if len(s) > SIZE_CAP:
            continue
        base = optimal_makespan(s, inst.domain)
        hinted = optimal_makespan(s, inst.domain,
                                  incumbent_hint=base.makespan * 3.0)
        tight = optimal_makespan(s, inst.domain,
                                 incumbent_hint=base.makespan)
        assert hinted.makespan == base.makespan
        assert tight.makespan == base.makespan
        assert tight.nodes_explored <= base.nodes_explored


def test_size_cap(unit_square):
    pts = np.linspace([0.05, 0.5], [0.95, 0.5], SIZE_CAP + 1)
    with pytest.raises(ValueError, match="cap"):
        optimal_makespan(RobotSet.from_points(pts), unit_square)


def test_result_tree_is_consistent(unit_square):
    rng = np.random.default_rng(3)
    pts = rng.random((5, 2)) * 0.8 + 0.1
    s = RobotSet.from_points(pts)
    res = optimal_makespan(s, unit_square)
    tree = res.tree
    assert tree.root == 0
    assert set(tree.wake_times) == set(s.ids())
    assert max(tree.wake_times.values()) == res.makespan
    for c, p in tree.parents.items():
        assert c in tree.children[p]
        assert tree.wake_times[c] >= tree.wake_times[p]
    sched = tree_to_schedule(tree, s, unit_square)
    assert validate_schedule(sched, s, unit_square) == []
    assert sched.makespan_all == res.makespan


def test_deterministic(unit_square):
    rng = np.random.default_rng(11)
    pts = rng.random((6, 2)) * 0.8 + 0.1
    s = RobotSet.from_points(pts)
    a = optimal_makespan(s, unit_square)
    b = optimal_makespan(s, unit_square)
    assert a.makespan == b.makespan
    assert a.tree.parents == b.tree.parents
    assert a.nodes_explored == b.nodes_explored


def test_oracle_result_fields(unit_square):
    s = RobotSet.from_points([[0.2, 0.5], [0.8, 0.5]])
    res = optimal_makespan(s, unit_square)
    assert isinstance(res, OracleResult)
    assert res.nodes_explored >= 1
    assert res.lower_bound <= res.makespan + 1e-12
