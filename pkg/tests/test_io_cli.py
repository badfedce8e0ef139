import json
import math
import subprocess
import sys

import pytest

from polyfreeze.cfa import place_steiner
from polyfreeze.cli import (EXIT_BOUND, EXIT_INVALID, EXIT_OK, EXIT_USAGE,
                            run_command)
from polyfreeze.instance_io import (SCHEMA_VERSION, Instance, InstanceError,
                                    canonical_json, generate_instance,
                                    load_instance, load_schedule,
                                    normalize_coordinates, save_instance,
                                    schedule_from_dict, schedule_to_dict,
                                    write_instance)


def valid_dict(**over):
    data = {
        "version": SCHEMA_VERSION,
        "outer": [[0, 0], [1, 0], [1, 1], [0, 1]],
        "holes": [],
        "robots": [[0.2, 0.2], [0.8, 0.8]],
        "source": 0,
        "metric": "geodesic",
    }
    data.update(over)
    return data


# --- canonical serialization -------------------------------------------------

def test_canonical_json_shape():
    s = canonical_json({"b": 1, "a": [1.0, 2.5]})
    assert s == '{"a":[1.0,2.5],"b":1}\n'


def test_canonical_json_rounds_to_12_digits():
    s = canonical_json({"x": 0.1234567890123456})
    assert '"x":0.123456789012' in s
    assert canonical_json({"x": -0.0}) == '{"x":0.0}\n'


def test_normalize_uniform_scale():
    outer = [(2.0, 3.0), (6.0, 3.0), (6.0, 5.0), (2.0, 5.0)]
    out, holes, robots = normalize_coordinates(outer, [], [(4.0, 4.0)])
    assert out == [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.0, 0.5)]
    assert robots == [(0.5, 0.25)]  # aspect ratio preserved, never stretched
    with pytest.raises(InstanceError):
        normalize_coordinates([(1.0, 1.0), (1.0, 1.0)], [], [])


def test_save_load_reaches_byte_fixpoint(tmp_path):
    for seed, prof, holes in [(3, "convex", 0), (4, "lshape", 1),
                              (5, "orthogonal", 2)]:
        data = generate_instance(seed, n_robots=5, n_holes=holes, profile=prof)
        first = canonical_json(save_instance(load_instance(data)))
        second = canonical_json(save_instance(load_instance(json.loads(first))))
        assert second == first
        p = tmp_path / f"i{seed}.json"
        write_instance(load_instance(json.loads(first)), p)
        assert p.read_text(encoding="utf-8") == first


def test_save_instance_drops_steiner(lshape):
    inst = load_instance(valid_dict(
        outer=[[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]],
        robots=[[0.2, 0.2], [1.8, 0.4]]))
    augmented = Instance(inst.domain, place_steiner(inst.domain, inst.robots),
                         inst.metric)
    data = save_instance(augmented)
    assert len(data["robots"]) == 2


# --- instance validation codes -----------------------------------------------

def codes_of(data):
    with pytest.raises(InstanceError) as ei:
        load_instance(data)
    return ei.value.codes


def test_schema_codes():
    assert "schema" in codes_of(valid_dict(version=99))
    assert "schema" in codes_of(valid_dict(outer="nope"))
    assert "schema" in codes_of(valid_dict(outer=[[0, 0], [1], [1, 1]]))
    assert "schema" in codes_of(valid_dict(robots=[]))
    assert "schema" in codes_of(valid_dict(source="zero"))
    assert "schema" in codes_of(valid_dict(outer=[[0, 0], [0, 0], [0, 0]]))
    assert "metric" in codes_of(valid_dict(metric="euclid"))
    with pytest.raises(InstanceError):
        load_instance([1, 2, 3])


def test_geometry_codes_pass_through():
    assert "ring-degenerate" in codes_of(valid_dict(outer=[[0, 0], [1, 0]]))
    assert "ring-self-intersect" in codes_of(
        valid_dict(outer=[[0, 0], [1, 1], [1, 0], [0, 1]]))
    assert "hole-placement" in codes_of(
        valid_dict(holes=[[[0.9, 0.9], [0.9, 1.4], [1.4, 1.4], [1.4, 0.9]]]))


def test_robot_codes():
    assert "robot-outside" in codes_of(
        valid_dict(robots=[[0.2, 0.2], [1.4, 0.5]]))
    assert "robot-duplicate" in codes_of(
        valid_dict(robots=[[0.2, 0.2], [0.2, 0.2]]))
    assert "source-index" in codes_of(valid_dict(source=5))
    # several problems reported at once
    cs = codes_of(valid_dict(robots=[[0.2, 0.2], [0.2, 0.2]], source=9))
    assert {"robot-duplicate", "source-index"} <= set(cs)


def test_closed_rings_accepted():
    inst = load_instance(valid_dict(
        outer=[[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]))
    assert len(inst.domain.outer) == 4


def test_boundary_robot_accepted():
    inst = load_instance(valid_dict(robots=[[0.0, 0.5], [0.5, 0.5]]))
    assert len(inst.robots) == 2


# --- schedule serialization --------------------------------------------------

def test_schedule_round_trip(unit_square):
    from polyfreeze.cfa import RobotSet, cfa_schedule
    from polyfreeze.geodesic import build_visibility_graph
    from polyfreeze.spanner import greedy_spanner

    s = RobotSet.from_points([[0.5, 0.5], [0.6, 0.5], [0.5, 0.8], [0.1, 0.5]])
    g = build_visibility_graph(s.points(), unit_square)
    sched = cfa_schedule(s, greedy_spanner(g, 6.0))
    back = schedule_from_dict(json.loads(canonical_json(schedule_to_dict(sched))))
    assert back.source == sched.source
    assert back.parents == sched.parents
    assert back.wake_times == pytest.approx(sched.wake_times)
    assert back.makespan_all == pytest.approx(sched.makespan_all)
    assert back.child_order == sched.child_order


def test_schedule_requires_single_root():
    raw = {"metric": "geodesic", "model": "return-home",
           "wake_times": {"0": 0.0, "1": 0.0}, "tree": [],
           "itineraries": {"0": [[0.0, 0.5, 0.5]], "1": [[0.0, 0.6, 0.5]]},
           "makespan_all": 0.0, "makespan_original": 0.0}
    with pytest.raises(InstanceError, match="root"):
        schedule_from_dict(raw)


# --- generator ---------------------------------------------------------------

def test_generator_deterministic():
    a = generate_instance(17, n_robots=7, n_holes=1, profile="orthogonal")
    b = generate_instance(17, n_robots=7, n_holes=1, profile="orthogonal")
    assert canonical_json(a) == canonical_json(b)
    c = generate_instance(18, n_robots=7, n_holes=1, profile="orthogonal")
    assert canonical_json(c) != canonical_json(a)


def test_generator_profiles():
    conv = load_instance(generate_instance(2, n_robots=4, profile="convex"))
    assert len(conv.domain.reflex) == 0
    assert len(conv.domain.outer) >= 5
    lsh = load_instance(generate_instance(2, n_robots=4, profile="lshape"))
    assert len(lsh.domain.reflex) == 1
    orth = load_instance(generate_instance(2, n_robots=4, n_holes=2,
                                           profile="orthogonal"))
    assert len(orth.domain.holes) == 2
    assert len(orth.domain.reflex) >= 1


def test_generator_rejects_bad_args():
    with pytest.raises(ValueError):
        generate_instance(0, n_holes=1, profile="convex")
    with pytest.raises(ValueError):
        generate_instance(0, n_holes=3, profile="lshape")
    with pytest.raises(ValueError):
        generate_instance(0, n_robots=0)
    with pytest.raises(ValueError):
        generate_instance(0, profile="moon")


# --- CLI ---------------------------------------------------------------------

@pytest.fixture
def inst_file(tmp_path):
    p = tmp_path / "inst.json"
    p.write_text(canonical_json(
        generate_instance(8, n_robots=5, n_holes=1, profile="lshape")),
        encoding="utf-8")
    return p


def test_cli_gen_stdout(capsys):
    assert run_command(["gen", "--seed", "3", "--robots", "4"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["version"] == SCHEMA_VERSION
    assert len(data["robots"]) == 4


def test_cli_gen_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_command(["gen", "--seed", "5", "--out", str(a)])
    run_command(["gen", "--seed", "5", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_cli_solve_verify_cycle(inst_file, tmp_path, capsys):
    out = tmp_path / "sched.json"
    code = run_command(["solve", str(inst_file), "--algo", "cfa",
                        "--out", str(out)])
    stats = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert stats["algo"] == "cfa"
    assert stats["bound_factor"] == pytest.approx(
        6.0 * (2 * stats["k_measured"] - 1))
    assert stats["bound_violations"] == []
    assert stats["backend"] in ("numba", "numpy")

    assert run_command(["verify", str(inst_file), str(out)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "ok"


def test_cli_solve_deterministic_bytes(inst_file, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_command(["solve", str(inst_file), "--algo", "ptas", "--m", "2",
                 "--out", str(a)])
    run_command(["solve", str(inst_file), "--algo", "ptas", "--m", "2",
                 "--out", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_cli_solve_exact(inst_file, tmp_path, capsys):
    out = tmp_path / "sched.json"
    code = run_command(["solve", str(inst_file), "--algo", "exact",
                        "--out", str(out)])
    stats = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert stats["optimal_makespan"] == pytest.approx(stats["makespan_all"])
    assert stats["optimal_makespan"] <= stats["cfa_hint"] + 1e-9
    assert stats["lower_bound"] <= stats["optimal_makespan"] + 1e-12
    assert run_command(["verify", str(inst_file), str(out)]) == EXIT_OK


def test_cli_exact_respects_cap(tmp_path, capsys):
    p = tmp_path / "big.json"
    p.write_text(canonical_json(generate_instance(1, n_robots=9)),
                 encoding="utf-8")
    code = run_command(["solve", str(p), "--algo", "exact"])
    err = capsys.readouterr().err
    assert code == EXIT_INVALID
    assert "cap" in err


def test_cli_stats(inst_file, capsys):
    assert run_command(["stats", str(inst_file)]) == EXIT_OK
    stats = json.loads(capsys.readouterr().out)
    assert stats["n_robots"] == 5
    assert stats["t_measured"] <= 6.0 + 1e-9
    assert stats["cfa_over_optimal"] >= 1.0 - 1e-12
    assert stats["diameter"] > 0


def test_cli_metric_override_vftp_flag(tmp_path, capsys):
    p = tmp_path / "vis.json"
    data = generate_instance(2, n_robots=5, profile="convex")
    data["metric"] = "visibility"
    p.write_text(canonical_json(data), encoding="utf-8")
    code = run_command(["solve", str(p), "--algo", "cfa"])
    captured = capsys.readouterr()
    stats = json.loads(captured.out)
    assert code == EXIT_OK
    assert stats["vftp_degenerate"] is True
    assert stats["makespan_all"] == 0.0
    assert "makespan 0" in captured.err


def test_cli_usage_errors(capsys):
    assert run_command([]) == EXIT_USAGE
    assert run_command(["frobnicate"]) == EXIT_USAGE
    assert run_command(["solve"]) == EXIT_USAGE
    capsys.readouterr()


def test_cli_invalid_inputs(tmp_path, capsys):
    assert run_command(["solve", str(tmp_path / "missing.json")]) == EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run_command(["solve", str(bad)]) == EXIT_INVALID
    outside = tmp_path / "outside.json"
    outside.write_text(canonical_json(valid_dict(
        robots=[[0.5, 0.5], [2.5, 0.5]])), encoding="utf-8")
    assert run_command(["solve", str(outside)]) == EXIT_INVALID
    err = capsys.readouterr().err
    assert "robot-outside" in err


def test_cli_render(inst_file, tmp_path, capsys):
    out = tmp_path / "pic.svg"
    code = run_command(["render", str(inst_file), "--spanner",
                        "--path", "0,1", "--out", str(out)])
    capsys.readouterr()
    assert code == EXIT_OK
    svg = out.read_text(encoding="utf-8")
    assert svg.startswith("<svg") or "<svg" in svg
    assert "circle" in svg

    assert run_command(["render", str(inst_file), "--path", "zero,1"]) == EXIT_USAGE
    assert run_command(["render", str(inst_file), "--path", "0,99"]) == EXIT_INVALID
    capsys.readouterr()


def test_cli_render_schedule_overlay(inst_file, tmp_path, capsys):
    sched = tmp_path / "s.json"
    run_command(["solve", str(inst_file), "--algo", "cfa", "--out", str(sched)])
    capsys.readouterr()
    out = tmp_path / "pic.svg"
    assert run_command(["render", str(inst_file), "--schedule", str(sched),
                        "--out", str(out)]) == EXIT_OK
    assert "marker-end" in out.read_text(encoding="utf-8")


def test_cli_render_rejects_foreign_schedule(inst_file, tmp_path, capsys):
    other = tmp_path / "other.json"
    other.write_text(canonical_json(generate_instance(9, n_robots=12)),
                     encoding="utf-8")
    sched = tmp_path / "s.json"
    run_command(["solve", str(other), "--algo", "cfa", "--out", str(sched)])
    capsys.readouterr()
    assert run_command(["render", str(inst_file), "--schedule",
                        str(sched)]) == EXIT_INVALID


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "polyfreeze.cli",
                          "gen", "--seed", "1", "--robots", "3"],
                         capture_output=True, text=True, timeout=300)
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert len(data["robots"]) == 3
