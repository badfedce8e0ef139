"""Shared fixtures: seeded instance corpora and warmed-up kernels."""
import pytest

from polyfreeze import kernels
from polyfreeze.cfa import place_steiner
from polyfreeze.geometry import PolygonDomain
from polyfreeze.instance_io import generate_instance, load_instance


def corpus_spec_50():
    """50 deterministic instances: mixed profiles, <= 20 outer+hole vertices,
    <= 2 holes, 3..12 robots."""
    out = []
    for seed in range(50):
        prof = ("convex", "lshape", "orthogonal")[seed % 3]
        holes = 0 if prof == "convex" else seed % 3
        n = 3 + (seed % 10)
        out.append((seed, prof, holes, n))
    return out


def corpus_spec_30():
    """30 deterministic instances whose robot set plus Steiner fill stays
    within 7 robots (convex adds none, lshape adds 1, orthogonal adds the
    notch reflex count)."""
    out = []
    for i in range(30):
        prof = ("convex", "lshape", "orthogonal")[i % 3]
        if prof == "convex":
            n = 4 + (i % 4)          # up to 7, no corners
        elif prof == "lshape":
            n = 3 + (i % 4)          # up to 6, one reflex corner
        else:
            n = 3 + (i % 3)          # up to 5, at most two notch corners
        out.append((100 + i, prof, 0, n))
    return out


def build_instance(seed, profile, holes, n):
    return load_instance(generate_instance(seed, n_robots=n, n_holes=holes,
                                           profile=profile))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # pay any jit compilation cost once, outside timed sections
    d = PolygonDomain([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    import numpy as np
    from polyfreeze.geodesic import build_visibility_graph
    from polyfreeze.spanner import greedy_spanner
    pts = np.array([[0.2, 0.2], [0.8, 0.3], [0.5, 0.7]])
    g = build_visibility_graph(pts, d)
    greedy_spanner(g, 6.0)
    g.all_pairs()
    kernels.dijkstra_dense(g.w, 0)
    yield


@pytest.fixture(scope="session")
def corpus50():
    return [build_instance(*spec) for spec in corpus_spec_50()]


@pytest.fixture(scope="session")
def corpus30():
    insts = [build_instance(*spec) for spec in corpus_spec_30()]
    for inst in insts:
        rs = place_steiner(inst.domain, inst.robots)
        assert len(rs) <= 7, "small corpus construction drifted"
    return insts


@pytest.fixture()
def lshape():
    return PolygonDomain([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


@pytest.fixture()
def unit_square():
    return PolygonDomain([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture()
def square_with_hole():
    return PolygonDomain([(0, 0), (1, 0), (1, 1), (0, 1)],
                         [[(0.4, 0.4), (0.4, 0.6), (0.6, 0.6), (0.6, 0.4)]])
