import math
import random

import pytest

from densub.densest import Density, measure
from densub.graph import Graph, connected_components, induced_subgraph
from densub.oracle import OracleLimit, OracleRefused, brute_force_count, brute_force_densest
from densub.pattern import count_instances, parse_pattern

from _suite import complete, cycle_graph, er


def test_k4_plus_edge():
    g = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5)])
    r = brute_force_densest(g, "edge")
    assert r.vertices == (0, 1, 2, 3) and r.density == Density(6, 4)


def test_two_triangles_sharing_an_edge():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)])
    r = brute_force_densest(g, "triangle")
    assert r.vertices == (0, 1, 2, 3) and r.density.value == 0.5


def test_single_vertex():
    for name in ("edge", "diamond", "4-clique"):
        r = brute_force_densest(Graph.from_edges(1, []), name)
        assert r.vertices == () and r.density.value == 0


def test_ties_prefer_smaller_then_lexicographic():
    # two disjoint triangles: each alone ties the union; the first one wins
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert brute_force_densest(g, "edge").vertices == (0, 1, 2)


def test_counts():
    assert brute_force_count(complete(4), "triangle") == 4
    assert brute_force_count(complete(4), "diamond") == 3
    assert brute_force_count(complete(4), "2triangle") == 6
    assert brute_force_count(cycle_graph(4), "diamond") == 1
    assert brute_force_count(cycle_graph(4), "2triangle") == 0


def test_refuses_large_graphs():
    with pytest.raises(OracleRefused):
        brute_force_densest(complete(21), "edge")
    with pytest.raises(OracleRefused):
        brute_force_densest(complete(6), "edge", OracleLimit(max_n=5))


@pytest.mark.parametrize("name", ["edge", "triangle", "4-clique", "2-star", "diamond", "c3star", "2triangle"])
@pytest.mark.parametrize("seed", range(20))
def test_oracle_properties(name, seed):
    rng = random.Random(seed * 13 + len(name))
    g = er(rng.randint(1, 10), rng.choice([0.3, 0.5, 0.8]), rng)
    p = parse_pattern(name)
    assert brute_force_count(g, p) == count_instances(g, p)
    r = brute_force_densest(g, p)
    if not r.vertices:
        assert count_instances(g, p) == 0
        return
    assert measure(g, p, r.vertices) == r.density
    rho = r.density.value
    comps = connected_components(induced_subgraph(g, r.vertices)[0])
    if len(comps) > 1:
        sub, _ = induced_subgraph(g, r.vertices)
        assert len({measure(sub, p, c) for c in comps}) == 1
    need = rho if rho.denominator == 1 else math.ceil(rho)
    mu = r.density.instance_count
    for v in r.vertices:
        rest = [u for u in r.vertices if u != v]
        lost = mu - measure(g, p, rest).instance_count
        assert lost >= need
