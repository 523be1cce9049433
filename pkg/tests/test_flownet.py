import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from densub.densest import exact_cds
from densub.flownet import (
    SINK,
    SOURCE,
    build_clique_network,
    build_edge_network,
    build_grouped_network,
    build_pattern_network,
    clique_instances,
    clique_units,
    cut_capacity,
    cut_capacity_formula,
    min_cut,
    prune_instance_nodes,
    vertex_node,
)
from densub.graph import Graph
from densub.oracle import instance_counts_by_mask
from densub.pattern import (
    clique_degrees,
    count_instances,
    degrees,
    enumerate_pattern_instances,
    group_instances,
    parse_pattern,
)

from _suite import complete, er, path_graph, two_c4_groups

DIAMOND = parse_pattern("diamond")
TWO_TRI = parse_pattern("2triangle")


def arcs_from(net, kind):
    out = []
    for i, (u, v, _) in enumerate(net.arcs):
        if net.node_kind(u)[0] == kind[0] and net.node_kind(v)[0] == kind[1]:
            out.append(net.capacity(i))
    return out


def pattern_net(g, p, alpha):
    return build_pattern_network(g, p, list(enumerate_pattern_instances(g, p)), alpha)


def grouped_net(g, p, alpha):
    return build_grouped_network(g, p, group_instances(enumerate_pattern_instances(g, p)), alpha)


def test_clique_network_on_triangle_with_pendant():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    net = build_clique_network(g, 3, clique_degrees(g, 3), Fraction(1, 3))
    assert net.num_nodes == 2 + 4 + 4
    assert arcs_from(net, ("vertex", "sink")) == [Fraction(1)] * 4


def test_clique_network_without_units():
    g = path_graph(1)
    net = build_clique_network(g, 3, [0], 1)
    assert net.num_nodes == 3 and min_cut(net).capacity == 0


def test_clique_network_k4_completion_arcs():
    net = build_clique_network(complete(4), 3, [3] * 4, 3)
    assert len(arcs_from(net, ("vertex", "unit"))) == 12
    assert all(c is None for c in arcs_from(net, ("unit", "vertex")))


def test_clique_network_rejects_edges():
    with pytest.raises(ValueError):
        build_clique_network(complete(3), 2, [2] * 3, 1)


def test_edge_network_capacities():
    net = build_edge_network(path_graph(2), Fraction(1, 2))
    assert arcs_from(net, ("vertex", "sink")) == [1, 1]
    net = build_edge_network(complete(4), Fraction(3, 2))
    assert arcs_from(net, ("vertex", "sink")) == [6] * 4
    net = build_edge_network(Graph.from_edges(3, []), 1)
    assert arcs_from(net, ("source", "vertex")) == [0] * 3


def test_pattern_network_examples():
    g = two_c4_groups()
    net = pattern_net(g, DIAMOND, 0)
    assert len(net.units) == 4
    for i in range(len(net.units)):
        node = net.unit_node(i)
        outward = [net.capacity(j) for j, (u, _, _) in enumerate(net.arcs) if u == node]
        assert outward == [3, 3, 3, 3]
    assert len(pattern_net(path_graph(3), DIAMOND, 0).units) == 0
    net = pattern_net(complete(4), TWO_TRI, 1)
    assert len(net.units) == 6 and set(arcs_from(net, ("unit", "vertex"))) == {3}


def test_grouped_network_examples():
    net = grouped_net(two_c4_groups(), DIAMOND, 0)
    assert sorted(size for _, size in net.units) == [1, 3]
    big = next(i for i, (_, size) in enumerate(net.units) if size == 3)
    node = net.unit_node(big)
    assert {net.capacity(j) for j, (u, _, _) in enumerate(net.arcs) if u == node} == {9}
    assert {net.capacity(j) for j, (_, v, _) in enumerate(net.arcs) if v == node} == {3}
    net = grouped_net(complete(4), TWO_TRI, 1)
    assert set(arcs_from(net, ("unit", "vertex"))) == {18} and set(arcs_from(net, ("vertex", "unit"))) == {6}
    net = grouped_net(complete(4), DIAMOND, 1)
    assert set(arcs_from(net, ("unit", "vertex"))) == {9} and set(arcs_from(net, ("vertex", "unit"))) == {3}
    tri = parse_pattern("triangle")
    a, b = pattern_net(complete(5), tri, 1), grouped_net(complete(5), tri, 1)
    assert a.arcs == b.arcs


def test_min_cut_examples():
    g = complete(4)
    tri = parse_pattern("triangle")
    assert min_cut(pattern_net(g, tri, 3)).source_side == {SOURCE}
    assert min_cut(pattern_net(g, tri, 0)).source_side > {SOURCE}
    assert min_cut(build_edge_network(Graph.from_edges(3, []), 1)).capacity == 0


def test_formula_examples():
    g = two_c4_groups()
    mu = count_instances(g, DIAMOND)
    for alpha in (0, Fraction(1, 2), 2):
        net = grouped_net(g, DIAMOND, alpha)
        assert cut_capacity_formula(net, {SOURCE}) == 4 * mu
        everything = {SOURCE} | {vertex_node(v) for v in range(g.n)}
        assert cut_capacity_formula(net, everything) == Fraction(alpha) * 4 * g.n
    with pytest.raises(ValueError):
        cut_capacity_formula(net, {SINK})
    with pytest.raises(ValueError):
        cut_capacity_formula(build_edge_network(g, 0), {SOURCE})


def test_prune_examples():
    assert prune_instance_nodes(complete(6), 3, clique_instances(complete(6), 3))[0] == clique_instances(complete(6), 3)
    tri = complete(3)
    assert len(prune_instance_nodes(tri, 3, clique_instances(tri, 3))[0]) == 1
    # K6 plus a far triangle: dropping the triangle lifts density from 21/9 to 20/6
    g = Graph.from_edges(9, [(u, v) for u in range(6) for v in range(u + 1, 6)] + [(6, 7), (7, 8), (6, 8)])
    kept, deg = prune_instance_nodes(g, 3, clique_instances(g, 3))
    assert all(6 not in i.vertices for i in kept) and len(kept) == 20
    assert deg[6:] == [0, 0, 0]
    assert exact_cds(g, 3, prune=True).density == exact_cds(g, 3).density


def test_dump_format():
    net = build_edge_network(path_graph(2), Fraction(1, 2))
    lines = net.dump().splitlines()
    assert len(lines) == len(net.arcs)
    assert lines[0] == "0 2 1 1"
    net = build_clique_network(complete(3), 3, [1, 1, 1], Fraction(2, 3))
    assert any(line.endswith("inf 1") for line in net.dump().splitlines())


def test_infinity_exceeds_finite_sum():
    net = build_clique_network(complete(5), 3, [6] * 5, Fraction(7, 3))
    finite = sum(c for _, _, c in net.arcs if c != net.inf)
    assert net.inf > finite


def _has_denser(g, p, alpha):
    f = instance_counts_by_mask(g, p)
    return any(f[mask] > alpha * bin(mask).count("1") for mask in range(1, 1 << g.n))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.floats(0.2, 0.9), st.integers(0, 10**6),
       st.sampled_from(["edge", "triangle", "2-star", "diamond", "c3star"]),
       st.fractions(0, 6, max_denominator=12))
def test_dichotomy_matches_oracle(n, prob, seed, name, alpha):
    g = er(n, prob, random.Random(seed))
    p = parse_pattern(name)
    if name == "edge":
        nets = [build_edge_network(g, alpha)]
    elif name == "triangle":
        nets = [build_clique_network(g, 3, degrees(g, p), alpha, clique_units(g, 3)), pattern_net(g, p, alpha)]
    else:
        nets = [pattern_net(g, p, alpha), grouped_net(g, p, alpha)]
    expect = _has_denser(g, p, alpha)
    for net in nets:
        cut = min_cut(net)
        assert (cut.source_side != {SOURCE}) == expect
        assert cut.capacity == cut.flow == cut_capacity(net, cut.source_side)
        if net.kind in ("pattern", "grouped"):
            assert cut_capacity_formula(net, cut.source_side) == cut.capacity


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 14), st.floats(0.2, 0.8), st.integers(0, 10**6), st.fractions(0, 8, max_denominator=30))
def test_scaling_is_exact(n, prob, seed, alpha):
    g = er(n, prob, random.Random(seed))
    for net in (build_edge_network(g, alpha), grouped_net(g, DIAMOND, alpha)):
        for i, (_, _, c) in enumerate(net.arcs):
            cap = net.capacity(i)
            assert cap is None or cap * net.scale == c
