import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from densub.coredecomp import decompose, extract_core
from densub.densest import (
    Density,
    core_approx,
    core_exact_cds,
    core_exact_pds,
    exact_cds,
    exact_pds,
    inc_approx,
    measure,
    peel_approx,
    search_budget,
    solve,
)
from densub.graph import Graph
from densub.oracle import brute_force_densest
from densub.pattern import parse_pattern

from _suite import complete, cycle_graph, er, k4_with_path, path_graph, two_c4_groups

EXACT_CDS = (exact_cds, core_exact_cds)
EXACT_PDS = (exact_pds, core_exact_pds)
APPROX = (peel_approx, inc_approx, core_approx)


def k4_plus_edge():
    return Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5)])


def test_density_compares_exactly():
    assert Density(3, 2) == Density(3, 2)
    assert Density(1, 3) < Density(1, 2)
    assert Density(2, 4) <= Density(1, 2) and Density(1, 2) <= Density(2, 4)
    assert Density(2, 4).value == Fraction(1, 2)
    with pytest.raises(ValueError):
        Density(1, 0)


@pytest.mark.parametrize("solver", EXACT_CDS)
def test_exact_cds_examples(solver):
    r = solver(k4_plus_edge(), 2)
    assert r.vertices == (0, 1, 2, 3) and r.density == Density(6, 4)
    r = solver(complete(3), 3)
    assert r.vertices == (0, 1, 2) and r.density.value == Fraction(1, 3)


@pytest.mark.parametrize("solver", EXACT_CDS)
def test_denser_component_wins(solver):
    k5 = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    k4 = [(u + 5, v + 5) for u in range(4) for v in range(u + 1, 4)]
    r = solver(Graph.from_edges(9, k5 + k4), 2)
    assert r.vertices == (0, 1, 2, 3, 4) and r.density.value == 2


@pytest.mark.parametrize("solver", EXACT_CDS + EXACT_PDS + APPROX)
def test_zero_instance_graphs(solver):
    for g in (Graph.from_edges(0, []), Graph.from_edges(1, []), path_graph(2)):
        r = solver(g, 3)
        assert r.vertices == () and r.density == Density(0, 1)


@pytest.mark.parametrize("solver", EXACT_PDS)
def test_four_cycle_pds(solver):
    g = two_c4_groups()
    r = solver(g, "diamond")
    assert sorted(g.labels[v] for v in r.vertices) == ["A", "D", "E", "F"]
    assert r.density == Density(3, 4)
    r = solver(path_graph(2), "2-star")
    assert r.vertices == () and r.density.value == 0


def test_grouped_network_is_smaller():
    g = two_c4_groups()
    seen = {"pattern": [], "grouped": []}
    exact_pds(g, "diamond", hook=lambda net: seen[net.kind].append(len(net.units)))
    core_exact_pds(g, "diamond", hook=lambda net: seen[net.kind].append(len(net.units)))
    assert set(seen["pattern"]) == {4}
    # the located core drops B and C, leaving only the size-3 group
    assert set(seen["grouped"]) <= {1, 2}
    full = []
    from densub.densest import Feasibility

    f = Feasibility(g, parse_pattern("diamond"), "grouped")
    f.restrict(range(g.n))
    f.hook = lambda net: full.append(len(net.units))
    f.denser_than(Fraction(0))
    assert full == [2]


def test_peel_examples():
    r = peel_approx(complete(4), 2)
    assert r.vertices == (0, 1, 2, 3) and r.density == Density(6, 4)
    assert peel_approx(Graph.from_edges(4, []), 2).density.value == 0


def test_inc_examples():
    r = inc_approx(complete(4), 3)
    assert r.vertices == (0, 1, 2, 3) and r.density.value == 1
    # 4-cycle: k_max = 2 and the core density 4/4 meets the lower bound
    r = inc_approx(cycle_graph(4), 2)
    assert r.density.value == 1 and 1 <= r.density.value <= 2


@pytest.mark.parametrize("x", [1, 2, 5, 20])
def test_core_density_approaches_upper_bound(x):
    # an edge u-v joined to x pairs, each pair vertex adjacent to u and v
    edges = [(0, 1)] + [(i, hub) for i in range(2, 2 + 2 * x) for hub in (0, 1)]
    g = Graph.from_edges(2 + 2 * x, edges)
    d = decompose(g, 2)
    assert d.k_max == 2
    assert measure(g, parse_pattern("edge"), extract_core(d, 2)).value == Fraction(1 + 4 * x, 2 + 2 * x)


def test_core_approx_stops_after_first_window():
    g = k4_with_path(100)
    r = core_approx(g, 3, initial_window=4)
    assert r.stats["windows"] == [4]
    assert r.vertices == (0, 1, 2, 3) and r.stats["k_max"] == 3
    r = core_approx(complete(5), 3)
    assert r.stats["windows"] == [5]


@pytest.mark.parametrize("window", [1, 2, 3, 5, 64])
@pytest.mark.parametrize("seed", range(20))
def test_core_approx_matches_inc(seed, window):
    rng = random.Random(seed)
    g = er(rng.randint(1, 40), rng.choice([0.1, 0.2, 0.4]), rng)
    for name in ("edge", "triangle", "2-star", "diamond"):
        a, b = core_approx(g, name, initial_window=window), inc_approx(g, name)
        assert a.vertices == b.vertices and a.stats["k_max"] == b.stats["k_max"]


@pytest.mark.parametrize("name", ["edge", "triangle", "4-clique", "2-star", "diamond"])
@pytest.mark.parametrize("seed", range(25))
def test_solvers_against_oracle(name, seed):
    rng = random.Random(seed * 101 + len(name))
    g = er(rng.randint(1, 10), rng.choice([0.2, 0.5, 0.8]), rng)
    p = parse_pattern(name)
    opt = brute_force_densest(g, p).density
    solvers = EXACT_PDS + (EXACT_CDS if p.is_clique else ())
    for solver in solvers:
        r = solver(g, p)
        assert r.density == opt
        assert measure(g, p, r.vertices) == r.density or not r.vertices
        assert bool(r.vertices) == (r.density.value > 0)
    for solver in APPROX:
        r = solver(g, p)
        assert r.density.instance_count * p.vp * opt.vertex_count >= opt.instance_count * r.density.vertex_count


def _check_core_exact_stats(g, p, r):
    d = decompose(g, p)
    lower = Fraction(d.k_max, p.vp)
    for comp in r.stats["components"]:
        nodes = comp["network_nodes"]
        assert all(a >= b for a, b in zip(nodes, nodes[1:]))
        assert comp["iterations"] <= comp["budget"] or comp["iterations"] == 0
        for lo, hi in comp["trace"]:
            assert lower <= lo <= hi <= d.k_max


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.floats(0.1, 0.6), st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_core_exact_agrees_and_reports_sane_stats(n, prob, seed, h):
    g = er(n, prob, random.Random(seed))
    a, b = exact_cds(g, h), core_exact_cds(g, h)
    assert a.density == b.density
    assert a.stats["iterations"] <= a.stats.get("budget", 0) or a.stats["iterations"] == 0
    _check_core_exact_stats(g, parse_pattern(str(h) + "-clique" if h > 2 else "edge"), b)
    assert core_exact_cds(g, h, shrink="l").density == a.density
    assert core_exact_cds(g, h, prune=True).density == a.density
    assert exact_cds(g, h, prune=True).density == a.density


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 16), st.floats(0.1, 0.7), st.integers(0, 10**6), st.sampled_from(["diamond", "2-star", "c3star"]))
def test_pds_solvers_agree(n, prob, seed, name):
    g = er(n, prob, random.Random(seed))
    a, b = exact_pds(g, name), core_exact_pds(g, name)
    assert a.density == b.density
    _check_core_exact_stats(g, parse_pattern(name), b)


def test_search_budget():
    assert search_budget(Fraction(3), Fraction(0), 4) == 7
    assert search_budget(Fraction(1), Fraction(1), 4) == 0


def test_solve_dispatch():
    assert solve(complete(4), "triangle", "core-app").density.value == 1
    with pytest.raises(ValueError):
        solve(complete(4), "diamond", "exact")
    with pytest.raises(ValueError):
        solve(complete(4), "edge", "fastest")


@pytest.mark.parametrize("name, expect", [
    ("edge", Fraction(19, 2)),
    ("triangle", Fraction(57)),
    ("4-clique", Fraction(969, 4)),
    ("5-clique", Fraction(3876, 5)),
    ("6-clique", Fraction(1938)),
    ("2-star", Fraction(171)),
    ("diamond", Fraction(2907, 4)),
])
def test_twenty_clique_densities(name, expect):
    r = inc_approx(complete(20), name)
    assert len(r.vertices) == 20 and r.density.value == expect
