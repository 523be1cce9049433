"""Flow networks for density feasibility tests and an exact min-cut solver.

Capacities are rationals. A network built for guess ``alpha = p/q`` stores
every capacity multiplied by ``q`` as a Python int, so the max-flow runs on
exact integers. Infinite arcs get ``1 + sum of all finite capacities``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .graph import Graph
from .pattern import Instance, InstanceGroup, Pattern, iter_cliques, neighbor_sets

SOURCE, SINK = 0, 1
INF = None  # marker for an infinite arc before scaling


def vertex_node(v: int) -> int:
    return v + 2


@dataclass
class FlowNetwork:
    """Directed s-t network; node 0 is the source, node 1 the sink,
    ``2..n+1`` the graph vertices, then one node per unit."""

    kind: str
    n: int
    alpha: Fraction
    vp: int
    degrees: list[int]
    units: list[tuple[tuple[int, ...], int]]  # (member vertices, multiplicity)
    arcs: list[tuple[int, int, int]] = field(default_factory=list)  # scaled
    scale: int = 1
    inf: int = 0

    @property
    def num_nodes(self) -> int:
        return 2 + self.n + len(self.units)

    def unit_node(self, i: int) -> int:
        return 2 + self.n + i

    def node_kind(self, node: int) -> tuple:
        if node == SOURCE:
            return ("source",)
        if node == SINK:
            return ("sink",)
        if node < 2 + self.n:
            return ("vertex", node - 2)
        return ("unit", node - 2 - self.n)

    def capacity(self, i: int) -> Fraction | None:
        """Arc ``i``'s capacity as a rational (``None`` for infinity)."""
        c = self.arcs[i][2]
        return None if c == self.inf else Fraction(c, self.scale)

    def dump(self) -> str:
        """Arc list ``from to num den``; infinite arcs print ``inf``."""
        lines = []
        for u, v, c in self.arcs:
            if c == self.inf:
                lines.append(f"{u} {v} inf 1")
            else:
                f = Fraction(c, self.scale)
                lines.append(f"{u} {v} {f.numerator} {f.denominator}")
        return "\n".join(lines) + "\n"


def _finish(net: FlowNetwork, raw: list[tuple[int, int, int | None]]) -> FlowNetwork:
    finite = sum(c for _, _, c in raw if c is not None)
    net.inf = finite + 1
    net.arcs = [(u, v, net.inf if c is None else c) for u, v, c in raw]
    return net


def _alpha(alpha) -> Fraction:
    a = Fraction(alpha)
    if a < 0:
        raise ValueError("alpha must be non-negative")
    return a


def build_edge_network(g: Graph, alpha) -> FlowNetwork:
    """Goldberg's network: s->v cap m, v->t cap m + 2 alpha - deg(v), unit arcs both ways per edge."""
    a = _alpha(alpha)
    q, p = a.denominator, a.numerator
    net = FlowNetwork("edge", g.n, a, 2, [g.degree(v) for v in range(g.n)], [], scale=q)
    raw = []
    for v in range(g.n):
        raw.append((SOURCE, vertex_node(v), g.m * q))
        raw.append((vertex_node(v), SINK, g.m * q + 2 * p - g.degree(v) * q))
    for u, v in g.edges():
        raw.append((vertex_node(u), vertex_node(v), q))
        raw.append((vertex_node(v), vertex_node(u), q))
    return _finish(net, raw)


def clique_units(g: Graph, h: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Each (h-1)-clique with the vertices that complete it to an h-clique."""
    nbrs = neighbor_sets(g)
    out = []
    for c in iter_cliques(nbrs, h - 1):
        common = set.intersection(*(nbrs[v] for v in c))
        out.append((c, tuple(sorted(common))))
    return out


def build_clique_network(g: Graph, h: int, degrees: Sequence[int], alpha, units=None) -> FlowNetwork:
    """Network with one node per (h-1)-clique: psi->v infinite for v in psi,
    v->psi capacity 1 when psi + v is an h-clique."""
    if h < 3:
        raise ValueError("use build_edge_network for h = 2")
    a = _alpha(alpha)
    q, p = a.denominator, a.numerator
    if units is None:
        units = clique_units(g, h)
    net = FlowNetwork("clique", g.n, a, h, list(degrees), [(c, 1) for c, _ in units], scale=q)
    raw = []
    for v in range(g.n):
        raw.append((SOURCE, vertex_node(v), degrees[v] * q))
        raw.append((vertex_node(v), SINK, p * h))
    for i, (c, completions) in enumerate(units):
        node = net.unit_node(i)
        for v in c:
            raw.append((node, vertex_node(v), INF))
        for v in completions:
            raw.append((vertex_node(v), node, q))
    return _finish(net, raw)


def _unit_network(kind, g: Graph, vp: int, degrees, units, alpha) -> FlowNetwork:
    a = _alpha(alpha)
    q, p = a.denominator, a.numerator
    net = FlowNetwork(kind, g.n, a, vp, list(degrees), units, scale=q)
    raw = []
    for v in range(g.n):
        raw.append((SOURCE, vertex_node(v), degrees[v] * q))
        raw.append((vertex_node(v), SINK, p * vp))
    for i, (vs, size) in enumerate(units):
        node = net.unit_node(i)
        for v in vs:
            raw.append((vertex_node(v), node, size * q))
            raw.append((node, vertex_node(v), size * (vp - 1) * q))
    return _finish(net, raw)


def build_pattern_network(g: Graph, p: Pattern, instances: Sequence[Instance], alpha, degrees=None) -> FlowNetwork:
    """One node per instance: v->psi capacity 1, psi->v capacity vp-1."""
    if degrees is None:
        degrees = [0] * g.n
        for inst in instances:
            for v in inst.vertices:
                degrees[v] += 1
    return _unit_network("pattern", g, p.vp, degrees, [(i.vertices, 1) for i in instances], alpha)


def build_grouped_network(g: Graph, p: Pattern, groups: Sequence[InstanceGroup], alpha) -> FlowNetwork:
    """One node per vertex-set group: v->g capacity |g|, g->v capacity |g|(vp-1)."""
    degrees = [0] * g.n
    for grp in groups:
        for v in grp.key:
            degrees[v] += grp.size
    return _unit_network("grouped", g, p.vp, degrees, [(grp.key, grp.size) for grp in groups], alpha)


@dataclass(frozen=True)
class CutResult:
    capacity: Fraction
    source_side: frozenset
    flow: Fraction
    n: int

    def vertices(self) -> list[int]:
        """Graph vertices on the source side."""
        return sorted(node - 2 for node in self.source_side if 2 <= node < 2 + self.n)


def _max_flow(num_nodes: int, arcs, s: int, t: int):
    """Dinic's algorithm. Returns (flow value, residual capacities, heads, adjacency)."""
    to: list[int] = []
    cap: list[int] = []
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v, c in arcs:
        adj[u].append(len(to))
        to.append(v)
        cap.append(c)
        adj[v].append(len(to))
        to.append(u)
        cap.append(0)
    flow = 0
    while True:
        level = [-1] * num_nodes
        level[s] = 0
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for e in adj[u]:
                if cap[e] and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    dq.append(to[e])
        if level[t] < 0:
            break
        it = [0] * num_nodes
        while True:
            # iterative DFS for one augmenting path in the level graph
            path: list[int] = []
            u = s
            while u != t:
                edges = adj[u]
                i = it[u]
                while i < len(edges):
                    e = edges[i]
                    if cap[e] and level[to[e]] == level[u] + 1:
                        break
                    i += 1
                it[u] = i
                if i == len(edges):
                    if u == s:
                        break
                    level[u] = -1
                    e = path.pop()
                    u = to[e ^ 1]
                    it[u] += 1
                    continue
                path.append(edges[i])
                u = to[edges[i]]
            if u != t:
                break
            push = min(cap[e] for e in path)
            for e in path:
                cap[e] -= push
                cap[e ^ 1] += push
            flow += push
    return flow, cap, to, adj


def min_cut(net: FlowNetwork) -> CutResult:
    """Exact minimum s-t cut; the source side is everything reachable from s
    in the final residual graph."""
    flow, cap, to, adj = _max_flow(net.num_nodes, net.arcs, SOURCE, SINK)
    seen = {SOURCE}
    dq = deque([SOURCE])
    while dq:
        u = dq.popleft()
        for e in adj[u]:
            if cap[e] and to[e] not in seen:
                seen.add(to[e])
                dq.append(to[e])
    crossing = sum(c for u, v, c in net.arcs if u in seen and v not in seen)
    if crossing != flow:
        raise AssertionError("max-flow value differs from cut capacity")
    return CutResult(Fraction(crossing, net.scale), frozenset(seen), Fraction(flow, net.scale), net.n)


def cut_capacity(net: FlowNetwork, source_side) -> Fraction:
    """Sum of capacities of arcs leaving ``source_side``."""
    side = set(source_side)
    return Fraction(sum(c for u, v, c in net.arcs if u in side and v not in side), net.scale)


def cut_capacity_formula(net: FlowNetwork, source_side) -> Fraction:
    """Closed-form min-cut value for a pattern or grouped network.

    deg-sum outside A1, plus alpha * vp * |A1|, plus sum over units of
    multiplicity * (members inside A1) for units not wholly inside A1.
    """
    if net.kind not in ("pattern", "grouped"):
        raise ValueError("formula applies to pattern and grouped networks only")
    side = set(source_side)
    if SOURCE not in side or SINK in side:
        raise ValueError("source side must contain s and not t")
    inside = {node - 2 for node in side if 2 <= node < 2 + net.n}
    phi = sum(d for v, d in enumerate(net.degrees) if v not in inside)
    pi = 0
    for vs, size in net.units:
        i = sum(1 for v in vs if v in inside)
        if i < net.vp:
            pi += size * i
    return phi + net.alpha * net.vp * len(inside) + pi


def prune_instance_nodes(g: Graph, h: int, instances: Sequence[Instance]) -> tuple[list[Instance], list[int]]:
    """Drop h-clique instances whose removal (with their vertices) leaves a
    strictly denser graph. Returns the kept instances and per-vertex degrees
    counted over kept instances only."""
    n = g.n
    mu = len(instances)
    by_vertex: list[list[int]] = [[] for _ in range(n)]
    for idx, inst in enumerate(instances):
        for v in inst.vertices:
            by_vertex[v].append(idx)
    kept = []
    for inst in instances:
        if n - h > 0:
            hit = set()
            for v in inst.vertices:
                hit.update(by_vertex[v])
            # rho(G minus psi's vertices) > rho(G)
            if (mu - len(hit)) * n > mu * (n - h):
                continue
        kept.append(inst)
    degrees = [0] * n
    for inst in kept:
        for v in inst.vertices:
            degrees[v] += 1
    return kept, degrees


def clique_instances(g: Graph, h: int) -> list[Instance]:
    es = list(combinations(range(h), 2))
    return [Instance(c, tuple((c[a], c[b]) for a, b in es)) for c in iter_cliques(neighbor_sets(g), h)]
