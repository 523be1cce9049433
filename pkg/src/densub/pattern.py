"""Patterns and instance enumeration.

An instance of a pattern is an edge subgraph of the host graph isomorphic to
the pattern (not necessarily induced). Two embeddings with the same image
edge set are the same instance.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb
from typing import Iterable, Iterator, Sequence

from .graph import Graph, load_edge_list

MAX_PATTERN_VERTICES = 8

# Residual adjacency: one neighbour set per vertex. Deleted vertices keep an
# empty set and are never referenced by live vertices.
Nbrs = Sequence[set]


class PatternError(ValueError):
    pass


@dataclass(frozen=True)
class Pattern:
    """A connected simple template graph on vertices ``0..vp-1``."""

    vp: int
    edges: frozenset
    kind: str = "general"
    name: str | None = None
    _aut: tuple = field(default=(), repr=False, compare=False)

    @property
    def is_clique(self) -> bool:
        return self.kind == "clique"

    @property
    def x(self) -> int:
        """Number of tails for a star pattern."""
        return self.vp - 1

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.vp)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        return self._aut

    def canonical_form(self) -> tuple[tuple[int, int], ...]:
        """Lexicographically smallest relabelled edge list."""
        best = None
        for perm in permutations(range(self.vp)):
            e = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in self.edges))
            if best is None or e < best:
                best = e
        return best


def _classify(vp: int, edges: frozenset) -> str:
    degs = [0] * vp
    for a, b in edges:
        degs[a] += 1
        degs[b] += 1
    if len(edges) == comb(vp, 2):
        return "clique"
    if vp >= 3 and len(edges) == vp - 1 and max(degs) == vp - 1:
        return "star"
    if vp == 4 and all(d == 2 for d in degs):
        return "diamond"
    if vp >= 5 and all(d == 2 for d in degs):
        return "cycle"
    return "general"


def make_pattern(vp: int, edges: Iterable[tuple[int, int]], name: str | None = None) -> Pattern:
    """Validate and build a pattern from an edge list over ``0..vp-1``."""
    if not 2 <= vp <= MAX_PATTERN_VERTICES:
        raise PatternError(f"pattern must have 2..{MAX_PATTERN_VERTICES} vertices, got {vp}")
    es = set()
    for a, b in edges:
        if a == b:
            raise PatternError("pattern has a self-loop")
        if not (0 <= a < vp and 0 <= b < vp):
            raise PatternError(f"pattern edge ({a}, {b}) out of range")
        es.add((min(a, b), max(a, b)))
    es = frozenset(es)
    adj: list[set[int]] = [set() for _ in range(vp)]
    for a, b in es:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != vp:
        raise PatternError("pattern is disconnected")
    aut = tuple(
        perm
        for perm in permutations(range(vp))
        if all((min(perm[a], perm[b]), max(perm[a], perm[b])) in es for a, b in es)
    )
    return Pattern(vp, es, _classify(vp, es), name, aut)


def clique(h: int) -> Pattern:
    name = {2: "edge", 3: "triangle"}.get(h, f"{h}-clique")
    return make_pattern(h, combinations(range(h), 2), name)


def star(x: int) -> Pattern:
    if x < 2:
        raise PatternError("star needs at least 2 tails")
    return make_pattern(x + 1, [(0, i) for i in range(1, x + 1)], f"{x}-star")


def cycle(length: int) -> Pattern:
    if length < 3:
        raise PatternError("cycle needs at least 3 vertices")
    return make_pattern(length, [(i, (i + 1) % length) for i in range(length)], f"cycle:{length}")


BUILTIN = {
    "edge": lambda: clique(2),
    "triangle": lambda: clique(3),
    # the 4-cycle, drawn as a rhombus
    "diamond": lambda: make_pattern(4, [(0, 1), (1, 2), (2, 3), (3, 0)], "diamond"),
    # two triangles sharing an edge (K4 minus one edge)
    "2triangle": lambda: make_pattern(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)], "2triangle"),
    # triangle with a pendant vertex
    "c3star": lambda: make_pattern(4, [(0, 1), (0, 2), (1, 2), (0, 3)], "c3star"),
}


def parse_pattern(selector: str) -> Pattern:
    """Resolve a selector such as ``triangle``, ``clique:4``, ``star:2``,
    ``2-star``, ``4-clique``, ``cycle:5`` or ``file:path``."""
    s = selector.strip()
    if s in BUILTIN:
        return BUILTIN[s]()
    try:
        if s.startswith("clique:"):
            return clique(int(s.split(":", 1)[1]))
        if s.startswith("star:"):
            return star(int(s.split(":", 1)[1]))
        if s.startswith("cycle:"):
            length = int(s.split(":", 1)[1])
            return BUILTIN["diamond"]() if length == 4 else cycle(length)
        if s.endswith("-clique"):
            return clique(int(s[: -len("-clique")]))
        if s.endswith("-star"):
            return star(int(s[: -len("-star")]))
    except ValueError as exc:
        if isinstance(exc, PatternError):
            raise
        raise PatternError(f"bad pattern selector {selector!r}") from None
    if s.startswith("file:"):
        with open(s[5:], encoding="utf-8") as fh:
            return load_pattern(fh.read(), name=s)
    raise PatternError(f"unknown pattern {selector!r}")


def load_pattern(text: str, name: str | None = None) -> Pattern:
    """Read a pattern from edge-list text with integer vertices ``0..vp-1``."""
    g = load_edge_list(text)
    try:
        ids = [int(lbl) for lbl in g.labels]
    except ValueError:
        raise PatternError("pattern vertices must be integers 0..vp-1") from None
    if sorted(ids) != list(range(g.n)):
        raise PatternError("pattern vertices must be exactly 0..vp-1")
    return make_pattern(g.n, [(ids[u], ids[v]) for u, v in g.edges()], name)


def as_pattern(p: Pattern | int | str) -> Pattern:
    if isinstance(p, Pattern):
        return p
    if isinstance(p, int):
        return clique(p)
    return parse_pattern(p)


@dataclass(frozen=True)
class Instance:
    vertices: tuple[int, ...]
    edge_ids: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class InstanceGroup:
    key: tuple[int, ...]
    size: int


def neighbor_sets(g: Graph) -> list[set[int]]:
    return [set(a) for a in g.adj]


# -- cliques -----------------------------------------------------------------

def _check_h(h: int) -> None:
    if not 2 <= h <= MAX_PATTERN_VERTICES:
        raise PatternError(f"clique size must be in 2..{MAX_PATTERN_VERTICES}, got {h}")


def _extend_cliques(nbrs: Nbrs, prefix: list[int], cand: list[int], need: int) -> Iterator[tuple[int, ...]]:
    if need == 0:
        yield tuple(prefix)
        return
    for i, u in enumerate(cand):
        if len(cand) - i < need:
            break
        nu = nbrs[u]
        prefix.append(u)
        yield from _extend_cliques(nbrs, prefix, [w for w in cand[i + 1:] if w in nu], need - 1)
        prefix.pop()


def iter_cliques(nbrs: Nbrs, h: int, vertices: Iterable[int] | None = None) -> Iterator[tuple[int, ...]]:
    """h-cliques as ascending tuples, in lexicographic order."""
    order = range(len(nbrs)) if vertices is None else sorted(vertices)
    for v in order:
        higher = sorted(u for u in nbrs[v] if u > v)
        yield from _extend_cliques(nbrs, [v], higher, h - 1)


def cliques_containing(nbrs: Nbrs, v: int, h: int) -> Iterator[tuple[int, ...]]:
    """The other h-1 members of each h-clique through ``v``."""
    yield from _extend_cliques(nbrs, [], sorted(nbrs[v]), h - 1)


def enumerate_clique_instances(g: Graph, h: int) -> Iterator[tuple[int, ...]]:
    _check_h(h)
    return iter_cliques(neighbor_sets(g), h)


def clique_degrees(g: Graph, h: int) -> list[int]:
    _check_h(h)
    deg = [0] * g.n
    for c in iter_cliques(neighbor_sets(g), h):
        for v in c:
            deg[v] += 1
    return deg


# -- general patterns ----------------------------------------------------------

class _Plan:
    """Search order for embeddings rooted at one pattern vertex."""

    def __init__(self, p: Pattern, root: int):
        adj = p.adjacency()
        order = [root]
        parent = {root: -1}
        dq = deque([root])
        while dq:
            a = dq.popleft()
            for b in sorted(adj[a], key=lambda z: (-len(adj[z]), z)):
                if b not in parent:
                    parent[b] = a
                    order.append(b)
                    dq.append(b)
        pos = {a: i for i, a in enumerate(order)}
        self.order = order
        self.parent_pos = [pos[parent[a]] if parent[a] >= 0 else -1 for a in order]
        self.back = [
            [pos[b] for b in adj[a] if pos[b] < i and pos[b] != self.parent_pos[i]]
            for i, a in enumerate(order)
        ]


_plans: dict = {}


def _plan(p: Pattern, root: int) -> _Plan:
    key = (p.vp, p.edges, root)
    plan = _plans.get(key)
    if plan is None:
        plan = _plans[key] = _Plan(p, root)
    return plan


def _default_root(p: Pattern) -> int:
    adj = p.adjacency()
    return max(range(p.vp), key=lambda a: (len(adj[a]), -a))


def _embeddings(nbrs: Nbrs, p: Pattern, root: int, start: int) -> Iterator[tuple[int, ...]]:
    """All injective edge-preserving maps with ``root -> start``, as tuples
    indexed by pattern vertex."""
    plan = _plan(p, root)
    k = p.vp
    img = [0] * k  # by search position
    img[0] = start
    used = {start}
    order, parent_pos, back = plan.order, plan.parent_pos, plan.back

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == k:
            phi = [0] * k
            for j in range(k):
                phi[order[j]] = img[j]
            yield tuple(phi)
            return
        for c in sorted(nbrs[img[parent_pos[i]]]):
            if c in used:
                continue
            nc = nbrs[c]
            if all(img[j] in nc for j in back[i]):
                img[i] = c
                used.add(c)
                yield from rec(i + 1)
                used.discard(c)

    yield from rec(1)


def _is_orbit_min(phi: tuple[int, ...], aut) -> bool:
    for sigma in aut:
        other = tuple(phi[s] for s in sigma)
        if other < phi:
            return False
    return True


def _instance(p: Pattern, phi: tuple[int, ...]) -> Instance:
    edges = tuple(sorted((min(phi[a], phi[b]), max(phi[a], phi[b])) for a, b in p.edges))
    return Instance(tuple(sorted(phi)), edges)


def iter_pattern_instances(nbrs: Nbrs, p: Pattern, vertices: Iterable[int] | None = None) -> Iterator[Instance]:
    if p.is_clique:
        es = list(combinations(range(p.vp), 2))
        for c in iter_cliques(nbrs, p.vp, vertices):
            yield Instance(c, tuple((c[a], c[b]) for a, b in es))
        return
    root = _default_root(p)
    aut = p.automorphisms()
    order = range(len(nbrs)) if vertices is None else sorted(vertices)
    for v in order:
        for phi in _embeddings(nbrs, p, root, v):
            if _is_orbit_min(phi, aut):
                yield _instance(p, phi)


def instances_containing(nbrs: Nbrs, p: Pattern, v: int) -> Iterator[tuple[int, ...]]:
    """Vertex tuples of every instance through ``v`` (one per instance)."""
    if p.is_clique:
        for rest in cliques_containing(nbrs, v, p.vp):
            yield (v,) + rest
        return
    aut = p.automorphisms()
    for r in range(p.vp):
        for phi in _embeddings(nbrs, p, r, v):
            if _is_orbit_min(phi, aut):
                yield phi


def enumerate_pattern_instances(g: Graph, p: Pattern) -> Iterator[Instance]:
    """Every edge-set-distinct embedded copy of ``p`` in ``g``, deterministically."""
    return iter_pattern_instances(neighbor_sets(g), p)


def pattern_degrees(g: Graph, p: Pattern) -> list[int]:
    """Per-vertex instance counts by generic enumeration."""
    deg = [0] * g.n
    for inst in enumerate_pattern_instances(g, p):
        for v in inst.vertices:
            deg[v] += 1
    return deg


# -- fast paths for stars and the 4-cycle ---------------------------------------

def _star_degrees(nbrs: Nbrs, x: int) -> list[int]:
    dg = [len(s) for s in nbrs]
    tail = [comb(z - 1, x - 1) if z >= x else 0 for z in dg]
    return [comb(dg[v], x) + sum(tail[u] for u in nbrs[v]) for v in range(len(nbrs))]


def star_degrees_fast(g: Graph, x: int) -> list[int]:
    if x < 2:
        raise PatternError("star needs at least 2 tails")
    return _star_degrees(neighbor_sets(g), x)


def _star_decrements(nbrs: Nbrs, v: int, x: int) -> dict[int, int]:
    y = len(nbrs[v])
    dec: dict[int, int] = {}
    for u in nbrs[v]:
        z = len(nbrs[u])
        dec[u] = dec.get(u, 0) + comb(y - 1, x - 1) + comb(z - 1, x - 1)
        two = comb(z - 2, x - 2) if z >= 2 else 0
        if two:
            for w in nbrs[u]:
                if w != v:
                    dec[w] = dec.get(w, 0) + two
    return dec


def star_degree_decrements(g: Graph, v: int, x: int) -> list[tuple[int, int]]:
    """Pattern-degree losses of other vertices when ``v`` is deleted."""
    dec = _star_decrements(neighbor_sets(g), v, x)
    return sorted((u, d) for u, d in dec.items() if d)


def _two_paths(nbrs: Nbrs, v: int) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for a in nbrs[v]:
        for w in nbrs[a]:
            if w != v:
                groups.setdefault(w, []).append(a)
    return groups


def _diamond_degrees(nbrs: Nbrs) -> list[int]:
    out = []
    for v in range(len(nbrs)):
        out.append(sum(comb(len(mids), 2) for mids in _two_paths(nbrs, v).values()))
    return out


def diamond_degrees_fast(g: Graph) -> list[int]:
    """4-cycle degrees: pairs of 2-paths from ``v`` sharing an endpoint."""
    return _diamond_degrees(neighbor_sets(g))


def _diamond_decrements(nbrs: Nbrs, v: int) -> dict[int, int]:
    dec: dict[int, int] = {}
    for w, mids in _two_paths(nbrs, v).items():
        y = len(mids)
        if y < 2:
            continue
        dec[w] = dec.get(w, 0) + comb(y, 2)
        for a in mids:
            dec[a] = dec.get(a, 0) + y - 1
    return dec


def diamond_degree_decrements(g: Graph, v: int) -> list[tuple[int, int]]:
    dec = _diamond_decrements(neighbor_sets(g), v)
    return sorted((u, d) for u, d in dec.items() if d)


# -- dispatch used by the solvers ----------------------------------------------

def residual_degrees(nbrs: Nbrs, p: Pattern) -> list[int]:
    """Pattern degrees over a neighbour-set structure, using fast paths."""
    if p.kind == "star":
        return _star_degrees(nbrs, p.x)
    if p.kind == "diamond":
        return _diamond_degrees(nbrs)
    deg = [0] * len(nbrs)
    for inst in iter_pattern_instances(nbrs, p):
        for v in inst.vertices:
            deg[v] += 1
    return deg


def residual_decrements(nbrs: Nbrs, p: Pattern, v: int) -> dict[int, int]:
    """Degree losses caused by deleting ``v`` from the residual structure."""
    if p.kind == "star":
        return _star_decrements(nbrs, v, p.x)
    if p.kind == "diamond":
        return _diamond_decrements(nbrs, v)
    dec: dict[int, int] = {}
    for vs in instances_containing(nbrs, p, v):
        for u in vs:
            if u != v:
                dec[u] = dec.get(u, 0) + 1
    return dec


def degrees(g: Graph, p: Pattern) -> list[int]:
    return residual_degrees(neighbor_sets(g), p)


def count_instances(g: Graph, p: Pattern) -> int:
    """mu(G, p), the number of instances in ``g``."""
    return sum(degrees(g, p)) // p.vp


def group_instances(instances: Iterable[Instance]) -> list[InstanceGroup]:
    """One group per distinct vertex set, in order of first appearance."""
    sizes: dict[tuple[int, ...], int] = {}
    for inst in instances:
        sizes[inst.vertices] = sizes.get(inst.vertices, 0) + 1
    return [InstanceGroup(k, s) for k, s in sizes.items()]


def gamma_upper_bound(g: Graph, h: int, core_numbers: Sequence[int] | None = None) -> list[int]:
    """C(core(v), h-1) from classical core numbers.

    Bounds the h-clique-core number of every vertex: a (k, clique)-core R has a
    vertex of degree delta(R) <= core(v) whose clique degree is at most
    C(delta(R), h-1).
    """
    if h < 2:
        raise PatternError("h must be at least 2")
    if core_numbers is None:
        from .graph import classic_core_numbers

        core_numbers = classic_core_numbers(g)
    return [comb(c, h - 1) for c in core_numbers]
