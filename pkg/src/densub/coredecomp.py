"""(k, pattern)-core decomposition by minimum-degree peeling."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, induced_subgraph
from .pattern import Pattern, as_pattern, count_instances, neighbor_sets, residual_decrements, residual_degrees


@dataclass(frozen=True)
class CoreDecomposition:
    core: list[int]
    k_max: int
    peel_order: list[int]
    # densest residual graph seen while peeling: the vertices left after
    # deleting peel_order[:best_prefix]
    rho_prime: Fraction
    best_prefix: int
    best_count: int
    instance_count: int

    def residual(self, prefix: int) -> list[int]:
        gone = set(self.peel_order[:prefix])
        return [v for v in range(len(self.core)) if v not in gone]

    def best_residual(self) -> list[int]:
        return self.residual(self.best_prefix)


def decompose(g: Graph, p: Pattern | int | str) -> CoreDecomposition:
    """Core numbers for every vertex plus the densest residual along the peel.

    The vertex with the smallest residual pattern degree is removed first
    (lowest index on ties). Core numbers never drop below the largest degree
    already peeled.
    """
    p = as_pattern(p)
    n = g.n
    nbrs = neighbor_sets(g)
    deg = residual_degrees(nbrs, p)
    total = sum(deg)
    if total % p.vp:
        raise AssertionError("pattern degree sum not divisible by pattern size")
    mu = total // p.vp
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    alive = [True] * n
    core = [0] * n
    order: list[int] = []
    k = 0
    remaining = mu
    best = Fraction(mu, n) if n else Fraction(0)
    best_prefix, best_count = 0, mu
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        k = max(k, d)
        core[v] = k
        if d:
            for u, dec in residual_decrements(nbrs, p, v).items():
                deg[u] -= dec
                heapq.heappush(heap, (deg[u], u))
        remaining -= d
        alive[v] = False
        for u in nbrs[v]:
            nbrs[u].discard(v)
        nbrs[v] = set()
        order.append(v)
        left = n - len(order)
        if left and Fraction(remaining, left) > best:
            best = Fraction(remaining, left)
            best_prefix, best_count = len(order), remaining
    return CoreDecomposition(core, max(core, default=0), order, best, best_prefix, best_count, mu)


def extract_core(d: CoreDecomposition, k: int) -> list[int]:
    """Vertices with core number at least ``k``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return [v for v, c in enumerate(d.core) if c >= k]


def peel_to_threshold(g: Graph, p: Pattern, k: int, vertices=None) -> list[int]:
    """Repeatedly delete vertices whose pattern degree is below ``k``."""
    if vertices is not None:
        sub, back = induced_subgraph(g, vertices)
    else:
        sub, back = g, list(range(g.n))
    nbrs = neighbor_sets(sub)
    deg = residual_degrees(nbrs, p)
    alive = [True] * sub.n
    stack = [v for v in range(sub.n) if deg[v] < k]
    queued = set(stack)
    while stack:
        v = stack.pop()
        for u, dec in residual_decrements(nbrs, p, v).items():
            deg[u] -= dec
            if deg[u] < k and u not in queued:
                queued.add(u)
                stack.append(u)
        alive[v] = False
        for u in nbrs[v]:
            nbrs[u].discard(v)
        nbrs[v] = set()
    return [back[v] for v in range(sub.n) if alive[v]]


def verify_core(g: Graph, p: Pattern | int | str, s, k: int) -> bool:
    """True iff ``s`` is exactly the (k, p)-core of ``g``."""
    p = as_pattern(p)
    s = sorted(set(s))
    if s:
        sub, _ = induced_subgraph(g, s)
        if min(residual_degrees(neighbor_sets(sub), p)) < k:
            return False
    return peel_to_threshold(g, p, k) == s


def density_of(g: Graph, p: Pattern, vertices) -> Fraction:
    vs = sorted(set(vertices))
    if not vs:
        return Fraction(0)
    sub, _ = induced_subgraph(g, vs)
    return Fraction(count_instances(sub, p), len(vs))
