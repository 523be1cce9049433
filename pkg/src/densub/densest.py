"""Densest-subgraph solvers: flow-based exact search and core-based approximations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .coredecomp import decompose, extract_core
from .flownet import (
    FlowNetwork,
    build_clique_network,
    build_edge_network,
    build_grouped_network,
    build_pattern_network,
    clique_instances,
    clique_units,
    min_cut,
    prune_instance_nodes,
)
from .graph import Graph, classic_core_numbers, connected_components, induced_subgraph
from .pattern import (
    Pattern,
    as_pattern,
    count_instances,
    enumerate_pattern_instances,
    gamma_upper_bound,
    group_instances,
    neighbor_sets,
    residual_decrements,
    residual_degrees,
)


@dataclass(frozen=True, eq=False)
class Density:
    instance_count: int
    vertex_count: int

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")

    @property
    def value(self) -> Fraction:
        return Fraction(self.instance_count, self.vertex_count)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Density):
            return NotImplemented
        return self.instance_count * other.vertex_count == other.instance_count * self.vertex_count

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other: "Density") -> bool:
        return self.instance_count * other.vertex_count < other.instance_count * self.vertex_count

    def __le__(self, other: "Density") -> bool:
        return not other < self

    def __float__(self) -> float:
        return self.instance_count / self.vertex_count


ZERO = Density(0, 1)


@dataclass
class DsResult:
    vertices: tuple[int, ...]
    density: Density
    algorithm: str
    pattern: str
    stats: dict = field(default_factory=dict)

    def labels(self, g: Graph) -> list[str]:
        return [g.labels[v] for v in self.vertices]


def measure(g: Graph, p: Pattern, vertices) -> Density:
    """Density of the subgraph induced by ``vertices``, by fresh counting."""
    vs = sorted(set(vertices))
    if not vs:
        return ZERO
    sub, _ = induced_subgraph(g, vs)
    return Density(count_instances(sub, p), len(vs))


def _result(g, p, vertices, algo, stats, t0) -> DsResult:
    vs = tuple(sorted(vertices)) if vertices else ()
    dens = measure(g, p, vs)
    if dens.instance_count == 0:
        vs, dens = (), ZERO
    stats["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
    return DsResult(vs, dens, algo, p.name or "custom", stats)


def search_budget(u0: Fraction, l0: Fraction, n: int) -> int:
    """Upper bound on halving steps before the gap drops below 1/(n(n-1))."""
    span = (u0 - l0) * n * (n - 1)
    if span <= 0:
        return 0
    return math.ceil(math.log2(span)) + 1


class Feasibility:
    """Builds flow networks on a vertex subset and answers whether some
    subgraph there is strictly denser than a guess."""

    def __init__(self, g: Graph, p: Pattern, style: str, prune: bool = False,
                 hook: Callable[[FlowNetwork], None] | None = None):
        self.g, self.p, self.style, self.prune, self.hook = g, p, style, prune, hook
        self.vertices: list[int] = []

    def restrict(self, vertices) -> None:
        self.vertices = sorted(vertices)
        self.sub, self.back = induced_subgraph(self.g, self.vertices)
        p, sub = self.p, self.sub
        if self.style == "edge":
            return
        if self.style == "clique" and not self.prune:
            self.degrees = residual_degrees(neighbor_sets(sub), p)
            self.units = clique_units(sub, p.vp)
        elif self.style == "grouped":
            self.groups = group_instances(enumerate_pattern_instances(sub, p))
        else:
            insts = clique_instances(sub, p.vp) if p.is_clique else list(enumerate_pattern_instances(sub, p))
            if self.prune and p.is_clique and p.vp >= 3:
                insts, self.degrees = prune_instance_nodes(sub, p.vp, insts)
            else:
                self.degrees = None
            self.instances = insts

    def network(self, alpha: Fraction) -> FlowNetwork:
        if self.style == "edge":
            return build_edge_network(self.sub, alpha)
        if self.style == "clique" and not self.prune:
            return build_clique_network(self.sub, self.p.vp, self.degrees, alpha, self.units)
        if self.style == "grouped":
            return build_grouped_network(self.sub, self.p, self.groups, alpha)
        return build_pattern_network(self.sub, self.p, self.instances, alpha, self.degrees)

    def denser_than(self, alpha: Fraction) -> tuple[list[int], int]:
        """Source side (as vertices of the full graph) of the canonical min
        cut at ``alpha``, and the network's node count."""
        net = self.network(alpha)
        if self.hook:
            self.hook(net)
        cut = min_cut(net)
        return [self.back[v] for v in cut.vertices()], net.num_nodes


def _style(p: Pattern, kind: str) -> str:
    if kind == "cds":
        return "edge" if p.vp == 2 else "clique"
    return "grouped" if kind == "grouped" else "pattern"


def _check_clique(p: Pattern) -> None:
    if not p.is_clique:
        raise ValueError(f"pattern {p.name!r} is not a clique; use the pattern solvers")


def _exact(g: Graph, p: Pattern, style: str, algo: str, prune: bool, hook) -> DsResult:
    t0 = time.perf_counter()
    deg = residual_degrees(neighbor_sets(g), p)
    stats: dict = {"iterations": 0, "network_nodes": [], "trace": []}
    if not any(deg) or g.n < 2:
        stats["no_instances"] = True
        return _result(g, p, (), algo, stats, t0)
    test = Feasibility(g, p, style, prune, hook)
    test.restrict(range(g.n))
    n = g.n
    lo, hi = Fraction(0), Fraction(max(deg))
    stats["budget"] = search_budget(hi, lo, n)
    gap = Fraction(1, n * (n - 1))
    best: list[int] = []
    while hi - lo >= gap:
        alpha = (lo + hi) / 2
        side, nodes = test.denser_than(alpha)
        stats["iterations"] += 1
        stats["network_nodes"].append(nodes)
        if side:
            lo, best = alpha, side
        else:
            hi = alpha
        stats["trace"].append((lo, hi))
    return _result(g, p, best, algo, stats, t0)


def exact_cds(g: Graph, h: Pattern | int | str, prune: bool = False, hook=None) -> DsResult:
    """Binary search over flow networks on the whole graph."""
    p = as_pattern(h)
    _check_clique(p)
    return _exact(g, p, _style(p, "cds"), "exact", prune, hook)


def exact_pds(g: Graph, p: Pattern | int | str, hook=None) -> DsResult:
    """Binary search with one network node per pattern instance."""
    p = as_pattern(p)
    return _exact(g, p, "pattern", "pds-exact", False, hook)


def _core_exact(g: Graph, p: Pattern, style: str, algo: str, prune: bool, hook,
                shrink: str = "alpha") -> DsResult:
    t0 = time.perf_counter()
    dec = decompose(g, p)
    stats: dict = {"iterations": 0, "components": [], "k_max": dec.k_max, "rho_prime": dec.rho_prime}
    if dec.instance_count == 0:
        stats["no_instances"] = True
        return _result(g, p, (), algo, stats, t0)

    # locate the densest subgraph in a core: residual densities first, then
    # the densest component of that core
    best_set = dec.best_residual()
    best = Fraction(dec.best_count, len(best_set))
    k1 = math.ceil(dec.rho_prime)
    comps = connected_components(g, extract_core(dec, k1))
    rho2 = Fraction(0)
    for comp in comps:
        d = measure(g, p, comp).value
        if d > rho2:
            rho2 = d
        if d > best:
            best, best_set = d, comp
    k2 = k1
    if math.ceil(rho2) > k1:
        k2 = math.ceil(rho2)
        comps = connected_components(g, extract_core(dec, k2))
    located = extract_core(dec, k2)
    stats.update(rho_second=rho2, located_k=k2, located_size=len(located), n=g.n)

    lo = max(dec.rho_prime, rho2)
    top = Fraction(dec.k_max)
    test = Feasibility(g, p, style, prune, hook)
    for comp in comps:
        cur_k = k2
        if math.ceil(lo) > cur_k:
            cur_k = math.ceil(lo)
            keep = set(extract_core(dec, cur_k))
            comp = [v for v in comp if v in keep]
        if len(comp) < p.vp:
            continue
        info = {"size": len(comp), "l0": lo, "u0": top, "iterations": 0,
                "network_nodes": [], "trace": []}
        info["budget"] = search_budget(top, lo, len(comp))
        stats["components"].append(info)
        test.restrict(comp)
        side, nodes = test.denser_than(lo)
        info["network_nodes"].append(nodes)
        if not side:
            continue
        found = side
        hi = top
        while len(comp) > 1 and hi - lo >= Fraction(1, len(comp) * (len(comp) - 1)):
            alpha = (lo + hi) / 2
            side, nodes = test.denser_than(alpha)
            info["iterations"] += 1
            info["network_nodes"].append(nodes)
            if not side:
                hi = alpha
            else:
                target = math.ceil(alpha) if shrink == "alpha" else math.ceil(lo)
                if alpha > math.ceil(lo) and target > cur_k:
                    # anything denser than alpha lies in the ceil(alpha)-core
                    cur_k = target
                    keep = set(extract_core(dec, cur_k))
                    comp = [v for v in comp if v in keep]
                    test.restrict(comp)
                lo, found = alpha, side
            info["trace"].append((lo, hi))
        stats["iterations"] += info["iterations"]
        d = measure(g, p, found).value
        if d > best:
            best, best_set = d, found
    return _result(g, p, best_set, algo, stats, t0)


def core_exact_cds(g: Graph, h: Pattern | int | str, prune: bool = False, hook=None,
                   shrink: str = "alpha") -> DsResult:
    """Exact clique-densest subgraph searched inside a located core."""
    p = as_pattern(h)
    _check_clique(p)
    return _core_exact(g, p, _style(p, "cds"), "core-exact", prune, hook, shrink)


def core_exact_pds(g: Graph, p: Pattern | int | str, hook=None, shrink: str = "alpha") -> DsResult:
    """Exact pattern-densest subgraph using grouped instance networks."""
    p = as_pattern(p)
    return _core_exact(g, p, "grouped", "pds-core-exact", False, hook, shrink)


def peel_approx(g: Graph, p: Pattern | int | str) -> DsResult:
    """Densest residual graph met while peeling minimum-degree vertices."""
    p = as_pattern(p)
    t0 = time.perf_counter()
    dec = decompose(g, p)
    vs = dec.best_residual() if dec.best_count else ()
    return _result(g, p, vs, "peel", {"peel_length": len(dec.peel_order), "k_max": dec.k_max}, t0)


def inc_approx(g: Graph, p: Pattern | int | str) -> DsResult:
    """The (k_max, p)-core from a full decomposition."""
    p = as_pattern(p)
    t0 = time.perf_counter()
    dec = decompose(g, p)
    vs = extract_core(dec, dec.k_max) if dec.k_max else ()
    return _result(g, p, vs, "inc", {"k_max": dec.k_max, "peel_length": len(dec.peel_order)}, t0)


INITIAL_WINDOW = 64


def pattern_upper_bounds(g: Graph, p: Pattern) -> list[int]:
    """Per-vertex upper bounds on the pattern-core number."""
    if p.is_clique:
        return gamma_upper_bound(g, p.vp, classic_core_numbers(g))
    return residual_degrees(neighbor_sets(g), p)


def _top_core(g: Graph, p: Pattern, window: list[int], k_best: int):
    """Peel G[window] at rising thresholds from max(min degree, k_best);
    return the highest threshold with a nonempty core and that core."""
    sub, back = induced_subgraph(g, window)
    nbrs = neighbor_sets(sub)
    deg = residual_degrees(nbrs, p)
    alive = set(range(sub.n))
    k = max(min(deg), k_best, 1)
    k_hi = max(deg)
    found_k, found = 0, []
    while k <= k_hi and alive:
        stack = [v for v in alive if deg[v] < k]
        queued = set(stack)
        while stack:
            v = stack.pop()
            for u, dec in residual_decrements(nbrs, p, v).items():
                deg[u] -= dec
                if deg[u] < k and u not in queued:
                    queued.add(u)
                    stack.append(u)
            alive.discard(v)
            for u in nbrs[v]:
                nbrs[u].discard(v)
            nbrs[v] = set()
        if alive:
            found_k, found = k, sorted(back[v] for v in alive)
            k += 1
    return found_k, found


def core_approx(g: Graph, p: Pattern | int | str, initial_window: int = INITIAL_WINDOW) -> DsResult:
    """The (k_max, p)-core found top-down over doubling windows of vertices
    ranked by an upper bound on their core number."""
    p = as_pattern(p)
    t0 = time.perf_counter()
    n = g.n
    stats: dict = {"windows": [], "k_max": 0}
    if n == 0:
        return _result(g, p, (), "core-app", stats, t0)
    gamma = pattern_upper_bounds(g, p)
    order = sorted(range(n), key=lambda v: (-gamma[v], v))
    k_max, best = 0, []
    w = min(n, max(1, initial_window))
    while True:
        window = order[:w]
        k, core = _top_core(g, p, window, k_max)
        if core and k >= k_max:
            k_max, best = k, core
        stats["windows"].append(w)
        if w == n or gamma[order[w]] < k_max:
            break
        w = min(n, 2 * w)
    stats["k_max"] = k_max
    return _result(g, p, best, "core-app", stats, t0)


ALGORITHMS = {
    "exact": exact_cds,
    "core-exact": core_exact_cds,
    "pds-exact": exact_pds,
    "pds-core-exact": core_exact_pds,
    "peel": peel_approx,
    "inc": inc_approx,
    "core-app": core_approx,
}

CLIQUE_ONLY = {"exact", "core-exact"}


def solve(g: Graph, p: Pattern | int | str, algorithm: str, **kwargs) -> DsResult:
    p = as_pattern(p)
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm in CLIQUE_ONLY:
        _check_clique(p)
    return ALGORITHMS[algorithm](g, p, **kwargs)
