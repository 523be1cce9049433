"""Exhaustive ground truth for instance counts and densest subgraphs on tiny graphs.

Nothing here reuses the pattern enumerator: instances are found by testing
every vertex subset of pattern size against every relabelling of the
pattern's edge set.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

import numpy as np

from .densest import Density, DsResult, ZERO
from .graph import Graph
from .pattern import Pattern, as_pattern


class OracleRefused(ValueError):
    """Graph too large for exhaustive search."""


@dataclass(frozen=True)
class OracleLimit:
    max_n: int = 20


def _templates(p: Pattern) -> set[frozenset]:
    """Distinct edge sets over positions 0..vp-1 that are copies of ``p``."""
    out = set()
    for perm in permutations(range(p.vp)):
        out.add(frozenset(tuple(sorted((perm[a], perm[b]))) for a, b in p.edges))
    return out


def subset_counts(g: Graph, p: Pattern | int | str) -> dict[tuple[int, ...], int]:
    """Instances whose vertex set is exactly ``S``, for every ``S`` with at least one."""
    p = as_pattern(p)
    temps = _templates(p)
    out = {}
    for s in combinations(range(g.n), p.vp):
        present = {(i, j) for i, j in combinations(range(p.vp), 2) if g.has_edge(s[i], s[j])}
        if len(present) < len(p.edges):
            continue
        c = sum(1 for t in temps if t <= present)
        if c:
            out[s] = c
    return out


def brute_force_count(g: Graph, p: Pattern | int | str) -> int:
    return sum(subset_counts(g, p).values())


def _subset_sums(n: int, counts: dict[tuple[int, ...], int]) -> np.ndarray:
    f = np.zeros(1 << n, dtype=np.int64)
    for s, c in counts.items():
        f[sum(1 << v for v in s)] += c
    # zeta transform: f[Y] = sum over S subset of Y
    for i in range(n):
        view = f.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return f


def instance_counts_by_mask(g: Graph, p: Pattern | int | str, limit: OracleLimit = OracleLimit()) -> np.ndarray:
    """mu(G[Y]) for every vertex mask Y (bit v set iff v in Y)."""
    if g.n > limit.max_n:
        raise OracleRefused(f"n = {g.n} exceeds oracle cap {limit.max_n}")
    return _subset_sums(g.n, subset_counts(g, p))


def brute_force_densest(g: Graph, p: Pattern | int | str, limit: OracleLimit = OracleLimit()) -> DsResult:
    """Maximize mu(G[Y]) / |Y| over every nonempty Y. Ties go to the smaller
    set, then the lexicographically smaller sorted vertex list."""
    p = as_pattern(p)
    if g.n > limit.max_n:
        raise OracleRefused(f"n = {g.n} exceeds oracle cap {limit.max_n}")
    t0 = time.perf_counter()
    n = g.n
    name = p.name or "custom"
    if n == 0:
        return DsResult((), ZERO, "oracle", name, {"elapsed_ms": 0.0})
    f = _subset_sums(n, subset_counts(g, p))
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pop += (masks >> i) & 1
    best, best_k = Fraction(0), 0
    top = {}
    for k in range(1, n + 1):
        top[k] = int(f[pop == k].max())
        if Fraction(top[k], k) > best:
            best, best_k = Fraction(top[k], k), k
    stats = {"subsets": 1 << n}
    if best_k == 0:
        stats["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
        return DsResult((), ZERO, "oracle", name, stats)
    hits = np.nonzero((pop == best_k) & (f == top[best_k]))[0]
    sets = [tuple(v for v in range(n) if (int(m) >> v) & 1) for m in hits]
    stats["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
    return DsResult(min(sets), Density(top[best_k], best_k), "oracle", name, stats)
