"""Immutable simple undirected graphs with sorted adjacency lists."""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class GraphParseError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class LoadStats:
    lines: int = 0
    self_loops: int = 0
    duplicates: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is a strictly ascending tuple of neighbours. ``labels[v]`` is
    the original textual id of internal vertex ``v``.
    """

    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    m: int
    stats: LoadStats = field(default_factory=LoadStats, compare=False)

    @property
    def n(self) -> int:
        return len(self.adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adj[u]
        i = bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def label_of(self, v: int) -> str:
        return self.labels[v]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
        stats: LoadStats | None = None,
    ) -> "Graph":
        """Build a graph from integer edges; loops and repeats are dropped."""
        nbr_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                continue
            nbr_sets[u].add(v)
            nbr_sets[v].add(u)
        adj = tuple(tuple(sorted(s)) for s in nbr_sets)
        m = sum(len(a) for a in adj) // 2
        if labels is None:
            labels = [str(i) for i in range(n)]
        if len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        return cls(adj, tuple(labels), m, stats or LoadStats())


def load_edge_list(text: str | TextIO | Iterable[str]) -> Graph:
    """Parse whitespace-separated ``u v`` lines into a :class:`Graph`.

    Lines starting with ``#`` or ``%`` and blank lines are skipped. Vertex ids
    are arbitrary tokens, numbered internally by first appearance.
    """
    if isinstance(text, str):
        lines: Iterable[str] = text.splitlines()
    else:
        lines = text
    index: dict[str, int] = {}
    labels: list[str] = []
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    loops = dups = count = 0

    def intern(tok: str) -> int:
        i = index.get(tok)
        if i is None:
            i = index[tok] = len(labels)
            labels.append(tok)
        return i

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        toks = line.split()
        if len(toks) != 2:
            raise GraphParseError(lineno, f"expected 2 tokens, got {len(toks)}")
        count += 1
        u, v = intern(toks[0]), intern(toks[1])
        if u == v:
            loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            dups += 1
            continue
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(len(labels), edges, labels, LoadStats(count, loops, dups))


def write_edge_list(g: Graph, use_labels: bool = True) -> str:
    """Serialize as one ``u v`` line per edge, ordered by internal index."""
    name = g.label_of if use_labels else str
    return "".join(f"{name(u)} {name(v)}\n" for u, v in g.edges())


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Return ``(G[S], back)`` where ``back[i]`` is the index in ``g`` of new vertex ``i``."""
    back = sorted(set(vertices))
    if not back:
        raise ValueError("induced subgraph of an empty vertex set")
    if back[0] < 0 or back[-1] >= g.n:
        raise ValueError("vertex index out of range")
    fwd = {v: i for i, v in enumerate(back)}
    adj = tuple(
        tuple(fwd[u] for u in g.adj[v] if u in fwd) for v in back
    )
    m = sum(len(a) for a in adj) // 2
    labels = tuple(g.labels[v] for v in back)
    return Graph(adj, labels, m), back


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[list[int]]:
    """Components as ascending vertex lists, ordered by smallest member.

    With ``within``, components of the subgraph induced by that vertex set.
    """
    if within is None:
        allowed = None
        order: Iterable[int] = range(g.n)
    else:
        allowed = set(within)
        order = sorted(allowed)
    seen: set[int] = set()
    comps = []
    for root in order:
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in g.adj[v]:
                if u not in seen and (allowed is None or u in allowed):
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        comps.append(sorted(comp))
    return comps


def classic_core_numbers(g: Graph) -> list[int]:
    """Classical k-core numbers by bucket peeling (Batagelj-Zaversnik)."""
    n = g.n
    deg = [len(a) for a in g.adj]
    if n == 0:
        return []
    maxd = max(deg)
    bins = [0] * (maxd + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(maxd + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(maxd, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    for i in range(n):
        v = vert[i]
        for u in g.adj[v]:
            if deg[u] > deg[v]:
                du, pu = deg[u], pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] -= 1
    return deg
