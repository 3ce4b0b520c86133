"""Finite graphs with optional self-loops, on 1-based vertex labels.

A :class:`Graph` is simple apart from loops: no multi-edges, at most one loop
per vertex.  Edges are stored as sorted pairs ``(i, j)`` with ``i < j``; loops
are stored separately as a sorted tuple of vertex labels.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Graph",
    "make_graph",
    "complement",
    "adjacency_matrix",
    "longest_trail",
    "graph_to_json",
    "graph_from_json",
    "builtin_graph",
    "builtin_names",
]


# ---------------------------------------------------------------------------
# data type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    """Immutable graph; build via :func:`make_graph` to get validation."""

    n: int
    edges: tuple[tuple[int, int], ...]
    loops: tuple[int, ...]

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return i in self.loops
        return (min(i, j), max(i, j)) in self._edge_set

    @property
    def _edge_set(self) -> frozenset[tuple[int, int]]:
        # cached on first use; object.__setattr__ because the dataclass is frozen
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached


def make_graph(n: int,
               edges: Iterable[Sequence[int]] = (),
               loops: Iterable[int] = ()) -> Graph:
    """Validate and normalise the input into a :class:`Graph`.

    Duplicate edges and duplicate loops are silently collapsed.  A pair
    ``(i, i)`` in `edges` is rejected: loops must be passed via `loops`.
    """
    if n < 0:
        raise ValueError(f"vertex count must be >= 0, got {n}")
    norm: set[tuple[int, int]] = set()
    for e in edges:
        i, j = e
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"edge {tuple(e)} out of range for n={n}")
        if i == j:
            raise ValueError(f"edge {tuple(e)} is a loop; pass it via loops=")
        norm.add((min(i, j), max(i, j)))
    loop_set = set()
    for v in loops:
        if not (1 <= v <= n):
            raise ValueError(f"loop vertex {v} out of range for n={n}")
        loop_set.add(v)
    return Graph(n, tuple(sorted(norm)), tuple(sorted(loop_set)))


# ---------------------------------------------------------------------------
# basic operations
# ---------------------------------------------------------------------------

def complement(g: Graph) -> Graph:
    """Complement on non-loop edges; loops are carried over unchanged."""
    present = set(g.edges)
    edges = [(i, j)
             for i, j in itertools.combinations(range(1, g.n + 1), 2)
             if (i, j) not in present]
    return Graph(g.n, tuple(edges), g.loops)


def adjacency_matrix(g: Graph) -> np.ndarray:
    """0/1 matrix of shape (n, n); diagonal entry 1 exactly at loop vertices."""
    a = np.zeros((g.n, g.n), dtype=np.int64)
    for i, j in g.edges:
        a[i - 1, j - 1] = 1
        a[j - 1, i - 1] = 1
    for v in g.loops:
        a[v - 1, v - 1] = 1
    return a


def longest_trail(g: Graph) -> int:
    """Length of the longest walk that repeats no edge (a loop counts once).

    The trail may start and end anywhere and may revisit vertices.  The search
    is exponential in the edge count and intended for small graphs.
    """
    items = list(g.edges) + [(v, v) for v in g.loops]
    m = len(items)
    if m == 0:
        return 0
    adj: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for idx, (u, v) in enumerate(items):
        adj[u].append((idx, v))
        if u != v:
            adj[v].append((idx, u))

    def reachable_edges(v: int, used: int) -> int:
        seen = {v}
        stack = [v]
        found = 0
        counted = 0
        while stack:
            x = stack.pop()
            for idx, y in adj[x]:
                if not (used >> idx) & 1 and not (counted >> idx) & 1:
                    counted |= 1 << idx
                    found += 1
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return found

    best = 0

    def dfs(v: int, used: int, length: int) -> None:
        nonlocal best
        if length > best:
            best = length
        if best == m or length + reachable_edges(v, used) <= best:
            return
        for idx, y in adj[v]:
            if not (used >> idx) & 1:
                dfs(y, used | (1 << idx), length + 1)

    for start in sorted(adj):
        if best == m:
            break
        dfs(start, 0, 0)
    return best


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    return {
        "n": g.n,
        "edges": [[i, j] for i, j in g.edges],
        "loops": list(g.loops),
    }


def graph_from_json(data: Mapping) -> Graph:
    try:
        n = data["n"]
        edges = data.get("edges", [])
        loops = data.get("loops", [])
    except (TypeError, AttributeError, KeyError) as exc:
        raise ValueError(f"not a graph object: {data!r}") from exc
    if not isinstance(n, int):
        raise ValueError(f"graph field 'n' must be an int, got {n!r}")
    return make_graph(n, edges, loops)


# ---------------------------------------------------------------------------
# built-in graphs
# ---------------------------------------------------------------------------

def _build_catalog() -> dict[str, Graph]:
    cat: dict[str, Graph] = {}
    for n in range(1, 6):
        cat[f"K{n}"] = make_graph(n, itertools.combinations(range(1, n + 1), 2))
        cat[f"Kbar{n}"] = make_graph(n)
    cat["2K2_A"] = make_graph(4, [(1, 2), (3, 4)])
    cat["2K2_B"] = make_graph(4, [(1, 3), (2, 4)])
    cat["2K2_C"] = make_graph(4, [(1, 4), (2, 3)])
    # each C4_<x> is the complement of the matching 2K2_<x>
    for tag in "ABC":
        cat[f"C4_{tag}"] = complement(cat[f"2K2_{tag}"])
    cat["C5"] = make_graph(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    # a single edge plus one isolated vertex; three labellings
    cat["S2_A"] = make_graph(3, [(1, 2)])
    cat["S2_B"] = make_graph(3, [(1, 3)])
    cat["S2_C"] = make_graph(3, [(2, 3)])
    cat["loop3"] = make_graph(3, [(1, 2)], loops=[3])
    return cat


_CATALOG = _build_catalog()
_CATALOG_LOWER = {name.lower(): g for name, g in _CATALOG.items()}


def builtin_names() -> list[str]:
    return sorted(_CATALOG)


def builtin_graph(name: str) -> Graph:
    """Look up a built-in graph by (case-insensitive) name."""
    try:
        return _CATALOG_LOWER[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown builtin graph {name!r}; known: {', '.join(builtin_names())}"
        ) from None
