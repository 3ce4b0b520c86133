"""Bilabelled graphs: a graph together with an in-tuple and an out-tuple.

A ``(k, l)``-bilabelled graph carries ``k`` input labels and ``l`` output
labels, each naming a (not necessarily distinct) vertex.  These are the
diagrams whose homomorphism matrices are assembled elsewhere; this module
provides the diagram calculus itself: composition, tensor product,
involution, pruning of label-free components, flattening, and a canonical
key for isomorphism-up-to-labels testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph_core import Graph, graph_from_json, graph_to_json, make_graph
from .policy import CANON_MAX_VERTICES, PolicyBoundError

__all__ = [
    "BLG",
    "make_blg",
    "relabel",
    "canonical_form",
    "compose",
    "tensor",
    "involution",
    "prune_free_components",
    "frobenius_flatten",
    "frobenius_unflatten",
    "blg_to_json",
    "blg_from_json",
]


@dataclass(frozen=True)
class BLG:
    """Immutable bilabelled graph; build via :func:`make_blg` for validation."""

    graph: Graph
    in_tuple: tuple[int, ...]
    out_tuple: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.in_tuple)

    @property
    def l(self) -> int:
        return len(self.out_tuple)


def make_blg(graph: Graph,
             in_tuple: Sequence[int],
             out_tuple: Sequence[int]) -> BLG:
    for label, name in ((in_tuple, "in"), (out_tuple, "out")):
        for v in label:
            if not (1 <= v <= graph.n):
                raise ValueError(
                    f"{name}-tuple entry {v} out of range for n={graph.n}")
    return BLG(graph, tuple(in_tuple), tuple(out_tuple))


def relabel(h: BLG, perm: Sequence[int]) -> BLG:
    """Rename vertices by an image tuple perm (old label i -> perm[i-1])."""
    g = h.graph
    if sorted(perm) != list(range(1, g.n + 1)):
        raise ValueError(f"{perm} is not a permutation of [{g.n}]")
    edges = [(perm[i - 1], perm[j - 1]) for i, j in g.edges]
    loops = [perm[v - 1] for v in g.loops]
    return BLG(make_graph(g.n, edges, loops),
               tuple(perm[v - 1] for v in h.in_tuple),
               tuple(perm[v - 1] for v in h.out_tuple))


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _recode(raw: dict[int, object]) -> dict[int, int]:
    order = {key: i for i, key in enumerate(sorted(set(raw.values())))}
    return {v: order[key] for v, key in raw.items()}


def _refine(colors: dict[int, int], nbrs: dict[int, list[int]]) -> dict[int, int]:
    while True:
        raw = {v: (colors[v], tuple(sorted(colors[u] for u in nbrs[v])))
               for v in colors}
        new = _recode(raw)
        if len(set(new.values())) == len(set(colors.values())):
            return new
        colors = new


def _encode(h: BLG, old_to_new: dict[int, int]) -> tuple:
    g = h.graph
    edges = sorted((min(old_to_new[i], old_to_new[j]),
                    max(old_to_new[i], old_to_new[j])) for i, j in g.edges)
    loops = sorted(old_to_new[v] for v in g.loops)
    return (g.n,
            tuple(old_to_new[v] for v in h.out_tuple),
            tuple(old_to_new[v] for v in h.in_tuple),
            tuple(edges),
            tuple(loops))


def canonical_form(h: BLG, max_vertices: int | None = CANON_MAX_VERTICES) -> str:
    """Key equal for two bilabelled graphs iff they are isomorphic by a
    vertex bijection that fixes every in/out label position.

    The search minimises an encoding over refinement-respecting labellings.
    `max_vertices` bounds the graph size by policy; pass ``None`` to lift it
    (safe for diagrams whose labels pin most of the symmetry).
    """
    g = h.graph
    m = g.n
    if max_vertices is not None and m > max_vertices:
        raise PolicyBoundError(
            f"canonical labelling limited to {max_vertices} vertices by "
            f"default, got {m}; pass max_vertices=None to lift")
    if m == 0:
        return repr(_encode(h, {}))

    nbrs: dict[int, list[int]] = {v: [] for v in range(1, m + 1)}
    for i, j in g.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    nbr_sets = {v: frozenset(ns) for v, ns in nbrs.items()}
    loop_set = set(g.loops)

    start_raw = {
        v: (tuple(i for i, x in enumerate(h.out_tuple) if x == v),
            tuple(i for i, x in enumerate(h.in_tuple) if x == v),
            v in loop_set,
            len(nbrs[v]))
        for v in range(1, m + 1)
    }

    best: tuple | None = None

    def swappable(u: int, v: int) -> bool:
        # True when transposing u and v is an automorphism fixing the labels;
        # u and v come from one refinement cell, so loops and label positions
        # already agree and only the neighbourhoods need checking.
        return nbr_sets[u] - {v} == nbr_sets[v] - {u}

    def search(colors: dict[int, int]) -> None:
        nonlocal best
        colors = _refine(colors, nbrs)
        cells: dict[int, list[int]] = {}
        for v in sorted(colors):
            cells.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            mapping = {v: c + 1 for v, c in colors.items()}
            enc = _encode(h, mapping)
            if best is None or enc < best:
                best = enc
            return
        branch: list[int] = []
        for v in target:
            if not any(swappable(v, u) for u in branch):
                branch.append(v)
        for v in branch:
            child = {u: (c, 0) if u != v else (c, -1)
                     for u, c in colors.items()}
            search(_recode(child))

    search(_recode(start_raw))
    assert best is not None
    return repr(best)


# ---------------------------------------------------------------------------
# diagram calculus
# ---------------------------------------------------------------------------

def compose(h2: BLG, h1: BLG) -> BLG:
    """Glue the out-labels of h1 onto the in-labels of h2.

    The matching label pairs are identified, parallel edges collapse, and an
    edge whose endpoints merge becomes a loop.  Requires ``h2.k == h1.l``.
    """
    if h2.k != h1.l:
        raise ValueError(
            f"arity mismatch: h2 expects {h2.k} inputs, h1 gives {h1.l} outputs")
    n1, n2 = h1.graph.n, h2.graph.n
    total = n1 + n2
    parent = list(range(total + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in zip(h1.out_tuple, h2.in_tuple):
        ra, rb = find(a), find(b + n1)
        if ra != rb:
            parent[ra] = rb

    roots = sorted({find(v) for v in range(1, total + 1)})
    min_member = {r: total + 1 for r in roots}
    for v in range(1, total + 1):
        r = find(v)
        min_member[r] = min(min_member[r], v)
    new_label = {r: i + 1
                 for i, r in enumerate(sorted(roots, key=lambda r: min_member[r]))}

    def image(v: int) -> int:
        return new_label[find(v)]

    edges: set[tuple[int, int]] = set()
    loops: set[int] = set()
    for i, j in h1.graph.edges:
        a, b = image(i), image(j)
        if a == b:
            loops.add(a)
        else:
            edges.add((min(a, b), max(a, b)))
    for i, j in h2.graph.edges:
        a, b = image(i + n1), image(j + n1)
        if a == b:
            loops.add(a)
        else:
            edges.add((min(a, b), max(a, b)))
    for v in h1.graph.loops:
        loops.add(image(v))
    for v in h2.graph.loops:
        loops.add(image(v + n1))

    g = make_graph(len(roots), sorted(edges), sorted(loops))
    return BLG(g,
               tuple(image(v) for v in h1.in_tuple),
               tuple(image(v + n1) for v in h2.out_tuple))


def tensor(h1: BLG, h2: BLG) -> BLG:
    """Disjoint union, with h1's labels preceding h2's."""
    n1 = h1.graph.n
    g2 = h2.graph
    edges = list(h1.graph.edges) + [(i + n1, j + n1) for i, j in g2.edges]
    loops = list(h1.graph.loops) + [v + n1 for v in g2.loops]
    g = make_graph(n1 + g2.n, edges, loops)
    return BLG(g,
               h1.in_tuple + tuple(v + n1 for v in h2.in_tuple),
               h1.out_tuple + tuple(v + n1 for v in h2.out_tuple))


def involution(h: BLG) -> BLG:
    """Swap the in- and out-tuples; the graph is untouched."""
    return BLG(h.graph, h.out_tuple, h.in_tuple)


def prune_free_components(h: BLG) -> tuple[BLG, Graph]:
    """Split off connected components that carry no label.

    Returns ``(pruned, removed)`` where `removed` is the disjoint union of the
    label-free components as a plain graph (empty graph when nothing was
    removed).  Homomorphism matrices factor: the matrix of `h` equals the
    matrix of `pruned` scaled by the homomorphism count of `removed`.
    """
    g = h.graph
    parent = list(range(g.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    labelled_roots = {find(v) for v in h.in_tuple + h.out_tuple}
    keep = [v for v in range(1, g.n + 1) if find(v) in labelled_roots]
    drop = [v for v in range(1, g.n + 1) if find(v) not in labelled_roots]

    keep_map = {v: i + 1 for i, v in enumerate(keep)}
    drop_map = {v: i + 1 for i, v in enumerate(drop)}

    kept_graph = make_graph(
        len(keep),
        [(keep_map[i], keep_map[j]) for i, j in g.edges if i in keep_map],
        [keep_map[v] for v in g.loops if v in keep_map])
    removed_graph = make_graph(
        len(drop),
        [(drop_map[i], drop_map[j]) for i, j in g.edges if i in drop_map],
        [drop_map[v] for v in g.loops if v in drop_map])

    pruned = BLG(kept_graph,
                 tuple(keep_map[v] for v in h.in_tuple),
                 tuple(keep_map[v] for v in h.out_tuple))
    return pruned, removed_graph


def frobenius_flatten(h: BLG) -> BLG:
    """Move every label to the input side: out ++ in becomes the new in-tuple."""
    return BLG(h.graph, h.out_tuple + h.in_tuple, ())


def frobenius_unflatten(h: BLG, k: int, l: int) -> BLG:
    """Split the in-tuple of a label-flattened graph back into out and in parts.

    Requires `h` to have no out-labels and exactly ``k + l`` in-labels; the
    first `l` become the out-tuple, the last `k` stay as the in-tuple.
    """
    if h.out_tuple:
        raise ValueError("expected a flattened graph with an empty out-tuple")
    if h.k != k + l:
        raise ValueError(f"expected {k + l} in-labels, got {h.k}")
    return BLG(h.graph, h.in_tuple[l:], h.in_tuple[:l])


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def blg_to_json(h: BLG) -> dict:
    return {
        "graph": graph_to_json(h.graph),
        "in": list(h.in_tuple),
        "out": list(h.out_tuple),
    }


def blg_from_json(data: Mapping) -> BLG:
    try:
        graph = graph_from_json(data["graph"])
        in_tuple = data["in"]
        out_tuple = data["out"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"not a bilabelled-graph object: {data!r}") from exc
    return make_blg(graph, in_tuple, out_tuple)
