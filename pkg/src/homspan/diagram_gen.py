"""Systematic generation of candidate diagrams for a spanning-set build.

Given a target graph with longest trail length ``m`` and a label count
``q = k + l``, the generator emits bilabelled graphs in five blocks:

1. one edgeless seed per set partition of the label positions, blocks of the
   partition becoming vertices;
2. seeds with an internal path of length 1..2m inserted between each chosen
   pair of seed vertices;
3. seeds with a pendant path of length 1..m attached to each chosen vertex;
4. block-2 outputs with pendant paths attached to seed vertices untouched by
   the internal paths;
5. when the target graph has loops: every diagram above with loops added on
   any non-empty subset of its vertices.

The stream order is deterministic, and every diagram carries a provenance
record describing how it was produced.  Counts per block are available in
closed form, which lets a build refuse oversized jobs before generating
anything.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .bilabelled import BLG, make_blg
from .graph_core import Graph, longest_trail, make_graph
from .policy import MAX_DIAGRAMS, PolicyBoundError

__all__ = [
    "GeneratedDiagram",
    "set_partition_diagrams",
    "internal_edge_variants",
    "external_edge_variants",
    "mixed_variants",
    "loop_variants",
    "generate_diagrams",
    "diagram_counts",
]


@dataclass(frozen=True, eq=False)
class GeneratedDiagram:
    diagram: BLG
    provenance: dict


# ---------------------------------------------------------------------------
# set partitions
# ---------------------------------------------------------------------------

def _set_partitions(q: int) -> list[tuple[tuple[int, ...], ...]]:
    """All set partitions of [1..q], blocks largest-first (ties by smallest
    element), partitions ordered by block count then lexicographically."""
    parts: list[list[list[int]]] = [[]]
    for x in range(1, q + 1):
        grown: list[list[list[int]]] = []
        for p in parts:
            for i in range(len(p)):
                grown.append([b + [x] if j == i else list(b)
                              for j, b in enumerate(p)])
            grown.append([list(b) for b in p] + [[x]])
        parts = grown
    canon = []
    for p in parts:
        blocks = tuple(sorted((tuple(sorted(b)) for b in p),
                              key=lambda b: (-len(b), b[0])))
        canon.append(blocks)
    canon.sort(key=lambda blocks: (len(blocks), blocks))
    return canon


def _seed_name(i: int) -> str:
    letters = ""
    i += 1
    while i > 0:
        i, r = divmod(i - 1, 26)
        letters = chr(65 + r) + letters
    return letters + "_0"


def _pairs(c: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, c + 1), 2))


# ---------------------------------------------------------------------------
# descriptors (shared with the spanning-set builder)
# ---------------------------------------------------------------------------

class _Desc(NamedTuple):
    """Complete recipe for one diagram: seed blocks plus path/loop choices."""

    blocks: tuple[tuple[int, ...], ...]
    pair_vals: tuple[int, ...]
    pair_loops: tuple[tuple[int, ...], ...]
    pend_vals: tuple[int, ...]
    pend_loops: tuple[tuple[int, ...], ...]
    orig_loops: tuple[int, ...]


def _seed_desc(blocks: tuple[tuple[int, ...], ...]) -> _Desc:
    c = len(blocks)
    e = len(_pairs(c))
    return _Desc(blocks, (0,) * e, ((),) * e, (0,) * c, ((),) * c, (0,) * c)


def _materialize(desc: _Desc, k: int, l: int) -> BLG:
    """Build the diagram: seed vertices 1..c, then internal-path vertices in
    pair order, then pendant-path vertices in seed-vertex order."""
    blocks = desc.blocks
    c = len(blocks)
    q = k + l
    flat = [0] * q
    for bi, block in enumerate(blocks, start=1):
        for pos in block:
            flat[pos - 1] = bi
    edges: list[tuple[int, int]] = []
    loops: list[int] = [v for v in range(1, c + 1) if desc.orig_loops[v - 1]]
    nxt = c
    for (u, v), t, lbits in zip(_pairs(c), desc.pair_vals, desc.pair_loops):
        if t == 0:
            continue
        prev = u
        for s in range(t - 1):
            nxt += 1
            edges.append((prev, nxt))
            if lbits[s]:
                loops.append(nxt)
            prev = nxt
        edges.append((prev, v))
    for v0 in range(1, c + 1):
        t = desc.pend_vals[v0 - 1]
        lbits = desc.pend_loops[v0 - 1]
        prev = v0
        for s in range(t):
            nxt += 1
            edges.append((prev, nxt))
            if lbits[s]:
                loops.append(nxt)
            prev = nxt
    g = make_graph(nxt, edges, loops)
    return make_blg(g, flat[l:], flat[:l])


def _base_stream(q: int, m: int) -> Iterator[tuple[_Desc, dict]]:
    seeds = [(_seed_desc(blocks), _seed_name(i))
             for i, blocks in enumerate(_set_partitions(q))]
    for desc, name in seeds:
        yield desc, {"step": 1, "seed": name,
                     "partition": [list(b) for b in desc.blocks]}
    for desc, name in seeds:
        e = len(desc.pair_vals)
        for s in itertools.product(range(2 * m + 1), repeat=e):
            if not any(s):
                continue
            d = desc._replace(
                pair_vals=s,
                pair_loops=tuple((0,) * max(t - 1, 0) for t in s))
            yield d, {"step": 2, "seed": name, "string": list(s)}
    for desc, name in seeds:
        c = len(desc.blocks)
        for s in itertools.product(range(m + 1), repeat=c):
            if not any(s):
                continue
            d = desc._replace(pend_vals=s,
                              pend_loops=tuple((0,) * t for t in s))
            yield d, {"step": 3, "seed": name, "string": list(s)}
    for desc, name in seeds:
        c = len(desc.blocks)
        pairs = _pairs(c)
        for s2 in itertools.product(range(2 * m + 1), repeat=len(pairs)):
            if not any(s2):
                continue
            covered: set[int] = set()
            for (u, v), t in zip(pairs, s2):
                if t:
                    covered.update((u, v))
            iso = [v for v in range(1, c + 1) if v not in covered]
            if not iso:
                continue
            for sub in itertools.product(range(m + 1), repeat=len(iso)):
                if not any(sub):
                    continue
                sp = [0] * c
                for v, t in zip(iso, sub):
                    sp[v - 1] = t
                d = desc._replace(
                    pair_vals=s2,
                    pair_loops=tuple((0,) * max(t - 1, 0) for t in s2),
                    pend_vals=tuple(sp),
                    pend_loops=tuple((0,) * t for t in sp))
                yield d, {"step": 4, "seed": name,
                          "internal": list(s2), "string": sp}


def _stream(q: int, m: int, with_loops: bool) -> Iterator[tuple[_Desc, dict]]:
    yield from _base_stream(q, m)
    if not with_loops:
        return
    for desc, prov in _base_stream(q, m):
        c = len(desc.blocks)
        slots = ([len(x) for x in desc.pair_loops]
                 + [len(x) for x in desc.pend_loops])
        red = c + sum(slots)
        for bits in itertools.product((0, 1), repeat=red):
            if not any(bits):
                continue
            pos = c
            pair_loops = []
            for width in (len(x) for x in desc.pair_loops):
                pair_loops.append(tuple(bits[pos:pos + width]))
                pos += width
            pend_loops = []
            for width in (len(x) for x in desc.pend_loops):
                pend_loops.append(tuple(bits[pos:pos + width]))
                pos += width
            d = desc._replace(orig_loops=tuple(bits[:c]),
                              pair_loops=tuple(pair_loops),
                              pend_loops=tuple(pend_loops))
            yield d, {"step": 5, "base": prov, "loops": list(bits)}


def _stream_counts(q: int, m: int, with_loops: bool) -> dict[int, int]:
    """Closed-form size of every block of the stream."""
    seeds = _set_partitions(q)
    counts = {1: len(seeds), 2: 0, 3: 0, 4: 0, 5: 0}
    weighted = 0  # sum of 2**vertex_count over all block-1..4 diagrams
    f2 = 2 ** (2 * m) if m else 1          # per-pair weight, value 0..2m
    g2 = f2 - 1                            # per-pair weight, value 1..2m
    f3 = 2 ** (m + 1) - 1                  # per-vertex pendant weight, 0..m
    for blocks in seeds:
        c = len(blocks)
        pairs = _pairs(c)
        e = len(pairs)
        counts[2] += (2 * m + 1) ** e - 1
        counts[3] += (m + 1) ** c - 1
        weighted += 2 ** c                      # block 1
        weighted += 2 ** c * (f2 ** e - 1)      # block 2
        weighted += 2 ** c * (f3 ** c - 1)      # block 3
        for r in range(1, e + 1):
            for support in itertools.combinations(pairs, r):
                covered = {v for p in support for v in p}
                iso = c - len(covered)
                counts[4] += (2 * m) ** r * ((m + 1) ** iso - 1)
                weighted += (2 ** c * g2 ** r * (f3 ** iso - 1))
    if with_loops:
        base_total = counts[1] + counts[2] + counts[3] + counts[4]
        counts[5] = weighted - base_total
    return counts


# ---------------------------------------------------------------------------
# public step functions
# ---------------------------------------------------------------------------

def set_partition_diagrams(q: int) -> list[BLG]:
    """One edgeless diagram per set partition of [1..q], all labels on the
    input side; blocks become vertices."""
    if q < 0:
        raise ValueError("q must be >= 0")
    return [_materialize(_seed_desc(blocks), q, 0)
            for blocks in _set_partitions(q)]


def _with_paths(h: BLG, c: int,
                pair_vals: Sequence[int],
                pend_vals: Sequence[int]) -> BLG:
    """Attach internal paths between seed vertices 1..c and pendant paths to
    them, numbering fresh vertices after h's existing ones."""
    edges = list(h.graph.edges)
    loops = list(h.graph.loops)
    nxt = h.graph.n
    for (u, v), t in zip(_pairs(c), pair_vals):
        if t == 0:
            continue
        prev = u
        for _ in range(t - 1):
            nxt += 1
            edges.append((prev, nxt))
            prev = nxt
        edges.append((prev, v))
    for v0 in range(1, c + 1):
        prev = v0
        for _ in range(pend_vals[v0 - 1]):
            nxt += 1
            edges.append((prev, nxt))
            prev = nxt
    return make_blg(make_graph(nxt, edges, loops), h.in_tuple, h.out_tuple)


def internal_edge_variants(h: BLG, m: int) -> list[BLG]:
    """Insert a path of length 1..2m between each chosen pair of vertices of
    the edgeless diagram h; one output per non-zero choice string."""
    c = h.graph.n
    e = len(_pairs(c))
    out = []
    for s in itertools.product(range(2 * m + 1), repeat=e):
        if any(s):
            out.append(_with_paths(h, c, s, (0,) * c))
    return out


def external_edge_variants(h: BLG, m: int) -> list[BLG]:
    """Attach a pendant path of length 1..m to each chosen vertex of h; one
    output per non-zero choice string, the path adding that many vertices."""
    c = h.graph.n
    out = []
    for s in itertools.product(range(m + 1), repeat=c):
        if any(s):
            out.append(_with_paths(h, c, (0,) * len(_pairs(c)), s))
    return out


def mixed_variants(h: BLG, origin: BLG, m: int) -> list[BLG]:
    """Attach pendant paths to those seed vertices of origin that no internal
    path in h touched; empty when every seed vertex is covered."""
    c = origin.graph.n
    touched: set[int] = set()
    for i, j in h.graph.edges:
        for v in (i, j):
            if v <= c:
                touched.add(v)
    iso = [v for v in range(1, c + 1) if v not in touched]
    out = []
    for sub in itertools.product(range(m + 1), repeat=len(iso)):
        if not any(sub):
            continue
        sp = [0] * c
        for v, t in zip(iso, sub):
            sp[v - 1] = t
        out.append(_with_paths(h, c, (0,) * len(_pairs(c)), sp))
    return out


def loop_variants(h: BLG) -> list[BLG]:
    """Add loops on every non-empty subset of h's vertices, in bit-string
    order over the vertex list."""
    n = h.graph.n
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        if not any(bits):
            continue
        loops = list(h.graph.loops) + [v for v in range(1, n + 1) if bits[v - 1]]
        g = make_graph(n, h.graph.edges, loops)
        out.append(make_blg(g, h.in_tuple, h.out_tuple))
    return out


# ---------------------------------------------------------------------------
# the full stream
# ---------------------------------------------------------------------------

def diagram_counts(g: Graph, k: int, l: int) -> dict[int, int]:
    """Number of diagrams each generation block would contribute."""
    return _stream_counts(k + l, longest_trail(g), bool(g.loops))


def generate_diagrams(g: Graph, k: int, l: int,
                      max_diagrams: int | None = MAX_DIAGRAMS
                      ) -> list[GeneratedDiagram]:
    """The full candidate stream for maps of order (k, l) over g.

    Diagrams are emitted in a fixed deterministic order with provenance
    records.  Raises :class:`PolicyBoundError` before generating anything if
    the stream would exceed `max_diagrams`.
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be >= 0")
    q = k + l
    m = longest_trail(g)
    with_loops = bool(g.loops)
    counts = _stream_counts(q, m, with_loops)
    total = sum(counts.values())
    if max_diagrams is not None and total > max_diagrams:
        raise PolicyBoundError(
            f"diagram stream for q={q}, trail length {m} has {total} "
            f"diagrams, over the limit of {max_diagrams}")
    out = []
    tally = {1: 0, 2: 0, 3: 0, 4: 0, 5: 0}
    for desc, prov in _stream(q, m, with_loops):
        out.append(GeneratedDiagram(_materialize(desc, k, l), prov))
        tally[prov["step"]] += 1
    if tally != counts:
        raise AssertionError(
            f"stream counts {tally} disagree with closed form {counts}")
    return out
