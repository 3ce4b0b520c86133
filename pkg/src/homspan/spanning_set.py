"""Spanning sets of equivariance-respecting weight matrices over a graph.

``build_spanning_set`` runs the diagram generator for the requested order,
evaluates every diagram into its homomorphism matrix, drops zero matrices,
keeps the first representative of each distinct matrix, and returns the
survivors in stream order together with bookkeeping about what was dropped.

Evaluation is exact.  When a conservative a-priori bound shows that every
possible entry fits comfortably in 64 bits, diagrams are evaluated with
vectorised integer arithmetic; otherwise a plain-Python big-integer path is
used.  Both paths share the same factor tables and differ only in plumbing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._rowspace import IntRowSpace
from .bilabelled import BLG, blg_from_json, blg_to_json, canonical_form
from .diagram_gen import _Desc, _materialize, _pairs, _stream, _stream_counts
from .graph_core import (Graph, adjacency_matrix, graph_from_json,
                         graph_to_json, longest_trail)
from .hom_matrix import HomMatrix
from .policy import MAX_DIAGRAMS, PolicyBoundError

__all__ = [
    "SpanItem",
    "SpanningSet",
    "build_spanning_set",
    "reduce_to_basis",
    "weight_matrix",
    "bias_spanning_set",
    "feature_spanning_set",
    "spanning_to_json",
    "spanning_from_json",
    "spanning_to_csv",
]

# int64 evaluation is only used when entries provably stay below this
_INT64_SAFE = 2 ** 62


# ---------------------------------------------------------------------------
# result types
# ---------------------------------------------------------------------------

class SpanItem:
    """One surviving diagram with its matrix and generation provenance."""

    __slots__ = ("diagram", "provenance", "matrix", "stream_index", "_key")

    def __init__(self, diagram: BLG, provenance: dict, matrix: HomMatrix,
                 stream_index: int):
        self.diagram = diagram
        self.provenance = provenance
        self.matrix = matrix
        self.stream_index = stream_index
        self._key: str | None = None

    @property
    def canonical_key(self) -> str:
        if self._key is None:
            self._key = canonical_form(self.diagram, max_vertices=None)
        return self._key

    def __repr__(self) -> str:
        return (f"SpanItem(stream_index={self.stream_index}, "
                f"step={self.provenance.get('step')})")


@dataclass(eq=False)
class SpanningSet:
    """Ordered spanning set for maps of order (k, l) over `graph`.

    `zero_dropped` lists stream positions whose matrix was zero;
    `duplicates` lists (stream position, index of the surviving item with the
    same matrix); `counts` gives the generation-block totals.
    """

    graph: Graph
    k: int
    l: int
    items: tuple[SpanItem, ...]
    zero_dropped: tuple[int, ...]
    duplicates: tuple[tuple[int, int], ...]
    counts: dict[int, int]

    def __len__(self) -> int:
        return len(self.items)

    def matrices(self) -> list[HomMatrix]:
        return [it.matrix for it in self.items]


# ---------------------------------------------------------------------------
# factor-table evaluator
# ---------------------------------------------------------------------------

def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _mat_vec(a: list[list[int]], v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


class _Evaluator:
    """Evaluates diagram descriptors into flat matrix rows over one graph.

    A descriptor's matrix entry factors over its paths: an internal path
    contributes an entry of an adjacency-power-like table indexed by the two
    seed-vertex images, a pendant path contributes a row-sum vector entry, a
    loop contributes a diagonal entry.  Tables are cached per shape.
    """

    def __init__(self, g: Graph, m: int):
        self.g = g
        self.n = g.n
        self.m = m
        a = adjacency_matrix(g)
        self.A_py: list[list[int]] = [[int(x) for x in row] for row in a]
        self.loop_py: list[int] = [int(a[i, i]) for i in range(g.n)]
        self._int_tbl: dict = {}
        self._pend_tbl: dict = {}
        self._digits_np: dict = {}
        self._digits_py: dict = {}
        self._scatter_np: dict = {}
        self._scatter_py: dict = {}
        self._gather_np: dict = {}
        self._gather_py: dict = {}

    # -- factor tables (exact Python ints) ---------------------------------

    def internal_table(self, t: int, lbits: tuple[int, ...]) -> list[list[int]]:
        key = (t, lbits)
        tbl = self._int_tbl.get(key)
        if tbl is None:
            m = self.A_py
            for bit in lbits:
                if bit:
                    m = [[m[i][x] * self.loop_py[x] for x in range(self.n)]
                         for i in range(self.n)]
                m = _mat_mul(m, self.A_py)
            tbl = self._int_tbl[key] = m
        return tbl

    def pendant_table(self, t: int, lbits: tuple[int, ...]) -> list[int]:
        key = (t, lbits)
        vec = self._pend_tbl.get(key)
        if vec is None:
            f = [self.loop_py[x] if lbits[-1] else 1 for x in range(self.n)]
            for bit in reversed(lbits[:-1]):
                f = _mat_vec(self.A_py, f)
                if bit:
                    f = [f[x] * self.loop_py[x] for x in range(self.n)]
            vec = self._pend_tbl[key] = _mat_vec(self.A_py, f)
        return vec

    def entry_bound(self, q: int) -> int:
        """Upper bound on any matrix entry a descriptor of order q can produce."""
        max_int = 1
        for t in range(1, 2 * self.m + 1):
            tbl = self.internal_table(t, (0,) * (t - 1))
            max_int = max(max_int, *(x for row in tbl for x in row))
        max_pend = 1
        for t in range(1, self.m + 1):
            max_pend = max(max_pend, *self.pendant_table(t, (0,) * t))
        e = q * (q - 1) // 2
        return max_int ** e * max_pend ** q

    # -- index plumbing ----------------------------------------------------

    def digits_np(self, c: int) -> list[np.ndarray]:
        if c not in self._digits_np:
            size = self.n ** c
            idx = np.arange(size, dtype=np.int64)
            self._digits_np[c] = [(idx // (self.n ** (c - 1 - j))) % self.n
                                  for j in range(c)]
        return self._digits_np[c]

    def digits_py(self, c: int) -> list[list[int]]:
        if c not in self._digits_py:
            self._digits_py[c] = [[int(x) for x in d] for d in self.digits_np(c)]
        return self._digits_py[c]

    def scatter_np(self, blocks: tuple[tuple[int, ...], ...], q: int):
        key = (blocks, q)
        if key not in self._scatter_np:
            n = self.n
            c = len(blocks)
            digits = self.digits_np(q)
            cons = np.ones(n ** q, dtype=bool)
            phi = np.zeros(n ** q, dtype=np.int64)
            for block in blocks:
                d0 = digits[block[0] - 1]
                for pos in block[1:]:
                    cons &= digits[pos - 1] == d0
                phi = phi * n + d0
            self._scatter_np[key] = (cons, phi)
        return self._scatter_np[key]

    def scatter_py(self, blocks: tuple[tuple[int, ...], ...], q: int):
        key = (blocks, q)
        if key not in self._scatter_py:
            cons, phi = self.scatter_np(blocks, q)
            self._scatter_py[key] = ([bool(x) for x in cons],
                                     [int(x) for x in phi])
        return self._scatter_py[key]

    # -- per-factor gathers over [n]^c -------------------------------------

    def _gather(self, c: int, kind: str, where, t: int,
                lbits: tuple[int, ...], as_np: bool):
        key = (c, kind, where, t, lbits, as_np)
        cache = self._gather_np if as_np else self._gather_py
        arr = cache.get(key)
        if arr is not None:
            return arr
        n = self.n
        if kind == "pair":
            u, v = _pairs(c)[where]
            tbl = self.internal_table(t, lbits)
            if as_np:
                flat = np.array([x for row in tbl for x in row], dtype=np.int64)
                du, dv = self.digits_np(c)[u - 1], self.digits_np(c)[v - 1]
                arr = flat[du * n + dv]
            else:
                du, dv = self.digits_py(c)[u - 1], self.digits_py(c)[v - 1]
                arr = [tbl[a][b] for a, b in zip(du, dv)]
        elif kind == "pend":
            vec = self.pendant_table(t, lbits)
            if as_np:
                d = self.digits_np(c)[where - 1]
                arr = np.array(vec, dtype=np.int64)[d]
            else:
                d = self.digits_py(c)[where - 1]
                arr = [vec[x] for x in d]
        else:  # vertex loop
            if as_np:
                d = self.digits_np(c)[where - 1]
                arr = np.array(self.loop_py, dtype=np.int64)[d]
            else:
                d = self.digits_py(c)[where - 1]
                arr = [self.loop_py[x] for x in d]
        cache[key] = arr
        return arr

    # -- descriptor evaluation ---------------------------------------------

    def _factor_keys(self, desc: _Desc):
        c = len(desc.blocks)
        for pi, (t, lb) in enumerate(zip(desc.pair_vals, desc.pair_loops)):
            if t:
                yield ("pair", pi, t, lb)
        for v0 in range(1, c + 1):
            t = desc.pend_vals[v0 - 1]
            if t:
                yield ("pend", v0, t, desc.pend_loops[v0 - 1])
            if desc.orig_loops[v0 - 1]:
                yield ("loop", v0, 0, ())
        return

    def row_int64(self, desc: _Desc, q: int) -> np.ndarray:
        c = len(desc.blocks)
        val: np.ndarray | None = None
        for kind, where, t, lb in self._factor_keys(desc):
            arr = self._gather(c, kind, where, t, lb, as_np=True)
            val = arr.copy() if val is None else val * arr
        if val is None:
            val = np.ones(self.n ** c, dtype=np.int64)
        cons, phi = self.scatter_np(desc.blocks, q)
        return np.where(cons, val[phi], 0)

    def row_exact(self, desc: _Desc, q: int) -> tuple[int, ...]:
        c = len(desc.blocks)
        val: list[int] | None = None
        for kind, where, t, lb in self._factor_keys(desc):
            arr = self._gather(c, kind, where, t, lb, as_np=False)
            val = list(arr) if val is None else [x * y for x, y in zip(val, arr)]
        if val is None:
            val = [1] * (self.n ** c)
        cons, phi = self.scatter_py(desc.blocks, q)
        return tuple(val[p] if ok else 0 for ok, p in zip(cons, phi))


# ---------------------------------------------------------------------------
# the cached build core
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class _Core:
    survivors: list[tuple[_Desc, dict, int]]  # descriptor, provenance, position
    rows: list  # int64 arrays or tuples of ints, aligned with survivors
    zero_dropped: tuple[int, ...]
    duplicates: tuple[tuple[int, int], ...]
    counts: dict[int, int]
    int64_path: bool


@lru_cache(maxsize=8)
def _spanning_core(g: Graph, q: int, max_diagrams: int | None) -> _Core:
    m = longest_trail(g)
    with_loops = bool(g.loops)
    counts = _stream_counts(q, m, with_loops)
    total = sum(counts.values())
    if max_diagrams is not None and total > max_diagrams:
        raise PolicyBoundError(
            f"spanning-set build for q={q} over this graph needs {total} "
            f"diagrams, over the limit of {max_diagrams}")
    ev = _Evaluator(g, m)
    int64_path = g.n > 0 and ev.entry_bound(q) < _INT64_SAFE
    seen: dict = {}
    survivors: list[tuple[_Desc, dict, int]] = []
    rows: list = []
    zeros: list[int] = []
    dups: list[tuple[int, int]] = []
    for pos, (desc, prov) in enumerate(_stream(q, m, with_loops)):
        if int64_path:
            row = ev.row_int64(desc, q)
            if not row.any():
                zeros.append(pos)
                continue
            key = row.tobytes()
        else:
            row = ev.row_exact(desc, q)
            if not any(row):
                zeros.append(pos)
                continue
            key = row
        hit = seen.get(key)
        if hit is not None:
            dups.append((pos, hit))
            continue
        seen[key] = len(survivors)
        survivors.append((desc, prov, pos))
        rows.append(row)
    return _Core(survivors, rows, tuple(zeros), tuple(dups), counts, int64_path)


def _flat_to_matrix(row, n: int, k: int, l: int, int64_path: bool) -> HomMatrix:
    if int64_path:
        return HomMatrix.from_array(n, k, l, np.asarray(row).reshape(n ** l, n ** k))
    width = n ** k
    rows = tuple(tuple(row[i * width:(i + 1) * width]) for i in range(n ** l))
    return HomMatrix(n, k, l, rows=rows)


# ---------------------------------------------------------------------------
# public builders
# ---------------------------------------------------------------------------

def build_spanning_set(g: Graph, k: int, l: int, *,
                       max_diagrams: int | None = MAX_DIAGRAMS,
                       reduce: bool = False) -> SpanningSet:
    """Spanning set for linear maps of order (k, l) equivariant under the
    automorphisms of g.

    Diagrams come from :func:`homspan.diagram_gen.generate_diagrams`; zero
    matrices are dropped and later repeats of a matrix are recorded, not kept.
    With ``reduce=True`` the items are additionally filtered to an exact
    linearly independent subset (greedy, in stream order).
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be >= 0")
    core = _spanning_core(g, k + l, max_diagrams)
    items = []
    for idx, (desc, prov, pos) in enumerate(core.survivors):
        matrix = _flat_to_matrix(core.rows[idx], g.n, k, l, core.int64_path)
        items.append(SpanItem(_materialize(desc, k, l), prov, matrix, pos))
    ss = SpanningSet(g, k, l, tuple(items), core.zero_dropped,
                     core.duplicates, dict(core.counts))
    return reduce_to_basis(ss) if reduce else ss


def reduce_to_basis(ss: SpanningSet) -> SpanningSet:
    """Keep only items that enlarge the span, judged exactly, in order."""
    space = IntRowSpace(ss.graph.n ** (ss.k + ss.l))
    kept = []
    for item in ss.items:
        flat = [x for row in item.matrix.rows() for x in row]
        if space.add(flat):
            kept.append(item)
    return SpanningSet(ss.graph, ss.k, ss.l, tuple(kept), ss.zero_dropped,
                       ss.duplicates, dict(ss.counts))


def bias_spanning_set(g: Graph, l: int, *,
                      max_diagrams: int | None = MAX_DIAGRAMS,
                      reduce: bool = False) -> list[list[int]]:
    """Spanning vectors for equivariant constant terms of order l.

    Runs the (0, l) pipeline and flattens each single-column matrix into a
    plain length-``n**l`` vector, in the same order as the spanning set.
    """
    ss = build_spanning_set(g, 0, l, max_diagrams=max_diagrams, reduce=reduce)
    return [[row[0] for row in item.matrix.rows()] for item in ss.items]


def weight_matrix(ss: SpanningSet, weights: Sequence[float]) -> np.ndarray:
    """Real weighted sum of the spanning matrices (double precision)."""
    if len(weights) != len(ss.items):
        raise ValueError(
            f"need {len(ss.items)} weights, got {len(weights)}")
    n, k, l = ss.graph.n, ss.k, ss.l
    acc = np.zeros((n ** l, n ** k), dtype=np.float64)
    for w, item in zip(weights, ss.items):
        try:
            acc += float(w) * item.matrix.array()
        except OverflowError:
            acc += float(w) * np.array(item.matrix.rows(), dtype=np.float64)
    return acc


# ---------------------------------------------------------------------------
# feature-dimension lift
# ---------------------------------------------------------------------------

def feature_spanning_set(g: Graph, k: int, l: int, d_k: int, d_l: int, *,
                         max_diagrams: int | None = MAX_DIAGRAMS
                         ) -> list[list[list[int]]]:
    """Spanning matrices for maps between feature-valued tensor spaces.

    Every base matrix X is paired with every matrix unit E_ij (i <= d_l on
    the output side, j <= d_k on the input side) as the Kronecker product
    kron(X, E_ij); rows are ordered with the tensor index major and the
    feature index minor.  The list is ordered by base item, then i, then j.
    """
    if d_k < 1 or d_l < 1:
        raise ValueError("feature dimensions must be >= 1")
    base = build_spanning_set(g, k, l, max_diagrams=max_diagrams)
    out = []
    for it in base.items:
        x = it.matrix.rows()
        n_rows, n_cols = it.matrix.shape
        for i in range(1, d_l + 1):
            for j in range(1, d_k + 1):
                rows = []
                for r in range(n_rows):
                    for a in range(1, d_l + 1):
                        if a == i:
                            rows.append([
                                x[r][cc] if b == j else 0
                                for cc in range(n_cols)
                                for b in range(1, d_k + 1)])
                        else:
                            rows.append([0] * (n_cols * d_k))
                out.append(rows)
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def spanning_to_json(ss: SpanningSet) -> dict:
    return {
        "graph": graph_to_json(ss.graph),
        "k": ss.k,
        "l": ss.l,
        "counts": {str(s): c for s, c in sorted(ss.counts.items())},
        "items": [{
            "stream_index": it.stream_index,
            "provenance": it.provenance,
            "diagram": blg_to_json(it.diagram),
            "matrix": it.matrix.tolists(),
        } for it in ss.items],
        "zero_dropped": list(ss.zero_dropped),
        "duplicates": [{"stream_index": a, "shadowed_by": b}
                       for a, b in ss.duplicates],
    }


def spanning_from_json(data: Mapping) -> SpanningSet:
    try:
        g = graph_from_json(data["graph"])
        k, l = data["k"], data["l"]
        raw_items = data["items"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"not a spanning-set object: {data!r}") from exc
    items = []
    for entry in raw_items:
        diagram = blg_from_json(entry["diagram"])
        matrix = HomMatrix.from_rows(g.n, k, l, entry["matrix"])
        items.append(SpanItem(diagram, dict(entry.get("provenance", {})),
                              matrix, int(entry.get("stream_index", -1))))
    counts = {int(s): c for s, c in data.get("counts", {}).items()}
    dups = tuple((int(d["stream_index"]), int(d["shadowed_by"]))
                 for d in data.get("duplicates", []))
    return SpanningSet(g, k, l, tuple(items),
                       tuple(int(x) for x in data.get("zero_dropped", [])),
                       dups, counts)


def spanning_to_csv(ss: SpanningSet) -> str:
    blocks = ["\n".join(",".join(str(v) for v in row)
                        for row in it.matrix.rows())
              for it in ss.items]
    return "\n\n".join(blocks) + ("\n" if blocks else "")
