"""Exact homomorphism counting and the matrices built from pinned counts.

``hom_count`` counts graph homomorphisms with an optional partial assignment
(pins).  ``hom_matrix`` evaluates a bilabelled graph into a matrix whose rows
range over output index tuples and columns over input index tuples, both in
lexicographic order with the first coordinate most significant.  All entries
are exact Python integers.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bilabelled import BLG
from .graph_core import Graph, adjacency_matrix
from .perm_group import tuple_index

__all__ = [
    "HomMatrix",
    "hom_count",
    "hom_count_naive",
    "hom_matrix",
    "spider",
    "swap_matrix",
    "all_index_tuples",
    "hom_to_json",
    "hom_from_json",
    "hom_to_csv",
]

_INT64_MAX = 2 ** 63 - 1


def all_index_tuples(n: int, k: int) -> list[tuple[int, ...]]:
    """All 1-based index tuples of length k, first coordinate most significant."""
    return list(itertools.product(range(1, n + 1), repeat=k))


# ---------------------------------------------------------------------------
# matrix container
# ---------------------------------------------------------------------------

class HomMatrix:
    """Integer matrix of shape (n**l, n**k) with exact entries.

    Backed either by nested tuples of Python ints or by an int64 array;
    conversions between the two views are cached.
    """

    __slots__ = ("n", "k", "l", "_rows", "_arr")

    def __init__(self, n: int, k: int, l: int, *,
                 rows: tuple[tuple[int, ...], ...] | None = None,
                 arr: np.ndarray | None = None):
        if (rows is None) == (arr is None):
            raise ValueError("exactly one of rows/arr must be given")
        self.n = n
        self.k = k
        self.l = l
        self._rows = rows
        self._arr = arr
        if rows is not None and len(rows) != n ** l:
            raise ValueError(f"expected {n ** l} rows, got {len(rows)}")
        if arr is not None and arr.shape != (n ** l, n ** k):
            raise ValueError(f"bad array shape {arr.shape}")

    @classmethod
    def from_rows(cls, n: int, k: int, l: int,
                  rows: Iterable[Iterable[int]]) -> "HomMatrix":
        return cls(n, k, l, rows=tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def from_array(cls, n: int, k: int, l: int, arr: np.ndarray) -> "HomMatrix":
        return cls(n, k, l, arr=np.asarray(arr, dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n ** self.l, self.n ** self.k)

    def rows(self) -> tuple[tuple[int, ...], ...]:
        if self._rows is None:
            self._rows = tuple(tuple(int(x) for x in row) for row in self._arr)
        return self._rows

    def array(self) -> np.ndarray:
        """int64 view; raises OverflowError if any entry does not fit."""
        if self._arr is None:
            if any(abs(x) > _INT64_MAX for row in self._rows for x in row):
                raise OverflowError("matrix entry exceeds int64 range")
            self._arr = np.array(self._rows, dtype=np.int64).reshape(self.shape)
        return self._arr

    def entry(self, i, j) -> int:
        """Entry by flat index or by index tuple (1-based coordinates)."""
        if isinstance(i, tuple):
            i = tuple_index(i, self.n)
        if isinstance(j, tuple):
            j = tuple_index(j, self.n)
        if self._rows is not None:
            return self._rows[i][j]
        return int(self._arr[i, j])

    def tolists(self) -> list[list[int]]:
        return [list(r) for r in self.rows()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomMatrix):
            return NotImplemented
        if (self.n, self.k, self.l) != (other.n, other.k, other.l):
            return False
        if self._arr is not None and other._arr is not None:
            return bool(np.array_equal(self._arr, other._arr))
        return self.rows() == other.rows()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"HomMatrix(n={self.n}, k={self.k}, l={self.l})"


# ---------------------------------------------------------------------------
# homomorphism counting
# ---------------------------------------------------------------------------

def _check_pins(h: Graph, g: Graph, pins: Mapping[int, int] | None) -> dict[int, int]:
    if not pins:
        return {}
    clean = {}
    for v, w in pins.items():
        if not (1 <= v <= h.n):
            raise ValueError(f"pin source {v} out of range for n={h.n}")
        if not (1 <= w <= g.n):
            raise ValueError(f"pin target {w} out of range for n={g.n}")
        clean[v] = w
    return clean


def hom_count(h: Graph, g: Graph, pins: Mapping[int, int] | None = None) -> int:
    """Number of homomorphisms h -> g extending the pinned assignment.

    Adjacency in g is read off its adjacency matrix including the diagonal,
    so an edge of h may collapse onto a looped vertex of g.
    """
    pins = _check_pins(h, g, pins)
    if h.n == 0:
        return 1
    if g.n == 0:
        return 0
    adj = adjacency_matrix(g).astype(bool)

    nbrs: dict[int, list[int]] = {v: [] for v in range(1, h.n + 1)}
    for i, j in h.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    h_loops = set(h.loops)

    pinned = sorted(pins)
    free = sorted((v for v in range(1, h.n + 1) if v not in pins),
                  key=lambda v: (-len(nbrs[v]), v))
    order = pinned + free
    pos = {v: i for i, v in enumerate(order)}
    assign = [0] * len(order)

    def consistent(v: int, w: int, depth: int) -> bool:
        if v in h_loops and not adj[w - 1, w - 1]:
            return False
        for u in nbrs[v]:
            if pos[u] < depth and not adj[w - 1, assign[pos[u]] - 1]:
                return False
        return True

    def count_from(depth: int) -> int:
        if depth == len(order):
            return 1
        v = order[depth]
        if v in pins:
            w = pins[v]
            if not consistent(v, w, depth):
                return 0
            assign[depth] = w
            return count_from(depth + 1)
        total = 0
        for w in range(1, g.n + 1):
            if consistent(v, w, depth):
                assign[depth] = w
                total += count_from(depth + 1)
        return total

    return count_from(0)


def hom_count_naive(h: Graph, g: Graph, pins: Mapping[int, int] | None = None) -> int:
    """Brute-force reference counter: tries every vertex map in full."""
    pins = _check_pins(h, g, pins)
    if h.n == 0:
        return 1
    if g.n == 0:
        return 0
    total = 0
    for phi in itertools.product(range(1, g.n + 1), repeat=h.n):
        if any(phi[v - 1] != w for v, w in pins.items()):
            continue
        ok = all(g.has_edge(phi[i - 1], phi[j - 1]) for i, j in h.edges)
        ok = ok and all(phi[v - 1] in g.loops for v in h.loops)
        if ok:
            total += 1
    return total


# ---------------------------------------------------------------------------
# matrices of bilabelled graphs
# ---------------------------------------------------------------------------

def hom_matrix(h: BLG, g: Graph) -> HomMatrix:
    """Evaluate a bilabelled graph against g.

    Entry at (output tuple I, input tuple J) is the number of homomorphisms
    of the underlying graph into g sending the out-labels to I and the
    in-labels to J; an inconsistent pinning contributes 0.
    """
    n = g.n
    rows = []
    for out_vals in all_index_tuples(n, h.l):
        row = []
        for in_vals in all_index_tuples(n, h.k):
            pins: dict[int, int] = {}
            conflict = False
            for v, w in itertools.chain(zip(h.out_tuple, out_vals),
                                        zip(h.in_tuple, in_vals)):
                if pins.get(v, w) != w:
                    conflict = True
                    break
                pins[v] = w
            row.append(0 if conflict else hom_count(h.graph, g, pins))
        rows.append(tuple(row))
    return HomMatrix(n, h.k, h.l, rows=tuple(rows))


def spider(k: int, l: int, n: int) -> HomMatrix:
    """Matrix of the single-vertex diagram with k in-labels and l out-labels.

    All labels name the one vertex, so an entry is 1 exactly when every
    coordinate of both index tuples agrees; with no labels at all the free
    vertex contributes a factor n.
    """
    if k == 0 and l == 0:
        return HomMatrix.from_rows(n, 0, 0, [[n]])
    rows = []
    for out_vals in all_index_tuples(n, l):
        row = []
        for in_vals in all_index_tuples(n, k):
            vals = set(out_vals) | set(in_vals)
            row.append(1 if len(vals) == 1 else 0)
        rows.append(row)
    return HomMatrix.from_rows(n, k, l, rows)


def swap_matrix(n: int) -> HomMatrix:
    """Matrix of the two-vertex edgeless diagram with crossed labels.

    Entry at ((i1, i2), (j1, j2)) is 1 exactly when i1 = j2 and i2 = j1;
    conjugating with it swaps tensor factors.
    """
    rows = []
    for i1, i2 in all_index_tuples(n, 2):
        row = [1 if (i1 == j2 and i2 == j1) else 0
               for j1, j2 in all_index_tuples(n, 2)]
        rows.append(row)
    return HomMatrix.from_rows(n, 2, 2, rows)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def hom_to_json(x: HomMatrix) -> dict:
    return {"n": x.n, "k": x.k, "l": x.l, "entries": x.tolists()}


def hom_from_json(data: Mapping) -> HomMatrix:
    try:
        n, k, l = data["n"], data["k"], data["l"]
        entries = data["entries"]
    except (TypeError, KeyError) as exc:
        raise ValueError(f"not a matrix object: {data!r}") from exc
    if len(entries) != n ** l or any(len(r) != n ** k for r in entries):
        raise ValueError("matrix entries have the wrong shape")
    return HomMatrix.from_rows(n, k, l, entries)


def hom_to_csv(x: HomMatrix) -> str:
    return "\n".join(",".join(str(v) for v in row)
                     for row in x.rows()) + "\n"
