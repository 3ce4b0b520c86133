"""Automorphism groups of small graphs and their action on tensor indices.

Permutations are image tuples: ``sigma[i-1]`` is the image of vertex ``i``
(1-based values).  Group elements are listed with the identity first and the
rest in lexicographic order of their image tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graph_core import Graph, adjacency_matrix
from .policy import AUT_MAX_N, ORBIT_SPACE_MAX, PolicyBoundError

__all__ = [
    "GroupTable",
    "Perm",
    "automorphism_group",
    "is_automorphism",
    "compose_perm",
    "inverse_perm",
    "generating_set",
    "tensor_rep",
    "orbit_count",
    "group_to_json",
    "group_from_json",
]

Perm = tuple[int, ...]


@dataclass(frozen=True)
class GroupTable:
    """A permutation group listed in full, identity first."""

    n: int
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# permutation arithmetic
# ---------------------------------------------------------------------------

def compose_perm(a: Perm, b: Perm) -> Perm:
    """Composition a after b: (a∘b)(i) = a(b(i))."""
    return tuple(a[b[i] - 1] for i in range(len(b)))


def inverse_perm(a: Perm) -> Perm:
    inv = [0] * len(a)
    for i, img in enumerate(a):
        inv[img - 1] = i + 1
    return tuple(inv)


def is_automorphism(g: Graph, sigma: Perm) -> bool:
    """Does relabelling by sigma preserve edges and loops?"""
    if sorted(sigma) != list(range(1, g.n + 1)):
        return False
    for i, j in g.edges:
        if not g.has_edge(sigma[i - 1], sigma[j - 1]):
            return False
    for v in g.loops:
        if sigma[v - 1] not in g.loops:
            return False
    return True


# ---------------------------------------------------------------------------
# automorphism search
# ---------------------------------------------------------------------------

def automorphism_group(g: Graph) -> GroupTable:
    """All automorphisms of g, found by backtracking over vertex images."""
    if g.n > AUT_MAX_N:
        raise PolicyBoundError(
            f"automorphism search is limited to n <= {AUT_MAX_N}, got n={g.n}")
    n = g.n
    if n == 0:
        return GroupTable(0, (tuple(),))
    adj = adjacency_matrix(g)
    degree = adj.sum(axis=1)
    loop = np.diag(adj)
    found: list[Perm] = []
    image = [0] * n
    taken = [False] * n

    def extend(v: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for w in range(1, n + 1):
            if taken[w - 1]:
                continue
            if degree[w - 1] != degree[v] or loop[w - 1] != loop[v]:
                continue
            ok = True
            for u in range(v):
                if adj[v, u] != adj[w - 1, image[u] - 1]:
                    ok = False
                    break
            if ok:
                image[v] = w
                taken[w - 1] = True
                extend(v + 1)
                taken[w - 1] = False
        image[v] = 0

    extend(0)
    found.sort()
    return GroupTable(n, tuple(found))


def generating_set(gt: GroupTable) -> tuple[Perm, ...]:
    """A small generating set, chosen greedily in element order."""
    identity = tuple(range(1, gt.n + 1))
    closure = {identity}
    gens: list[Perm] = []
    for el in gt.elements:
        if el in closure:
            continue
        gens.append(el)
        frontier = list(closure)
        closure.add(el)
        queue = [el]
        while queue:
            x = queue.pop()
            for y in gens:
                for z in (compose_perm(x, y), compose_perm(y, x)):
                    if z not in closure:
                        closure.add(z)
                        queue.append(z)
            for w in frontier:
                for z in (compose_perm(x, w), compose_perm(w, x)):
                    if z not in closure:
                        closure.add(z)
                        queue.append(z)
        if len(closure) == len(gt.elements):
            break
    if not gens:
        gens.append(identity)
    return tuple(gens)


# ---------------------------------------------------------------------------
# tensor action
# ---------------------------------------------------------------------------

def tuple_index(tup: Sequence[int], n: int) -> int:
    """0-based position of a 1-based index tuple, first coordinate most significant."""
    idx = 0
    for t in tup:
        idx = idx * n + (t - 1)
    return idx


def index_permutation(sigma: Perm, k: int) -> np.ndarray:
    """Array p with p[index(I)] = index(sigma I), over all I in [n]^k."""
    n = len(sigma)
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    digits = np.array(sigma, dtype=np.int64) - 1
    p = np.zeros(n ** k, dtype=np.int64)
    all_idx = np.arange(n ** k, dtype=np.int64)
    for pos in range(k):
        block = n ** (k - 1 - pos)
        col = (all_idx // block) % n
        p += digits[col] * block
    return p


def tensor_rep(sigma: Perm, k: int) -> np.ndarray:
    """Permutation matrix of sigma acting coordinatewise on [n]^k.

    Entry ((sigma I), I) is 1; for k = 0 this is the 1x1 identity.
    """
    n = len(sigma)
    d = n ** k
    p = index_permutation(sigma, k)
    m = np.zeros((d, d), dtype=np.int64)
    m[p, np.arange(d)] = 1
    return m


# ---------------------------------------------------------------------------
# orbit counting
# ---------------------------------------------------------------------------

def _orbit_count_burnside(gt: GroupTable, p: int) -> int:
    total = 0
    for el in gt.elements:
        fixed = sum(1 for i, img in enumerate(el, start=1) if img == i)
        total += fixed ** p
    count, rem = divmod(total, len(gt.elements))
    if rem:
        raise AssertionError("Burnside sum not divisible by group order")
    return count


def _orbit_count_enumerate(gt: GroupTable, p: int) -> int:
    n = gt.n
    size = n ** p
    if size > ORBIT_SPACE_MAX:
        raise PolicyBoundError(
            f"orbit enumeration needs n**p = {size} > {ORBIT_SPACE_MAX}")
    parent = np.arange(size, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for el in generating_set(gt):
        perm = index_permutation(el, p)
        for i in range(size):
            a, b = find(i), find(int(perm[i]))
            if a != b:
                parent[a] = b
    return sum(1 for i in range(size) if find(i) == i)


def orbit_count(gt: GroupTable, p: int) -> int:
    """Number of orbits of the coordinatewise action on [n]^p.

    Computed by the Burnside average and cross-checked against explicit orbit
    enumeration; a mismatch would mean an internal error.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    by_average = _orbit_count_burnside(gt, p)
    by_enumeration = _orbit_count_enumerate(gt, p)
    if by_average != by_enumeration:
        raise AssertionError(
            f"orbit count mismatch: {by_average} != {by_enumeration}")
    return by_average


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def group_to_json(gt: GroupTable) -> dict:
    return {
        "n": gt.n,
        "order": gt.order,
        "elements": [list(el) for el in gt.elements],
    }


def group_from_json(data: Mapping) -> GroupTable:
    try:
        n = data["n"]
        elements = tuple(tuple(el) for el in data["elements"])
    except (TypeError, KeyError) as exc:
        raise ValueError(f"not a group table object: {data!r}") from exc
    for el in elements:
        if sorted(el) != list(range(1, n + 1)):
            raise ValueError(f"element {el} is not a permutation of [{n}]")
    if "order" in data and data["order"] != len(elements):
        raise ValueError("declared order does not match element count")
    return GroupTable(n, elements)
