"""Independent verification tools for spanning sets and the diagram calculus.

Everything here is exact: orbit bases come from explicit orbit enumeration,
rank from fraction-free elimination over the integers, and the matrix-level
identities (composition, tensor, involution, label reshuffling) are checked
entry by entry against freshly counted matrices.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

import numpy as np

from ._rowspace import IntRowSpace
from .bilabelled import (BLG, compose, frobenius_flatten, frobenius_unflatten,
                         involution, make_blg, tensor)
from .graph_core import Graph, make_graph
from .hom_matrix import HomMatrix, hom_matrix
from .perm_group import (automorphism_group, generating_set,
                         index_permutation, orbit_count)
from .policy import ORBIT_SPACE_MAX, PolicyBoundError
from .spanning_set import SpanningSet

__all__ = [
    "orbit_basis",
    "check_equivariance",
    "rank_exact",
    "check_spanning",
    "check_functor",
    "check_frobenius_square",
    "random_functor_triple",
]


# ---------------------------------------------------------------------------
# orbit basis
# ---------------------------------------------------------------------------

def orbit_basis(g: Graph, k: int, l: int) -> list[HomMatrix]:
    """One 0/1 indicator matrix per orbit of the automorphism group acting
    coordinatewise on index tuples of length k + l.

    Ordered by the smallest flat index in each orbit.  These matrices form a
    basis of the space of equivariant maps, so they are the reference the
    spanning checks compare against.
    """
    n = g.n
    q = k + l
    size = n ** q
    if size > ORBIT_SPACE_MAX:
        raise PolicyBoundError(
            f"orbit basis needs n**(k+l) = {size} > {ORBIT_SPACE_MAX}")
    gt = automorphism_group(g)
    parent = np.arange(size, dtype=np.int64)

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for sigma in generating_set(gt):
        perm = index_permutation(sigma, q)
        for i in range(size):
            a, b = find(i), find(int(perm[i]))
            if a != b:
                parent[a] = b

    orbits: dict[int, list[int]] = {}
    for i in range(size):
        orbits.setdefault(find(i), []).append(i)
    out = []
    for members in sorted(orbits.values(), key=lambda ms: ms[0]):
        flat = np.zeros(size, dtype=np.int64)
        flat[members] = 1
        out.append(HomMatrix.from_array(n, k, l, flat.reshape(n ** l, n ** k)))
    return out


# ---------------------------------------------------------------------------
# equivariance
# ---------------------------------------------------------------------------

def _flat_invariant(flat: np.ndarray, perm: np.ndarray) -> bool:
    return bool(np.array_equal(flat[perm], flat))


def _flat_invariant_exact(flat: list[int], perm: np.ndarray) -> bool:
    return all(flat[int(p)] == flat[i] for i, p in enumerate(perm))


def check_equivariance(x: HomMatrix, g: Graph, *, full_group: bool = False) -> bool:
    """Does x commute with the tensor action of Aut(g)?

    Equivalent formulation used here: the flattened entry table is invariant
    under permuting all k + l index coordinates by an automorphism.  By
    default only a generating set is checked, which already decides the
    question; ``full_group=True`` checks every element anyway.
    """
    if x.n != g.n:
        raise ValueError(f"matrix is over n={x.n}, graph has n={g.n}")
    gt = automorphism_group(g)
    perms = gt.elements if full_group else generating_set(gt)
    q = x.k + x.l
    arrays = [index_permutation(sigma, q) for sigma in perms]
    try:
        flat = x.array().reshape(-1)
        return all(_flat_invariant(flat, p) for p in arrays)
    except OverflowError:
        flat_py = [v for row in x.rows() for v in row]
        return all(_flat_invariant_exact(flat_py, p) for p in arrays)


# ---------------------------------------------------------------------------
# exact rank
# ---------------------------------------------------------------------------

def _flatten_any(mat) -> list[int]:
    if isinstance(mat, HomMatrix):
        return [int(x) for row in mat.rows() for x in row]
    arr = np.asarray(mat)
    return [int(x) for x in arr.reshape(-1)]


def rank_exact(mats: Sequence) -> int:
    """Rank over the rationals of the span of the given integer matrices."""
    mats = list(mats)
    if not mats:
        return 0
    first = _flatten_any(mats[0])
    space = IntRowSpace(len(first))
    space.add(first)
    for m in mats[1:]:
        space.add(_flatten_any(m))
    return space.rank


# ---------------------------------------------------------------------------
# spanning check
# ---------------------------------------------------------------------------

def check_spanning(ss: SpanningSet, *, full_group: bool = False) -> dict:
    """Verify a spanning set two independent ways.

    Reports the exact rank of the items against the orbit count (the space's
    dimension), and separately solves for every orbit-basis matrix inside the
    span.  ``spanning`` is True exactly when all orbit matrices are covered.
    Per-item equivariance failures are listed; when there are none, the rank
    scan may stop early at the dimension, which is then provably the rank.
    """
    g = ss.graph
    n = g.n
    q = ss.k + ss.l
    gt = automorphism_group(g)
    dim = orbit_count(gt, q)
    perms = gt.elements if full_group else generating_set(gt)
    arrays = [index_permutation(sigma, q) for sigma in perms]

    equivariance_failures: list[int] = []
    flats: list = []
    for i, item in enumerate(ss.items):
        try:
            flat = item.matrix.array().reshape(-1)
            ok = all(_flat_invariant(flat, p) for p in arrays)
        except OverflowError:
            flat = [x for row in item.matrix.rows() for x in row]
            ok = all(_flat_invariant_exact(flat, p) for p in arrays)
        if not ok:
            equivariance_failures.append(i)
        flats.append(flat)

    space = IntRowSpace(n ** q)
    may_stop_early = not equivariance_failures
    for flat in flats:
        space.add([int(x) for x in flat] if isinstance(flat, np.ndarray)
                  else flat)
        if may_stop_early and space.rank == dim:
            break

    orbit_mats = orbit_basis(g, ss.k, ss.l)
    orbit_in_span = [space.contains(_flatten_any(om)) for om in orbit_mats]
    return {
        "rank": space.rank,
        "dim": dim,
        "spanning": all(orbit_in_span),
        "orbit_in_span": orbit_in_span,
        "equivariance_failures": equivariance_failures,
    }


# ---------------------------------------------------------------------------
# functor identities
# ---------------------------------------------------------------------------

def _matmul_rows(a: tuple[tuple[int, ...], ...],
                 b: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols)
                 for row in a)


def _kron_rows(a: tuple[tuple[int, ...], ...],
               b: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(
        tuple(x * y for x in arow for y in brow)
        for arow in a for brow in b)


def check_functor(h1: BLG, h2: BLG, g: Graph) -> bool:
    """Check the three matrix-level identities of the diagram calculus.

    Composition of diagrams must multiply the matrices, disjoint union must
    Kronecker them, and swapping the label tuples must transpose.  Requires
    ``h2.k == h1.l`` so the composite exists.
    """
    if h2.k != h1.l:
        raise ValueError("h2 must consume exactly the outputs of h1")
    x1 = hom_matrix(h1, g).rows()
    x2 = hom_matrix(h2, g).rows()
    composed = hom_matrix(compose(h2, h1), g).rows()
    tensored = hom_matrix(tensor(h1, h2), g).rows()
    swapped1 = hom_matrix(involution(h1), g).rows()
    swapped2 = hom_matrix(involution(h2), g).rows()
    return (composed == _matmul_rows(x2, x1)
            and tensored == _kron_rows(x1, x2)
            and swapped1 == tuple(zip(*x1))
            and swapped2 == tuple(zip(*x2)))


def check_frobenius_square(h: BLG, g: Graph, new_k: int, new_l: int) -> bool:
    """Moving all labels to one side and splitting them differently must only
    reshuffle entries: the flat entry table of h at (new_k, new_l) equals the
    original's.  Requires ``new_k + new_l == h.k + h.l``."""
    if new_k + new_l != h.k + h.l:
        raise ValueError("label split must preserve the total label count")
    reshaped = frobenius_unflatten(frobenius_flatten(h), new_k, new_l)
    flat_orig = [x for row in hom_matrix(h, g).rows() for x in row]
    flat_new = [x for row in hom_matrix(reshaped, g).rows() for x in row]
    return flat_orig == flat_new


# ---------------------------------------------------------------------------
# randomized inputs for property runs
# ---------------------------------------------------------------------------

def _random_graph(rng: random.Random, n: int) -> Graph:
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rng.random() < 0.4]
    loops = [v for v in range(1, n + 1) if rng.random() < 0.2]
    return make_graph(n, edges, loops)


def _random_blg(rng: random.Random, k: int, l: int) -> BLG:
    nv = rng.randint(1, 4)
    g = _random_graph(rng, nv)
    return make_blg(g,
                    [rng.randint(1, nv) for _ in range(k)],
                    [rng.randint(1, nv) for _ in range(l)])


def random_functor_triple(rng: random.Random) -> tuple[BLG, BLG, Graph]:
    """A compatible (h1, h2, target graph) triple on at most 4 vertices each."""
    k1, l1, l2 = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
    h1 = _random_blg(rng, k1, l1)
    h2 = _random_blg(rng, l1, l2)
    g = _random_graph(rng, rng.randint(1, 4))
    return h1, h2, g
