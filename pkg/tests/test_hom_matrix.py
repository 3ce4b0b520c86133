"""Homomorphism counting and the matrices built from it.

hom_count_naive re-enumerates every map |V(g)|^|V(h)| without pruning and is
the oracle for the backtracking counter; the fixed row/column ordering is
pinned down by explicit index fixtures.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from homspan.bilabelled import (compose, involution, make_blg,
                                prune_free_components, relabel, tensor)
from homspan.graph_core import builtin_graph, make_graph
from homspan.hom_matrix import (HomMatrix, all_index_tuples, hom_count,
                                hom_count_naive, hom_from_json, hom_matrix,
                                hom_to_csv, hom_to_json, spider, swap_matrix)


def _random_graph(rng, n, p_edge=0.4, p_loop=0.2):
    edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if rng.random() < p_edge]
    loops = [v for v in range(1, n + 1) if rng.random() < p_loop]
    return make_graph(n, edges, loops)


# ---------------------------------------------------------------------------
# index conventions
# ---------------------------------------------------------------------------

def test_all_index_tuples_order():
    assert all_index_tuples(3, 2)[:4] == [(1, 1), (1, 2), (1, 3), (2, 1)]
    assert all_index_tuples(2, 0) == [()]
    assert len(all_index_tuples(4, 3)) == 64


# ---------------------------------------------------------------------------
# hom_count
# ---------------------------------------------------------------------------

def test_hom_count_two_disjoint_edges_into_one_edge():
    h = make_graph(4, [(1, 2), (3, 4)])
    g = builtin_graph("S2_A")
    assert hom_count(h, g, {1: 1, 3: 1}) == 1
    assert hom_count(h, g, {1: 3, 3: 2}) == 0


def test_hom_count_free_vertex():
    for n in (1, 3, 5):
        assert hom_count(make_graph(1, []), make_graph(n, [(1, 2)] if n > 1
                                                      else []), {}) == n


def test_hom_count_edge_into_edgeless_is_zero():
    assert hom_count(make_graph(2, [(1, 2)]), make_graph(4, []), {}) == 0


def test_hom_count_edge_needs_loop_when_collapsed():
    h = make_graph(2, [(1, 2)])
    loopy = make_graph(1, [], [1])
    bare = make_graph(1, [])
    assert hom_count(h, loopy, {}) == 1   # both endpoints on the loop vertex
    assert hom_count(h, bare, {}) == 0


def test_hom_count_loop_maps_only_to_loops():
    h = make_graph(1, [], [1])
    g = builtin_graph("loop3")
    assert hom_count(h, g, {}) == 1
    assert hom_count(h, g, {1: 3}) == 1
    assert hom_count(h, g, {1: 1}) == 0


def test_hom_count_rejects_bad_pins():
    h = make_graph(2, [(1, 2)])
    g = make_graph(2, [(1, 2)])
    with pytest.raises(ValueError):
        hom_count(h, g, {3: 1})
    with pytest.raises(ValueError):
        hom_count(h, g, {1: 5})


def test_hom_count_empty_source():
    assert hom_count(make_graph(0, []), make_graph(3, []), {}) == 1


def test_hom_count_walks_on_cycle():
    # pinned path of length 2 counts walks; on C_4 these follow A^2
    path = make_graph(3, [(1, 2), (2, 3)])
    c4 = builtin_graph("C4_A")
    a = np.array([[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]])
    a2 = a @ a
    for i in range(1, 5):
        for j in range(1, 5):
            assert hom_count(path, c4, {1: i, 3: j}) == a2[i - 1][j - 1]


def test_hom_count_matches_naive_oracle():
    rng = random.Random(90210)
    for _ in range(60):
        h = _random_graph(rng, rng.randint(1, 4))
        g = _random_graph(rng, rng.randint(1, 4))
        pins = {}
        for v in range(1, h.n + 1):
            if rng.random() < 0.4:
                pins[v] = rng.randint(1, g.n)
        assert hom_count(h, g, pins) == hom_count_naive(h, g, pins)


# ---------------------------------------------------------------------------
# hom_matrix
# ---------------------------------------------------------------------------

def test_identity_spider_gives_identity():
    h = make_blg(make_graph(1, []), (1,), (1,))
    x = hom_matrix(h, builtin_graph("Kbar4"))
    assert x.tolists() == np.eye(4, dtype=int).tolist()


def test_two_free_labels_give_all_ones():
    h = make_blg(make_graph(2, []), (1,), (2,))
    x = hom_matrix(h, builtin_graph("Kbar4"))
    assert x.tolists() == [[1] * 4] * 4


def test_edge_diagram_gives_adjacency():
    h = make_blg(make_graph(2, [(1, 2)]), (1,), (2,))
    for name in ("2K2_A", "C4_B", "C5", "S2_A", "loop3", "K4"):
        g = builtin_graph(name)
        from homspan.graph_core import adjacency_matrix
        assert hom_matrix(h, g).tolists() == adjacency_matrix(g).tolist()


def test_conflicting_pins_give_zero_entry():
    # one vertex carrying two labels: off-diagonal entries must vanish
    h = make_blg(make_graph(1, []), (1,), (1,))
    x = hom_matrix(h, builtin_graph("S2_A"))
    assert x.entry((2,), (3,)) == 0
    assert x.entry((2,), (2,)) == 1


def test_hom_matrix_shapes_with_zero_arities():
    g = builtin_graph("Kbar3")
    col = hom_matrix(make_blg(make_graph(1, []), (), (1,)), g)
    row = hom_matrix(make_blg(make_graph(1, []), (1,), ()), g)
    scalar = hom_matrix(make_blg(make_graph(1, []), (), ()), g)
    assert col.shape == (3, 1) and row.shape == (1, 3)
    assert scalar.shape == (1, 1) and scalar.tolists() == [[3]]


def test_hom_matrix_empty_diagram_is_scalar_one():
    h = make_blg(make_graph(0, []), (), ())
    assert hom_matrix(h, builtin_graph("C5")).tolists() == [[1]]


def test_hom_matrix_relabel_invariance():
    rng = random.Random(777)
    for _ in range(25):
        n = rng.randint(1, 4)
        hg = _random_graph(rng, n)
        h = make_blg(hg, [rng.randint(1, n) for _ in range(rng.randint(0, 2))],
                     [rng.randint(1, n) for _ in range(rng.randint(0, 2))])
        g = _random_graph(rng, rng.randint(1, 4))
        images = list(range(1, n + 1))
        rng.shuffle(images)
        assert hom_matrix(h, g).tolists() == \
            hom_matrix(relabel(h, tuple(images)), g).tolists()


def test_hom_matrix_entries_match_brute_force():
    rng = random.Random(888)
    for _ in range(10):
        n = rng.randint(1, 4)
        hg = _random_graph(rng, n)
        h = make_blg(hg, [rng.randint(1, n)], [rng.randint(1, n)])
        g = _random_graph(rng, 3)
        x = hom_matrix(h, g)
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                pins = {}
                conflict = False
                for v, t in zip(h.out_tuple + h.in_tuple, (i, j)):
                    if v in pins and pins[v] != t:
                        conflict = True
                    pins[v] = t
                want = 0 if conflict else hom_count_naive(hg, g, pins)
                assert x.entry((i,), (j,)) == want


# ---------------------------------------------------------------------------
# functor identities at the matrix level
# ---------------------------------------------------------------------------

def test_compose_identity_on_spiders():
    g = builtin_graph("2K2_A")
    m21 = make_blg(make_graph(1, []), (1, 1), (1,))
    m12 = make_blg(make_graph(1, []), (1,), (1, 1))
    left = hom_matrix(compose(m21, m12), g).array()
    right = hom_matrix(m21, g).array() @ hom_matrix(m12, g).array()
    assert (left == right).all()


def test_tensor_identity_is_kronecker():
    g = builtin_graph("S2_A")
    a = make_blg(make_graph(2, [(1, 2)]), (1,), (2,))
    ident = make_blg(make_graph(1, []), (1,), (1,))
    left = hom_matrix(tensor(a, ident), g).array()
    right = np.kron(hom_matrix(a, g).array(), hom_matrix(ident, g).array())
    assert (left == right).all()


def test_involution_identity_is_transpose():
    rng = random.Random(999)
    for _ in range(20):
        n = rng.randint(1, 4)
        hg = _random_graph(rng, n)
        h = make_blg(hg, [rng.randint(1, n) for _ in range(rng.randint(0, 2))],
                     [rng.randint(1, n) for _ in range(rng.randint(0, 2))])
        g = _random_graph(rng, rng.randint(1, 4))
        a = hom_matrix(h, g).rows()
        b = hom_matrix(involution(h), g).rows()
        assert b == tuple(zip(*a)) or (not a and not b)


def test_pruning_factor_identity():
    h = make_blg(make_graph(3, [(1, 2)]), (1,), (2,))  # free vertex 3
    g = builtin_graph("C5")
    pruned, removed = prune_free_components(h)
    factor = hom_count(removed, g, {})
    assert factor == 5
    full = hom_matrix(h, g).array()
    assert (full == factor * hom_matrix(pruned, g).array()).all()


# ---------------------------------------------------------------------------
# spider and swap constructors
# ---------------------------------------------------------------------------

def test_spider_scalar_case():
    assert spider(0, 0, 5).tolists() == [[5]]


def test_spider_sum_and_copy_cases():
    assert spider(1, 0, 3).tolists() == [[1, 1, 1]]
    assert spider(0, 1, 3).tolists() == [[1], [1], [1]]


def test_spider_2_to_1():
    x = spider(2, 1, 2)
    assert x.shape == (2, 4)
    assert x.tolists() == [[1, 0, 0, 0], [0, 0, 0, 1]]


def test_spider_matches_hom_matrix_over_edgeless():
    for (k, l) in ((0, 0), (0, 1), (1, 0), (2, 1), (1, 2), (2, 2)):
        for n in (2, 3):
            h = make_blg(make_graph(1, []), (1,) * k, (1,) * l)
            assert spider(k, l, n).tolists() == \
                hom_matrix(h, make_graph(n, [])).tolists()


def test_swap_small_cases():
    assert swap_matrix(1).tolists() == [[1]]
    m = swap_matrix(2)
    assert m.tolists() == [[1, 0, 0, 0], [0, 0, 1, 0],
                           [0, 1, 0, 0], [0, 0, 0, 1]]


def test_swap_is_involution():
    m = swap_matrix(3).array()
    assert (m @ m == np.eye(9, dtype=np.int64)).all()


def test_swap_matches_hom_matrix_over_any_graph():
    h = make_blg(make_graph(2, []), (2, 1), (1, 2))
    for name in ("Kbar3", "K4", "C5", "loop3", "2K2_C"):
        g = builtin_graph(name)
        assert swap_matrix(g.n).tolists() == hom_matrix(h, g).tolists()


# ---------------------------------------------------------------------------
# the matrix container
# ---------------------------------------------------------------------------

def test_hom_matrix_array_overflow_detected():
    big = HomMatrix.from_rows(2, 1, 1, [[2 ** 70, 0], [0, 1]])
    with pytest.raises(OverflowError):
        big.array()
    assert big.rows()[0][0] == 2 ** 70   # exact value retained


def test_hom_matrix_equality_and_no_hash():
    a = HomMatrix.from_rows(2, 1, 1, [[1, 0], [0, 1]])
    b = HomMatrix.from_rows(2, 1, 1, [[1, 0], [0, 1]])
    assert a == b
    with pytest.raises(TypeError):
        hash(a)


def test_hom_json_round_trip():
    h = make_blg(make_graph(2, [(1, 2)]), (1,), (2,))
    x = hom_matrix(h, builtin_graph("C4_A"))
    d = hom_to_json(x)
    assert d["n"] == 4 and d["k"] == 1 and d["l"] == 1
    y = hom_from_json(d)
    assert x == y


def test_hom_json_shape_validation():
    with pytest.raises(ValueError):
        hom_from_json({"n": 2, "k": 1, "l": 1, "entries": [[1, 2]]})


def test_hom_csv_layout():
    x = HomMatrix.from_rows(2, 1, 1, [[1, 2], [3, 4]])
    assert hom_to_csv(x) == "1,2\n3,4\n"
