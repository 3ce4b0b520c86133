"""The assembled spanning sets: golden worked examples, an independent
reference pipeline, deduplication records, weighting, and the bias/feature
variants.

The reference pipeline below rebuilds spanning sets the slow way -- run the
generator, evaluate every diagram with the entry-by-entry counter, drop
zeros, dedup by matrix value -- and must agree with build_spanning_set item
for item, including the bookkeeping.
"""

from __future__ import annotations

import random

import numpy as np
import pytest

import homspan.spanning_set as spanning_set_module
from homspan.diagram_gen import generate_diagrams
from homspan.graph_core import adjacency_matrix, builtin_graph, make_graph
from homspan.hom_matrix import hom_matrix
from homspan.oracle_verify import rank_exact
from homspan.perm_group import automorphism_group, orbit_count
from homspan.policy import PolicyBoundError
from homspan.spanning_set import (bias_spanning_set, build_spanning_set,
                                  feature_spanning_set, reduce_to_basis,
                                  spanning_from_json, spanning_to_csv,
                                  spanning_to_json, weight_matrix)

S2_GOLDEN = [
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[1, 1, 1], [1, 1, 1], [1, 1, 1]],
    [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
    [[1, 0, 0], [0, 1, 0], [0, 0, 0]],
    [[1, 1, 0], [1, 1, 0], [1, 1, 0]],
    [[1, 1, 1], [1, 1, 1], [0, 0, 0]],
    [[1, 1, 0], [1, 1, 0], [0, 0, 0]],
]


def _reference_pipeline(g, k, l):
    """Slow re-implementation of the build: stream, evaluate, drop, dedup."""
    items, zeros, dups = [], [], []
    seen = {}
    for pos, gd in enumerate(generate_diagrams(g, k, l, max_diagrams=None)):
        x = hom_matrix(gd.diagram, g)
        rows = x.rows()
        if all(v == 0 for row in rows for v in row):
            zeros.append(pos)
            continue
        if rows in seen:
            dups.append((pos, seen[rows]))
            continue
        seen[rows] = len(items)
        items.append((pos, gd, x))
    return items, zeros, dups


def _assert_matches_reference(g, k, l):
    ss = build_spanning_set(g, k, l)
    items, zeros, dups = _reference_pipeline(g, k, l)
    assert len(ss.items) == len(items)
    for got, (pos, gd, x) in zip(ss.items, items):
        assert got.stream_index == pos
        assert got.provenance == gd.provenance
        assert got.diagram == gd.diagram
        assert got.matrix.tolists() == x.tolists()
    assert list(ss.zero_dropped) == zeros
    assert [tuple(d) for d in ss.duplicates] == dups


# ---------------------------------------------------------------------------
# golden worked examples
# ---------------------------------------------------------------------------

def test_edgeless4_identity_and_all_ones():
    ss = build_spanning_set(builtin_graph("Kbar4"), 1, 1)
    assert [it.matrix.tolists() for it in ss.items] == [
        np.eye(4, dtype=int).tolist(), np.ones((4, 4), dtype=int).tolist()]


def test_2k2_three_matrices_all_labellings():
    for tag in "ABC":
        g = builtin_graph(f"2K2_{tag}")
        ss = build_spanning_set(g, 1, 1)
        assert [it.matrix.tolists() for it in ss.items] == [
            np.eye(4, dtype=int).tolist(),
            np.ones((4, 4), dtype=int).tolist(),
            adjacency_matrix(g).tolist()]


def test_c4_third_matrix_is_complement_adjacency():
    for tag in "ABC":
        s2 = build_spanning_set(builtin_graph(f"2K2_{tag}"), 1, 1)
        s4 = build_spanning_set(builtin_graph(f"C4_{tag}"), 1, 1)
        j_minus = (np.ones((4, 4), dtype=int) - np.eye(4, dtype=int)
                   - np.array(s2.items[2].matrix.tolists()))
        assert s4.items[2].matrix.tolists() == j_minus.tolist()


def test_s2_11_seven_matrices_in_order():
    ss = build_spanning_set(builtin_graph("S2_A"), 1, 1)
    assert [it.matrix.tolists() for it in ss.items] == S2_GOLDEN
    assert list(ss.zero_dropped) == []
    # stream position 4 (pendant on the one-vertex seed) duplicates item 3
    assert [tuple(d) for d in ss.duplicates] == [(4, 3)]


def test_s2_21_thirty_one_matrices():
    ss = build_spanning_set(builtin_graph("S2_A"), 2, 1)
    assert len(ss.items) == 31
    assert {k: v for k, v in ss.counts.items() if v} == \
        {1: 5, 2: 32, 3: 17, 4: 6}
    assert rank_exact(ss.matrices()) == 14


def test_loopful_graph_spanning_set():
    g = builtin_graph("loop3")
    ss = build_spanning_set(g, 1, 1)
    dim = orbit_count(automorphism_group(g), 2)
    assert rank_exact(ss.matrices()) == dim == 5


# ---------------------------------------------------------------------------
# agreement with the reference pipeline
# ---------------------------------------------------------------------------

def test_reference_agreement_s2_21():
    _assert_matches_reference(builtin_graph("S2_A"), 2, 1)


def test_reference_agreement_2k2():
    _assert_matches_reference(builtin_graph("2K2_A"), 1, 1)
    _assert_matches_reference(builtin_graph("2K2_B"), 2, 1)


def test_reference_agreement_loopful():
    _assert_matches_reference(builtin_graph("loop3"), 1, 2)


def test_reference_agreement_cycle():
    _assert_matches_reference(builtin_graph("C4_A"), 1, 1)


def test_reference_agreement_edgeless():
    _assert_matches_reference(builtin_graph("Kbar3"), 2, 2)


def test_exact_path_agrees_with_vectorized_path(monkeypatch):
    # force the big-integer path and compare against the fast path's output
    fast = build_spanning_set(builtin_graph("S2_A"), 2, 1)
    monkeypatch.setattr(spanning_set_module, "_INT64_SAFE", 0)
    spanning_set_module._spanning_core.cache_clear()
    try:
        slow = build_spanning_set(builtin_graph("S2_A"), 2, 1)
        assert len(slow.items) == len(fast.items)
        for a, b in zip(slow.items, fast.items):
            assert a.matrix.tolists() == b.matrix.tolists()
            assert a.stream_index == b.stream_index
        assert slow.duplicates == fast.duplicates
        assert slow.zero_dropped == fast.zero_dropped
    finally:
        spanning_set_module._spanning_core.cache_clear()


# ---------------------------------------------------------------------------
# structure of the result object
# ---------------------------------------------------------------------------

def test_no_duplicate_matrices_among_items():
    for name, k, l in (("S2_A", 2, 1), ("C4_B", 1, 1), ("loop3", 2, 0)):
        ss = build_spanning_set(builtin_graph(name), k, l)
        seen = set()
        for it in ss.items:
            key = tuple(map(tuple, it.matrix.tolists()))
            assert key not in seen
            seen.add(key)


def test_no_zero_matrix_among_items():
    for name, k, l in (("S2_A", 2, 1), ("C5", 1, 1)):
        ss = build_spanning_set(builtin_graph(name), k, l)
        for it in ss.items:
            assert any(v for row in it.matrix.tolists() for v in row)


def test_surviving_diagrams_pairwise_nonisomorphic():
    ss = build_spanning_set(builtin_graph("S2_A"), 2, 1)
    keys = [it.canonical_key for it in ss.items]
    assert len(set(keys)) == len(keys)


def test_bookkeeping_partitions_the_stream():
    ss = build_spanning_set(builtin_graph("S2_A"), 2, 1)
    total = sum(ss.counts.values())
    assert total == 60
    covered = ({it.stream_index for it in ss.items}
               | set(ss.zero_dropped)
               | {pos for pos, _ in ss.duplicates})
    assert covered == set(range(total))


def test_policy_guard_propagates():
    with pytest.raises(PolicyBoundError):
        build_spanning_set(builtin_graph("K4"), 2, 2)


def test_q0_spanning_set_is_scalar_one():
    ss = build_spanning_set(builtin_graph("C5"), 0, 0)
    assert len(ss.items) == 1
    assert ss.items[0].matrix.tolists() == [[1]]


# ---------------------------------------------------------------------------
# basis reduction
# ---------------------------------------------------------------------------

def test_reduce_to_basis_keeps_rank_and_shrinks():
    ss = build_spanning_set(builtin_graph("S2_A"), 2, 1)
    red = reduce_to_basis(ss)
    assert len(red.items) == 14
    assert rank_exact(red.matrices()) == 14
    # reduction keeps a subsequence of the original items
    kept = [it.stream_index for it in red.items]
    assert kept == sorted(kept)
    assert set(kept) <= {it.stream_index for it in ss.items}


def test_reduce_flag_equivalent_to_post_reduction():
    direct = build_spanning_set(builtin_graph("S2_A"), 2, 1, reduce=True)
    red = reduce_to_basis(build_spanning_set(builtin_graph("S2_A"), 2, 1))
    assert [it.stream_index for it in direct.items] == \
        [it.stream_index for it in red.items]


# ---------------------------------------------------------------------------
# weighted sums
# ---------------------------------------------------------------------------

def test_weight_matrix_pattern_2k2():
    ss = build_spanning_set(builtin_graph("2K2_A"), 1, 1)
    w = weight_matrix(ss, [1.0, 2.0, 3.0])
    g = builtin_graph("2K2_A")
    adj = adjacency_matrix(g)
    for i in range(4):
        for j in range(4):
            if i == j:
                assert w[i][j] == pytest.approx(3.0)    # lam1 + lam2
            elif adj[i][j]:
                assert w[i][j] == pytest.approx(5.0)    # lam2 + lam3
            else:
                assert w[i][j] == pytest.approx(2.0)    # lam2


def test_weight_matrix_one_hot_and_zero():
    ss = build_spanning_set(builtin_graph("Kbar4"), 1, 1)
    assert (weight_matrix(ss, [1.0, 0.0]) == np.eye(4)).all()
    assert (weight_matrix(ss, [0.0, 0.0]) == np.zeros((4, 4))).all()


def test_weight_matrix_length_mismatch():
    ss = build_spanning_set(builtin_graph("Kbar4"), 1, 1)
    with pytest.raises(ValueError):
        weight_matrix(ss, [1.0])


def test_weight_matrix_is_float():
    ss = build_spanning_set(builtin_graph("S2_A"), 1, 1)
    w = weight_matrix(ss, [0.5] * 7)
    assert w.dtype == np.float64


# ---------------------------------------------------------------------------
# bias and feature variants
# ---------------------------------------------------------------------------

def test_bias_vectors_edgeless():
    assert bias_spanning_set(make_graph(3, []), 1) == [[1, 1, 1]]


def test_bias_vectors_transitive_graph_collapse():
    assert bias_spanning_set(builtin_graph("2K2_A"), 1) == [[1, 1, 1, 1]]


def test_bias_l0_spans_scalars():
    assert bias_spanning_set(builtin_graph("C5"), 0) == [[1]]


def test_bias_vectors_fixed_by_group_action():
    g = builtin_graph("S2_A")
    gt = automorphism_group(g)
    from homspan.perm_group import tensor_rep
    for vec in bias_spanning_set(g, 2):
        v = np.array(vec, dtype=np.int64)
        for sigma in gt.elements:
            assert (tensor_rep(sigma, 2) @ v == v).all()


def test_feature_cardinality_and_degenerate_case():
    g = builtin_graph("Kbar3")
    base = build_spanning_set(g, 1, 1)
    assert feature_spanning_set(g, 1, 1, 2, 3) and \
        len(feature_spanning_set(g, 1, 1, 2, 3)) == 6 * len(base.items)
    assert feature_spanning_set(g, 1, 1, 1, 1) == \
        [it.matrix.tolists() for it in base.items]


def test_feature_matrices_are_kronecker_with_matrix_units():
    g = builtin_graph("Kbar2")
    base = build_spanning_set(g, 1, 1)
    d_k, d_l = 2, 2
    mats = feature_spanning_set(g, 1, 1, d_k, d_l)
    idx = 0
    for it in base.items:
        x = np.array(it.matrix.tolists())
        for i in range(d_l):
            for j in range(d_k):
                unit = np.zeros((d_l, d_k), dtype=int)
                unit[i, j] = 1
                assert mats[idx] == np.kron(x, unit).tolist()
                idx += 1


def test_feature_rejects_bad_dimensions():
    with pytest.raises(ValueError):
        feature_spanning_set(builtin_graph("Kbar2"), 1, 1, 0, 1)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_spanning_json_round_trip():
    ss = build_spanning_set(builtin_graph("S2_A"), 1, 1)
    d = spanning_to_json(ss)
    back = spanning_from_json(d)
    assert back.graph == ss.graph and back.k == ss.k and back.l == ss.l
    assert [it.matrix.tolists() for it in back.items] == \
        [it.matrix.tolists() for it in ss.items]
    assert [it.provenance for it in back.items] == \
        [it.provenance for it in ss.items]
    assert back.duplicates == ss.duplicates
    assert back.zero_dropped == ss.zero_dropped
    assert back.counts == ss.counts


def test_spanning_json_duplicate_records():
    d = spanning_to_json(build_spanning_set(builtin_graph("S2_A"), 1, 1))
    assert d["duplicates"] == [{"stream_index": 4, "shadowed_by": 3}]


def test_spanning_csv_blocks():
    ss = build_spanning_set(builtin_graph("Kbar4"), 1, 1)
    text = spanning_to_csv(ss)
    blocks = text.strip().split("\n\n")
    assert len(blocks) == 2
    assert blocks[0].splitlines()[0] == "1,0,0,0"
    assert blocks[1].splitlines()[0] == "1,1,1,1"
