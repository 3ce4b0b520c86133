"""Spanning sets of automorphism-equivariant weight matrices.

Given a small graph, this package enumerates bilabelled diagram graphs,
evaluates each into an exact homomorphism-count matrix, and returns a
spanning set for the space of linear maps between tensor powers that commute
with the graph's automorphisms — together with independent verification
tools (orbit bases, exact rank, equivariance and calculus identity checks).
"""

from .bilabelled import (BLG, blg_from_json, blg_to_json, canonical_form,
                         compose, frobenius_flatten, frobenius_unflatten,
                         involution, make_blg, prune_free_components, relabel,
                         tensor)
from .diagram_gen import (GeneratedDiagram, diagram_counts,
                          external_edge_variants, generate_diagrams,
                          internal_edge_variants, loop_variants,
                          mixed_variants, set_partition_diagrams)
from .graph_core import (Graph, adjacency_matrix, builtin_graph,
                         builtin_names, complement, graph_from_json,
                         graph_to_json, longest_trail, make_graph)
from .hom_matrix import (HomMatrix, all_index_tuples, hom_count,
                         hom_count_naive, hom_from_json, hom_matrix,
                         hom_to_csv, hom_to_json, spider, swap_matrix)
from .oracle_verify import (check_equivariance, check_frobenius_square,
                            check_functor, check_spanning, orbit_basis,
                            random_functor_triple, rank_exact)
from .perm_group import (GroupTable, automorphism_group, compose_perm,
                         generating_set, group_from_json, group_to_json,
                         index_permutation, inverse_perm, is_automorphism,
                         orbit_count, tensor_rep, tuple_index)
from .policy import (AUT_MAX_N, CANON_MAX_VERTICES, MAX_DIAGRAMS,
                     ORBIT_SPACE_MAX, PolicyBoundError)
from .spanning_set import (SpanItem, SpanningSet, bias_spanning_set,
                           build_spanning_set, feature_spanning_set,
                           reduce_to_basis, spanning_from_json,
                           spanning_to_csv, spanning_to_json, weight_matrix)

__version__ = "0.1.0"
