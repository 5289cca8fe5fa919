from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hiddenclique import Graph, InvalidParams, VertexSet, generate_planted

from oracles import (
    brute_common_neighborhood,
    brute_degree_into,
    brute_is_clique,
    brute_top_k,
    reference_instance,
)


def vs(n, ids):
    return VertexSet.from_indices(n, ids)


# -- generation ---------------------------------------------------------


def test_generate_k5_complete():
    inst = generate_planted(5, 5, 0.0, 1.0, 12345)
    assert inst.graph.edge_count() == 10
    assert list(inst.planted.indices()) == [0, 1, 2, 3, 4]
    assert inst.graph.is_clique(inst.planted)
    inst.graph.validate()


def test_generate_empty():
    inst = generate_planted(5, 0, 0.0, 1.0, 7)
    assert inst.graph.edge_count() == 0
    assert len(inst.planted) == 0


def test_generate_matches_scalar_reference():
    # dual route: the packed kernel against a per-pair scalar walk of the stream
    for seed in (0, 1, 99):
        n, k = 60, 9
        inst = generate_planted(n, k, 0.4, 0.9, seed)
        dense, planted = reference_instance(n, k, 0.4, 0.9, seed)
        assert list(inst.planted.indices()) == planted
        assert np.array_equal(inst.graph.to_dense(), dense)


def test_generate_validates_args():
    with pytest.raises(InvalidParams):
        generate_planted(5, 6, 0.0, 1.0, 0)
    with pytest.raises(InvalidParams):
        generate_planted(5, 2, 0.5, 0.5, 0)
    with pytest.raises(InvalidParams):
        generate_planted(5, 2, 0.7, 0.5, 0)
    with pytest.raises(InvalidParams):
        generate_planted(5, 2, -0.1, 0.5, 0)


def test_generate_deterministic_bytes():
    a = generate_planted(300, 17, 0.5, 1.0, 2024)
    b = generate_planted(300, 17, 0.5, 1.0, 2024)
    assert np.array_equal(a.graph.words, b.graph.words)
    assert a.planted == b.planted
    c = generate_planted(300, 17, 0.5, 1.0, 2025)
    assert not np.array_equal(a.graph.words, c.graph.words)


def test_seed_zero_is_legal():
    inst = generate_planted(50, 5, 0.5, 1.0, 0)
    inst.graph.validate()


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(0, 120),
    k_frac=st.floats(0.0, 1.0),
    p=st.floats(0.0, 0.89),
    seed=st.integers(0, 2**64 - 1),
)
def test_generation_invariants(n, k_frac, p, seed):
    k = int(k_frac * n)
    q = min(1.0, p + 0.1)
    inst = generate_planted(n, k, p, q, seed)
    inst.graph.validate()  # symmetry, zero diagonal, clean padding
    assert len(inst.planted) == k
    if q == 1.0:
        assert inst.graph.is_clique(inst.planted)
    again = generate_planted(n, k, p, q, seed)
    assert np.array_equal(inst.graph.words, again.graph.words)


# -- degree primitives ---------------------------------------------------


def test_degree_into_trivial():
    g = Graph.complete(5)
    assert g.degree_into(0, vs(5, [1, 2, 3])) == 3
    assert g.degree_into(0, VertexSet.empty(5)) == 0


def test_degree_into_matches_bruteforce():
    inst = generate_planted(64, 8, 0.5, 1.0, 5)
    dense = inst.graph.to_dense()
    members = [1, 5, 8, 13, 21, 34, 55]
    for v in (0, 13, 63):
        assert inst.graph.degree_into(v, vs(64, members)) == brute_degree_into(
            dense, v, members
        )


def test_degree_into_universe_mismatch():
    g = Graph.complete(5)
    with pytest.raises(InvalidParams):
        g.degree_into(0, VertexSet.empty(6))


def test_degrees_into_all_trivial():
    g = Graph.complete(4)
    full = VertexSet.full(4)
    assert g.degrees_into_all(VertexSet.empty(4), full) == {}
    assert g.degrees_into_all(full, full) == {0: 3, 1: 3, 2: 3, 3: 3}


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 256), seed=st.integers(0, 2**32))
def test_degrees_into_all_pointwise(n, seed):
    inst = generate_planted(n, min(5, n), 0.5, 1.0, seed)
    a = vs(n, range(0, n, 2))
    s = vs(n, range(n // 3, n))
    batched = inst.graph.degrees_into_all(a, s)
    assert batched == {
        int(v): inst.graph.degree_into(int(v), s) for v in a.indices()
    }


# -- induced subgraph ----------------------------------------------------


def test_induced_full_is_identity():
    inst = generate_planted(40, 6, 0.5, 1.0, 1)
    sub, index_map = inst.graph.induced_subgraph(VertexSet.full(40))
    assert np.array_equal(sub.words, inst.graph.words)
    assert np.array_equal(index_map, np.arange(40))


def test_induced_empty():
    g = Graph.complete(5)
    sub, index_map = g.induced_subgraph(VertexSet.empty(5))
    assert sub.n == 0
    assert index_map.size == 0


def test_induced_k5_subset_is_k3():
    g = Graph.complete(5)
    sub, index_map = g.induced_subgraph(vs(5, [0, 2, 4]))
    assert sub.n == 3 and sub.edge_count() == 3
    assert list(index_map) == [0, 2, 4]


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 150), seed=st.integers(0, 2**32), pick=st.integers(1, 7))
def test_induced_preserves_edges(n, seed, pick):
    inst = generate_planted(n, 0, 0.5, 1.0, seed)
    keep = list(range(0, n, pick))
    sub, index_map = inst.graph.induced_subgraph(vs(n, keep))
    sub.validate()
    dense = inst.graph.to_dense()
    assert np.array_equal(sub.to_dense(), dense[np.ix_(keep, keep)])


# -- common neighborhood -------------------------------------------------


def test_common_neighborhood_k5():
    g = Graph.complete(5)
    assert g.common_neighborhood(vs(5, [0, 1])) == vs(5, [2, 3, 4])


def test_common_neighborhood_empty_graph():
    g = Graph.empty_graph(4)
    assert g.common_neighborhood(vs(4, [0])) == VertexSet.empty(4)


def test_common_neighborhood_empty_seed_rejected():
    with pytest.raises(InvalidParams):
        Graph.complete(5).common_neighborhood(VertexSet.empty(5))


def test_common_neighborhood_matches_bruteforce():
    inst = generate_planted(64, 0, 0.5, 1.0, 77)
    dense = inst.graph.to_dense()
    members = [3, 31, 47]
    got = set(inst.graph.common_neighborhood(vs(64, members)).indices())
    assert got == brute_common_neighborhood(dense, members)


# -- top-k by degree -----------------------------------------------------


def test_top_k_star_graph():
    dense = np.zeros((5, 5), dtype=bool)
    dense[0, 1:] = dense[1:, 0] = True
    g = Graph.from_dense(dense)
    assert g.top_k_by_degree(VertexSet.full(5), 1) == vs(5, [0])


def test_top_k_full_set():
    g = Graph.complete(6)
    u = vs(6, [1, 3, 5])
    assert g.top_k_by_degree(u, 3) == u


def test_top_k_over_range_rejected():
    g = Graph.complete(4)
    with pytest.raises(InvalidParams):
        g.top_k_by_degree(vs(4, [0, 1]), 3)


def test_top_k_matches_sort_oracle():
    inst = generate_planted(32, 0, 0.5, 1.0, 9)
    dense = inst.graph.to_dense()
    members = list(range(32))
    for k in (1, 5, 16, 32):
        got = sorted(inst.graph.top_k_by_degree(VertexSet.full(32), k).indices())
        assert got == brute_top_k(dense, members, k)


def test_top_k_tie_break_prefers_small_index():
    # a 4-cycle: all degrees equal, so ties decide everything
    dense = np.zeros((4, 4), dtype=bool)
    for u, v in ((0, 1), (1, 2), (2, 3), (3, 0)):
        dense[u, v] = dense[v, u] = True
    g = Graph.from_dense(dense)
    assert list(g.top_k_by_degree(VertexSet.full(4), 2).indices()) == [0, 1]


# -- is_clique -----------------------------------------------------------


def test_is_clique_cases():
    g = Graph.complete(5)
    assert g.is_clique(VertexSet.empty(5))
    assert g.is_clique(vs(5, [2]))
    assert g.is_clique(VertexSet.full(5))
    dense = g.to_dense()
    dense[0, 1] = dense[1, 0] = False
    broken = Graph.from_dense(dense)
    assert not broken.is_clique(VertexSet.full(5))


def test_is_clique_matches_bruteforce():
    inst = generate_planted(48, 0, 0.5, 1.0, 4)
    dense = inst.graph.to_dense()
    for members in ([0, 1, 2], [5, 6], list(range(10))):
        assert inst.graph.is_clique(vs(48, members)) == brute_is_clique(dense, members)


# -- VertexSet -----------------------------------------------------------


def test_vertexset_basics():
    s = vs(10, [1, 3, 5])
    assert len(s) == 3
    assert 3 in s and 2 not in s and 100 not in s
    assert s.union(vs(10, [5, 7])) == vs(10, [1, 3, 5, 7])
    assert s.intersection(vs(10, [3, 4])) == vs(10, [3])
    assert s.difference(vs(10, [1])) == vs(10, [3, 5])
    assert s.complement() == vs(10, [0, 2, 4, 6, 7, 8, 9])
    assert vs(10, [1, 3]).issubset(s)
    assert not s.issubset(vs(10, [1, 3]))


def test_vertexset_rejects_mismatch():
    with pytest.raises(InvalidParams):
        vs(5, [0]).union(vs(6, [0]))
    with pytest.raises(InvalidParams):
        vs(5, [7])
