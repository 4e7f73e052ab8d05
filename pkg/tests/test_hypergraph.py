from math import comb

import pytest
from hypothesis import given, strategies as st

from hyperconn.errors import HypergraphError
from hyperconn.hypergraph import (
    EdgeKey, build, complete, degree_profile, delete_vertices, dumps, empty,
    loads, rank, read_edge_list, unrank, write_edge_list,
)

from conftest import hypergraphs


def test_rank_first_edges_colex():
    assert [unrank(r, 3) for r in range(5)] == [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4), (1, 2, 5)]


def test_rank_is_bijection_on_small_universe():
    for d in (2, 3, 4):
        seen = {unrank(r, d) for r in range(comb(9, d))}
        assert len(seen) == comb(9, d)
        assert all(max(e) <= 9 for e in seen)


@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**62))
def test_rank_unrank_roundtrip(d, r):
    e = unrank(r, d)
    assert list(e) == sorted(set(e)) and len(e) == d
    assert rank(e) == r


def test_edge_key():
    k = EdgeKey.of([4, 1, 2])
    assert k.vertices == (1, 2, 4) and k.rank == 1
    assert EdgeKey.from_rank(1, 3) == k


def test_build_validates():
    with pytest.raises(HypergraphError, match="3 distinct"):
        build(4, 3, [(1, 2)])
    with pytest.raises(HypergraphError):
        build(4, 3, [(1, 2, 5)])
    with pytest.raises(HypergraphError):
        build(4, 3, [(1, 2, 3), (3, 2, 1)])
    with pytest.raises(HypergraphError):
        build(4, 3, [(1, 1, 2)])


def test_complete_and_empty():
    K = complete(5, 3)
    assert K.m == 10 and all(K.degree(v) == 6 for v in range(1, 6))
    E = empty(5, 3)
    assert E.m == 0 and E.min_degree() == 0 and E.n == 5


def test_delete_vertices_kills_edges():
    H = build(5, 3, [(1, 2, 3), (3, 4, 5), (1, 4, 5)])
    G = delete_vertices(H, [3])
    assert G.vertices == frozenset({1, 2, 4, 5})
    assert G.edges == ((1, 4, 5),)
    assert delete_vertices(H, [99]) == H


@given(hypergraphs())
def test_degree_sum(H):
    assert sum(H.degrees.values()) == H.d * H.m
    assert sum(degree_profile(H).values()) == H.n


@given(hypergraphs())
def test_edge_list_roundtrip(H):
    assert loads(dumps(H)) == H


def test_edge_list_file(tmp_path):
    H = build(6, 3, [(1, 2, 3), (2, 5, 6)])
    p = tmp_path / "h.txt"
    write_edge_list(H, p)
    assert read_edge_list(p) == H


@pytest.mark.parametrize("text", ["", "4 3\n", "4 3 2\n1 2 3\n", "4 3 1\n3 2 1\n", "4 3 1\n1 2 x\n"])
def test_loads_rejects(text):
    with pytest.raises(HypergraphError):
        loads(text)


@given(st.integers(min_value=2, max_value=6),
       st.lists(st.integers(min_value=0, max_value=2**45), max_size=50))
def test_unrank_many_matches_scalar(d, ranks):
    from hyperconn.hypergraph import unrank_many
    assert unrank_many(ranks, d) == [unrank(r, d) for r in ranks]
