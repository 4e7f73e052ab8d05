import random
from itertools import combinations

import pytest
from hypothesis import given, settings

from hyperconn.connectivity import (
    CutWitness, brute_force_is_k_connected, check_property_Q, connected_components,
    find_separator, is_k_connected, k_connectivity, min_separating_cut,
    separated_pairs, vertex_connectivity,
)
from hyperconn.errors import ScaleGuardError
from hyperconn.structure import min_transversal
from hyperconn.hypergraph import build, complete, delete_vertices, empty

from conftest import hypergraphs, random_hypergraph


def test_components_examples():
    P = connected_components(build(6, 3, [(1, 2, 3), (3, 4, 5)]))
    assert P.blocks == (frozenset({1, 2, 3, 4, 5}), frozenset({6}))
    assert len(connected_components(empty(4, 3))) == 4
    assert connected_components(complete(5, 3)).is_connected()


def test_complete_on_four():
    K = complete(4, 3)
    assert is_k_connected(K, 2)
    ok, w = k_connectivity(K, 3)
    assert not ok and len(w.separator) == 2 and w.verify(K)


def test_single_edge():
    H = build(3, 3, [(1, 2, 3)])
    assert is_k_connected(H, 1)
    assert not is_k_connected(H, 2)


def test_too_few_vertices():
    assert not is_k_connected(complete(5, 3), 5)
    assert not brute_force_is_k_connected(complete(5, 3), 5)


def test_edgeless_brute_force():
    assert not brute_force_is_k_connected(empty(4, 3), 1)
    assert brute_force_is_k_connected(complete(3, 3), 1)


def test_brute_force_guard():
    with pytest.raises(ScaleGuardError):
        brute_force_is_k_connected(empty(13, 3), 1)


def test_deleting_vertex_kills_edges_cut():
    # {u,a,b},{a,b,w}: deleting a alone removes both edges
    H = build(4, 3, [(1, 2, 3), (2, 3, 4)])
    assert min_separating_cut(H, 1, 4) == 1
    assert min_separating_cut(build(3, 3, [(1, 2, 3)]), 1, 3) == 1
    assert min_separating_cut(build(3, 2, [(1, 3)]), 1, 3) == 2


def brute_pair_cut(H, u, w):
    others = [v for v in H.sorted_vertices() if v not in (u, w)]
    for r in range(len(others) + 1):
        for S in combinations(others, r):
            G = delete_vertices(H, S)
            blocks = connected_components(G).blocks
            if not any(u in b and w in b for b in blocks):
                return r
    return H.n - 1


def test_pair_cut_against_brute_force():
    rng = random.Random(3)
    done = 0
    while done < 200:
        d = rng.choice([2, 3, 4])
        n = rng.randint(d, 9)
        H = random_hypergraph(rng, n, d)
        if n < 2:
            continue
        u, w = rng.sample(range(1, n + 1), 2)
        assert min_separating_cut(H, u, w) == brute_pair_cut(H, u, w), (H.edges, u, w)
        done += 1


@settings(max_examples=300, deadline=None)
@given(hypergraphs(max_n=9))
def test_matches_definition(H):
    for k in range(1, 5):
        ok, w = k_connectivity(H, k)
        assert ok == brute_force_is_k_connected(H, k)
        if w is not None:
            assert len(w.separator) < k and w.verify(H)


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_n=8))
def test_monotone_in_k(H):
    flags = [is_k_connected(H, k) for k in range(1, 6)]
    assert flags == sorted(flags, reverse=True)


@settings(max_examples=100, deadline=None)
@given(hypergraphs(max_n=8))
def test_vertex_connectivity_bounded_by_min_transversal(H):
    # deleting a transversal of v's link isolates v whenever something remains
    kappa = vertex_connectivity(H)
    for v in H.vertices:
        t, _ = min_transversal(H, v)
        if H.n - 1 - t >= 1:
            assert kappa <= t
    assert (kappa >= 1) == (H.n >= 2 and connected_components(H).is_connected())


def test_witness_helpers():
    H = build(5, 3, [(1, 2, 3), (3, 4, 5)])
    w = find_separator(H, 2)
    assert len(w.separator) == 1 and w.verify(H)
    assert w.to_dict()["separator"] == sorted(w.separator)
    inside, outside = min(w.side), min(w.other_side(H))
    bridge = tuple(sorted({inside, outside} | (H.vertices - w.separator - {inside, outside}))[:3])
    assert w.broken_by(bridge)
    assert not w.broken_by(tuple(sorted({min(w.separator), inside, outside})))
    assert not CutWitness(frozenset(), frozenset()).verify(H)


def test_property_q_examples():
    assert check_property_Q(complete(6, 3), 2, budget=1)
    assert not check_property_Q(empty(6, 3), 1, budget=4)
    cliques = [e for e in complete(4, 3).edges] + [tuple(v + 4 for v in e) for e in complete(4, 3).edges]
    assert not check_property_Q(build(8, 3, cliques), 1, budget=2)
    with pytest.raises(ScaleGuardError):
        check_property_Q(empty(501, 3), 1)


def test_separated_pairs():
    H = build(4, 3, [(1, 2, 3)])
    assert list(separated_pairs(H)) == [(1, 4), (2, 4), (3, 4)]
