import pytest
from hypothesis import given, strategies as st

from brute import almost_four, cuts, internally_four, three_connected
from conftest import graphs
from planext.catalog import complete, cube, path, prism
from planext.graph import (Graph, GraphError, Separation, enumerate_separations,
                           is_almost_four_connected, is_internally_four_connected,
                           is_three_connected, norm_edge, topological_reduction)

# frozen from tools/derive_fixtures.py (exhaustive cut enumeration)
CUBE_THREE_CUTS = {(0, 3, 5), (0, 3, 6), (0, 5, 6), (1, 2, 4), (1, 2, 7), (1, 4, 7), (2, 4, 7), (3, 5, 6)}


def two_k4_on_a_triangle() -> Graph:
    es = [(0, 1), (0, 2), (1, 2), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 3),
          (5, 0), (5, 1), (5, 2), (6, 1), (6, 2), (6, 5)]
    return Graph(range(7), es)


def test_graph_rejects_loops_and_negative_ids():
    with pytest.raises(GraphError):
        Graph([0], [(0, 0)])
    with pytest.raises(GraphError):
        Graph([-1])


def test_transforms_return_new_graphs():
    g = complete(4)
    h = g.remove_edges([(0, 1)])
    assert g.has_edge(0, 1) and not h.has_edge(0, 1)
    assert g.subdivide_edge(0, 1, 9).degree(9) == 2
    assert g.contract_edge(0, 1).order() == 3


def test_three_connected_examples():
    assert is_three_connected(complete(4))
    assert not is_three_connected(path(3))
    assert is_three_connected(cube())


def test_almost_four_connected_examples():
    assert is_almost_four_connected(complete(5))
    assert is_almost_four_connected(cube())
    assert not is_almost_four_connected(two_k4_on_a_triangle())


def test_internally_four_connected_examples():
    assert is_internally_four_connected(cube())
    assert is_internally_four_connected(complete(5))
    assert not is_internally_four_connected(prism())


def test_small_graphs_fail_both_four_connectivity_variants():
    assert not is_almost_four_connected(complete(4))
    assert not is_internally_four_connected(complete(4))


def test_k4_has_no_separation_with_two_private_sides():
    # the only order-3 splits of K4 are (N[v], N(v)), whose second side has no private vertex
    assert enumerate_separations(complete(4), 3) == []
    assert all(len(s.cut) <= 3 for s in enumerate_separations(complete(5), 4))


def test_cube_separations():
    assert enumerate_separations(cube(), 2) == []
    seps = enumerate_separations(cube(), 3)
    assert {tuple(sorted(s.cut)) for s in seps} == CUBE_THREE_CUTS
    assert len(seps) == 8


def test_separation_validity():
    g = path(3)
    assert Separation(frozenset({0, 1}), frozenset({1, 2})).is_valid_for(g)
    assert not Separation(frozenset({0}), frozenset({1, 2})).is_valid_for(g)


def test_topological_reduction_recovers_k4():
    g = complete(4).subdivide_edge(0, 1, 10).subdivide_edge(10, 1, 11)
    assert topological_reduction(g) == complete(4)
    assert topological_reduction(path(4)) is None


@given(graphs(max_n=9, density=0.6))
def test_connectivity_agrees_with_brute_force(g):
    assert is_three_connected(g) == three_connected(g)
    assert is_almost_four_connected(g) == almost_four(g)
    assert is_internally_four_connected(g) == internally_four(g)


@given(graphs(min_n=5, max_n=10, density=0.7))
def test_internally_four_connected_implies_almost(g):
    if is_internally_four_connected(g):
        assert is_almost_four_connected(g)


@given(graphs(min_n=2, max_n=8, density=0.5), st.integers(0, 3))
def test_separation_orders_match_cut_sets(g, k):
    seps = enumerate_separations(g, k)
    orders = {s.order for s in seps}
    for j in range(k + 1):
        # a proper separation of order j exists iff removing some j vertices disconnects,
        # or (order 0) the graph itself is disconnected
        if j == 0:
            expect = len(g.components()) > 1
        else:
            expect = bool(cuts(g, j))
        assert (j in orders) == expect
    for s in seps:
        assert s.is_valid_for(g)


@given(graphs(max_n=8))
def test_edges_are_normalised(g):
    assert all(u < v and norm_edge(v, u) == (u, v) for u, v in g.edges)
