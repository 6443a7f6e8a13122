import networkx as nx
import pytest
from hypothesis import given, settings

from planext.catalog import complete, complete_bipartite, cube, mobius_ladder, petersen, v8, w_graph
from planext.graph import BudgetExhausted, Graph
from planext.oracle import (MinorModel, contract_model, has_minor, has_topological_minor,
                            kuratowski_planar, model_from_subdivision, twin_classes)
from planext.subdivision import find_subdivision

from conftest import graphs

K5 = complete(5)
K33 = complete_bipartite(3, 3)


def test_petersen_has_k5_only_as_a_minor():
    # cubic graphs cannot hold a K5 subdivision
    assert has_minor(K5, petersen()).is_valid()
    assert has_topological_minor(K5, petersen()) is None


def test_small_facts():
    assert has_minor(complete(4), cube()) is not None
    assert has_topological_minor(K33, v8()) is not None
    assert has_minor(v8(), cube()) is None
    assert has_minor(v8(), cube().add_edges([(0, 3), (1, 2)])) is not None
    assert has_minor(K5, K33) is None


def test_mobius_ladder_with_three_rungs_is_k33():
    assert nx.is_isomorphic(nx.Graph(sorted(mobius_ladder(3).edges)), nx.Graph(sorted(K33.edges)))


def test_model_violations():
    host = cube()
    assert model_from_subdivision(find_subdivision(complete(4), host)).violations() == []
    tri = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
    sets = {0: frozenset({0}), 1: frozenset({1}), 2: frozenset({3})}
    assert MinorModel(tri, host, sets).violations() == ["no host edge between branch sets of 0 and 2"]
    sets = {0: frozenset({0, 7}), 1: frozenset({1}), 2: frozenset({3})}
    assert "branch set of 0 is not connected" in MinorModel(tri, host, sets).violations()
    sets = {0: frozenset({0, 1}), 1: frozenset({1}), 2: frozenset({3})}
    assert any("overlap" in v for v in MinorModel(tri, host, sets).violations())


def test_model_text_round_trip_and_contraction():
    model = has_minor(K33, w_graph())
    again = MinorModel.from_text(model.to_text(), K33, w_graph())
    assert again.branch_sets == model.branch_sets
    assert set(K33.edges) <= set(contract_model(model).edges)


def test_twin_classes():
    assert sorted(map(sorted, twin_classes(K33))) == [[0, 1, 2], [3, 4, 5]]
    assert sorted(map(sorted, twin_classes(K5))) == [[0, 1, 2, 3, 4]]
    assert twin_classes(cube()) == []


def test_budget_exhaustion():
    with pytest.raises(BudgetExhausted):
        has_minor(v8(), cube(), budget=10)


@settings(max_examples=40)
@given(graphs(5, 8))
def test_kuratowski_search_agrees_with_networkx(g):
    assert kuratowski_planar(g) == nx.check_planarity(nx.Graph(sorted(g.edges)))[0]


@settings(max_examples=30)
@given(graphs(4, 7))
def test_topological_minor_is_a_minor(g):
    for pattern in (complete(4), complete_bipartite(2, 3)):
        top = has_topological_minor(pattern, g)
        if top is not None:
            assert top.is_valid()
            assert model_from_subdivision(top).is_valid()
            assert has_minor(pattern, g) is not None
