import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from brute import is_planar_nx, nxg, two_disjoint_paths
from conftest import graphs
from planext.catalog import complete, cube, dodecahedron, v8, w_graph
from planext.certificates import brute_faces
from planext.graph import Graph, PreconditionError
from planext.instances import random_planar_3c
from planext.oracle import kuratowski_planar
from planext.planarity import (CROSSING_PATHS, EMBEDDING_WITH_FACIAL_C, SMALL_SEPARATION,
                               canonical_cycle, check_two_paths_outcome, cofacial_vertices,
                               disk_embeddable, interleaved, is_planar, peripheral_cycles,
                               planar_embedding, two_paths_trichotomy)

# frozen from tools/derive_fixtures.py
DODECA_FAR_PAIR = (0, 15)   # distance 5, no common face by brute-force face enumeration


def test_is_planar_examples():
    assert is_planar(cube())
    assert not is_planar(v8())
    assert not is_planar(w_graph())


def test_peripheral_cycles_examples():
    faces = peripheral_cycles(cube())
    assert len(faces) == 6 and all(len(f) == 4 for f in faces)
    assert sorted(len(f) for f in peripheral_cycles(complete(4))) == [3, 3, 3, 3]
    faces = peripheral_cycles(dodecahedron())
    assert len(faces) == 12 and {len(f) for f in faces} == {5}


def test_peripheral_cycles_need_planar_three_connected():
    with pytest.raises(PreconditionError):
        peripheral_cycles(v8())


def test_cofacial_examples():
    c = cube()
    assert cofacial_vertices(c, 0, 1)
    assert not cofacial_vertices(c, 0, 7)
    assert not cofacial_vertices(dodecahedron(), *DODECA_FAR_PAIR)


def test_two_paths_examples():
    c = cube()
    for f in peripheral_cycles(c):
        assert two_paths_trichotomy(c, f).tag == EMBEDDING_WITH_FACIAL_C
    out = two_paths_trichotomy(complete(5), (0, 1, 2, 3))
    assert out.tag == CROSSING_PATHS
    assert check_two_paths_outcome(complete(5), (0, 1, 2, 3), out)
    g = complete(4).subdivide_edge(0, 1, 10).subdivide_edge(10, 1, 11)
    assert two_paths_trichotomy(g, (0, 10, 11, 1, 2)).tag == EMBEDDING_WITH_FACIAL_C


def test_small_separation_outcome():
    # a K5 hanging off a cycle through three cut vertices cannot be drawn in a disk
    c = [0, 1, 2, 3, 4, 5]
    g = Graph(range(8), [(i, (i + 1) % 6) for i in range(6)])
    g = g.add_edges([(0, 6), (2, 6), (4, 6), (0, 7), (2, 7), (4, 7), (6, 7)])
    g = g.add_edges([(0, 2), (2, 4), (0, 4)])
    out = two_paths_trichotomy(g, c)
    assert out.tag in (SMALL_SEPARATION, CROSSING_PATHS)
    assert check_two_paths_outcome(g, c, out)


def test_disk_embeddable_examples():
    assert disk_embeddable(Graph(range(3), [(0, 1), (1, 2)]), [0, 2])
    assert disk_embeddable(complete(4), [0, 1, 2])
    assert not disk_embeddable(complete(4), [0, 1, 2, 3])


def test_interleaving():
    c = (0, 1, 2, 3)
    assert interleaved(c, (0, 2), (1, 3))
    assert not interleaved(c, (0, 1), (2, 3))


def test_embedding_rotation_traces_faces():
    emb = planar_embedding(cube())
    assert emb is not None and emb.is_valid()
    assert len(emb.face_cycles()) == 6


def corpus(seed: int, count: int):
    rng = random.Random(seed)
    return [random_planar_3c(rng.randint(5, 14), rng) for _ in range(count)]


@pytest.mark.parametrize("g", corpus(1, 25), ids=lambda g: f"n{g.order()}m{g.size()}")
def test_faces_equal_brute_force_peripheral_cycles(g):
    assert sorted(peripheral_cycles(g)) == sorted(canonical_cycle(c) for c in brute_faces(g))


@pytest.mark.parametrize("g", [complete(4), cube(), dodecahedron()] + corpus(2, 10))
def test_faces_meet_in_nothing_a_vertex_or_an_edge(g):
    faces = peripheral_cycles(g)
    for a, b in combinations(faces, 2):
        common = set(a) & set(b)
        assert len(common) <= 2
        if len(common) == 2:
            assert g.has_edge(*common)


@settings(max_examples=40)
@given(graphs(max_n=8, density=0.55))
def test_planarity_agrees_with_kuratowski_oracle(g):
    assert is_planar(g) == kuratowski_planar(g) == is_planar_nx(g)


def expected_tag(g: Graph, c) -> str:
    """Brute-force trichotomy with the preference order (i), (iii), (ii)."""
    hub = max(g.vertices) + 1
    apexed = nxg(g)
    apexed.add_edges_from((hub, x) for x in c)
    import networkx as nx
    if nx.check_planarity(apexed)[0]:
        return EMBEDDING_WITH_FACIAL_C
    outside = set(g.vertices) - set(c)
    n = len(c)
    for i, j, k, l in combinations(range(n), 4):
        for p, q in (((c[i], c[k]), (c[j], c[l])),):
            if two_disjoint_paths(g, (p, q), outside):
                return CROSSING_PATHS
    return SMALL_SEPARATION


@settings(max_examples=40)
@given(st.integers(5, 9), st.integers(0, 10**6))
def test_two_paths_trichotomy_matches_brute_force(n, seed):
    rng = random.Random(seed)
    c = list(range(n))
    g = Graph(range(n), [(i, (i + 1) % n) for i in range(n)])
    extra = rng.randint(0, 3)
    g = g.add_vertices(range(n, n + extra))
    for _ in range(rng.randint(1, 2 * n)):
        a, b = rng.sample(sorted(g.vertices), 2)
        if not (a in c and b in c and abs(a - b) in (1, n - 1)):
            g = g.add_edges([(a, b)])
    out = two_paths_trichotomy(g, c)
    assert out.tag == expected_tag(g, c)
    assert check_two_paths_outcome(g, c, out)
