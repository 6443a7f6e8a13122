import random

import networkx as nx
from hypothesis import given, settings, strategies as st

from brute import nxg
from planext.catalog import complete, cube, dodecahedron, v8, w_graph
from planext.instances import planted_instance, random_planar_3c, subdivide_randomly
from planext.subdivision import (CHORD_EDGE, RIGID, UNSTABLE, HomeomorphicEmbedding, bridges,
                                 find_subdivision, identity_embedding, is_two_separated,
                                 recover_segments, rigid_potential, stabilize)


def long_segment_instance():
    """K4 with edge 01 stretched to 0-10-11-12-13-1, a chord 10-13 and an escape 11-20-2."""
    g = complete(4)
    h = g.remove_edges([(0, 1)]).add_edges([(0, 10), (10, 11), (11, 12), (12, 13), (13, 1)])
    host = h.add_edges([(10, 13), (11, 20), (20, 2)])
    em = {e: e for e in g.edges if e != (0, 1)}
    em[(0, 1)] = (0, 10, 11, 12, 13, 1)
    return HomeomorphicEmbedding(g, host, {v: v for v in g.vertices}, em)


def brute_two_separated(eta, b) -> bool:
    """Two vertices of one segment cut the bridge and the span between them off every branch vertex."""
    h = nxg(eta.host)
    branch = set(eta.vertex_map.values())
    for z in eta.edge_map.values():
        for i in range(len(z)):
            for j in range(i + 1, len(z)):
                span = set(z[i:j + 1])
                if not b.attachments <= span:
                    continue
                cut = {z[i], z[j]}
                rest = h.subgraph(set(h) - cut)
                seeds = (b.vertices | span) - cut
                reach = set().union(*(nx.node_connected_component(rest, s) for s in seeds)) if seeds else set()
                if not reach & branch:
                    return True
    return False


def test_find_subdivision_examples():
    c = cube()
    eta = find_subdivision(c, c)
    assert eta is not None and eta.is_valid()
    assert eta.image() == c
    eta = find_subdivision(c, w_graph())
    assert eta is not None and eta.is_valid()
    assert w_graph().size() - eta.image().size() == 1
    assert find_subdivision(v8(), c) is None


def test_bridges_examples():
    c = cube()
    assert bridges(identity_embedding(c)) == []
    eta = identity_embedding(c, w_graph())
    (b,) = bridges(eta)
    assert b.kind == CHORD_EDGE and b.tag == RIGID
    assert nx.shortest_path_length(nxg(c), *sorted(b.attachments)) == 3
    sub = subdivide_randomly(c, random.Random(0), 0)
    stretched = HomeomorphicEmbedding(c, c.remove_edges([(0, 1)]).add_edges([(0, 10), (10, 11), (11, 1), (0, 11)]),
                                      sub.vertex_map, {**sub.edge_map, (0, 1): (0, 10, 11, 1)})
    (b,) = bridges(stretched)
    assert b.kind == CHORD_EDGE and b.tag == UNSTABLE


def test_two_separated_examples():
    eta = long_segment_instance()
    tags = {frozenset(b.attachments): b for b in bridges(eta)}
    chord = tags[frozenset({10, 13})]
    escape = tags[frozenset({11, 2})]
    assert not is_two_separated(eta, chord)      # the escape leaves the chord's span
    assert not is_two_separated(eta, escape)     # rigid
    quiet = HomeomorphicEmbedding(eta.source, eta.host.remove_vertices([20]), eta.vertex_map, eta.edge_map)
    (b,) = bridges(quiet)
    assert is_two_separated(quiet, b)


def test_stabilize_examples():
    c = cube()
    eta, log = stabilize(identity_embedding(c, w_graph()))
    assert log == []
    eta0 = long_segment_instance()
    before = rigid_potential(eta0)
    eta, log = stabilize(eta0)
    assert len(log) == 1 and log[0].kind == "I" and log[0].proper
    assert eta.is_valid() and rigid_potential(eta) > before
    assert eta.segment((0, 1)) == (0, 10, 13, 1)


def test_segments_recoverable_from_image():
    rng = random.Random(4)
    for g in (cube(), dodecahedron(), random_planar_3c(10, rng)):
        eta = subdivide_randomly(g, rng, 12)
        branch, segs = recover_segments(eta.image())
        assert branch == eta.branch_vertices()
        assert segs == sorted(tuple(p) for p in eta.edge_map.values())


def test_embedding_text_round_trip():
    eta = subdivide_randomly(cube(), random.Random(1), 5)
    again = HomeomorphicEmbedding.from_text(eta.to_text(), eta.source, eta.host)
    assert again == eta


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_bridges_partition_the_non_s_edges(seed):
    rng = random.Random(seed)
    eta = planted_instance(rng.choice([complete(4), cube()]), rng)
    s = eta.image()
    owner = {}
    for b in bridges(eta):
        assert b.attachments <= s.vertices
        for e in b.edges:
            assert e not in owner
            owner[e] = b
    assert set(owner) == set(eta.host.edges) - set(s.edges)


@settings(max_examples=60)
@given(st.integers(0, 10**6))
def test_stabilize_postconditions(seed):
    rng = random.Random(seed)
    g = rng.choice([complete(4), cube(), random_planar_3c(6, rng)])
    eta0 = planted_instance(g, rng, bridges=6, max_vertices=24)
    eta, log = stabilize(eta0)
    assert eta.is_valid()
    for b in bridges(eta):
        if b.is_unstable:
            assert is_two_separated(eta, b)
    cur = eta0
    from planext.rerouting import replay_one
    for r in log:
        nxt = replay_one(cur, r)
        assert rigid_potential(nxt) > rigid_potential(cur)
        cur = nxt
    assert cur == eta


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_two_separation_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    eta = planted_instance(rng.choice([complete(4), cube()]), rng, bridges=5, max_vertices=20)
    for b in bridges(eta):
        if b.is_unstable:
            assert is_two_separated(eta, b) == brute_two_separated(eta, b)
