import random

import pytest
from hypothesis import given, settings, strategies as st

from planext.catalog import complete, cube
from planext.graph import Graph, norm_edge
from planext.instances import planted_instance, random_planar_3c
from planext.rerouting import (ProperViolation, ReroutingError, apply_i_rerouting,
                               apply_t_rerouting, apply_triad_exchange, apply_v_rerouting,
                               apply_x_rerouting, format_log, is_f_safe, parse_log, replay)
from planext.subdivision import HomeomorphicEmbedding, stabilize
from test_disksystem import octahedron_x_instance

K4 = complete(4)


def k4_midpoints(extra_edges=()):
    """K4 with every edge subdivided once; the midpoint of uv is 10 + 4u + v."""
    em = {}
    es = []
    for u, v in K4.sorted_edges():
        m = 10 + 4 * u + v
        em[(u, v)] = (u, m, v)
        es += [(u, m), (m, v)]
    host = Graph(range(4), es).add_edges(extra_edges)
    return HomeomorphicEmbedding(K4, host, {v: v for v in range(4)}, em)


def mid(u, v):
    u, v = norm_edge(u, v)
    return 10 + 4 * u + v


def stretched(extra=()):
    """K4 with segment 01 drawn as 0-10-11-12-1."""
    em = {e: e for e in K4.edges}
    em[(0, 1)] = (0, 10, 11, 12, 1)
    host = K4.remove_edges([(0, 1)]).add_edges([(0, 10), (10, 11), (11, 12), (12, 1)]).add_edges(extra)
    return HomeomorphicEmbedding(K4, host, {v: v for v in range(4)}, em)


def test_i_rerouting_through_a_chord():
    eta = stretched([(10, 12)])
    out, r = apply_i_rerouting(eta, (0, 1), 10, 12, (10, 12), check_proper=True)
    assert out.segment((0, 1)) == (0, 10, 12, 1)
    assert r.proper and out.is_valid()
    assert out.image().order() == eta.image().order() - 1


def test_proper_i_rerouting_rejects_outside_attachment():
    eta = stretched([(10, 20), (20, 12), (20, 2)])
    with pytest.raises(ProperViolation):
        apply_i_rerouting(eta, (0, 1), 10, 12, (10, 20, 12), check_proper=True)
    out, r = apply_i_rerouting(eta, (0, 1), 10, 12, (10, 20, 12))
    assert not r.proper and out.is_valid()


def test_i_rerouting_needs_two_edges():
    eta = k4_midpoints()
    with pytest.raises(ReroutingError):
        apply_i_rerouting(HomeomorphicEmbedding(K4, K4, {v: v for v in range(4)}, {e: e for e in K4.edges}),
                          (0, 1), 0, 1, (0, 1))
    assert eta.is_valid()


def test_t_rerouting_moves_the_branch_vertex():
    eta = k4_midpoints([(mid(0, 1), 30), (30, mid(0, 2))])
    out, r = apply_t_rerouting(eta, 0, (0, 1), (0, 2), mid(0, 1), mid(0, 2), (mid(0, 1), 30, mid(0, 2)))
    assert out.vertex_map[0] == mid(0, 2) and out.is_valid()
    with pytest.raises(ReroutingError):
        apply_t_rerouting(eta, 0, (0, 1), (0, 2), mid(0, 1), 2, (mid(0, 1), 30, mid(0, 2)))
    with pytest.raises(ReroutingError):
        apply_t_rerouting(eta, 0, (0, 1), (0, 2), 0, mid(0, 2), (0, 30, mid(0, 2)))


def test_x_rerouting_exchanges_segments():
    eta = octahedron_x_instance()
    out, r = apply_x_rerouting(eta, 0, (0, 1), (0, 3), (11, 20, 12), (10, 21, 13))
    assert out.is_valid()
    assert out.segment((0, 1)) == (0, 12, 20, 11, 1)
    assert out.segment((0, 3)) == (0, 10, 21, 13, 3)
    with pytest.raises(ReroutingError):
        apply_x_rerouting(eta, 0, (0, 1), (0, 3), (11, 20, 12), (11, 20, 12))
    with pytest.raises(ReroutingError):
        apply_x_rerouting(k4_midpoints(), 0, (0, 1), (0, 2), (mid(0, 1), mid(0, 2)), (1, 2))


def test_v_rerouting_needs_degree_four():
    with pytest.raises(ReroutingError):
        apply_v_rerouting(k4_midpoints(), 0, (0, 1), (0, 2), False, 0, 1, (0, 1))


def test_triad_exchange_and_back():
    hub = 30
    eta = k4_midpoints([(hub, mid(0, 1)), (hub, mid(0, 2)), (hub, mid(0, 3))])
    paths = [(hub, mid(0, k)) for k in (1, 2, 3)]
    out, r = apply_triad_exchange(eta, 0, hub, paths)
    assert out.vertex_map[0] == hub and out.is_valid()
    back, _ = apply_triad_exchange(out, 0, 0, [(0, mid(0, k)) for k in (1, 2, 3)])
    assert back == eta


def test_triad_exchange_rejects_non_local_input():
    hub = 30
    eta = k4_midpoints([(hub, mid(0, 1)), (hub, mid(1, 2)), (hub, mid(0, 3))])
    with pytest.raises(ReroutingError):
        apply_triad_exchange(eta, 0, hub, [(hub, mid(0, 1)), (hub, mid(1, 2)), (hub, mid(0, 3))])


def test_f_safety_rules():
    eta = stretched([(10, 12)])
    _, r = apply_i_rerouting(eta, (0, 1), 10, 12, (10, 12), check_proper=True)
    assert is_f_safe(r, eta, K4.edges)
    eta = k4_midpoints([(mid(0, 1), 30), (30, mid(0, 2))])
    _, r = apply_t_rerouting(eta, 0, (0, 1), (0, 2), mid(0, 1), mid(0, 2), (mid(0, 1), 30, mid(0, 2)))
    assert not is_f_safe(r, eta, [(0, 3)])
    assert is_f_safe(r, eta, [(1, 2)])
    eta = octahedron_x_instance()
    _, r = apply_x_rerouting(eta, 0, (0, 1), (0, 3), (11, 20, 12), (10, 21, 13))
    assert not is_f_safe(r, eta, [(0, 1)])
    assert is_f_safe(r, eta, [(2, 5)])


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_logs_replay_exactly_from_text(seed):
    rng = random.Random(seed)
    eta0 = planted_instance(rng.choice([cube(), random_planar_3c(7, rng)]), rng, bridges=6)
    eta, log = stabilize(eta0)
    again = replay(eta0, parse_log(format_log(log)))
    assert again == eta
    for r in log:
        assert r.kind == "I" and r.proper


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_random_i_reroutings_keep_embeddings_valid(seed):
    rng = random.Random(seed)
    eta = planted_instance(rng.choice([cube(), complete(4)]), rng, bridges=6)
    from planext.subdivision import bridges
    for b in bridges(eta):
        if b.is_unstable and len(b.attachments) >= 2:
            x, y = sorted(b.attachments)[:2]
            q = b.path(eta.host, x, y)
            if q is None or eta.segment(b.segment).index(x) == -1:
                continue
            try:
                out, r = apply_i_rerouting(eta, b.segment, x, y, q)
            except ReroutingError:
                continue
            assert out.is_valid() and out.source == eta.source
