import random
from itertools import combinations

from hypothesis import given, settings, strategies as st

from planext.catalog import complete, cube, prism
from planext.certificates import brute_faces
from planext.disksystem import disk_system_for, image_cycle
from planext.graph import Graph
from planext.instances import planted_instance, random_planar_3c
from planext.patterns import (ALL_IN_ONE_DISK, DETACHED_K4_WITNESS, FREE, JUMP_WITNESS, NOT_FREE,
                              TRIAD_WITNESS, SCross, SJump, STripod, classify_bridge_against_disks,
                              cross_freedom, find_cross, find_jump, find_triad, find_tripod,
                              find_tunnel, iter_crosses, iter_triads, triad_center)
from planext.subdivision import HomeomorphicEmbedding, bridges, embedding_from_paths

CUBE = cube()


def ident(h, g=CUBE):
    return HomeomorphicEmbedding(g, h, {v: v for v in g.vertices}, {e: e for e in g.edges})


def with_ds(eta):
    return eta, disk_system_for(eta)


def subdivide_all(g):
    """Every edge of g subdivided once, midpoints numbered after the branch vertices in edge order."""
    nxt = max(g.vertices) + 1
    paths = []
    for u, v in g.sorted_edges():
        paths.append((u, nxt, v))
        nxt += 1
    s = Graph(range(nxt), [ab for p in paths for ab in zip(p, p[1:])])
    return embedding_from_paths(g, s, {v: v for v in g.vertices}, paths)


def stretched_cube(extra):
    """Cube with segment 01 drawn as 0-10-11-12-1."""
    em = {e: e for e in CUBE.edges}
    em[(0, 1)] = (0, 10, 11, 12, 1)
    h = CUBE.remove_edges([(0, 1)]).add_edges([(0, 10), (10, 11), (11, 12), (12, 1)]).add_edges(extra)
    return HomeomorphicEmbedding(CUBE, h, {v: v for v in range(8)}, em)


TRIPOD_EDGES = [(10, 20), (20, 12), (20, 30), (30, 11), (30, 3)]


# --- jumps and crosses --------------------------------------------------------------

def test_long_diagonal_is_a_jump():
    eta, ds = with_ds(ident(CUBE.add_edges([(0, 7)])))
    j = find_jump(eta, ds)
    assert j == SJump((0, 7))
    assert j.violations(eta, ds) == []


def test_face_chord_is_no_jump():
    eta, ds = with_ds(ident(CUBE.add_edges([(0, 3)])))
    assert find_jump(eta, ds) is None
    assert SJump((0, 3)).violations(eta, ds) == ["a disk contains both ends"]


def test_crossing_face_chords_form_a_free_cross():
    eta, ds = with_ds(ident(CUBE.add_edges([(0, 3), (1, 2)])))
    cr = find_cross(eta, ds, require=FREE)
    assert cr is not None and cr.freedom == FREE
    assert sorted(map(sorted, cr.paths)) == [[0, 3], [1, 2]]
    assert sorted(cr.disk) == [0, 1, 2, 3]
    assert cr.violations(eta, ds) == []


def test_parallel_chords_do_not_cross():
    # 0-3 and 4-7 lie in different faces
    eta, ds = with_ds(ident(CUBE.add_edges([(0, 3), (4, 7)])))
    assert find_cross(eta, ds) is None


def test_overclaimed_freedom_is_reported():
    eta = stretched_cube(TRIPOD_EDGES)
    ds = disk_system_for(eta)
    cr = find_cross(eta, ds)
    # feet 10 and 12 sit on one segment
    assert cr.freedom == NOT_FREE
    fake = SCross(cr.paths, cr.disk, cr.feet, FREE)
    assert any("claimed Free" in v for v in fake.violations(eta, ds))


def test_cross_freedom_on_one_segment_is_none():
    eta = stretched_cube([])
    assert cross_freedom(eta, (10, 12), (11, 3)) == NOT_FREE


# --- triads ------------------------------------------------------------------------------

def test_local_triad_around_a_cube_corner():
    eta, ds = with_ds(ident(CUBE.add_edges([(8, 1), (8, 2), (8, 4)])))
    t = find_triad(eta, ds)
    assert t.hub == 8 and t.feet == (1, 2, 4)
    assert t.local and t.center == 0
    assert t.violations(eta, ds) == []


def test_non_local_triad_in_a_prism():
    base = subdivide_all(prism())
    mids = {tuple(sorted((p[0], p[-1]))): p[1] for p in base.edge_map.values()}
    feet = (0, mids[(1, 4)], mids[(2, 5)])
    hub = max(base.host.vertices) + 1
    h = base.host.add_edges((hub, f) for f in feet)
    eta, ds = with_ds(HomeomorphicEmbedding(base.source, h, base.vertex_map, base.edge_map))
    t = find_triad(eta, ds)
    assert t is not None and set(t.feet) == set(feet)
    assert not t.local
    assert t.violations(eta, ds) == []


def test_triad_feet_in_a_k4_subdivision_are_always_local():
    eta = subdivide_all(complete(4))
    ds = disk_system_for(eta)
    s = sorted(eta.host.vertices)
    count = 0
    for f in combinations(s, 3):
        if all(ds.shares_disk(a, b) for a, b in combinations(f, 2)) and not ds.shares_disk(*f):
            assert triad_center(eta, f) is not None
            count += 1
    assert count > 0


# --- bridge classification -------------------------------------------------------------

def classify_only_bridge(extra, g=CUBE):
    eta = ident(g.add_edges(extra), g)
    ds = disk_system_for(eta)
    (b,) = [b for b in bridges(eta)]
    return classify_bridge_against_disks(eta, ds, b)


def test_classification_of_single_bridges():
    assert classify_only_bridge([(0, 3)]).tag == ALL_IN_ONE_DISK
    assert classify_only_bridge([(0, 7)]).tag == JUMP_WITNESS
    assert classify_only_bridge([(8, 1), (8, 2), (8, 4)]).tag == TRIAD_WITNESS


def test_detached_k4_witness():
    k4 = complete(4)
    cls = classify_only_bridge([(4, v) for v in range(4)], k4)
    assert cls.tag == DETACHED_K4_WITNESS
    assert cls.witness.branch == (0, 1, 2, 3)


# --- tripods and tunnels ------------------------------------------------------------------

def test_tripod_on_a_stretched_segment():
    eta = stretched_cube(TRIPOD_EDGES)
    t = find_tripod(eta)
    assert t.base == (0, 10, 11, 12, 1)
    assert t.feet == (10, 12, 11, 3)
    assert t.violations(eta) == []
    assert t.leg_sum() == 3
    assert find_tunnel(eta, disk_system_for(eta)) is None


def test_tripod_feet_out_of_order():
    eta = stretched_cube(TRIPOD_EDGES)
    t = find_tripod(eta)
    bad = STripod(t.base, t.paths, (12, 10, 11, 3))
    assert bad.violations(eta)


def test_tunnel_needs_a_path_into_the_other_disk():
    eta = stretched_cube(TRIPOD_EDGES + [(11, 5)])
    ds = disk_system_for(eta)
    tn = find_tunnel(eta, ds)
    assert tn is not None and tn.p4 == (11, 5)
    assert 3 in tn.disk and 3 not in tn.other_disk
    assert tn.violations(eta, ds) == []


# --- soundness against brute-force disks --------------------------------------------------

def brute_disks(eta):
    return [set(image_cycle(eta, c)) for c in brute_faces(eta.source)]


def cofacial(disks, *xs):
    return any(all(x in d for x in xs) for d in disks)


@settings(max_examples=40)
@given(st.integers(5, 8), st.integers(0, 10**6))
def test_found_patterns_are_sound(n, seed):
    rng = random.Random(seed)
    eta = planted_instance(random_planar_3c(n, rng), rng, bridges=4, max_vertices=18)
    ds = disk_system_for(eta)
    disks = brute_disks(eta)
    j = find_jump(eta, ds)
    if j is None:
        for b in bridges(eta):
            assert all(cofacial(disks, x, y) for x, y in combinations(b.attachments, 2))
    else:
        assert j.violations(eta, ds) == []
        assert not cofacial(disks, *j.ends)
    for cr in iter_crosses(eta, ds):
        assert cr.violations(eta, ds) == []
    for t in iter_triads(eta, ds):
        assert t.violations(eta, ds) == []
        assert not cofacial(disks, *t.feet)
