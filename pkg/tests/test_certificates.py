import copy
import random
from itertools import combinations

import pytest

from planext.apex import Mold, pinwheel_mold, run_oneapex
from planext.catalog import complete, cube, planar_ladder, w_graph
from planext.certificates import (Certificate, CertificateError, apex_certificate,
                                  extension_minor_certificate, outcome_certificate,
                                  subdivision_certificate, verify, verify_text)
from planext.disksystem import disk_system_for
from planext.engine import (FREE_CROSS, ExtensionOutcome, cube_application, outcome_to_minor,
                            run_main, run_summary)
from planext.graph import Graph
from planext.instances import apex_host, near_planar_host
from planext.patterns import FREE, find_cross
from planext.subdivision import HomeomorphicEmbedding

CUBE = cube()
K4_BLOB = list(combinations(range(8, 12), 2)) + [(a, b) for a in (0, 1, 3) for b in range(8, 12)]


def ident(h, g=CUBE):
    return HomeomorphicEmbedding(g, h, {v: v for v in g.vertices}, {e: e for e in g.edges})


def jump_cert():
    return outcome_certificate(run_main(ident(w_graph())))


def cross_cert():
    return outcome_certificate(run_main(ident(CUBE.add_edges([(0, 3), (1, 2)]))))


def separation_cert():
    eta = ident(CUBE.add_edges(K4_BLOB))
    return outcome_certificate(run_summary(eta, disk_system_for(eta)))


def logged_cert():
    # a searched subdivision that needs one rerouting (see the engine tests)
    rng = random.Random(194)
    eta = near_planar_host(CUBE, rng, n=rng.randint(10, 16), crossings=rng.randint(1, 2))
    return outcome_certificate(run_main(eta))


def minor_cert():
    out = run_main(ident(w_graph()))
    g2, model, info = outcome_to_minor(out)
    return extension_minor_certificate(g2, model, info, CUBE)


def k4_midpoints_cert():
    """K4 with each edge subdivided once, plus two spare edges from the 01 midpoint."""
    k4 = complete(4)
    em, es = {}, []
    for u, v in k4.sorted_edges():
        m = 10 + 4 * u + v
        em[(u, v)] = (u, m, v)
        es += [(u, m), (m, v)]
    host = Graph(range(4), es).add_edges([(11, 2), (11, 3)])
    return subdivision_certificate("K4", HomeomorphicEmbedding(k4, host, {v: v for v in range(4)}, em))


def apex_cert():
    g = planar_ladder(8)
    f8 = sorted(pinwheel_mold(8, [0]).f_set)
    eta_l, lab = apex_host(g, f8, random.Random(0), face_crossings=2)
    _, res = run_oneapex(eta_l, g, f8, lab)
    mold = Mold({e: {eta_l.vertex_map[lab]} for e in f8})
    return apex_certificate(res, g, eta_l.host, mold)


BUILDERS = [jump_cert, cross_cert, separation_cert, logged_cert, minor_cert, k4_midpoints_cert, apex_cert]


# --- round trips ---------------------------------------------------------------------

@pytest.mark.parametrize("build", BUILDERS, ids=lambda f: f.__name__)
def test_emitted_certificates_verify_in_both_formats(build):
    cert = build()
    assert verify(cert).ok
    for text in (cert.to_text(), cert.to_json()):
        again = Certificate.load(text)
        assert again == cert
        assert verify(again).ok
    assert verify_text(cert.to_text()).ok


def test_cube_application_certificate():
    name, eta, _ = cube_application(w_graph())
    assert verify(subdivision_certificate(name, eta)).ok


def test_malformed_certificates():
    with pytest.raises(CertificateError):
        Certificate.from_text("kind outcome\n")
    with pytest.raises(CertificateError):
        Certificate.from_text("planext-certificate 1\ntag Jump\n")
    with pytest.raises(CertificateError):
        Certificate.from_json("{not json")
    with pytest.raises(CertificateError):
        jump_cert().need("nowhere")


# --- tampering ---------------------------------------------------------------------------

def edit(cert, section, old=None, new=None):
    """A copy with one line of a section replaced, removed (new=None) or appended (old=None)."""
    out = copy.deepcopy(cert)
    body = out.sections[section]
    if old is None:
        body.append(new)
    else:
        i = body.index(old)
        if new is None:
            del body[i]
        else:
            body[i] = new
    return out


def first(cert, section, prefix):
    return next(line for line in cert.sections[section] if line.startswith(prefix))


def jump_end_moved_onto_a_face():
    c = edit(jump_cert(), "host", None, "0 3")
    return edit(c, "payload", "path 0 7", "path 0 3")


def jump_uses_a_non_edge():
    return edit(jump_cert(), "payload", "path 0 7", "path 0 5 7")


def jump_runs_through_s():
    return edit(jump_cert(), "payload", "path 0 7", "path 0 1 3 7")


def embedding_path_off_the_host():
    return edit(jump_cert(), "embedding", "edge 0 1 -> 0 1", "edge 0 1 -> 0 5 1")


def vertex_map_not_injective():
    return edit(jump_cert(), "embedding", "vertex 1 -> 1", "vertex 1 -> 0")


def disk_replaced_by_a_non_face():
    return edit(jump_cert(), "disks", "0 1 3 2", "0 1 5 7 3 2")


def cross_feet_reordered():
    return edit(cross_cert(), "payload", "feet 0 1 3 2", "feet 0 3 1 2")


def cross_paths_share_a_vertex():
    c = cross_cert()
    for e in ("8 0", "8 3", "8 1", "8 2"):
        c = edit(c, "host", None, e)
    c = edit(c, "payload", "path 0 3", "path 0 8 3")
    return edit(c, "payload", "path 1 2", "path 1 8 2")


def cross_on_a_disk_missing_its_feet():
    return edit(cross_cert(), "payload", "disk 0 1 3 2", "disk 0 1 5 4")


def cross_freedom_overclaimed():
    em = {e: e for e in CUBE.edges}
    em[(0, 1)] = (0, 10, 11, 12, 1)
    h = CUBE.remove_edges([(0, 1)]).add_edges([(0, 10), (10, 11), (11, 12), (12, 1), (10, 20), (20, 12),
                                                (20, 30), (30, 11), (30, 3), (0, 7)])
    eta = HomeomorphicEmbedding(CUBE, h, {v: v for v in range(8)}, em)
    ds = disk_system_for(eta)
    cr = find_cross(eta, ds)
    fake = type(cr)(cr.paths, cr.disk, cr.feet, FREE)
    return outcome_certificate(ExtensionOutcome(FREE_CROSS, eta, (), fake, ds))


def separation_side_misses_an_edge():
    c = separation_cert()
    line = first(c, "payload", "side 0 1 3 8")
    return edit(c, "payload", line, "side 0 1 3 8 9 10")


def separation_of_order_four():
    c = separation_cert()
    line = first(c, "payload", "side 0 1 3 8")
    return edit(c, "payload", line, "side 0 1 2 3 8 9 10 11")


def log_line_tampered():
    c = logged_cert()
    line = c.sections["log"][0]
    head, _, rest = line.partition("inserted=")
    ins, _, tail = rest.partition(" ")
    hops = ins.split("-")
    # shortcut the inserted path straight from its first to its last vertex
    swapped = f"{hops[0]}-{hops[-1]}"
    return edit(c, "log", line, f"{head}inserted={swapped} {tail}")


def minor_branch_sets_overlap():
    return edit(minor_cert(), "model", "branch 1 : 1", "branch 1 : 0 1")


def minor_labels_swapped():
    c = edit(minor_cert(), "model", "branch 6 : 6", "branch 6 : 7")
    return edit(c, "model", "branch 7 : 7", "branch 7 : 6")


def minor_branch_set_disconnected():
    c = edit(minor_cert(), "host", None, "6 8")
    return edit(c, "model", "branch 0 : 0", "branch 0 : 0 8")


def minor_added_edge_cofacial():
    c = edit(minor_cert(), "added", "0 7", "0 3")
    c = edit(c, "pattern", None, "0 3")
    return edit(c, "host", None, "0 3")


def subdivision_paths_overlap():
    return edit(k4_midpoints_cert(), "embedding", "edge 2 3 -> 2 21 3", "edge 2 3 -> 2 11 3")


def apex_branch_sets_overlap():
    return edit(apex_cert(), "model", "branch 1 : 1", "branch 1 : 0 1")


def apex_host_edge_removed():
    return edit(apex_cert(), "host", "0 1", None)


def apex_two_edges_removed():
    c = edit(apex_cert(), "removed", None, "1 9")
    return edit(c, "removed", None, "3 11")


def apex_added_edge_cofacial():
    c = apex_cert()
    (line,) = c.sections["added"]
    return edit(c, "added", line, "0 1")


MUTATIONS = [
    (jump_end_moved_onto_a_face, "share the disk"),
    (jump_uses_a_non_edge, "not a host edge"),
    (jump_runs_through_s, "meets S"),
    (embedding_path_off_the_host, "not a host edge"),
    (vertex_map_not_injective, "share an image"),
    (disk_replaced_by_a_non_face, "disks differ"),
    (cross_feet_reordered, "claimed [0, 3, 1, 2]"),
    (cross_paths_share_a_vertex, "paths share 8"),
    (cross_on_a_disk_missing_its_feet, "off the disk"),
    (cross_freedom_overclaimed, "hold all four feet"),
    (separation_side_misses_an_edge, "do not cover"),
    (separation_of_order_four, "order 4"),
    (log_line_tampered, "log step fails"),
    (minor_branch_sets_overlap, "overlap at 0"),
    (minor_labels_swapped, "no host edge"),
    (minor_branch_set_disconnected, "not connected"),
    (minor_added_edge_cofacial, "share the face"),
    (subdivision_paths_overlap, "share 11"),
    (apex_branch_sets_overlap, "overlap"),
    (apex_host_edge_removed, "no host edge"),
    (apex_two_edges_removed, "at most one"),
    (apex_added_edge_cofacial, "share the face"),
]


@pytest.mark.parametrize("mutate,expected", MUTATIONS, ids=lambda x: getattr(x, "__name__", ""))
def test_tampered_certificate_fails_with_a_witness(mutate, expected):
    v = verify(mutate())
    assert not v.ok
    assert any(expected in w for w in v.witness), v.witness
