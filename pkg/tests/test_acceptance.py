"""Acceptance criteria, one test each; every test records a single PASS/FAIL line.

The lines are printed as they are produced and again in the terminal summary.
"""

import random
import time

import networkx as nx
import pytest

from brute import nxg
from planext.apex import (FREE_CROSS, JUMP, UNITED, Mold, apex_minor_problems, build_moebius_pinwheel,
                          cast_from_subdivision, determined_graph, mold_minor, pinwheel_mold,
                          run_oneapex)
from planext.catalog import (CATALOG, complete, complete_bipartite, cube, dodecahedron, mobius_ladder,
                             named, planar_ladder, v8, w_graph)
from planext.certificates import (apex_certificate, brute_faces, extension_minor_certificate,
                                  outcome_certificate, subdivision_certificate, verify)
from planext.disksystem import from_peripheral, validate
from planext.engine import (FREE_CROSS as ENGINE_FREE_CROSS, JUMP as ENGINE_JUMP, S_SEPARATION,
                            EngineError, cube_application, outcome_to_minor, run_main)
from planext.graph import Graph, is_three_connected
from planext.instances import almost4_nonplanar_host, apex_host, planted_instance, random_planar_3c
from planext.oracle import has_minor, has_topological_minor, model_from_subdivision
from planext.planarity import (canonical_cycle, check_two_paths_outcome, interleaved, is_planar,
                               peripheral_cycles, two_paths_trichotomy)
from planext.subdivision import HomeomorphicEmbedding, bridges, rigid_potential, stabilize
from planext.rerouting import replay_one
from test_apex import walk
from test_certificates import MUTATIONS
from test_planarity import expected_tag
from test_subdivision import brute_two_separated

RESULTS: dict[int, str] = {}

# certificates emitted by the other criteria, re-checked by the last one
EMITTED: list = []


def record(n: int, ok: bool, detail: str, start: float, limit: float | None = None) -> None:
    took = time.perf_counter() - start
    if limit is not None and took > limit:
        ok = False
        detail += f"; over the {limit:.0f} s limit"
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail} ({took:.1f} s)"
    RESULTS[n] = line
    print(line)
    assert ok, line


def planar_corpus():
    """Catalog graphs that are 3-connected and planar, plus 200 random ones, all on at most 14 vertices."""
    out = []
    for name in sorted(CATALOG):
        g = named(name)
        if g.order() <= 14 and is_three_connected(g) and is_planar(g):
            out.append(g)
    for n in (3, 4, 5, 6, 8):
        out.append(planar_ladder(n))
    rng = random.Random(2024)
    out += [random_planar_3c(rng.randint(4, 14), rng) for _ in range(200)]
    return out


CORPUS = planar_corpus()


def test_criterion_1_faces_are_peripheral_cycles():
    start = time.perf_counter()
    bad = [g for g in CORPUS
           if sorted(peripheral_cycles(g)) != sorted(canonical_cycle(c) for c in brute_faces(g))]
    record(1, not bad, f"{len(CORPUS) - len(bad)}/{len(CORPUS)} graphs agree with brute force", start, 60)


def test_criterion_2_peripheral_disk_systems_validate():
    start = time.perf_counter()
    bad = [g for g in CORPUS if not validate(from_peripheral(g)).ok]
    record(2, not bad, f"{len(bad)} violations over {len(CORPUS)} graphs", start)


def test_criterion_3_stabilization():
    start = time.perf_counter()
    rng = random.Random(7)
    failures, steps = 0, 0
    for _ in range(500):
        g = rng.choice([complete(4), cube(), random_planar_3c(rng.randint(5, 8), rng)])
        eta0 = planted_instance(g, rng, bridges=6, max_vertices=24)
        assert eta0.host.order() <= 24
        eta, log = stabilize(eta0)
        ok = eta.is_valid() and all(brute_two_separated(eta, b) for b in bridges(eta) if b.is_unstable)
        cur = eta0
        for r in log:
            nxt = replay_one(cur, r)
            ok = ok and rigid_potential(nxt) > rigid_potential(cur)
            cur = nxt
        steps += len(log)
        failures += not (ok and cur == eta)
    record(3, failures == 0, f"500 instances, {steps} logged steps, {failures} failures", start, 120)


def cube_family():
    rng = random.Random(11)
    return [almost4_nonplanar_host(cube(), rng, extra=rng.randint(2, 8)) for _ in range(50)]


def dodecahedron_family():
    rng = random.Random(12)
    return [almost4_nonplanar_host(dodecahedron(), rng, extra=rng.randint(2, 8)) for _ in range(50)]


def ident(g, h):
    return HomeomorphicEmbedding(g, h, {v: v for v in g.vertices}, {e: e for e in g.edges})


def test_criterion_4_jump_or_free_cross():
    start = time.perf_counter()
    k = cube()
    notes = []
    out = run_main(ident(k, w_graph()))
    g2, model, info = outcome_to_minor(out)
    (u, v), = info["pairs"]
    jump_ok = (out.tag == ENGINE_JUMP and model.is_valid() and model.host == w_graph()
               and not any(u in f and v in f for f in brute_faces(k)))
    notes.append(f"W jump {'ok' if jump_ok else 'bad'}")
    cc = k.add_edges([(0, 3), (1, 2)])
    out = run_main(ident(k, cc))
    g2, model, info = outcome_to_minor(out)
    u1, u2, v1, v2 = out.payload.feet
    cross_ok = (out.tag == ENGINE_FREE_CROSS and out.payload.freedom == "Free"
                and interleaved(list(out.payload.disk), (u1, v1), (u2, v2))
                and model.is_valid() and has_minor(v8(), g2) is not None)
    notes.append(f"crossing chords {'ok' if cross_ok else 'bad'}")
    escapes = certified = 0
    hosts = cube_family() + dodecahedron_family()
    for eta in hosts:
        try:
            out = run_main(eta)
        except EngineError as exc:
            escapes += exc.dump.get("outcome") is not None and exc.dump["outcome"].tag == S_SEPARATION
            continue
        cert = outcome_certificate(out)
        EMITTED.append(cert)
        g2, model, info = outcome_to_minor(out)
        mcert = extension_minor_certificate(g2, model, info, out.final_eta.source)
        EMITTED.append(mcert)
        certified += verify(cert).ok and verify(mcert).ok
    notes.append(f"{certified}/{len(hosts)} random hosts certified, {escapes} separation escapes")
    ok = jump_ok and cross_ok and certified == len(hosts) and escapes == 0
    record(4, ok, "; ".join(notes), start, 600)


def test_criterion_5_cube_application():
    start = time.perf_counter()
    hosts = cube_family()
    good = 0
    for eta in hosts:
        name, found, _ = cube_application(eta.host)
        cert = subdivision_certificate(name, found)
        EMITTED.append(cert)
        good += (name in ("V8", "W") and verify(cert).ok and model_from_subdivision(found).is_valid()
                 and nx.is_isomorphic(nxg(found.source), nxg(v8() if name == "V8" else w_graph())))
    record(5, good == len(hosts), f"{good}/{len(hosts)} hosts yield a certified V8 or W", start)


def hamiltonian_instances(count: int):
    rng = random.Random(5)
    out = []
    while len(out) < count:
        n = rng.randint(5, 10)
        g = Graph(range(n), [(i, (i + 1) % n) for i in range(n)])
        for _ in range(rng.randint(1, 2 * n)):
            a, b = rng.sample(range(n), 2)
            if abs(a - b) not in (1, n - 1):
                g = g.add_edges([(a, b)])
        out.append((g, list(range(n))))
    return out


def test_criterion_6_two_paths_trichotomy():
    start = time.perf_counter()
    inst = hamiltonian_instances(50)
    agree = sum(two_paths_trichotomy(g, c).tag == expected_tag(g, c)
                and check_two_paths_outcome(g, c, two_paths_trichotomy(g, c)) for g, c in inst)
    record(6, agree == len(inst), f"{agree}/{len(inst)} tags agree with brute force", start)


def test_criterion_7_apex_layer():
    start = time.perf_counter()
    notes = []
    g = planar_ladder(6)
    f6 = sorted(pinwheel_mold(6, [0]).f_set)
    eta_l, lab = apex_host(g, f6, random.Random(0))
    mold = Mold({e: {lab} for e in f6})
    eta, cast = cast_from_subdivision(eta_l, g, mold)
    model = mold_minor(eta, eta_l.host, mold, cast)
    lg = determined_graph(g, mold)
    trip = model.is_valid() and has_topological_minor(lg, eta_l.host) is not None
    notes.append(f"round trip {'ok' if trip else 'bad'}")
    steps, seed = 0, 0
    try:
        while steps < 50 and seed < 500:
            steps += walk(seed)
            seed += 1
        safe = steps >= 50
    except (AssertionError, EngineError) as exc:
        safe = False
        notes.append(f"walk {seed} failed: {exc}")
    notes.append(f"{steps} safe reroutings kept the mold feasible")
    g8 = planar_ladder(8)
    f8 = sorted(pinwheel_mold(8, [0]).f_set)
    eta_l, lab = apex_host(g8, f8, random.Random(1), face_crossings=2)
    _, res = run_oneapex(eta_l, g8, f8, lab)
    cert = apex_certificate(res, g8, eta_l.host, Mold({e: {eta_l.vertex_map[lab]} for e in f8}))
    EMITTED.append(cert)
    one = (res.outcome.tag in (UNITED, JUMP, FREE_CROSS) and apex_minor_problems(res, g8) == []
           and res.model.is_valid() and verify(cert).ok)
    notes.append(f"single apex gave {res.outcome.tag} with {'a valid' if one else 'an invalid'} minor")
    record(7, trip and safe and one, "; ".join(notes), start, 300)


def test_criterion_8_pinwheel():
    start = time.perf_counter()
    p = build_moebius_pinwheel(1, 6)
    model = has_minor(complete(6), p, 10**7)
    k33 = nx.is_isomorphic(nxg(mobius_ladder(3)), nxg(complete_bipartite(3, 3)))
    ok = model is not None and model.is_valid() and k33
    record(8, ok, f"K6 {'found' if model else 'not found'} in the Moebius pinwheel; "
                  f"three-rung Moebius ladder {'is' if k33 else 'is not'} K3,3", start, 300)


def test_criterion_9_certificate_integrity():
    start = time.perf_counter()
    if not EMITTED:
        pytest.skip("run together with the other criteria")
    passed = sum(verify(c).ok for c in EMITTED)
    caught = 0
    for mutate, expected in MUTATIONS:
        v = verify(mutate())
        caught += (not v.ok) and any(expected in w for w in v.witness)
    ok = passed == len(EMITTED) and caught == len(MUTATIONS) >= 20
    record(9, ok, f"{passed}/{len(EMITTED)} emitted certificates verify; "
                  f"{caught}/{len(MUTATIONS)} tampered ones rejected with a witness", start)
