"""Drive a subdivision, by reroutings, to a certified obstruction or a planar layout.

Each public ``run_*`` follows the case order of the corresponding argument and
returns an :class:`ExtensionOutcome` whose payload has already been re-checked.
Branches the theory rules out raise :class:`EngineError` with a diagnostic dump.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, permutations
from typing import Sequence

from .catalog import cube, v8, w_graph
from .disksystem import (DiskSystem, disk_system_for, facial_planar, image_cycle, induce,
                         is_locally_planar, source_cycle_of)
from .graph import (Graph, PreconditionError, Separation, is_almost_four_connected,
                    is_internally_four_connected, iter_paths, norm_edge)
from .oracle import MinorModel
from .patterns import (DETACHED_K4_WITNESS, FREE, TRIAD_WITNESS,
                       WEAKLY_FREE, SCross, SJump, STriad, classify_bridge_against_disks,
                       cross_center, cross_freedom, detached_k4_on, find_cross, find_jump, find_triad,
                       find_tunnel, inner_path, iter_triads, s_separation_problems)
from .planarity import (canonical_cycle, cofacial_vertices, cyclic_between, interleaved, is_planar,
                        peripheral_cycles)
from .rerouting import (Rerouting, ReroutingError, _from_center, _subpath, apply_i_rerouting,
                        apply_t_rerouting, apply_triad_exchange, apply_x_rerouting,
                        replay)
from .subdivision import (CHORD_EDGE, HomeomorphicEmbedding, bridges, find_subdivision,
                          is_two_separated, stabilize, two_separation)

JUMP = "Jump"
FREE_CROSS = "FreeCross"
S_SEPARATION = "SSeparation"
TRIAD = "Triad"
LOCALLY_PLANAR = "LocallyPlanar"
TUNNEL = "Tunnel"
DETACHED_K4 = "DetachedK4"
PLANAR = "Planar"

SEARCH_DEPTH = 2


class EngineError(RuntimeError):
    """A case the theory excludes was reached; ``dump`` holds the offending state."""

    def __init__(self, message: str, **dump):
        super().__init__(message)
        self.dump = dump


@dataclass(frozen=True)
class ExtensionOutcome:
    tag: str
    final_eta: HomeomorphicEmbedding
    log: tuple[Rerouting, ...]
    payload: object
    disks: DiskSystem | None = None
    initial_eta: HomeomorphicEmbedding | None = None
    initial_disks: DiskSystem | None = None
    notes: tuple[str, ...] = ()


def _assignment_problems(ds: DiskSystem, host: Graph, assignment) -> list[str]:
    from .subdivision import bridges_of
    s = ds.carrier
    disks = {canonical_cycle(c) for c in ds.disks}
    load: dict = {}
    for kind, vs, es, att in bridges_of(host, s.vertices, s.edges):
        if len(att) < 2:
            continue
        c = assignment.get(es)
        if c is None or canonical_cycle(c) not in disks:
            return [f"bridge at {sorted(att)} has no disk"]
        if not att <= set(c):
            return [f"bridge at {sorted(att)} is not inside its disk"]
        load.setdefault(canonical_cycle(c), set()).update(es)
    for c, es in load.items():
        ring = {norm_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))}
        if not facial_planar(Graph(c, es | ring), c):
            return [f"disk {c} cannot hold its bridges"]
    return []


def replay_problems(out) -> list[str]:
    """Does the log lead from the initial state to the recorded final state?"""
    eta, ds = out.final_eta, out.disks
    probs = [f"final embedding: {v}" for v in eta.violations()]
    if out.initial_eta is not None:
        try:
            again = replay(out.initial_eta, out.log)
        except ReroutingError as exc:
            return probs + [f"log does not replay: {exc}"]
        if again != eta:
            probs.append("log replay does not reach the final embedding")
        if out.initial_disks is not None and ds is not None:
            if induce(out.initial_disks, out.log).disks != ds.disks:
                probs.append("disk system is not the induced one")
    return probs


def outcome_problems(out: ExtensionOutcome) -> list[str]:
    """Independent re-check of an outcome against its own final state."""
    eta, ds = out.final_eta, out.disks
    probs = replay_problems(out)
    if any(p.startswith("log does not replay") for p in probs):
        return probs
    p = out.payload
    if out.tag in (JUMP, FREE_CROSS, TRIAD, TUNNEL):
        probs += p.violations(eta, ds)
        if out.tag == FREE_CROSS and "weak" not in out.notes and p.freedom != FREE:
            probs.append("cross is not free")
    elif out.tag == DETACHED_K4:
        k4, att = p
        probs += k4.violations(eta, ds)
        if not any(b.attachments == frozenset(k4.branch) for b in bridges(eta)):
            probs.append("no bridge attaches exactly at the K4 branch vertices")
    elif out.tag == S_SEPARATION:
        probs += s_separation_problems(eta, p)
    elif out.tag == LOCALLY_PLANAR:
        probs += _assignment_problems(ds, eta.host, p)
    elif out.tag == PLANAR:
        if not is_planar(eta.host):
            probs.append("host is not planar")
    else:
        probs.append(f"unknown tag {out.tag}")
    return probs


class _Run:
    """Mutable walk state: current embedding, induced disks and the log so far."""

    pin_center: int | None = None    # restrict triad work to one centre

    def __init__(self, eta: HomeomorphicEmbedding, ds: DiskSystem):
        self.initial_eta, self.initial_ds = eta, ds
        self.eta, self.ds = eta, ds
        self.log: list[Rerouting] = []

    @classmethod
    def resume(cls, out: ExtensionOutcome) -> _Run:
        run = cls(out.initial_eta, out.initial_disks)
        run.eta, run.ds, run.log = out.final_eta, out.disks, list(out.log)
        return run

    def apply(self, step) -> None:
        eta, r = step
        self.ds = induce(self.ds, [r])
        self.eta = eta
        self.log.append(r)

    def extend(self, eta, log, ds) -> None:
        self.eta, self.ds = eta, ds
        self.log.extend(log)

    def direct(self, near: set[int], cross: bool = True):
        """A jump or free cross near the current configuration, or anywhere."""
        return _local_search(self.eta, self.ds, near, cross) or _jump_or_free_cross(self.eta, self.ds)

    def exchange(self, f: _TriadFrame) -> None:
        self.apply(apply_triad_exchange(self.eta, f.center, f.triad.hub, f.triad.paths))

    def outcome(self, tag: str, payload, notes: Sequence[str] = ()) -> ExtensionOutcome:
        out = ExtensionOutcome(tag, self.eta, tuple(self.log), payload, self.ds,
                               self.initial_eta, self.initial_ds, tuple(notes))
        probs = outcome_problems(out)
        if probs:
            raise EngineError(f"{tag} outcome failed its re-check", problems=probs, outcome=out)
        return out


# --- direct detection --------------------------------------------------------------

def _detect(eta: HomeomorphicEmbedding, ds: DiskSystem, weak_ok: bool = True, planarity: bool = True):
    jump = find_jump(eta, ds)
    if jump is not None:
        return JUMP, jump, ()
    k4 = None
    triad = False
    for b in bridges(eta):
        if len(b.attachments) < 2:
            continue
        cls = classify_bridge_against_disks(eta, ds, b)
        if cls.tag == TRIAD_WITNESS:
            triad = True
        elif cls.tag == DETACHED_K4_WITNESS and k4 is None:
            k4 = (cls.witness, tuple(sorted(b.attachments)))
    if triad:
        return TRIAD, find_triad(eta, ds), ()
    if k4 is not None:
        return DETACHED_K4, k4, ()
    cross = find_cross(eta, ds, FREE)
    if cross is not None:
        return FREE_CROSS, cross, ()
    if weak_ok:
        cross = find_cross(eta, ds, WEAKLY_FREE)
        if cross is not None:
            return FREE_CROSS, cross, ("weak",)
    if planarity:
        lp = is_locally_planar(ds, eta.host)
        if lp:
            return LOCALLY_PLANAR, lp.assignment, ()
    return None


def find_s_separation(eta: HomeomorphicEmbedding, max_branch: int = 0) -> Separation | None:
    """An S-separation whose small side holds at most ``max_branch`` branch vertices."""
    host = eta.host
    branch = eta.branch_vertices()
    vs = host.sorted_vertices()
    every = set(vs)
    for k in range(0, 4):
        for cut in combinations(vs, k):
            comps = host.components(every - set(cut))
            if len(comps) < 2:
                continue
            free = [c for c in comps if not c & branch]
            ones = [c for c in comps if len(c & branch) == 1] if max_branch >= 1 else []
            base = frozenset().union(*free)
            options = ([base] if free else []) + [base | c for c in ones]
            for inner in options:
                x = inner | set(cut)
                y = every - inner
                if not y - x:
                    continue
                sep = Separation(frozenset(x), frozenset(y))
                if not s_separation_problems(eta, sep):
                    return sep
    return None


def _escape_path(host: Graph, xs: set[int], ys: set[int], cut: set[int]) -> tuple[int, ...] | None:
    """Shortest path from xs - cut to ys - cut whose interior avoids xs, ys and cut."""
    prev: dict[int, int | None] = {}
    frontier = sorted(xs - cut)
    for x in frontier:
        prev[x] = None
    while frontier:
        nxt = []
        for a in frontier:
            for b in sorted(host.neighbors(a)):
                if b in cut or b in prev:
                    continue
                if b in ys:
                    path = [b, a]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return tuple(path[::-1])
                if b in xs:
                    continue
                prev[b] = a
                nxt.append(b)
        frontier = nxt
    return None


def _separation_around(host: Graph, xs: set[int], cut: set[int]) -> Separation:
    side = set(xs)
    for comp in host.components(set(host.vertices) - cut):
        if comp & (xs - cut):
            side |= comp
    return Separation(frozenset(side), frozenset(set(host.vertices) - (side - cut)))


# --- planar lemma -------------------------------------------------------------------

def _require_no_degree_two(g: Graph) -> None:
    if any(g.degree(v) == 2 for v in g):
        raise PreconditionError("source graph has a vertex of degree two")


def run_planar_lemma(eta: HomeomorphicEmbedding, ds: DiskSystem,
                     depth: int = SEARCH_DEPTH) -> ExtensionOutcome:
    """I-reroutings until a jump, weakly free cross, separation, K4, triad or local planarity."""
    _require_no_degree_two(eta.source)
    if not eta.host.is_connected():
        raise PreconditionError("host graph is disconnected")
    return _planar_lemma(_Run(eta, ds), depth)


def _planar_lemma(run: _Run, depth: int) -> ExtensionOutcome:
    hit = _detect(run.eta, run.ds)
    if hit:
        return run.outcome(*hit)
    eta, slog = stabilize(run.eta)
    if slog:
        run.extend(eta, slog, induce(run.ds, slog))
        hit = _detect(run.eta, run.ds)
        if hit:
            return run.outcome(*hit)
    for b in bridges(run.eta):
        if not b.is_unstable:
            continue
        found = two_separation(run.eta, b)
        if found is None:
            raise EngineError("unstable bridge survives stabilization", bridge=b, eta=run.eta)
        u, v, side = found
        sep = Separation(side, frozenset(run.eta.host.vertices - (side - {u, v})))
        if not s_separation_problems(run.eta, sep):
            return run.outcome(S_SEPARATION, sep)
        return _reduce_and_lift(run, b, u, v, side, depth)
    sep = find_s_separation(run.eta)
    if sep is not None:
        return run.outcome(S_SEPARATION, sep)
    return _search_i_reroutings(run, depth)


def _reduce_and_lift(run: _Run, b, u: int, v: int, side: frozenset[int], depth: int) -> ExtensionOutcome:
    """Recurse on the host with the 2-separated piece replaced by a uv edge, then lift back."""
    eta = run.eta
    inner = side - {u, v}
    e, z = next((e, z) for e, z in sorted(eta.edge_map.items())
                if u in z and v in z and b.attachments <= set(z))
    host2 = eta.host.remove_vertices(inner)
    sub = None
    paths = dict(eta.edge_map)
    if u != v:
        host2 = host2.add_edges([(u, v)])
        sub = _subpath(z, u, v)
        i, j = sorted((z.index(u), z.index(v)))
        paths[e] = z[:i + 1] + z[j:]
    eta2 = HomeomorphicEmbedding(eta.source, host2, dict(eta.vertex_map), paths)
    sources = [source_cycle_of(eta, c) for c in run.ds.disks]
    ds2 = DiskSystem(eta2.image(), tuple(sorted(image_cycle(eta2, c) for c in sources)),
                     run.ds.strength, eta2)
    out2 = _planar_lemma(_Run(eta2, ds2), depth)

    def lift(p):
        p = tuple(p)
        if sub is None:
            return p
        out = [p[0]]
        for a, c in zip(p, p[1:]):
            if (a, c) == (sub[0], sub[-1]):
                out.extend(sub[1:])
            elif (a, c) == (sub[-1], sub[0]):
                out.extend(sub[::-1][1:])
            else:
                out.append(c)
        return tuple(out)

    final2 = out2.final_eta
    final = HomeomorphicEmbedding(eta.source, eta.host, dict(final2.vertex_map),
                                  {k: lift(p) for k, p in final2.edge_map.items()})
    ds = DiskSystem(final.image(), tuple(sorted(image_cycle(final, source_cycle_of(final2, c))
                                                for c in out2.disks.disks)), run.ds.strength, final)
    log = [replace(r, replaced=tuple(map(lift, r.replaced)), inserted=tuple(map(lift, r.inserted)))
           for r in out2.log]
    run.extend(final, log, ds)
    p = out2.payload
    tag = out2.tag
    if tag == JUMP:
        payload = SJump(lift(p.path))
    elif tag == FREE_CROSS:
        disk = image_cycle(final, source_cycle_of(final2, p.disk))
        payload = SCross((lift(p.paths[0]), lift(p.paths[1])), disk, p.feet, p.freedom)
    elif tag == TRIAD:
        payload = replace(p, paths=tuple(map(lift, p.paths)))
    elif tag == DETACHED_K4:
        k4 = detached_k4_on(final, ds, p[0].branch)
        payload = (k4, p[1])
    elif tag == S_SEPARATION:
        a, c = p.side_a, p.side_b
        if {u, v} <= a - c:
            a = a | inner
        else:
            c = c | inner
        payload = Separation(a, c)
    elif tag == LOCALLY_PLANAR:
        lp = is_locally_planar(ds, eta.host)
        if not lp:
            raise EngineError("local planarity does not lift", outcome=out2)
        payload = lp.assignment
    else:
        raise EngineError(f"cannot lift outcome {tag}")
    return run.outcome(tag, payload, out2.notes)


def _i_moves(eta: HomeomorphicEmbedding, per_pair: int = 2):
    host = eta.host
    for b in bridges(eta):
        att = sorted(b.attachments)
        if len(att) < 2:
            continue
        for e, z in sorted(eta.edge_map.items()):
            on = [a for a in att if a in z]
            for x, y in combinations(on, 2):
                if b.kind == CHORD_EDGE:
                    qs = [(x, y)]
                else:
                    qs = []
                    for q in iter_paths(host, x, y, b.interior, 50):
                        if len(q) >= 3:
                            qs.append(tuple(q))
                        if len(qs) >= per_pair:
                            break
                for q in qs:
                    try:
                        yield apply_i_rerouting(eta, e, x, y, q)
                    except ReroutingError:
                        continue


def _search_i_reroutings(run: _Run, depth: int) -> ExtensionOutcome:
    """Breadth-first search over short I-rerouting sequences for a direct outcome."""
    def key(eta):
        return frozenset(eta.edge_map.items())

    seen = {key(run.eta)}
    frontier = [(run.eta, run.ds, [])]
    for _ in range(depth):
        nxt = []
        for eta0, ds0, log0 in frontier:
            for eta1, r in _i_moves(eta0):
                k = key(eta1)
                if k in seen:
                    continue
                seen.add(k)
                ds1 = induce(ds0, [r])
                hit = _detect(eta1, ds1)
                if hit:
                    run.extend(eta1, log0 + [r], ds1)
                    return run.outcome(*hit, ) if not hit[2] else run.outcome(hit[0], hit[1], hit[2])
                nxt.append((eta1, ds1, log0 + [r]))
        frontier = nxt
    raise EngineError("no outcome within the rerouting search bound", eta=run.eta, depth=depth)


# --- weakly free crosses --------------------------------------------------------------

@dataclass(frozen=True)
class _CrossFrame:
    """A weakly free cross read against its two base segments at the center."""
    cross: SCross
    center: int                      # source vertex
    e1: tuple[int, int]              # segment holding x1, x2
    e2: tuple[int, int]              # segment holding y2, y1
    p1: tuple[int, ...]              # x1 .. y1
    p2: tuple[int, ...]              # x2 .. y2
    a: tuple[int, ...]               # image of e1 read from the center
    b: tuple[int, ...]               # image of e2 read from the center

    @property
    def x1(self):
        return self.p1[0]

    @property
    def y1(self):
        return self.p1[-1]

    @property
    def x2(self):
        return self.p2[0]

    @property
    def y2(self):
        return self.p2[-1]

    def height(self) -> int:
        return (len(self.a) - self.a.index(self.x1)) + (len(self.b) - self.b.index(self.y2))


def _frame(eta: HomeomorphicEmbedding, cross: SCross, center: int, e1, e2) -> _CrossFrame | None:
    a, b = _from_center(eta, e1, center), _from_center(eta, e2, center)
    v = a[0]
    ends = []
    for p in cross.paths:
        s, t = p[0], p[-1]
        if s in a[1:] and t in b[1:]:
            ends.append(tuple(p))
        elif t in a[1:] and s in b[1:]:
            ends.append(tuple(p)[::-1])
        else:
            return None
    if v in cross.feet:
        return None
    q1, q2 = ends
    if a.index(q1[0]) < a.index(q2[0]):
        q1, q2 = q2, q1
    if not b.index(q1[-1]) < b.index(q2[-1]):
        return None
    return _CrossFrame(cross, center, e1, e2, q1, q2, a, b)


def resolve_weak_cross(eta: HomeomorphicEmbedding, ds: DiskSystem, cross: SCross) -> ExtensionOutcome:
    return _resolve_weak_cross(_Run(eta, ds), cross)


def _resolve_weak_cross(run: _Run, cross: SCross) -> ExtensionOutcome:
    eta = run.eta
    u1, u2, v1, v2 = cross.feet
    if cross_freedom(eta, (u1, v1), (u2, v2)) != WEAKLY_FREE:
        raise PreconditionError("cross is not weakly free and centered")
    img, e1, e2 = cross_center(eta, cross.feet)
    center = eta.preimage()[img]
    frame = _frame(eta, cross, center, e1, e2) or _frame(eta, cross, center, e2, e1)
    if frame is None:
        raise PreconditionError("cross is not centered at a branch vertex")
    if eta.source.degree(center) == 3:
        return _weak_cross_degree_three(run, frame)
    return _weak_cross_degree_four(run, frame)


def _weak_cross_degree_three(run: _Run, f: _CrossFrame) -> ExtensionOutcome:
    # reroute the centre end of the second segment along P2; the centre moves to x2
    run.apply(apply_t_rerouting(run.eta, f.center, f.e2, f.e1, f.y2, f.x2, f.p2))
    b = f.b
    iy1, iy2 = b.index(f.y1), b.index(f.y2)
    paths = (f.p1[::-1], b[iy1:iy2 + 1], b[:iy1 + 1][::-1])
    feet = (f.x1, f.y2, b[0])
    triad = STriad(paths, f.y1, feet, True, f.x2)
    if triad.violations(run.eta, run.ds):
        triad = find_triad(run.eta, run.ds)
    if triad is None:
        raise EngineError("T-rerouting produced no triad", eta=run.eta)
    return run.outcome(TRIAD, triad)


def _mirror(f: _CrossFrame) -> _CrossFrame:
    # swapping the two base segments swaps the roles of the two paths
    return _CrossFrame(f.cross, f.center, f.e2, f.e1, f.p2[::-1], f.p1[::-1], f.b, f.a)


def _make_frame(eta, ds: DiskSystem, f: _CrossFrame, p1, p2) -> _CrossFrame:
    a, b = _from_center(eta, f.e1, f.center), _from_center(eta, f.e2, f.center)
    disk = ds.disks_containing(*a, *b)[0]
    cross = SCross((tuple(p1), tuple(p2)), disk, (p1[0], p2[0], p1[-1], p2[-1]), WEAKLY_FREE)
    return _CrossFrame(cross, f.center, f.e1, f.e2, tuple(p1), tuple(p2), a, b)


def _weak_cross_degree_four(run: _Run, f: _CrossFrame) -> ExtensionOutcome:
    center = f.center
    while True:
        host = run.eta.host
        a, b = f.a, f.b
        ix1, iy2 = a.index(f.x1), b.index(f.y2)
        side1 = set(f.p1) | set(b[1:iy2])
        side2 = set(f.p2) | set(a[1:ix1])
        cut = {a[0], f.x1, f.y2}
        xs = side1 | side2 | cut
        ys = set(run.eta.image_vertices()) - (xs - cut)
        p = _escape_path(host, xs, ys, cut)
        if p is None:
            return run.outcome(S_SEPARATION, _separation_around(host, xs, cut))
        x, y = p[0], p[-1]
        if x in side2:
            f = _mirror(f)
            a, b = f.a, f.b
            ix1, iy2 = a.index(f.x1), b.index(f.y2)
        h = f.height()
        if y in a[ix1 + 1:]:
            # a lower cross without touching S
            p1 = p[::-1] if x not in f.p1 else p[::-1] + _subpath(f.p1, x, f.y1)[1:]
            f = _make_frame(run.eta, run.ds, f, p1, f.p2)
        elif y in b[iy2 + 1:]:
            iy = b.index(y)
            if x not in f.p1:
                run.apply(apply_i_rerouting(run.eta, f.e2, x, y, p))
                p1 = f.p1
            else:
                q = _subpath(f.p1, f.y1, x) + tuple(p[1:])
                run.apply(apply_i_rerouting(run.eta, f.e2, f.y1, y, q))
                p1 = _subpath(f.p1, f.x1, x)
            f = _make_frame(run.eta, run.ds, f, p1, f.p2 + b[iy2 + 1:iy + 1])
        else:
            near = set(p) | set(f.p1) | set(f.p2)
            hit = run.direct(near)
            if hit is not None:
                return run.outcome(*hit)
            old = near | set(a) | set(b)
            run.apply(apply_x_rerouting(run.eta, center, f.e1, f.e2, f.p1, f.p2))
            hit = run.direct(old, cross=False)
            if hit is None:
                raise EngineError("X-rerouting left no jump", eta=run.eta, path=p)
            return run.outcome(*hit)
        if f.height() >= h:
            raise EngineError("cross height failed to drop", height=f.height(), previous=h)
        probs = f.cross.violations(run.eta, run.ds)
        if probs:
            raise EngineError("lowered cross is invalid", problems=probs, frame=f)


def _local_search(eta: HomeomorphicEmbedding, ds: DiskSystem, verts: set[int], cross: bool = True):
    """A jump, or a free cross, made of S-paths inside ``verts``."""
    host = eta.host
    s = eta.image_vertices()
    ends = sorted(verts & s)
    inner = frozenset(verts - s)

    def s_path(u, w, avoid=frozenset()):
        if host.has_edge(u, w) and not eta.image().has_edge(u, w):
            return (u, w)
        return inner_path(host, u, w, inner - avoid)

    for u, w in combinations(ends, 2):
        if not ds.shares_disk(u, w):
            q = s_path(u, w)
            if q is not None:
                return JUMP, SJump(tuple(q))
    if not cross:
        return None
    for disk in ds.disks:
        on = [u for u in ends if u in disk]
        for p, q in combinations(combinations(on, 2), 2):
            if set(p) & set(q) or not interleaved(disk, p, q):
                continue
            if cross_freedom(eta, p, q) != FREE:
                continue
            p1 = s_path(*p)
            if p1 is None:
                continue
            p2 = s_path(*q, avoid=frozenset(p1))
            if p2 is None:
                continue
            if not cyclic_between(disk, p1[0], p1[-1], p2[0]):
                p2 = p2[::-1]
            x = SCross((tuple(p1), tuple(p2)), disk, (p1[0], p2[0], p1[-1], p2[-1]), FREE)
            if not x.violations(eta, ds):
                return FREE_CROSS, x
    return None


# --- triads -----------------------------------------------------------------------------

@dataclass(frozen=True)
class _TriadFrame:
    triad: STriad
    center: int                               # source vertex
    segs: tuple[tuple[int, int], ...]         # segment holding the i-th foot
    inner: tuple[tuple[int, ...], ...]        # centre .. foot
    legs: tuple[tuple[int, ...], ...]         # foot .. far end

    def leg_sum(self) -> int:
        return sum(len(leg) - 1 for leg in self.legs)


def _triad_frame(eta: HomeomorphicEmbedding, t: STriad) -> _TriadFrame | None:
    if t.center is None:
        return None
    pre = eta.preimage()
    v = pre.get(t.center)
    if v is None or eta.source.degree(v) != 3:
        return None
    segs, inner, legs = [], [], []
    for foot in t.feet:
        owners = [norm_edge(v, w) for w in eta.source.neighbors(v)
                  if foot in _from_center(eta, norm_edge(v, w), v)[1:]]
        if len(owners) != 1:
            return None
        z = _from_center(eta, owners[0], v)
        k = z.index(foot)
        segs.append(owners[0])
        inner.append(z[:k + 1])
        legs.append(z[k:])
    if len(set(segs)) != 3:
        return None
    return _TriadFrame(t, v, tuple(segs), tuple(inner), tuple(legs))


def resolve_triad(eta: HomeomorphicEmbedding, ds: DiskSystem, triad: STriad) -> ExtensionOutcome:
    return _resolve_triad(_Run(eta, ds), triad)


def _resolve_triad(run: _Run, triad: STriad) -> ExtensionOutcome:
    if triad.local:
        return _local_triad(run, triad)
    feet = set(triad.feet)
    for e, z in sorted(run.eta.edge_map.items()):
        if {z[0], z[-1]} <= feet:
            i, j = triad.feet.index(z[0]), triad.feet.index(z[-1])
            k = 3 - i - j
            q = tuple(triad.paths[i][::-1]) + tuple(triad.paths[j][1:])
            run.apply(apply_i_rerouting(run.eta, e, z[0], z[-1], q, allow_edge=True))
            return run.outcome(JUMP, SJump(tuple(triad.paths[k])))
    return run.outcome(TRIAD, triad, ("non-local",))


def _local_triad(run: _Run, triad: STriad) -> ExtensionOutcome:
    prev = None
    while True:
        frames = [fr for fr in (_triad_frame(run.eta, t) for t in iter_triads(run.eta, run.ds) if t.local)
                  if fr is not None and run.pin_center in (None, fr.center)]
        if not frames:
            raise EngineError("local triad lost", eta=run.eta)
        f = min(frames, key=lambda fr: (fr.leg_sum(), fr.triad.feet, fr.triad.hub))
        s = f.leg_sum()
        if prev is not None and s >= prev:
            raise EngineError("triad leg sum failed to drop", legs=s, previous=prev)
        prev = s
        host = run.eta.host
        t = f.triad
        feet = set(t.feet)
        qs = set().union(*map(set, t.paths))
        xs = qs | set().union(*map(set, f.inner))
        ys = set(run.eta.image_vertices()) - (xs - feet)
        p = _escape_path(host, xs, ys, feet)
        if p is None:
            return run.outcome(S_SEPARATION, _separation_around(host, xs, feet))
        y = p[-1]
        on_leg = [i for i, leg in enumerate(f.legs) if y in leg[1:]]
        if on_leg:
            step = _leg_move(run.eta, f, p, on_leg[0])
            if step is None:
                raise EngineError("shorter triad missed by enumeration", frame=f, path=p)
            run.apply(step)
            continue
        near = xs | set(p) | set().union(*map(set, f.legs))
        hit = run.direct(near)
        if hit is not None:
            return run.outcome(*hit)
        run.exchange(f)
        hit = run.direct(near)
        if hit is not None:
            return run.outcome(*hit)
        raise EngineError("triad escape produced nothing", frame=f, path=p)


def _jump_or_free_cross(eta, ds):
    jump = find_jump(eta, ds)
    if jump is not None:
        return JUMP, jump
    cross = find_cross(eta, ds, FREE)
    if cross is not None:
        return FREE_CROSS, cross
    return None


def _leg_move(eta, f: _TriadFrame, p, j: int):
    x, y = p[0], p[-1]
    v_img = eta.vertex_map[f.center]
    for i, seg in enumerate(f.inner):
        if x not in seg[:-1]:
            continue
        if x == v_img:
            return apply_i_rerouting(eta, f.segs[j], x, y, p)
        if i == j:
            return apply_i_rerouting(eta, f.segs[j], x, y, p)
        return apply_t_rerouting(eta, f.center, f.segs[j], f.segs[i], y, x, p)
    return None


# --- summaries ----------------------------------------------------------------------------

def _is_k4(g: Graph) -> bool:
    return g.order() == 4 and g.size() == 6


def run_summary(eta: HomeomorphicEmbedding, ds: DiskSystem, almost4: bool | None = None) -> ExtensionOutcome:
    """Jump, free cross, separation, triad or local planarity; K4 sources are rejected."""
    g = eta.source
    if _is_k4(g):
        raise PreconditionError("source graph is K4")
    if not g.is_connected():
        raise PreconditionError("source graph is disconnected")
    out = run_planar_lemma(eta, ds)
    if out.tag == DETACHED_K4:
        raise EngineError("detached K4 outside K4", outcome=out)
    if out.tag == FREE_CROSS and out.payload.freedom != FREE:
        out = _resolve_weak_cross(_Run.resume(out), out.payload)
    if out.tag == S_SEPARATION:
        if almost4 is None:
            almost4 = is_almost_four_connected(eta.host)
        if almost4:
            raise EngineError("separation in an almost 4-connected host", outcome=out)
    return out


def _require_planar_source(g: Graph) -> None:
    if not is_almost_four_connected(g):
        raise PreconditionError("source graph is not almost 4-connected")
    if g.order() <= 6 and not is_internally_four_connected(g):
        raise PreconditionError("source graph on at most six vertices is not internally 4-connected")
    if not is_planar(g):
        raise PreconditionError("source graph is not planar")


def run_polyplanar(eta: HomeomorphicEmbedding) -> ExtensionOutcome:
    """Jump, free cross or separation for a planar source in a non-planar host."""
    _require_planar_source(eta.source)
    if is_planar(eta.host):
        raise PreconditionError("host graph is planar")
    if not eta.is_valid():
        raise PreconditionError("embedding is invalid")
    ds = disk_system_for(eta)
    out = run_summary(eta, ds, almost4=False)
    if out.tag == TRIAD:
        out = _resolve_triad(_Run.resume(out), out.payload)
    if out.tag == LOCALLY_PLANAR:
        raise EngineError("peripheral disks locally planar in a non-planar host", outcome=out)
    if out.tag == TRIAD:
        raise EngineError("non-local triad for a planar source", outcome=out)
    return out


def run_main(eta: HomeomorphicEmbedding) -> ExtensionOutcome:
    """Jump or free cross; the host must be almost 4-connected and non-planar."""
    if not is_almost_four_connected(eta.host):
        raise PreconditionError("host graph is not almost 4-connected")
    out = run_polyplanar(eta)
    if out.tag == S_SEPARATION:
        raise EngineError("separation in an almost 4-connected host", outcome=out)
    return out


# --- from outcomes to minors -----------------------------------------------------------------

def _has_triangle(g: Graph) -> bool:
    return any(g.neighbors(u) & g.neighbors(v) for u, v in g.edges)


def outcome_to_minor(out: ExtensionOutcome):
    """(G', model, info): G plus one non-cofacial edge, or plus two crossing chords of a face."""
    eta = out.final_eta
    g = eta.source
    if _has_triangle(g):
        raise PreconditionError("source graph has a triangle")
    faces = peripheral_cycles(g)
    pre = eta.preimage()
    owner = eta.interior_owner()
    claims: dict = {}
    extra: dict[int, set[int]] = {v: set() for v in g.vertices}
    info: dict = {}

    def claim(e, end, foot):
        p = eta.edge_map[e]
        k = p.index(foot) if eta.vertex_map[e[0]] == p[0] and end == e[0] else len(p) - 1 - p.index(foot)
        claims.setdefault(e, {})[end] = k

    if out.tag == JUMP:
        path = out.payload.path
        a, b = path[0], path[-1]
        if a not in pre and b in pre:
            a, b, path = b, a, path[::-1]
        if a in pre and b in pre:
            pair = (pre[a], pre[b])
        elif a in pre:
            v, e = pre[a], owner[b]
            u = next((w for w in e if not cofacial_vertices(g, w, v, faces)), None)
            if u is None:
                raise EngineError("both ends of the edge are cofacial with the vertex", edge=e, vertex=v)
            claim(e, u, b)
            pair = (v, u)
        else:
            f_e, e = owner[a], owner[b]
            pick = next(((w, u) for w in f_e for u in e if not cofacial_vertices(g, w, u, faces)), None)
            if pick is None:
                raise EngineError("every end pair is cofacial", edges=(f_e, e))
            w, u = pick
            claim(f_e, w, a)
            claim(e, u, b)
            pair = (w, u)
        extra[pair[0]].update(path[1:-1])
        pairs = [pair]
    elif out.tag == FREE_CROSS:
        cross = out.payload
        ring = list(cross.disk)
        src = source_cycle_of(eta, cross.disk)
        images = {eta.vertex_map[b]: b for b in src}
        feet = list(cross.feet)
        adj = {}
        for u in feet:
            if u in images:
                adj[u] = {images[u]}
                continue
            k = ring.index(u)
            near = set()
            for step in (1, -1):
                i = (k + step) % len(ring)
                while ring[i] not in images and ring[i] not in feet:
                    i = (i + step) % len(ring)
                if ring[i] in images:
                    near.add(images[ring[i]])
            adj[u] = near
        info["J"] = {u: sorted(adj[u]) for u in feet}
        match = None
        for choice in permutations(sorted(set().union(*adj.values())), 4):
            if all(choice[i] in adj[feet[i]] for i in range(4)):
                match = dict(zip(feet, choice))
                break
        if match is None:
            raise EngineError("no complete matching from feet into the face", J=info["J"])
        info["matching"] = match
        for u, b in match.items():
            if eta.vertex_map[b] == u:
                continue
            e = next(e for e, p in eta.edge_map.items() if u in p and b in e and eta.vertex_map[b] in p)
            claim(e, b, u)
        for p in cross.paths:
            extra[match[p[0]]].update(p[1:-1])
        u1, u2, v1, v2 = (match[x] for x in feet)
        pairs = [(u1, v1), (u2, v2)]
    else:
        raise PreconditionError(f"outcome {out.tag} carries no jump or cross")
    sets = {v: {eta.vertex_map[v]} | extra[v] for v in g.vertices}
    for e, p in eta.edge_map.items():
        a, b = e if eta.vertex_map[e[0]] == p[0] else e[::-1]
        inner = list(p[1:-1])
        ka = claims.get(e, {}).get(a, 0)
        kb = claims.get(e, {}).get(b, 0)
        if ka + kb > len(inner):
            raise EngineError("claims overlap on a segment", edge=e)
        sets[a].update(inner[:len(inner) - kb])
        sets[b].update(inner[len(inner) - kb:])
    g2 = g.add_edges(pairs)
    model = MinorModel(g2, eta.host, {v: frozenset(s) for v, s in sets.items()})
    probs = model.violations()
    if probs:
        raise EngineError("minor model failed its check", problems=probs)
    info["pairs"] = pairs
    return g2, model, info


def cube_application(h: Graph, budget: int | None = 10**6):
    """A V8 or W subdivision in h, found through a cube subdivision when one exists."""
    k = cube()
    eta = find_subdivision(k, h, budget)
    if eta is None:
        for name, pat in (("V8", v8()), ("W", w_graph())):
            found = find_subdivision(pat, h, budget)
            if found is not None:
                return name, found, "host has no cube subdivision; pattern found directly"
        raise PreconditionError("host has no cube subdivision")
    out = run_main(eta)
    s = out.final_eta.image()
    if out.tag == JUMP:
        extra = [out.payload.path]
        ends = out.payload.ends
        pre = out.final_eta.preimage()
        far = all(x in pre for x in ends) and len(k.shortest_path(pre[ends[0]], pre[ends[1]])) == 4
        order = (("W", w_graph()), ("V8", v8())) if far else (("V8", v8()), ("W", w_graph()))
    else:
        extra = list(out.payload.paths)
        order = (("V8", v8()), ("W", w_graph()))
    union = s.add_edges(e for p in extra for e in zip(p, p[1:]))
    for name, pat in order:
        found = find_subdivision(pat, union, budget)
        if found is not None:
            found = HomeomorphicEmbedding(found.source, h, found.vertex_map, found.edge_map)
            return name, found, f"from {out.tag} after {len(out.log)} reroutings"
    raise EngineError("jump or cross did not extend to V8 or W", outcome=out)


# --- rerouting-free variant ---------------------------------------------------------------------

def triad_jump(eta: HomeomorphicEmbedding, ds: DiskSystem, triad: STriad) -> SJump | None:
    """A jump at an attachment of the triad's bridge that avoids the segments at its centre."""
    fr = _triad_frame(eta, triad)
    if fr is None:
        return None
    near = set().union(*(set(eta.edge_map[e]) for e in fr.segs))
    b = next(b for b in bridges(eta) if norm_edge(triad.paths[0][0], triad.paths[0][1]) in b.edges)
    for y in sorted(b.attachments - near):
        for x in triad.feet:
            if not ds.shares_disk(x, y):
                return SJump(b.path(eta.host, y, x))
    return None


def run_planar_lemma_norerouting(eta: HomeomorphicEmbedding) -> ExtensionOutcome:
    """Jump, weakly free cross, separation, triad, tunnel or planarity, with no reroutings."""
    g = eta.source
    if not is_internally_four_connected(g) or not is_planar(g):
        raise PreconditionError("source graph is not internally 4-connected and planar")
    for b in bridges(eta):
        if b.is_unstable and not is_two_separated(eta, b):
            raise PreconditionError("an unstable bridge is not 2-separated")
    ds = disk_system_for(eta)
    run = _Run(eta, ds)
    jump = find_jump(eta, ds)
    if jump is not None:
        return run.outcome(JUMP, jump)
    cross = find_cross(eta, ds, FREE) or find_cross(eta, ds, WEAKLY_FREE)
    if cross is not None:
        return run.outcome(FREE_CROSS, cross, () if cross.freedom == FREE else ("weak",))
    sep = find_s_separation(eta)
    if sep is not None:
        return run.outcome(S_SEPARATION, sep)
    triad = find_triad(eta, ds)
    if triad is not None:
        if triad.local and not _is_cube(g):
            jump = triad_jump(eta, ds, triad)
            if jump is not None:
                return run.outcome(JUMP, jump)
        return run.outcome(TRIAD, triad)
    tunnel = find_tunnel(eta, ds)
    if tunnel is not None:
        return run.outcome(TUNNEL, tunnel)
    if is_planar(eta.host):
        return run.outcome(PLANAR, None)
    raise EngineError("no outcome without rerouting", eta=eta)


def _is_cube(g: Graph) -> bool:
    from .oracle import has_topological_minor
    return g.order() == 8 and g.size() == 12 and has_topological_minor(cube(), g) is not None
