"""Obstruction patterns relative to a subdivision and a disk system.

Every pattern object carries a ``violations(eta, ds)`` method that re-checks it
from the raw definitions, independently of the search that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

from .disksystem import DiskSystem
from .graph import Graph, Separation, fan, iter_paths, norm_edge
from .planarity import Cycle, canonical_cycle, cycle_edges, cyclic_between, interleaved, is_planar
from .subdivision import CHORD_EDGE, Bridge, HomeomorphicEmbedding, bridges

Path = tuple[int, ...]

NOT_FREE = "None"
WEAKLY_FREE = "WeaklyFree"
FREE = "Free"
_RANK = {NOT_FREE: 0, WEAKLY_FREE: 1, FREE: 2}

PATH_LIMIT = 2000


# --- shared checks ---------------------------------------------------------------

def s_path_problems(host: Graph, s_vertices: frozenset[int], p: Sequence[int]) -> list[str]:
    out = []
    if len(p) < 2:
        return ["path has no edge"]
    if len(set(p)) != len(p):
        out.append("path repeats a vertex")
    if any(not host.has_edge(a, b) for a, b in zip(p, p[1:])):
        out.append("path uses a non-edge")
    if p[0] not in s_vertices or p[-1] not in s_vertices:
        out.append("path ends are not on S")
    if any(x in s_vertices for x in p[1:-1]):
        out.append("path interior meets S")
    return out


def _walk_problems(host: Graph, p: Sequence[int]) -> list[str]:
    if len(set(p)) != len(p):
        return ["path repeats a vertex"]
    if any(not host.has_edge(a, b) for a, b in zip(p, p[1:])):
        return ["path uses a non-edge"]
    return []


def segments_with(eta: HomeomorphicEmbedding, *xs: int) -> list[Path]:
    return [p for _, p in sorted(eta.edge_map.items()) if all(x in p for x in xs)]


def _disks(ds: DiskSystem) -> list[set[int]]:
    return [set(c) for c in ds.disks]


def _common_disk(ds: DiskSystem, *xs: int) -> bool:
    return any(all(x in c for x in xs) for c in _disks(ds))


# --- jumps -----------------------------------------------------------------------

@dataclass(frozen=True)
class SJump:
    path: Path

    @property
    def ends(self) -> tuple[int, int]:
        return self.path[0], self.path[-1]

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem) -> list[str]:
        out = s_path_problems(eta.host, eta.image_vertices(), self.path)
        if _common_disk(ds, *self.ends):
            out.append("a disk contains both ends")
        return out


def find_jump(eta: HomeomorphicEmbedding, ds: DiskSystem) -> SJump | None:
    for b in bridges(eta):
        for a1, a2 in combinations(sorted(b.attachments), 2):
            if not ds.shares_disk(a1, a2):
                return SJump(b.path(eta.host, a1, a2))
    return None


# --- crosses ---------------------------------------------------------------------

def cross_freedom(eta: HomeomorphicEmbedding, p1_ends: tuple[int, int],
                  p2_ends: tuple[int, int]) -> str:
    if segments_with(eta, *p1_ends) or segments_with(eta, *p2_ends):
        return NOT_FREE
    return WEAKLY_FREE if cross_center(eta, (*p1_ends, *p2_ends)) is not None else FREE


def cross_center(eta: HomeomorphicEmbedding, feet: Sequence[int]):
    """(v, e1, e2) for two segments at a branch vertex v covering all the feet, else None."""
    for (e1, z1), (e2, z2) in combinations(sorted(eta.edge_map.items()), 2):
        shared = set(e1) & set(e2)
        if not shared:
            continue
        if all(f in z1 or f in z2 for f in feet):
            v = eta.vertex_map[shared.pop()]
            return v, e1, e2
    return None


@dataclass(frozen=True)
class SCross:
    paths: tuple[Path, Path]
    disk: Cycle
    feet: tuple[int, int, int, int]     # u1, u2, v1, v2 in cyclic order on the disk
    freedom: str = NOT_FREE

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem) -> list[str]:
        s = eta.image_vertices()
        out = []
        p1, p2 = self.paths
        for p in self.paths:
            out += s_path_problems(eta.host, s, p)
        if set(p1) & set(p2):
            out.append("paths intersect")
        if canonical_cycle(self.disk) not in {canonical_cycle(c) for c in ds.disks}:
            out.append("cycle is not a disk")
        u1, u2, v1, v2 = self.feet
        if {p1[0], p1[-1]} != {u1, v1} or {p2[0], p2[-1]} != {u2, v2}:
            out.append("feet do not match path ends")
        c = list(self.disk)
        if not all(f in c for f in self.feet):
            out.append("a foot is off the disk")
        elif not interleaved(c, (u1, v1), (u2, v2)):
            out.append("feet are not interleaved")
        if not out:
            got = cross_freedom(eta, (u1, v1), (u2, v2))
            if _RANK[got] < _RANK[self.freedom]:
                out.append(f"claimed {self.freedom} but cross is {got}")
        return out


def inner_path(host: Graph, s: int, t: int, inner: set[int] | frozenset[int]) -> Path | None:
    """Shortest s-t path with at least one internal vertex, all internal vertices in inner."""
    best = None
    for w in sorted(host.neighbors(s) & inner):
        q = host.shortest_path(w, t, inner)
        if q is not None and (best is None or len(q) + 1 < len(best)):
            best = (s, *q)
    return best


def _disjoint_pair(host: Graph, inner: frozenset[int], p: tuple[int, int], q: tuple[int, int]):
    for path in iter_paths(host, p[0], p[1], inner, PATH_LIMIT):
        if len(path) < 3:
            continue
        other = inner_path(host, q[0], q[1], inner - set(path))
        if other is not None:
            return tuple(path), other
    return None


def _attached(b: Bridge, c: set[int]) -> list[int]:
    return sorted(a for a in b.attachments if a in c)


def iter_crosses(eta: HomeomorphicEmbedding, ds: DiskSystem) -> Iterator[SCross]:
    host = eta.host
    bs = bridges(eta)
    for disk in ds.disks:
        c = list(disk)
        cs = set(c)
        on = [(b, _attached(b, cs)) for b in bs]
        on = [(b, a) for b, a in on if len(a) >= 2]
        for i, (b1, a1) in enumerate(on):
            for b2, a2 in on[i:]:
                same = b1 is b2
                for p in combinations(a1, 2):
                    for q in combinations(a2, 2):
                        if same and p >= q:
                            continue
                        if not interleaved(c, p, q):
                            continue
                        if same:
                            if b1.kind == CHORD_EDGE:
                                continue
                            pair = _disjoint_pair(host, b1.interior, p, q)
                            if pair is None:
                                continue
                            path1, path2 = pair
                        else:
                            path1, path2 = b1.path(host, *p), b2.path(host, *q)
                        if not cyclic_between(c, path1[0], path1[-1], path2[0]):
                            path2 = path2[::-1]
                        feet = (path1[0], path2[0], path1[-1], path2[-1])
                        yield SCross((path1, path2), disk, feet,
                                     cross_freedom(eta, p, q))


def find_cross(eta: HomeomorphicEmbedding, ds: DiskSystem, require: str = NOT_FREE) -> SCross | None:
    for x in iter_crosses(eta, ds):
        if _RANK[x.freedom] >= _RANK[require]:
            return x
    return None


# --- triads ----------------------------------------------------------------------

def triad_center(eta: HomeomorphicEmbedding, feet: Sequence[int]) -> int | None:
    """A degree-3 branch vertex whose three segments each hold exactly one foot."""
    for v in sorted(eta.source.vertices):
        if eta.source.degree(v) != 3:
            continue
        if triad_center_ok(eta, feet, eta.vertex_map[v]):
            return eta.vertex_map[v]
    return None


@dataclass(frozen=True)
class STriad:
    paths: tuple[Path, Path, Path]      # each runs from the hub to a foot
    hub: int
    feet: tuple[int, int, int]
    local: bool = False
    center: int | None = None

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem) -> list[str]:
        s = eta.image_vertices()
        host = eta.host
        out = []
        if self.hub in s:
            out.append("hub lies on S")
        for p, f in zip(self.paths, self.feet):
            out += _walk_problems(host, p)
            if len(p) < 2 or p[0] != self.hub or p[-1] != f:
                out.append("path does not join hub to foot")
            if any(x in s for x in p[:-1]):
                out.append("path meets S before its foot")
        for p, q in combinations(self.paths, 2):
            if set(p) & set(q) != {self.hub}:
                out.append("paths meet away from the hub")
        for a, b in combinations(self.feet, 2):
            if not _common_disk(ds, a, b):
                out.append(f"feet {a},{b} share no disk")
        if _common_disk(ds, *self.feet):
            out.append("a disk contains all feet")
        if self.local:
            ok = (triad_center_ok(eta, self.feet, self.center) if self.center is not None
                  else triad_center(eta, self.feet) is not None)
            if not ok:
                out.append("triad is not local")
        return out


def triad_center_ok(eta: HomeomorphicEmbedding, feet: Sequence[int], v: int) -> bool:
    pre = eta.preimage().get(v)
    if pre is None or eta.source.degree(pre) != 3:
        return False
    if v in feet:
        # the centre lies on all three segments, so no foot-to-segment matching exists
        return False
    segs = [eta.edge_map[norm_edge(pre, w)] for w in eta.source.neighbors(pre)]
    return all(sum(f in z for f in feet) == 1 for z in segs)


def _triad_in_bridge(eta: HomeomorphicEmbedding, b: Bridge, feet: Sequence[int]) -> STriad | None:
    for hub in sorted(b.interior):
        ps = fan(eta.host, hub, list(feet), b.interior)
        if ps is not None:
            ps = sorted(ps, key=lambda p: list(feet).index(p[-1]))
            center = triad_center(eta, feet)
            return STriad(tuple(tuple(p) for p in ps), hub, tuple(feet), center is not None, center)
    return None


def iter_triads(eta: HomeomorphicEmbedding, ds: DiskSystem) -> Iterator[STriad]:
    for b in bridges(eta):
        if b.kind == CHORD_EDGE or len(b.attachments) < 3:
            continue
        for feet in combinations(sorted(b.attachments), 3):
            if not all(ds.shares_disk(x, y) for x, y in combinations(feet, 2)):
                continue
            if ds.shares_disk(*feet):
                continue
            t = _triad_in_bridge(eta, b, feet)
            if t is not None:
                yield t


def find_triad(eta: HomeomorphicEmbedding, ds: DiskSystem, prefer_local: bool = True) -> STriad | None:
    first = None
    for t in iter_triads(eta, ds):
        if t.local or not prefer_local:
            return t
        first = first or t
    return first


# --- detached K4 subdivisions ------------------------------------------------------

@dataclass(frozen=True)
class DetachedK4:
    branch: tuple[int, int, int, int]
    segments: tuple[Path, ...]
    disks: tuple[Cycle, ...]

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem) -> list[str]:
        out = []
        seg_set = {tuple(p) for p in eta.edge_map.values()} | {tuple(p[::-1]) for p in eta.edge_map.values()}
        ends = set()
        for p in self.segments:
            if tuple(p) not in seg_set:
                out.append(f"{p} is not a segment of S")
            ends.add(frozenset((p[0], p[-1])))
        if ends != {frozenset(q) for q in combinations(self.branch, 2)}:
            out.append("segments do not join the branch vertices pairwise")
        have = {canonical_cycle(c) for c in ds.disks}
        for tri in combinations(self.branch, 3):
            cyc = _triangle(self.segments, tri)
            if cyc is None or canonical_cycle(cyc) not in have:
                out.append(f"triangle on {tri} is not a disk")
        return out


def _triangle(segments: Sequence[Path], tri: Sequence[int]) -> list[int] | None:
    seq: list[int] = []
    for a, b in zip(tri, tri[1:] + tri[:1]):
        p = next((p for p in segments if {p[0], p[-1]} == {a, b}), None)
        if p is None:
            return None
        if p[0] != a:
            p = p[::-1]
        seq.extend(p[:-1])
    return seq


def detached_k4_on(eta: HomeomorphicEmbedding, ds: DiskSystem, vs: Sequence[int]) -> DetachedK4 | None:
    pre = eta.preimage()
    if len(vs) != 4 or any(v not in pre for v in vs):
        return None
    segs = []
    for a, b in combinations(vs, 2):
        e = norm_edge(pre[a], pre[b])
        if e not in eta.edge_map:
            return None
        segs.append(tuple(eta.edge_map[e]))
    have = {canonical_cycle(c) for c in ds.disks}
    disks = []
    for tri in combinations(vs, 3):
        cyc = canonical_cycle(_triangle(segs, list(tri)))
        if cyc not in have:
            return None
        disks.append(cyc)
    return DetachedK4(tuple(sorted(vs)), tuple(segs), tuple(disks))


# --- bridge trichotomy ---------------------------------------------------------------

ALL_IN_ONE_DISK = "AllInOneDisk"
JUMP_WITNESS = "JumpWitness"
TRIAD_WITNESS = "TriadWitness"
DETACHED_K4_WITNESS = "DetachedK4Witness"


@dataclass(frozen=True)
class BridgeClass:
    tag: str
    disk: Cycle | None = None
    witness: object = None


def classify_bridge_against_disks(eta: HomeomorphicEmbedding, ds: DiskSystem, b: Bridge) -> BridgeClass:
    att = sorted(b.attachments)
    if len(att) < 2:
        raise ValueError("bridge has fewer than two attachments")
    for c in ds.disks:
        if set(att) <= set(c):
            return BridgeClass(ALL_IN_ONE_DISK, disk=c)
    for a1, a2 in combinations(att, 2):
        if not ds.shares_disk(a1, a2):
            return BridgeClass(JUMP_WITNESS, witness=SJump(b.path(eta.host, a1, a2)))
    for feet in combinations(att, 3):
        if not ds.shares_disk(*feet):
            t = _triad_in_bridge(eta, b, feet)
            if t is None:
                raise RuntimeError(f"no hub for feet {feet} inside a connected bridge")
            return BridgeClass(TRIAD_WITNESS, witness=t)
    k4 = detached_k4_on(eta, ds, att)
    if k4 is None:
        raise RuntimeError(f"attachments {att} admit no jump, triad or detached K4")
    return BridgeClass(DETACHED_K4_WITNESS, witness=k4)


# --- tripods ---------------------------------------------------------------------------

@dataclass(frozen=True)
class STripod:
    base: Path                   # the segment Z, oriented z..w
    paths: tuple[Path, Path, Path]
    feet: tuple[int, int, int, int]     # x1, y1, x2, y2

    @property
    def legs(self) -> tuple[Path, Path, Path]:
        z = self.base
        x1, y1, _, y2 = self.feet
        p2 = self.paths[1]
        y3 = self.paths[2][-1]
        return (z[:z.index(x1) + 1], z[z.index(y1):], p2[p2.index(y3):])

    def leg_sum(self) -> int:
        return sum(len(leg) - 1 for leg in self.legs)

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem | None = None) -> list[str]:
        s = eta.image_vertices()
        host = eta.host
        z = list(self.base)
        out = []
        if tuple(z) not in {tuple(p) for p in eta.edge_map.values()} | \
                {tuple(p[::-1]) for p in eta.edge_map.values()}:
            out.append("base is not a segment")
        p1, p2, p3 = self.paths
        x1, y1, x2, y2 = self.feet
        out += s_path_problems(host, s, p1) + s_path_problems(host, s, p2)
        if (p1[0], p1[-1]) != (x1, y1) or (p2[0], p2[-1]) != (x2, y2):
            out.append("feet do not match path ends")
        if set(p1) & set(p2):
            out.append("P1 and P2 meet")
        if y2 in z:
            out.append("y2 lies on the base")
        elif not all(v in z for v in (x1, x2, y1)) or not z.index(x1) < z.index(x2) < z.index(y1):
            out.append("feet are out of order on the base")
        out += _walk_problems(host, p3)
        if len(p3) < 2 or p3[0] not in p1 or p3[-1] not in p2:
            out.append("P3 does not join P1 to P2")
        if any(x in s and x != y2 for x in p3):
            out.append("P3 meets S")
        if set(p3[1:-1]) & (set(p1) | set(p2)):
            out.append("P3 interior meets P1 or P2")
        return out


def _contracted_target(host: Graph, inner: set[int], targets: set[int]):
    """Host restricted to inner plus one extra vertex adjacent to every neighbour of targets."""
    t = host.next_id()
    es = [e for e in host.edges if e[0] in inner and e[1] in inner]
    es += [(x, t) for x in inner if host.neighbors(x) & targets]
    return Graph(inner | {t}, es), t


def _hub_paths(host: Graph, inner: frozenset[int], ends: Sequence[int], target_set: set[int]):
    """A hub in ``inner`` with disjoint paths to each end and to some vertex of target_set."""
    g, t = _contracted_target(host, set(inner) | set(ends), target_set)
    for hub in sorted(inner):
        ps = fan(g, hub, [*ends, t], inner)
        if ps is None:
            continue
        last = ps[-1]
        tail = last[-2]
        y3 = min(host.neighbors(tail) & target_set)
        ps[-1] = last[:-1] + [y3]
        return hub, ps
    return None


def iter_tripods(eta: HomeomorphicEmbedding, path_limit: int = 50) -> Iterator[STripod]:
    bs = bridges(eta)
    for _, zpath in sorted(eta.edge_map.items()):
        zs = list(zpath)
        pos = {x: i for i, x in enumerate(zs)}
        for b1 in bs:
            if b1.kind == CHORD_EDGE:
                continue
            on = sorted((a for a in b1.attachments if a in pos), key=pos.get)
            for x1, y1 in combinations(on, 2):
                if pos[y1] - pos[x1] < 2:
                    continue
                mids = zs[pos[x1] + 1:pos[y1]]
                for b2 in bs:
                    for x2 in mids:
                        if x2 not in b2.attachments:
                            continue
                        for y2 in sorted(b2.attachments - set(zs)):
                            yield from _tripods_for(eta, zs, b1, b2, x1, y1, x2, y2, path_limit)


def _tripods_for(eta, zs, b1: Bridge, b2: Bridge, x1, y1, x2, y2, path_limit) -> Iterator[STripod]:
    host = eta.host
    if b1 is not b2:
        if y2 not in b1.attachments:
            return
        found = _hub_paths(host, b1.interior, [x1, y1], {y2})
        if found is None:
            return
        hub, (q1, q2, q3) = found
        p1 = tuple(q1[::-1] + q2[1:])
        p2 = b2.path(host, x2, y2)
        yield STripod(tuple(zs), (p1, tuple(p2), tuple(q3)), (x1, y1, x2, y2))
        return
    for p2 in iter_paths(host, x2, y2, b1.interior, path_limit):
        if len(p2) < 3:
            continue
        rest = b1.interior - set(p2)
        found = _hub_paths(host, rest, [x1, y1], set(p2[1:]))
        if found is None:
            continue
        hub, (q1, q2, q3) = found
        p1 = tuple(q1[::-1] + q2[1:])
        yield STripod(tuple(zs), (p1, tuple(p2), tuple(q3)), (x1, y1, x2, y2))
        return


def find_tripod(eta: HomeomorphicEmbedding, ds: DiskSystem | None = None) -> STripod | None:
    return next(iter_tripods(eta), None)


# --- tunnels ---------------------------------------------------------------------------

@dataclass(frozen=True)
class STunnel:
    tripod: STripod
    p4: Path
    disk: Cycle            # C, containing the base and y2
    other_disk: Cycle      # C', the other disk containing the base

    def violations(self, eta: HomeomorphicEmbedding, ds: DiskSystem) -> list[str]:
        out = self.tripod.violations(eta)
        if out:
            return out
        host = eta.host
        s = eta.image_vertices()
        z = list(self.tripod.base)
        p1, p2, p3 = self.tripod.paths
        x1, y1, x2, y2 = self.tripod.feet
        zedges = {norm_edge(a, b) for a, b in zip(z, z[1:])}
        holding = [c for c in ds.disks if zedges <= cycle_edges(c)]
        if sorted(canonical_cycle(c) for c in holding) != sorted(
                canonical_cycle(c) for c in (self.disk, self.other_disk)) or len(holding) != 2:
            out.append("disks are not the two disks containing the base")
            return out
        c, c2 = set(self.disk), set(self.other_disk)
        if y2 not in c or y2 in c2:
            out.append("y2 is not in C minus C'")
        p4 = self.p4
        out += s_path_problems(host, s, p4)
        if out:
            return out
        inner = z[z.index(x1) + 1:z.index(y1)]
        if p4[0] not in inner:
            out.append("x4 is not inside x1Zy1")
        if p4[-1] not in c2 or p4[-1] in c:
            out.append("y4 is not in C' minus C")
        if set(p4[1:-1]) & (set(p1) | set(p2) | set(p3)):
            out.append("P4 interior meets the tripod")
        bs = bridges(eta)
        b1 = next(b for b in bs if norm_edge(p1[0], p1[1]) in b.edges)
        b2 = next(b for b in bs if norm_edge(p2[0], p2[1]) in b.edges)
        if not (b1.attachments | b2.attachments) <= c:
            out.append("B1 or B2 attaches off C")
        for b in bs:
            if b is b1 or b is b2 or not (b.attachments & set(inner)):
                continue
            if not b.attachments <= c2 | {y2}:
                out.append("another bridge at x1Zy1 attaches outside C' and y2")
                break
        if b1 is not b2:
            for b in (b1, b2):
                if b.attachments - set(z) != {y2}:
                    out.append("a bridge has an off-base attachment other than y2")
                    break
        return out


def iter_tunnels(eta: HomeomorphicEmbedding, ds: DiskSystem) -> Iterator[STunnel]:
    host = eta.host
    bs = bridges(eta)
    for tp in iter_tripods(eta):
        z = list(tp.base)
        zedges = {norm_edge(a, b) for a, b in zip(z, z[1:])}
        holding = [c for c in ds.disks if zedges <= cycle_edges(c)]
        if len(holding) != 2:
            continue
        x1, y1, x2, y2 = tp.feet
        if y2 in holding[0] and y2 not in holding[1]:
            c, c2 = holding
        elif y2 in holding[1] and y2 not in holding[0]:
            c2, c = holding
        else:
            continue
        used = set().union(*map(set, tp.paths))
        inner = z[z.index(x1) + 1:z.index(y1)]
        for b in bs:
            for x4 in inner:
                if x4 not in b.attachments:
                    continue
                for y4 in sorted(b.attachments):
                    if y4 not in c2 or y4 in c:
                        continue
                    if b.kind == CHORD_EDGE:
                        p4 = (x4, y4)
                    else:
                        p4 = inner_path(host, x4, y4, b.interior - used)
                        if p4 is None:
                            continue
                    t = STunnel(tp, tuple(p4), c, c2)
                    if not t.violations(eta, ds):
                        yield t


def find_tunnel(eta: HomeomorphicEmbedding, ds: DiskSystem) -> STunnel | None:
    return next(iter_tunnels(eta, ds), None)


# --- S-separations -----------------------------------------------------------------------

def s_separation_problems(eta: HomeomorphicEmbedding, sep: Separation) -> list[str]:
    host = eta.host
    out = []
    if not sep.is_valid_for(host):
        return ["not a separation of the host"]
    if sep.order > 3:
        out.append("order exceeds three")
    x, y = sep.side_a, sep.side_b
    if len((x - y) & eta.branch_vertices()) > 1:
        out.append("X-Y holds more than one branch vertex")
    cut = sorted(x & y)
    hx = host.subgraph(x)
    if _disk_drawable(hx, cut):
        out.append("H[X] is disk-drawable with the cut on the boundary")
    return out


def _disk_drawable(g: Graph, boundary: Sequence[int]) -> bool:
    # with at most three boundary vertices every cyclic order is equivalent,
    # so a single apex joined to the boundary decides the question
    apex = g.next_id()
    return is_planar(g.add_vertices([apex]).add_edges((apex, b) for b in boundary))
