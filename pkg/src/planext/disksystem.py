"""Disk systems: cycle families standing in for the faces of a planar subdivision."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .graph import Edge, Graph, PreconditionError, norm_edge
from .planarity import (Cycle, canonical_cycle, cycle_edges, is_planar, is_subdivided_planar_3c,
                        peripheral_cycles)
from .rerouting import Rerouting, replay
from .subdivision import HomeomorphicEmbedding, bridges_of, embedding_from_paths, recover_segments

WEAK = "Weak"
FULL = "Full"


def subdivision_embedding(s: Graph, host: Graph | None = None) -> HomeomorphicEmbedding:
    """View s as a subdivision of its reduction; branch vertices keep their ids."""
    branch, segs = recover_segments(s)
    g = Graph(branch, ((p[0], p[-1]) for p in segs))
    if g.size() != len(segs):
        raise PreconditionError("graph is not a subdivision of a simple graph")
    return embedding_from_paths(g, s if host is None else host, {v: v for v in branch}, segs)


def image_cycle(eta: HomeomorphicEmbedding, source_cycle: Sequence[int]) -> Cycle:
    """The S-cycle formed by the segments of a cycle of the source graph."""
    out: list[int] = []
    n = len(source_cycle)
    for i in range(n):
        a, b = source_cycle[i], source_cycle[(i + 1) % n]
        p = eta.edge_map[norm_edge(a, b)]
        if p[0] != eta.vertex_map[a]:
            p = p[::-1]
        out.extend(p[:-1])
    return canonical_cycle(out)


def source_cycle_of(eta: HomeomorphicEmbedding, c: Sequence[int]) -> Cycle:
    """The source cycle whose segment images make up the S-cycle c."""
    pre = eta.preimage()
    seq = [pre[x] for x in c if x in pre]
    if len(seq) < 3:
        raise ValueError("cycle passes through fewer than three branch vertices")
    return canonical_cycle(seq)


@dataclass(frozen=True)
class DiskSystem:
    carrier: Graph
    disks: tuple[Cycle, ...]
    strength: str = FULL
    eta: HomeomorphicEmbedding | None = field(default=None, compare=False)

    def segments(self) -> list[tuple[int, ...]]:
        if self.eta is not None:
            return sorted(tuple(p) for p in self.eta.edge_map.values())
        return recover_segments(self.carrier)[1]

    def disks_containing(self, *xs: int) -> list[Cycle]:
        return [c for c in self.disks if all(x in c for x in xs)]

    def shares_disk(self, *xs: int) -> bool:
        return any(all(x in c for x in xs) for c in self.disks)

    def to_text(self) -> str:
        return "".join(" ".join(map(str, c)) + "\n" for c in self.disks)

    @classmethod
    def from_text(cls, text: str, carrier: Graph, strength: str = FULL,
                  eta: HomeomorphicEmbedding | None = None) -> DiskSystem:
        disks = [canonical_cycle([int(t) for t in line.split()])
                 for line in text.splitlines() if line.strip() and not line.startswith("#")]
        return cls(carrier, tuple(disks), strength, eta)


def from_peripheral(s: Graph) -> DiskSystem:
    if not is_subdivided_planar_3c(s):
        raise PreconditionError("carrier is not a subdivision of a 3-connected planar graph")
    return DiskSystem(s, tuple(peripheral_cycles(s)), FULL, subdivision_embedding(s))


def disk_system_for(eta: HomeomorphicEmbedding) -> DiskSystem:
    """Images of the peripheral cycles of the (planar, 3-connected) source graph."""
    cycles = peripheral_cycles(eta.source)
    return DiskSystem(eta.image(), tuple(sorted(image_cycle(eta, c) for c in cycles)), FULL, eta)


# --- axioms --------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomReport:
    x0: bool
    x1: bool
    x2: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def weak_ok(self) -> bool:
        return self.x0 and self.x1

    @property
    def ok(self) -> bool:
        return self.x0 and self.x1 and self.x2


def validate(ds: DiskSystem) -> AxiomReport:
    s = ds.carrier
    wit: dict = {}
    cover: dict[Edge, int] = {e: 0 for e in s.edges}
    edge_sets = [cycle_edges(c) for c in ds.disks]
    for c, es in zip(ds.disks, edge_sets):
        for e in es:
            if e not in cover:
                wit.setdefault("x0", ("non-edge", e, c))
            else:
                cover[e] += 1
    bad = sorted(e for e, k in cover.items() if k != 2)
    if bad and "x0" not in wit:
        wit["x0"] = ("edge-coverage", bad[0], cover[bad[0]])
    if len(set(ds.disks)) != len(ds.disks):
        wit.setdefault("x0", ("repeated-disk",))
    x0 = "x0" not in wit

    seg_shapes = {(frozenset(p), frozenset(norm_edge(a, b) for a, b in zip(p, p[1:])))
                  for p in ds.segments()}
    for i, j in combinations(range(len(ds.disks)), 2):
        vs = set(ds.disks[i]) & set(ds.disks[j])
        es = edge_sets[i] & edge_sets[j]
        if len(vs) <= 1 and not es:
            continue
        if (frozenset(vs), frozenset(es)) in seg_shapes:
            continue
        wit["x1"] = ("intersection", ds.disks[i], ds.disks[j], tuple(sorted(vs)))
        break
    x1 = "x1" not in wit

    corners: dict[int, set[frozenset[Edge]]] = {}
    for c in ds.disks:
        n = len(c)
        for k in range(n):
            v = c[k]
            corners.setdefault(v, set()).add(frozenset((norm_edge(v, c[k - 1]),
                                                        norm_edge(v, c[(k + 1) % n]))))
    for v in s.sorted_vertices():
        if s.degree(v) <= 3:
            continue
        inc = sorted(norm_edge(v, w) for w in s.neighbors(v))
        have = corners.get(v, set())
        for t in combinations(inc, 3):
            if all(frozenset(p) in have for p in combinations(t, 2)):
                wit["x2"] = ("rotation", v, t)
                break
        if "x2" in wit:
            break
    x2 = "x2" not in wit
    return AxiomReport(x0, x1, x2, wit)


# --- induced systems -----------------------------------------------------------

def induce(ds: DiskSystem, log: Iterable[Rerouting]) -> DiskSystem:
    """Carry each disk through the reroutings via its source-graph cycle."""
    if ds.eta is None:
        raise ValueError("disk system has no embedding to replay the log on")
    log = list(log)
    sources = [source_cycle_of(ds.eta, c) for c in ds.disks]
    for src, c in zip(sources, ds.disks):
        if image_cycle(ds.eta, src) != canonical_cycle(c):
            raise ValueError(f"disk {c} is not a union of segments")
    eta2 = replay(ds.eta, log)
    disks = tuple(sorted(image_cycle(eta2, src) for src in sources))
    return DiskSystem(eta2.image(), disks, ds.strength, eta2)


# --- local planarity -----------------------------------------------------------

def facial_planar(g: Graph, c: Sequence[int]) -> bool:
    """Does g embed in the plane with c bounding the outer face?"""
    apex = g.next_id()
    return is_planar(g.add_vertices([apex]).add_edges((apex, x) for x in c))


@dataclass(frozen=True)
class LocalPlanarity:
    assignment: dict | None
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.assignment is not None


def is_locally_planar(ds: DiskSystem, h: Graph) -> LocalPlanarity:
    """Search for an assignment of bridges to disks meeting the local planarity test.

    The assignment maps each bridge (as its frozen edge set) to a disk.
    """
    s = ds.carrier
    raw = [b for b in bridges_of(h, s.vertices, s.edges) if len(b[3]) >= 2]
    options = []
    for kind, vs, es, att in raw:
        cands = [c for c in ds.disks if att <= set(c)]
        if not cands:
            return LocalPlanarity(None, ("no-disk", tuple(sorted(att))))
        options.append(cands)
    order = sorted(range(len(raw)), key=lambda i: (len(options[i]), i))
    chosen: dict[int, Cycle] = {}
    loads: dict[Cycle, list[int]] = {c: [] for c in ds.disks}

    def ok(c: Cycle) -> bool:
        es = set(cycle_edges(c))
        for i in loads[c]:
            es |= raw[i][2]
        return facial_planar(Graph(c, es), c)

    def rec(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for c in options[i]:
            loads[c].append(i)
            if ok(c):
                chosen[i] = c
                if rec(k + 1):
                    return True
                del chosen[i]
            loads[c].pop()
        return False

    if rec(0):
        return LocalPlanarity({raw[i][2]: chosen[i] for i in chosen})
    worst = order[0] if order else None
    return LocalPlanarity(None, ("no-assignment", tuple(sorted(raw[worst][3])) if worst is not None else ()))
