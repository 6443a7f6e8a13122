"""Planarity, rotation systems, peripheral cycles and the 2-paths trichotomy."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence, Union

import networkx as nx

from .graph import (Edge, Graph, PreconditionError, Separation, is_three_connected,
                    norm_edge, topological_reduction)


Cycle = tuple[int, ...]


# --- cycles -----------------------------------------------------------------

def canonical_cycle(seq: Sequence[int]) -> Cycle:
    """Start at the least vertex and walk toward its smaller cycle neighbour."""
    seq = list(seq)
    i = seq.index(min(seq))
    fwd = seq[i:] + seq[:i]
    back = [fwd[0]] + fwd[1:][::-1]
    return tuple(min(fwd, back))


def cycle_edges(c: Sequence[int]) -> frozenset[Edge]:
    return frozenset(norm_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def is_cycle_of(g: Graph, c: Sequence[int]) -> bool:
    if len(c) < 3 or len(set(c)) != len(c):
        return False
    return all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def cyclic_between(c: Sequence[int], a: int, b: int, x: int) -> bool:
    """Is x strictly inside the forward arc of c from a to b?"""
    n = len(c)
    pos = {v: i for i, v in enumerate(c)}
    da = (pos[x] - pos[a]) % n
    return 0 < da < (pos[b] - pos[a]) % n


def interleaved(c: Sequence[int], p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Do the pairs p and q alternate around the cycle c?"""
    if len({*p, *q}) < 4:
        return False
    return cyclic_between(c, p[0], p[1], q[0]) != cyclic_between(c, p[0], p[1], q[1])


# --- embeddings -------------------------------------------------------------

@dataclass(frozen=True)
class PlanarEmbedding:
    """A rotation system: for each vertex the cyclic order of its neighbours."""

    rotation: dict[int, tuple[int, ...]]
    faces: list[tuple[int, ...]] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "faces", trace_faces(self.rotation))

    def graph(self) -> Graph:
        return Graph(self.rotation, ((u, v) for u, nb in self.rotation.items() for v in nb))

    def face_cycles(self) -> list[Cycle]:
        """Faces whose walk is a cycle, canonicalised as vertex cycles."""
        return sorted(canonical_cycle(f) for f in self.faces
                      if len(f) >= 3 and len(set(f)) == len(f))

    def is_valid(self) -> bool:
        g = self.graph()
        for v, nb in self.rotation.items():
            if sorted(nb) != sorted(g.neighbors(v)):
                return False
        darts = 0
        for f in self.faces:
            darts += len(f)
        if darts != 2 * g.size():
            return False
        face_of: dict[int, int] = {}
        for i, f in enumerate(self.faces):
            for v in f:
                face_of.setdefault(v, i)
        for comp in g.components():
            nv = len(comp)
            ne = g.edges_within(comp)
            if ne == 0:
                continue
            nf = sum(1 for f in self.faces if f and f[0] in comp)
            if nv - ne + nf != 2:
                return False
        return True

    def to_text(self) -> str:
        return "\n".join(f"{v}: " + " ".join(map(str, self.rotation[v]))
                         for v in sorted(self.rotation)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> PlanarEmbedding:
        rot: dict[int, tuple[int, ...]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            head, sep, tail = line.partition(":")
            if not sep:
                raise ValueError(f"line {lineno}: expected 'v: n1 n2 ...'")
            try:
                rot[int(head)] = tuple(int(t) for t in tail.split())
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer id") from None
        return cls(rot)


def trace_faces(rotation: dict[int, Sequence[int]]) -> list[tuple[int, ...]]:
    """Face walks of a rotation system, each rotated to its least form."""
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    for v, nb in rotation.items():
        k = len(nb)
        for i, u in enumerate(nb):
            # dart (u, v) continues as (v, next neighbour after u around v)
            succ[(u, v)] = (v, nb[(i + 1) % k])
    seen: set[tuple[int, int]] = set()
    faces = []
    for start in sorted(succ):
        if start in seen:
            continue
        walk = []
        d = start
        while d not in seen:
            seen.add(d)
            walk.append(d[0])
            d = succ[d]
        faces.append(_least_rotation(walk))
    return sorted(faces)


def _least_rotation(walk: list[int]) -> tuple[int, ...]:
    return min(tuple(walk[i:] + walk[:i]) for i in range(len(walk)))


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def planar_embedding(g: Graph) -> PlanarEmbedding | None:
    ok, emb = nx.check_planarity(_to_nx(g))
    if not ok:
        return None
    return PlanarEmbedding({v: tuple(emb.neighbors_cw_order(v)) for v in g.sorted_vertices()})


def is_planar(g: Graph) -> bool:
    return nx.check_planarity(_to_nx(g))[0]


# --- peripheral cycles ------------------------------------------------------

def is_peripheral(g: Graph, c: Sequence[int]) -> bool:
    """Induced cycle whose removal leaves a connected graph."""
    if not is_cycle_of(g, c):
        return False
    cs = set(c)
    if g.edges_within(cs) != len(c):
        return False
    return g.is_connected(v for v in g if v not in cs)


def is_subdivided_planar_3c(g: Graph) -> bool:
    red = topological_reduction(g)
    return red is not None and is_three_connected(red) and is_planar(g)


def peripheral_cycles(g: Graph) -> list[Cycle]:
    """Peripheral cycles of a subdivision of a 3-connected planar graph.

    These are exactly the facial cycles of its unique planar embedding.
    """
    if not is_subdivided_planar_3c(g):
        raise PreconditionError("graph is not a subdivision of a 3-connected planar graph")
    emb = planar_embedding(g)
    assert emb is not None
    return emb.face_cycles()


Element = Union[int, tuple[int, int]]


def _element_in(c: Sequence[int], x: Element) -> bool:
    if isinstance(x, tuple):
        return norm_edge(*x) in cycle_edges(c)
    return x in c


def cofacial_vertices(g: Graph, x: Element, y: Element,
                      cycles: list[Cycle] | None = None) -> bool:
    """Does some peripheral cycle contain both elements (vertices or edges)?"""
    cycles = peripheral_cycles(g) if cycles is None else cycles
    return any(_element_in(c, x) and _element_in(c, y) for c in cycles)


# --- disk drawings ----------------------------------------------------------

def disk_embeddable(g: Graph, boundary: Sequence[int]) -> bool:
    """Can g be drawn in a disk with ``boundary`` on the rim in the given order?"""
    boundary = list(boundary)
    if not boundary:
        return is_planar(g)
    apex = g.next_id()
    es = [(apex, b) for b in boundary]
    if len(boundary) >= 3:
        es += [(boundary[i], boundary[(i + 1) % len(boundary)]) for i in range(len(boundary))]
    return is_planar(g.add_vertices([apex]).add_edges(es))


def embedding_with_facial_cycle(g: Graph, c: Sequence[int]) -> PlanarEmbedding | None:
    """A planar embedding of g in which c bounds a face, if one exists."""
    c = list(c)
    n = len(c)
    apex = g.next_id()
    mids = [apex + 1 + i for i in range(n)]
    es = [e for e in g.edges if e not in cycle_edges(c)]
    for i in range(n):
        a, b, m = c[i], c[(i + 1) % n], mids[i]
        es += [(a, m), (m, b), (m, apex), (a, apex)]
    gadget = Graph(list(g.vertices) + [apex] + mids, es)
    emb = planar_embedding(gadget)
    if emb is None:
        return None
    mid_end = {}
    for i in range(n):
        mid_end[(c[i], mids[i])] = c[(i + 1) % n]
        mid_end[(c[(i + 1) % n], mids[i])] = c[i]
    rot: dict[int, tuple[int, ...]] = {}
    on_c = set(c)
    for v in g.sorted_vertices():
        r = list(emb.rotation[v])
        if v not in on_c:
            rot[v] = tuple(r)
            continue
        k = r.index(apex)
        r = r[k:] + r[:k]
        hits = [i for i, u in enumerate(r) if u in mids]
        i1, i2 = hits[0], hits[-1]
        sector = r[1:i1] + r[i2 + 1:]
        other = [mid_end.get((v, u), u) for u in r[i1:i2 + 1]]
        rot[v] = tuple([other[0]] + sector + other[1:])
    out = PlanarEmbedding(rot)
    if not out.is_valid():
        raise RuntimeError("facial-cycle embedding repair failed")
    if canonical_cycle(c) not in out.face_cycles():
        raise RuntimeError("cycle did not end up facial")
    return out


# --- 2-paths trichotomy -----------------------------------------------------

@dataclass(frozen=True)
class TwoPathsOutcome:
    """One of: a planar embedding with C facial, a small separation, or two crossing paths."""

    tag: str
    embedding: PlanarEmbedding | None = None
    separation: Separation | None = None
    paths: tuple[tuple[int, ...], tuple[int, ...]] | None = None


EMBEDDING_WITH_FACIAL_C = "EmbeddingWithFacialC"
SMALL_SEPARATION = "SmallSeparation"
CROSSING_PATHS = "CrossingPaths"


def c_bridges(g: Graph, c: Sequence[int]) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Bridges of c as (interior vertices, attachments); chords have empty interior."""
    cs = set(c)
    ce = cycle_edges(c)
    out = []
    for u, v in g.sorted_edges():
        if u in cs and v in cs and (u, v) not in ce:
            out.append((frozenset(), frozenset((u, v))))
    for comp in g.components(v for v in g if v not in cs):
        att = frozenset(w for x in comp for w in g.neighbors(x) if w in cs)
        out.append((comp, att))
    return out


def _paths_inside(g: Graph, s: int, t: int, inner: frozenset[int], limit: int):
    """Simple s-t paths with all interior vertices in ``inner``."""
    count = 0
    stack = [(s, [s])]
    while stack:
        x, p = stack.pop()
        for y in sorted(g.neighbors(x), reverse=True):
            if y == t and len(p) > 1:
                yield p + [t]
                count += 1
                if count >= limit:
                    return
            elif y in inner and y not in p:
                stack.append((y, p + [y]))


def find_crossing_paths(g: Graph, c: Sequence[int], limit: int = 20000):
    """Two disjoint paths with interleaved ends on c, otherwise off c."""
    c = list(c)
    bridges = c_bridges(g, c)

    def orient(p1: list[int], p2: list[int]):
        if not cyclic_between(c, p1[0], p1[-1], p2[0]):
            p2 = p2[::-1]
        return tuple(p1), tuple(p2)

    def sample(inner, s, t):
        if not inner:
            return [s, t]
        path = g.shortest_path(s, t, inner)
        return path

    for i, (in1, at1) in enumerate(bridges):
        for in2, at2 in bridges[i + 1:]:
            for p in combinations(sorted(at1), 2):
                for q in combinations(sorted(at2), 2):
                    if interleaved(c, p, q):
                        return orient(sample(in1, *p), sample(in2, *q))
    for inner, att in bridges:
        if not inner:
            continue
        for p in combinations(sorted(att), 2):
            for q in combinations(sorted(att), 2):
                if not interleaved(c, p, q) or p > q:
                    continue
                for path in _paths_inside(g, p[0], p[1], inner, limit):
                    rest = inner - set(path)
                    other = g.shortest_path(q[0], q[1], rest)
                    if other is not None and len(other) > 2:
                        return orient(path, other)
    return None


def find_small_separation(g: Graph, c: Sequence[int]) -> Separation | None:
    cs = set(c)
    vs = g.sorted_vertices()
    for k in range(0, 4):
        for cut in combinations(vs, k):
            x = set(cut)
            a = set(x)
            b = set(x)
            for comp in g.components(v for v in vs if v not in x):
                (a if comp & cs else b).update(comp)
            if b == x:
                continue
            if not disk_embeddable(g.subgraph(b), sorted(x)):
                return Separation(frozenset(a), frozenset(b))
    return None


def two_paths_trichotomy(g: Graph, c: Sequence[int]) -> TwoPathsOutcome:
    if not is_cycle_of(g, c):
        raise ValueError("c is not a cycle of g")
    emb = embedding_with_facial_cycle(g, c)
    if emb is not None:
        return TwoPathsOutcome(EMBEDDING_WITH_FACIAL_C, embedding=emb)
    paths = find_crossing_paths(g, c)
    if paths is not None:
        return TwoPathsOutcome(CROSSING_PATHS, paths=paths)
    sep = find_small_separation(g, c)
    if sep is not None:
        return TwoPathsOutcome(SMALL_SEPARATION, separation=sep)
    raise RuntimeError("no outcome found; search bound exceeded")


def check_two_paths_outcome(g: Graph, c: Sequence[int], out: TwoPathsOutcome) -> bool:
    """Independently re-check the payload of a trichotomy outcome."""
    c = list(c)
    cs = set(c)
    if out.tag == EMBEDDING_WITH_FACIAL_C:
        emb = out.embedding
        return (emb is not None and emb.is_valid() and emb.graph() == g
                and canonical_cycle(c) in emb.face_cycles())
    if out.tag == CROSSING_PATHS:
        p1, p2 = out.paths
        for p in (p1, p2):
            if len(set(p)) != len(p) or any(not g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
                return False
            if p[0] not in cs or p[-1] not in cs or any(v in cs for v in p[1:-1]):
                return False
        if set(p1) & set(p2):
            return False
        s1, t1, s2, t2 = p1[0], p1[-1], p2[0], p2[-1]
        return cyclic_between(c, s1, t1, s2) and cyclic_between(c, t1, s1, t2)
    if out.tag == SMALL_SEPARATION:
        sep = out.separation
        if sep is None or not sep.is_valid_for(g) or sep.order > 3 or not cs <= sep.side_a:
            return False
        if sep.side_b <= sep.side_a:
            return False
        return not disk_embeddable(g.subgraph(sep.side_b), sorted(sep.cut))
    return False
