"""Homeomorphic embeddings of a graph into a host, bridges, and stabilization."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import Budget, Edge, Graph, GraphError, norm_edge


Path = tuple[int, ...]

CHORD_EDGE = "ChordEdge"
COMPONENT_BRIDGE = "ComponentBridge"
UNSTABLE = "Unstable"
RIGID = "Rigid"


@dataclass(frozen=True, eq=False)
class HomeomorphicEmbedding:
    """Vertices of ``source`` go to host vertices, edges to host paths.

    ``edge_map[(u, v)]`` with ``u < v`` runs from the image of u to the image of v.
    """

    source: Graph
    host: Graph
    vertex_map: Mapping[int, int]
    edge_map: Mapping[Edge, Path]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomeomorphicEmbedding):
            return NotImplemented
        return (self.source == other.source and self.host == other.host
                and dict(self.vertex_map) == dict(other.vertex_map)
                and {e: tuple(p) for e, p in self.edge_map.items()}
                == {e: tuple(p) for e, p in other.edge_map.items()})

    __hash__ = None  # type: ignore[assignment]

    # --- derived structure ------------------------------------------------

    def branch_vertices(self) -> frozenset[int]:
        return frozenset(self.vertex_map.values())

    def segment(self, e: tuple[int, int]) -> Path:
        return tuple(self.edge_map[norm_edge(*e)])

    def segments(self) -> dict[Edge, Path]:
        return {e: tuple(p) for e, p in self.edge_map.items()}

    def image(self) -> Graph:
        if "image" not in self._cache:
            vs = set(self.vertex_map.values())
            es = []
            for p in self.edge_map.values():
                vs.update(p)
                es.extend(zip(p, p[1:]))
            self._cache["image"] = Graph(vs, es)
        return self._cache["image"]

    def image_vertices(self) -> frozenset[int]:
        return self.image().vertices

    def preimage(self) -> dict[int, int]:
        return {x: v for v, x in self.vertex_map.items()}

    def segments_containing(self, x: int) -> list[Edge]:
        return [e for e, p in sorted(self.edge_map.items()) if x in p]

    def interior_owner(self) -> dict[int, Edge]:
        """Map each internal segment vertex to the source edge whose image holds it."""
        if "owner" not in self._cache:
            own = {}
            for e, p in self.edge_map.items():
                for x in p[1:-1]:
                    own[x] = e
            self._cache["owner"] = own
        return self._cache["owner"]

    def with_paths(self, updates: Mapping[Edge, Sequence[int]],
                   vertex_updates: Mapping[int, int] | None = None) -> HomeomorphicEmbedding:
        em = dict(self.edge_map)
        vm = dict(self.vertex_map)
        vm.update(vertex_updates or {})
        for e, p in updates.items():
            e = norm_edge(*e)
            p = tuple(p)
            em[e] = p if p[0] == vm[e[0]] else p[::-1]
        return HomeomorphicEmbedding(self.source, self.host, vm, em)

    # --- validation -------------------------------------------------------

    def violations(self) -> list[str]:
        out = []
        g, h = self.source, self.host
        if set(self.vertex_map) != set(g.vertices):
            out.append("vertex map domain differs from source vertices")
        imgs = list(self.vertex_map.values())
        if len(set(imgs)) != len(imgs):
            out.append("vertex map is not injective")
        for v, x in self.vertex_map.items():
            if not h.has_vertex(x):
                out.append(f"image of vertex {v} ({x}) is not a host vertex")
        if set(self.edge_map) != set(g.edges):
            out.append("edge map domain differs from source edges")
            return out
        branch = set(imgs)
        used: dict[int, Edge] = {}
        for e, p in sorted(self.edge_map.items()):
            if len(p) < 2:
                out.append(f"path for edge {e} has length zero")
                continue
            if p[0] != self.vertex_map.get(e[0]) or p[-1] != self.vertex_map.get(e[1]):
                out.append(f"path for edge {e} has wrong ends")
            if len(set(p)) != len(p):
                out.append(f"path for edge {e} repeats a vertex")
            for a, b in zip(p, p[1:]):
                if not h.has_edge(a, b):
                    out.append(f"path for edge {e} uses non-edge ({a},{b})")
            for x in p[1:-1]:
                if x in branch:
                    out.append(f"path for edge {e} passes through branch vertex {x}")
                if x in used:
                    out.append(f"paths for edges {used[x]} and {e} share internal vertex {x}")
                used[x] = e
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    # --- text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"vertex {v} -> {self.vertex_map[v]}" for v in sorted(self.vertex_map)]
        lines += [f"edge ({u},{v}) -> " + " ".join(map(str, self.edge_map[(u, v)]))
                  for u, v in sorted(self.edge_map)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, source: Graph, host: Graph) -> HomeomorphicEmbedding:
        vm: dict[int, int] = {}
        em: dict[Edge, Path] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"vertex\s+(\d+)\s*->\s*(\d+)", line)
            if m:
                vm[int(m.group(1))] = int(m.group(2))
                continue
            m = re.fullmatch(r"edge\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*->\s*([\d\s]+)", line)
            if m:
                u, v = int(m.group(1)), int(m.group(2))
                p = tuple(int(t) for t in m.group(3).split())
                if u > v:
                    u, v, p = v, u, p[::-1]
                em[(u, v)] = p
                continue
            raise GraphError(f"line {lineno}: unrecognised embedding line {line!r}")
        return cls(source, host, vm, em)


def identity_embedding(g: Graph, host: Graph | None = None) -> HomeomorphicEmbedding:
    return HomeomorphicEmbedding(g, host if host is not None else g,
                                 {v: v for v in g.vertices}, {e: e for e in g.edges})


def embedding_from_paths(g: Graph, host: Graph, vertex_map: Mapping[int, int],
                         paths: Iterable[Sequence[int]]) -> HomeomorphicEmbedding:
    """Assemble an embedding from branch images and unordered segment paths."""
    pre = {x: v for v, x in vertex_map.items()}
    em: dict[Edge, Path] = {}
    for p in paths:
        u, v = pre[p[0]], pre[p[-1]]
        e = norm_edge(u, v)
        em[e] = tuple(p) if u < v else tuple(p)[::-1]
    return HomeomorphicEmbedding(g, host, dict(vertex_map), em)


def recover_segments(s: Graph) -> tuple[frozenset[int], list[Path]]:
    """Branch vertices and segments of a subdivision with no degree-2 branch vertex."""
    branch = frozenset(v for v in s if s.degree(v) != 2)
    segs = []
    seen: set[tuple[int, int]] = set()
    for b in sorted(branch):
        for first in sorted(s.neighbors(b)):
            if (b, first) in seen:
                continue
            p = [b, first]
            while p[-1] not in branch:
                p.append(next(w for w in s.neighbors(p[-1]) if w != p[-2]))
            seen.add((b, first))
            seen.add((p[-1], p[-2]))
            segs.append(tuple(p) if p[0] <= p[-1] else tuple(p[::-1]))
    return branch, sorted(segs)


# --- bridges -----------------------------------------------------------------

@dataclass(frozen=True)
class Bridge:
    kind: str
    vertices: frozenset[int]
    edges: frozenset[Edge]
    attachments: frozenset[int]
    segment: Edge | None = None

    @property
    def interior(self) -> frozenset[int]:
        return self.vertices - self.attachments

    @property
    def tag(self) -> str:
        return UNSTABLE if self.segment is not None else RIGID

    @property
    def is_unstable(self) -> bool:
        return self.segment is not None

    def path(self, host: Graph, x: int, y: int) -> Path | None:
        """A path from x to y through this bridge (a single edge for a chord)."""
        if self.kind == CHORD_EDGE:
            return (x, y) if {x, y} == set(self.attachments) else None
        p = host.shortest_path(x, y, self.interior)
        if p is None or len(p) < 3:
            inner = [w for w in sorted(host.neighbors(x)) if w in self.interior]
            for w in inner:
                q = host.shortest_path(w, y, self.interior)
                if q is not None:
                    return (x, *q)
            return None
        return tuple(p)


def bridges_of(host: Graph, s_vertices: Iterable[int], s_edges: Iterable[Edge]) -> list[tuple]:
    """Raw bridges of the subgraph (s_vertices, s_edges) in host."""
    sv = set(s_vertices)
    se = {norm_edge(*e) for e in s_edges}
    out = []
    for u, v in host.sorted_edges():
        if u in sv and v in sv and (u, v) not in se:
            out.append((CHORD_EDGE, frozenset((u, v)), frozenset([(u, v)]), frozenset((u, v))))
    for comp in host.components(v for v in host if v not in sv):
        es = set()
        att = set()
        for x in comp:
            for y in host.neighbors(x):
                es.add(norm_edge(x, y))
                if y in sv:
                    att.add(y)
        out.append((COMPONENT_BRIDGE, frozenset(comp | att), frozenset(es), frozenset(att)))
    return out


def bridge_segment(eta: HomeomorphicEmbedding, attachments: frozenset[int]) -> Edge | None:
    """The first segment containing every attachment, or None (rigid)."""
    if not attachments:
        return None
    for e, p in sorted(eta.edge_map.items()):
        if attachments <= set(p):
            return e
    return None


def bridges(eta: HomeomorphicEmbedding) -> list[Bridge]:
    if "bridges" not in eta._cache:
        s = eta.image()
        out = []
        for kind, vs, es, att in bridges_of(eta.host, s.vertices, s.edges):
            out.append(Bridge(kind, vs, es, att, bridge_segment(eta, att)))
        eta._cache["bridges"] = out
    return eta._cache["bridges"]


def bridge_containing(eta: HomeomorphicEmbedding, path: Sequence[int]) -> Bridge:
    """The bridge holding an S-path (its first edge decides)."""
    e = norm_edge(path[0], path[1])
    for b in bridges(eta):
        if e in b.edges:
            return b
    raise ValueError(f"path {tuple(path)} is not inside a bridge")


def rigid_potential(eta: HomeomorphicEmbedding) -> int:
    """Number of host edges lying in rigid bridges."""
    return sum(len(b.edges) for b in bridges(eta) if not b.is_unstable)


def is_two_separated(eta: HomeomorphicEmbedding, b: Bridge) -> bool:
    if not b.attachments:
        return False
    h = eta.host
    branch = eta.branch_vertices()
    for e, z in sorted(eta.edge_map.items()):
        if not b.attachments <= set(z):
            continue
        pos = [z.index(a) for a in b.attachments]
        lo, hi = min(pos), max(pos)
        for i in range(lo, -1, -1):
            for j in range(hi, len(z)):
                u, v = z[i], z[j]
                cut = {u, v}
                seeds = (set(b.vertices) | set(z[i:j + 1])) - cut
                reach = set()
                for comp in h.components(w for w in h if w not in cut):
                    if comp & seeds:
                        reach |= comp
                if not reach & branch:
                    return True
    return False


def two_separation(eta: HomeomorphicEmbedding, b: Bridge):
    """Return (u, v, side_b) witnessing 2-separation, or None."""
    h = eta.host
    branch = eta.branch_vertices()
    for e, z in sorted(eta.edge_map.items()):
        if not b.attachments or not b.attachments <= set(z):
            continue
        pos = [z.index(a) for a in b.attachments]
        lo, hi = min(pos), max(pos)
        for i in range(lo, -1, -1):
            for j in range(hi, len(z)):
                cut = {z[i], z[j]}
                seeds = (set(b.vertices) | set(z[i:j + 1])) - cut
                reach = set()
                for comp in h.components(w for w in h if w not in cut):
                    if comp & seeds:
                        reach |= comp
                if not reach & branch:
                    return z[i], z[j], frozenset(reach | cut)
    return None


def _stabilizing_move(eta: HomeomorphicEmbedding, skip: frozenset = frozenset()):
    """Pick the unstable bridge whose widest span covers a rigid attachment.

    ``skip`` holds ``(min vertex, x, y)`` keys of moves the caller has ruled out.
    """
    bs = bridges(eta)
    rigid_att = set()
    for b in bs:
        if not b.is_unstable:
            rigid_att |= b.attachments
    best = None
    for b in bs:
        if not b.is_unstable or len(b.attachments) < 2:
            continue
        z = eta.edge_map[b.segment]
        pos = sorted(z.index(a) for a in b.attachments)
        i, j = pos[0], pos[-1]
        if not any(x in rigid_att for x in z[i + 1:j]) or (min(b.vertices), z[i], z[j]) in skip:
            continue
        key = (-(j - i), min(b.vertices))
        if best is None or key < best[0]:
            best = (key, b, z[i], z[j])
    return best


def stabilize(eta: HomeomorphicEmbedding):
    """Proper I-reroutings until every unstable bridge is 2-separated.

    Returns the final embedding and the list of reroutings applied.
    """
    from .rerouting import apply_i_rerouting

    log = []
    while True:
        move = _stabilizing_move(eta)
        if move is None:
            return eta, log
        _, b, x, y = move
        q = b.path(eta.host, x, y)
        before = rigid_potential(eta)
        eta, r = apply_i_rerouting(eta, b.segment, x, y, q, check_proper=True)
        if rigid_potential(eta) <= before:
            raise AssertionError("rigid potential failed to increase")
        log.append(r)


# --- subdivision search ----------------------------------------------------

def _search_order(g: Graph) -> list[int]:
    order: list[int] = []
    rest = set(g.vertices)
    while rest:
        start = max(rest, key=lambda v: (g.degree(v), -v))
        queue = [start]
        rest.discard(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(g.neighbors(v), key=lambda w: (-g.degree(w), w)):
                if w in rest:
                    rest.discard(w)
                    queue.append(w)
    return order


def _distances(h: Graph, target: int, blocked: set[int]) -> dict[int, int]:
    dist = {target: 0}
    frontier = [target]
    while frontier:
        nxt = []
        for x in frontier:
            for y in h.neighbors(x):
                if y not in dist and y not in blocked:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def find_subdivision(g: Graph, h: Graph, budget: int | None = 10**6) -> HomeomorphicEmbedding | None:
    """Search for a subdivision of g in h.

    Returns None when the search tree is exhausted; raises BudgetExhausted
    when the node budget runs out first.
    """
    if g.order() > h.order() or g.size() > h.size():
        return None
    counter = Budget(budget)
    order = _search_order(g)
    vmap: dict[int, int] = {}
    used: set[int] = set()
    paths: dict[Edge, Path] = {}

    def free_deg(x: int) -> int:
        return sum(1 for y in h.neighbors(x) if y not in used)

    def route(edges: list[tuple[int, int]], k: int):
        if k == len(edges):
            yield
            return
        a, b = edges[k]
        s, t = vmap[a], vmap[b]
        dist = _distances(h, t, used - {t})
        stack = [(s, [s])]
        while stack:
            x, p = stack.pop()
            counter.tick()
            nbrs = [y for y in h.neighbors(x) if y == t or (y not in used and y in dist and y not in p)]
            nbrs.sort(key=lambda y: (-dist.get(y, 0), -y))
            for y in nbrs:
                if y == t:
                    q = tuple(p + [t])
                    inner = q[1:-1]
                    used.update(inner)
                    paths[norm_edge(a, b)] = q if a < b else q[::-1]
                    yield from route(edges, k + 1)
                    used.difference_update(inner)
                    del paths[norm_edge(a, b)]
                else:
                    stack.append((y, p + [y]))

    def place(i: int):
        if i == len(order):
            yield
            return
        v = order[i]
        back = [(v, w) for w in sorted(g.neighbors(v)) if w in vmap]
        need = g.degree(v)
        cands = [x for x in h.sorted_vertices() if x not in used and h.degree(x) >= need]
        if back:
            anchor = vmap[back[0][1]]
            dist = _distances(h, anchor, used - {anchor})
            cands = [x for x in cands if x in dist]
            cands.sort(key=lambda x: (dist[x], x))
        for x in cands:
            counter.tick()
            vmap[v] = x
            used.add(x)
            if free_deg(x) >= need - len(back):
                for _ in route(back, 0):
                    yield from place(i + 1)
            used.discard(x)
            del vmap[v]

    for _ in place(0):
        return HomeomorphicEmbedding(g, h, dict(vmap), dict(paths))
    return None
