"""Apex layers over a planar subdivision: molds, casts and the minors they certify.

A mold hangs a set of extra vertices off each edge of a set F of source edges.
A cast witnesses, inside the host, how those extra vertices reach the images of
their edges; with one in hand the subdivision grows into a minor of the larger
graph determined by the mold.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, islice, product
from typing import Iterable, Mapping, Sequence

from .catalog import ladder_x, ladder_y, mobius_ladder, planar_ladder
from .disksystem import DiskSystem, disk_system_for, source_cycle_of
from .engine import (FREE_CROSS, JUMP, PLANAR, S_SEPARATION, EngineError, ExtensionOutcome, _frame,
                     _has_triangle, _is_cube, _local_triad, _Run, _triad_frame, _weak_cross_degree_four,
                     find_s_separation, outcome_problems, replay_problems)
from .graph import (Budget, BudgetExhausted, Edge, Graph, GraphError, PreconditionError,
                    is_internally_four_connected, norm_edge)
from .oracle import MinorModel, has_minor
from .patterns import (FREE, WEAKLY_FREE, SCross, SJump, cross_center, find_triad, find_tunnel,
                       iter_crosses, iter_triads)
from .planarity import cofacial_vertices, interleaved, is_planar, peripheral_cycles
from .rerouting import Rerouting, apply_i_rerouting, apply_t_rerouting, is_f_safe, replay_one
from .subdivision import HomeomorphicEmbedding, _stabilizing_move, bridges, bridges_of

UNITED = "United"


# --- molds ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Mold:
    """Extra vertex sets ``z_sets[e]`` attached through the edges e of F."""

    z_sets: Mapping[Edge, frozenset[int]]

    def __post_init__(self):
        object.__setattr__(self, "z_sets", {norm_edge(*e): frozenset(zs) for e, zs in self.z_sets.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mold) and self.z_sets == other.z_sets

    @property
    def f_set(self) -> frozenset[Edge]:
        return frozenset(self.z_sets)

    @property
    def apex_set(self) -> frozenset[int]:
        return frozenset().union(*self.z_sets.values())

    def restrict(self, edges: Iterable[Edge]) -> Mold:
        keep = {norm_edge(*e) for e in edges}
        return Mold({e: zs for e, zs in self.z_sets.items() if e in keep})

    def to_text(self) -> str:
        return "".join(f"edge {u} {v} : " + " ".join(map(str, sorted(zs))) + "\n"
                       for (u, v), zs in sorted(self.z_sets.items()))

    @classmethod
    def from_text(cls, text: str) -> Mold:
        z_sets: dict[Edge, frozenset[int]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"edge\s+(\d+)\s+(\d+)\s*:\s*([\d\s]*)", line)
            if not m:
                raise GraphError(f"line {lineno}: unrecognised mold line {line!r}")
            zs = frozenset(int(t) for t in m.group(3).split())
            if not zs:
                raise GraphError(f"line {lineno}: empty vertex set")
            z_sets[norm_edge(int(m.group(1)), int(m.group(2)))] = zs
        return cls(z_sets)


def hat_vertices(g: Graph, mold: Mold) -> dict[Edge, int]:
    """Ids of the vertices subdividing the edges of F, numbered past g and the apex set."""
    start = max(g.vertices | mold.apex_set, default=-1) + 1
    return {e: start + i for i, e in enumerate(sorted(mold.f_set))}


def determined_graph(g: Graph, mold: Mold) -> Graph:
    """g with every edge of F subdivided once and the new vertex joined to its set."""
    if mold.apex_set & g.vertices:
        raise GraphError(f"apex vertices {sorted(mold.apex_set & g.vertices)} clash with the graph")
    missing = sorted(e for e in mold.f_set if not g.has_edge(*e))
    if missing:
        raise GraphError(f"mold edge {missing[0]} is not an edge of the graph")
    hats = hat_vertices(g, mold)
    out = g.remove_edges(hats).add_vertices(mold.apex_set | set(hats.values()))
    new = []
    for e, w in hats.items():
        new += [(e[0], w), (w, e[1])] + [(z, w) for z in mold.z_sets[e]]
    return out.add_edges(new)


def source_labels(g: Graph, mold: Mold) -> tuple[Mold, dict[int, int]]:
    """The mold with its apex vertices renamed off V(g) when they collide (host ids)."""
    apex = sorted(mold.apex_set)
    if not set(apex) & g.vertices:
        return mold, {z: z for z in apex}
    start = max(g.vertices) + 1
    zmap = {z: start + i for i, z in enumerate(apex)}
    return Mold({e: {zmap[z] for z in zs} for e, zs in mold.z_sets.items()}), zmap


# --- links and casts --------------------------------------------------------------------

@dataclass(frozen=True)
class Link:
    """A subgraph of the host, given by its vertex and edge sets."""

    vertices: frozenset[int]
    edges: frozenset[Edge]

    @classmethod
    def of_path(cls, p: Sequence[int]) -> Link:
        return cls(frozenset(p), frozenset(norm_edge(a, b) for a, b in zip(p, p[1:])))

    def __or__(self, other: Link) -> Link:
        return Link(self.vertices | other.vertices, self.edges | other.edges)

    def contains_path(self, p: Sequence[int]) -> bool:
        return set(p) <= self.vertices and all(norm_edge(a, b) in self.edges for a, b in zip(p, p[1:]))


@dataclass(frozen=True, eq=False)
class Cast:
    links: Mapping[tuple[Edge, int], Link]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cast) and dict(self.links) == dict(other.links)

    def restrict(self, edges: Iterable[Edge]) -> Cast:
        keep = {norm_edge(*e) for e in edges}
        return Cast({k: v for k, v in self.links.items() if k[0] in keep})

    def to_text(self) -> str:
        lines = []
        for ((u, v), z), link in sorted(self.links.items()):
            es = " ".join(f"{a}-{b}" for a, b in sorted(link.edges))
            lines.append(f"link {u} {v} {z} : " + " ".join(map(str, sorted(link.vertices))) + f" | {es}\n")
        return "".join(lines)

    @classmethod
    def from_text(cls, text: str) -> Cast:
        links = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"link\s+(\d+)\s+(\d+)\s+(\d+)\s*:\s*([\d\s]*)\|\s*([\d\s-]*)", line)
            if not m:
                raise GraphError(f"line {lineno}: unrecognised cast line {line!r}")
            vs = frozenset(int(t) for t in m.group(4).split())
            es = frozenset(norm_edge(*map(int, t.split("-"))) for t in m.group(5).split())
            links[(norm_edge(int(m.group(1)), int(m.group(2))), int(m.group(3)))] = Link(vs, es)
        return cls(links)


def _base(eta: HomeomorphicEmbedding, mold: Mold) -> frozenset[int]:
    return eta.image_vertices() | mold.apex_set


def sz_bridges(eta: HomeomorphicEmbedding, h: Graph, mold: Mold) -> list[tuple[Link, frozenset[int]]]:
    """Bridges of S together with the apex vertices, as (link, attachments)."""
    s = eta.image()
    return [(Link(vs, es), att) for _, vs, es, att in bridges_of(h, _base(eta, mold), s.edges)]


def link_problems(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, link: Link) -> list[str]:
    base = _base(eta, mold)
    s_edges = eta.image().edges
    out = []
    for e in sorted(link.edges):
        if not h.has_edge(*e):
            out.append(f"link edge {e} is not a host edge")
        elif e in s_edges:
            out.append(f"link edge {e} belongs to the subdivision")
        if not set(e) <= link.vertices:
            out.append(f"link edge {e} leaves the link")
    if out:
        return out
    touched = {x for e in link.edges for x in e}
    if touched != link.vertices:
        out.append("link has isolated vertices")
    inner = link.vertices - base
    if not inner:
        if len(link.edges) != 1:
            out.append("link without inner vertices is not a single edge")
        return out
    if any(not set(e) & inner for e in link.edges):
        out.append("link edge joins two vertices of S or the apex set")
    if not Graph(inner, [e for e in link.edges if set(e) <= inner]).is_connected():
        out.append("inner part of the link is disconnected")
    return out


def cast_problems(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast) -> list[str]:
    """The feasibility conditions, checked literally."""
    want = {(e, z) for e, zs in mold.z_sets.items() for z in zs}
    if set(cast.links) != want:
        return ["cast keys do not match the mold"]
    base = _base(eta, mold)
    s = eta.image_vertices()
    out = []
    for e, zs in sorted(mold.z_sets.items()):
        if zs & s:
            out.append(f"apex vertices of {e} lie on the subdivision")
    for (e, z), link in sorted(cast.links.items()):
        out += [f"link ({e},{z}): {p}" for p in link_problems(eta, h, mold, link)]
        if z not in link.vertices:
            out.append(f"link ({e},{z}) misses its apex vertex")
    for (k1, l1), (k2, l2) in combinations(sorted(cast.links.items()), 2):
        if k1[0] != k2[0] and (l1.vertices & l2.vertices) - base:
            out.append(f"links {k1} and {k2} share inner vertices")
    for e, zs in sorted(mold.z_sets.items()):
        p = eta.edge_map[e]
        inner = set(p[1:-1])
        links = [cast.links[(e, z)] for z in sorted(zs)]
        for z, link in zip(sorted(zs), links):
            if link.vertices & inner:
                continue
            if not {p[0], p[-1]} <= link.vertices or any(other != link for other in links):
                out.append(f"link ({e},{z}) neither meets the inside of its path nor spans it")
    return out


def _bridge_index(link: Link, bs: list[tuple[Link, frozenset[int]]]) -> int:
    e = min(link.edges)
    return next(i for i, (b, _) in enumerate(bs) if e in b.edges)


def united_pair(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast):
    """Two keys with distinct edges whose links sit in one bridge, or None."""
    bs = sz_bridges(eta, h, mold)
    seen: dict[int, tuple[Edge, int]] = {}
    for key, link in sorted(cast.links.items()):
        i = _bridge_index(link, bs)
        if i in seen and seen[i][0] != key[0]:
            return seen[i], key
        seen.setdefault(i, key)
    return None


def is_full(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast) -> bool:
    whole = {b for b, _ in sz_bridges(eta, h, mold)}
    return all(link in whole for link in cast.links.values())


def cast_normalize(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast) -> Cast:
    """A united cast unchanged, otherwise every link widened to its bridge."""
    if united_pair(eta, h, mold, cast) is not None:
        return cast
    bs = sz_bridges(eta, h, mold)
    return Cast({k: bs[_bridge_index(link, bs)][0] for k, link in cast.links.items()})


def check_feasible(eta: HomeomorphicEmbedding, h: Graph, mold: Mold,
                   budget: int | None = 10**5, per_slot: int = 8) -> Cast | None:
    """Search for a cast; raises :class:`BudgetExhausted` when the search is cut short."""
    if mold.apex_set & eta.image_vertices():
        return None
    if any(not h.has_vertex(z) for z in mold.apex_set):
        return None
    base = _base(eta, mold)
    free = set(h.vertices) - base
    bs = sz_bridges(eta, h, mold)
    options: dict[Edge, list[dict[int, Link]]] = {}
    for e, zs in sorted(mold.z_sets.items()):
        p = eta.edge_map[e]
        inner = set(p[1:-1])
        opts: list[dict[int, Link]] = []
        for b, att in bs:
            if zs <= att and {p[0], p[-1]} <= att and b.vertices - base:
                opts.append({z: b for z in zs})
                for hub in sorted(b.vertices - base)[:4]:
                    star = _star(h, hub, b.vertices - base, [*sorted(zs), p[0], p[-1]])
                    if star is not None and star != b:
                        opts.append({z: star for z in zs})
        slots = []
        for z in sorted(zs):
            cands: list[Link] = []
            for s in sorted(inner):
                if h.has_edge(z, s):
                    cands.append(Link.of_path((z, s)))
                    continue
                q = h.shortest_path(z, s, free)
                if q is not None:
                    cands.append(Link.of_path(q))
            cands.sort(key=lambda link: (len(link.vertices), sorted(link.vertices)))
            cands += [b for b, att in bs if z in att and att & inner]
            slots.append(list(dict.fromkeys(cands))[:per_slot])
        for combo in islice(product(*slots), 64):
            opts.append(dict(zip(sorted(zs), combo)))
        options[e] = opts
    order = sorted(options, key=lambda e: (len(options[e]), e))
    tick = Budget(budget).tick
    chosen: dict[Edge, dict[int, Link]] = {}

    def inner_of(assign: dict[int, Link]) -> set[int]:
        return set().union(*(link.vertices - base for link in assign.values()))

    def rec(k: int, used: set[int]) -> bool:
        if k == len(order):
            return True
        e = order[k]
        for assign in options[e]:
            tick()
            mine = inner_of(assign)
            if mine & used:
                continue
            chosen[e] = assign
            if rec(k + 1, used | mine):
                return True
            del chosen[e]
        return False

    if not rec(0, set()):
        return None
    cast = Cast({(e, z): link for e, assign in chosen.items() for z, link in assign.items()})
    probs = cast_problems(eta, h, mold, cast)
    if probs:
        raise EngineError("searched cast failed its check", problems=probs)
    return cast


def _star(h: Graph, hub: int, inner: frozenset[int], ends: Sequence[int]) -> Link | None:
    """Union of shortest paths from hub to each end through ``inner``: a thinner link."""
    out = Link(frozenset([hub]), frozenset())
    for t in ends:
        q = h.shortest_path(hub, t, inner)
        if q is None:
            return None
        out = out | Link.of_path(q)
    return out


def cast_from_subdivision(eta_l: HomeomorphicEmbedding, g: Graph, mold: Mold) -> tuple[HomeomorphicEmbedding, Cast]:
    """Restrict an embedding of the determined graph (fixing the apex vertices) to g.

    The cast takes each link to be the image of the edge from z to the subdivision
    vertex of e.
    """
    hats = hat_vertices(g, mold)
    vm = eta_l.vertex_map
    if any(vm[z] != z for z in mold.apex_set):
        raise PreconditionError("embedding does not fix the apex vertices")
    em = {}
    for e in g.sorted_edges():
        if e in hats:
            a, b = e
            w = hats[e]
            p1 = _oriented(eta_l.segment((a, w)), vm[a])
            p2 = _oriented(eta_l.segment((w, b)), vm[w])
            em[e] = p1 + p2[1:]
        else:
            em[e] = tuple(eta_l.segment(e))
    host = eta_l.host.remove_vertices(mold.apex_set)
    eta = HomeomorphicEmbedding(g, host, {v: vm[v] for v in g.vertices}, em)
    links = {(e, z): Link.of_path(_oriented(eta_l.segment((z, hats[e])), z))
             for e, zs in mold.z_sets.items() for z in zs}
    return eta, Cast(links)


def _oriented(p: Sequence[int], start: int) -> tuple[int, ...]:
    return tuple(p) if p[0] == start else tuple(p)[::-1]


# --- the minor behind a cast ---------------------------------------------------------------

@dataclass
class _Assembly:
    """Branch sets of the determined graph being built inside the host."""

    eta: HomeomorphicEmbedding
    h: Graph
    mold: Mold
    cast: Cast
    lmold: Mold = field(init=False)
    zmap: dict[int, int] = field(init=False)
    hats: dict[Edge, int] = field(init=False)
    external: set[Edge] = field(init=False)
    pattern: Graph = field(init=False)

    def __post_init__(self):
        g = self.eta.source
        self.lmold, self.zmap = source_labels(g, self.mold)
        self.hats = hat_vertices(g, self.lmold)
        self.pattern = determined_graph(g, self.lmold)
        self.external = set()
        for e, zs in self.mold.z_sets.items():
            inner = set(self.eta.edge_map[e][1:-1])
            if any(not (self.cast.links[(e, z)].vertices & inner) for z in zs):
                self.external.add(e)

    def owners(self, x: int) -> list[tuple[int, tuple | None]]:
        """Pattern vertices a host vertex of S can stand for, with the claim each needs."""
        pre = self.eta.preimage()
        if x in pre:
            return [(pre[x], None)]
        e = self.eta.interior_owner()[x]
        if e in self.hats and e not in self.external:
            return [(self.hats[e], None)]
        return [(end, (e, end, x)) for end in e]

    def sets(self, claims: Sequence[tuple] = ()) -> dict[int, set[int]]:
        eta = self.eta
        g = eta.source
        base = _base(eta, self.mold)
        out = {v: {eta.vertex_map[v]} for v in g.vertices}
        for z, lz in self.zmap.items():
            out[lz] = {z}
        for e, zs in self.mold.z_sets.items():
            links = [self.cast.links[(e, z)] for z in sorted(zs)]
            if e in self.external:
                out[self.hats[e]] = set(links[0].vertices - base)
            else:
                out[self.hats[e]] = set(eta.edge_map[e][1:-1]).union(*(lk.vertices - base for lk in links))
        reach: dict[Edge, dict[int, int]] = {}
        for e, end, foot in claims:
            p = eta.edge_map[e]
            k = p.index(foot) if p[0] == eta.vertex_map[end] else len(p) - 1 - p.index(foot)
            reach.setdefault(e, {})
            reach[e][end] = max(reach[e].get(end, 0), k)
        for e, p in eta.edge_map.items():
            if e in self.hats and e not in self.external:
                continue
            a, b = e if eta.vertex_map[e[0]] == p[0] else e[::-1]
            inner = list(p[1:-1])
            ka, kb = reach.get(e, {}).get(a, 0), reach.get(e, {}).get(b, 0)
            if ka + kb > len(inner):
                raise _Clash()
            out[a].update(inner[:len(inner) - kb])
            out[b].update(inner[len(inner) - kb:])
        return out

    def model(self, sets: Mapping[int, set[int]], extra: Sequence[tuple[int, int]] = ()) -> MinorModel:
        return MinorModel(self.pattern.add_edges(extra), self.h, {v: frozenset(s) for v, s in sets.items()})

    def faces(self) -> list[tuple[int, ...]]:
        """Facial cycles of the determined graph minus the apex set."""
        out = []
        for c in peripheral_cycles(self.eta.source):
            walk = []
            for i, a in enumerate(c):
                walk.append(a)
                e = norm_edge(a, c[(i + 1) % len(c)])
                if e in self.hats:
                    walk.append(self.hats[e])
            out.append(tuple(walk))
        return out


class _Clash(Exception):
    """Two claims overlap on one path."""


def mold_minor(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast) -> MinorModel:
    """A model of the determined graph in h built from a cast."""
    probs = cast_problems(eta, h, mold, cast)
    if probs:
        raise ValueError(f"invalid cast: {probs[0]}")
    asm = _Assembly(eta, h, mold, cast)
    model = asm.model(asm.sets())
    bad = model.violations()
    if bad:
        raise EngineError("mold model failed its check", problems=bad)
    return model


# --- compatibility ----------------------------------------------------------------------------

def incompatible_edges(eta: HomeomorphicEmbedding, mold: Mold, cast: Cast, p: Sequence[int]) -> set[Edge]:
    """Edges of F whose links make the S-path p incompatible."""
    bad = set()
    for (e, z), link in cast.links.items():
        if not link.contains_path(p):
            continue
        q = eta.edge_map[e]
        inner = set(q[1:-1])
        if p[0] in inner or p[-1] in inner:
            continue
        if not (link.vertices & inner) and {p[0], p[-1]} & {q[0], q[-1]}:
            continue
        bad.add(e)
    return bad


def is_compatible_path(eta: HomeomorphicEmbedding, mold: Mold, cast: Cast, p: Sequence[int]) -> bool:
    return not set(p) & mold.apex_set and not incompatible_edges(eta, mold, cast, p)


def _touches_inside(eta: HomeomorphicEmbedding, mold: Mold, p: Sequence[int]) -> bool:
    return any({p[0], p[-1]} & set(eta.edge_map[e][1:-1]) for e in mold.f_set)


def is_compatible_cross(eta: HomeomorphicEmbedding, mold: Mold, cast: Cast,
                        p1: Sequence[int], p2: Sequence[int]) -> bool:
    if not (is_compatible_path(eta, mold, cast, p1) and is_compatible_path(eta, mold, cast, p2)):
        return False
    if any(link.contains_path(p1) and link.contains_path(p2) for link in cast.links.values()):
        return False
    return not _touches_inside(eta, mold, p1) or not _touches_inside(eta, mold, p2)


# --- carrying a cast through a rerouting -----------------------------------------------------

def reroute_preserving_feasibility(eta: HomeomorphicEmbedding, h: Graph, mold: Mold, cast: Cast,
                                   r: Rerouting, eta2: HomeomorphicEmbedding | None = None) -> Cast:
    """A cast for the rerouted embedding, built link by link from a full cast."""
    if not is_f_safe(r, eta, mold.f_set):
        raise PreconditionError("rerouting is not safe for the mold")
    eta2 = replay_one(eta, r) if eta2 is None else eta2
    base2 = _base(eta2, mold)
    olds = [tuple(p) for p in r.replaced]
    news = [tuple(q) for q in r.inserted]
    # replaced vertices that left S; an untouched link may only keep them as attachments
    stale = set().union(*(set(p[1:-1]) for p in olds)) - eta2.image_vertices()
    new: dict[tuple[Edge, int], Link] = {}
    for e, zs in sorted(mold.z_sets.items()):
        q_e = eta.edge_map[e]
        inner_e = set(q_e[1:-1])
        merged = None
        for z in sorted(zs):
            link = cast.links[(e, z)]
            hit = next((q for q in news if link.contains_path(q)), None)
            old = next((p for p in olds if link.vertices & set(p[1:-1]) & inner_e), None)
            if hit is None and old is None:
                new[(e, z)] = _drop(link, stale)
                continue
            if r.kind != "I" or r.base != (e,):
                raise EngineError("link meets a rerouting not based at its own path", key=(e, z))
            if hit is not None:
                # keep just a path from z to the inside of the new route
                graph = Graph(link.vertices, link.edges)
                allowed = link.vertices - base2
                path = next((p for p in (graph.shortest_path(z, t, allowed) for t in hit[1:-1])
                             if p is not None), None)
                if path is None:
                    raise EngineError("no path from the apex vertex into the new route", key=(e, z))
                new[(e, z)] = Link.of_path(path)
            elif {news[0][0], news[0][-1]} != {q_e[0], q_e[-1]}:
                new[(e, z)] = link | Link.of_path(old)
            else:
                if merged is None:
                    merged = Link.of_path(old)
                    for z2 in zs:
                        merged = merged | cast.links[(e, z2)]
                new[(e, z)] = merged
    out = Cast(new)
    probs = cast_problems(eta2, h, mold, out)
    if probs:
        raise EngineError("carried cast failed its check", problems=probs, rerouting=r.to_line())
    return out


def _drop(link: Link, vs: set[int]) -> Link:
    if not link.vertices & vs:
        return link
    return Link(link.vertices - vs, frozenset(e for e in link.edges if not set(e) & vs))


# --- the apex walk -------------------------------------------------------------------------

@dataclass(frozen=True)
class ApexOutcome:
    tag: str
    final_eta: HomeomorphicEmbedding
    log: tuple[Rerouting, ...]
    payload: object
    removed: frozenset[Edge]
    cast: Cast
    disks: DiskSystem | None = None
    initial_eta: HomeomorphicEmbedding | None = None
    initial_disks: DiskSystem | None = None
    notes: tuple[str, ...] = ()

    def remaining(self, mold: Mold) -> Mold:
        return mold.restrict(mold.f_set - self.removed)


def _pairwise_cofacial(g: Graph, edges: Iterable[Edge], faces) -> bool:
    return all(cofacial_vertices(g, a, b, faces) for a, b in combinations(sorted(edges), 2))


def apex_outcome_problems(out: ApexOutcome, h: Graph, mold: Mold) -> list[str]:
    eta = out.final_eta
    g = eta.source
    probs = []
    if not out.removed <= mold.f_set:
        probs.append("removed edges are not in F")
    if not _pairwise_cofacial(g, out.removed, peripheral_cycles(g)):
        probs.append("removed edges are not pairwise cofacial")
    rest = out.remaining(mold)
    probs += [f"cast: {p}" for p in cast_problems(eta, h, rest, out.cast)]
    if probs:
        return probs
    if out.tag == UNITED:
        probs += replay_problems(out)
        pair = united_pair(eta, h, rest, out.cast)
        if pair is None:
            probs.append("cast is not united")
        return probs
    probs += outcome_problems(ExtensionOutcome(out.tag, eta, out.log, out.payload, out.disks,
                                               out.initial_eta, out.initial_disks, out.notes))
    if out.tag in (JUMP, FREE_CROSS) and not is_full(eta, h, rest, out.cast):
        probs.append("cast is not full")
    if out.tag == JUMP and not is_compatible_path(eta, rest, out.cast, out.payload.path):
        probs.append("jump is not compatible with the cast")
    if out.tag == FREE_CROSS:
        if out.payload.freedom != FREE:
            probs.append("cross is not free")
        if not is_compatible_cross(eta, rest, out.cast, *out.payload.paths):
            probs.append("cross is not compatible with the cast")
    return probs


class _United(Exception):
    pass


class MoldLost(EngineError):
    """A rerouting after which no cast could be found; the run state is untouched."""


class _ApexRun(_Run):
    def __init__(self, eta, ds, h: Graph, mold: Mold, cast: Cast):
        super().__init__(eta, ds)
        self.h, self.mold, self.cast = h, mold, cast
        self.removed: set[Edge] = set()
        self.faces = peripheral_cycles(eta.source)
        self.notes: list[str] = []

    @property
    def active(self) -> Mold:
        return self.mold.restrict(self.mold.f_set - self.removed)

    def drop(self, edges: Iterable[Edge]) -> None:
        new = self.removed | ({norm_edge(*e) for e in edges} & self.mold.f_set)
        if not _pairwise_cofacial(self.eta.source, new, self.faces):
            raise EngineError("edges to drop are not pairwise cofacial", edges=sorted(new))
        self.removed = new
        self.cast = self.cast.restrict(self.active.f_set)

    def apply(self, step) -> None:
        eta2, r = step
        mold = self.active
        if not is_f_safe(r, self.eta, mold.f_set):
            raise MoldLost("rerouting is not safe for the remaining mold", rerouting=r.to_line())
        try:
            cast = reroute_preserving_feasibility(self.eta, self.h, mold, self.cast, r, eta2)
        except EngineError:
            cast = check_feasible(eta2, self.h, mold)
            if cast is None:
                raise MoldLost("mold lost feasibility under a safe rerouting", rerouting=r.to_line())
            self.notes.append("cast re-searched")
        super().apply(step)
        self.cast = cast_normalize(self.eta, self.h, mold, cast)
        if united_pair(self.eta, self.h, mold, self.cast) is not None:
            raise _United()

    def exchange(self, f) -> None:
        raise EngineError("triad exchange is not available under a mold", frame=f)

    def direct(self, near=frozenset(), cross: bool = True):
        for b in bridges(self.eta):
            for x, y in combinations(sorted(b.attachments), 2):
                if self.ds.shares_disk(x, y):
                    continue
                p = b.path(self.eta.host, x, y)
                if p is not None and self.removal(JUMP, SJump(tuple(p))) is not None:
                    return JUMP, SJump(tuple(p))
        if cross:
            for c in iter_crosses(self.eta, self.ds):
                if c.freedom == FREE and self.removal(FREE_CROSS, c) is not None:
                    return FREE_CROSS, c
        return None

    def removal(self, tag: str, payload) -> set[Edge] | None:
        """The least drop set making the payload compatible, if it stays pairwise cofacial."""
        mold, cast, eta = self.active, self.cast, self.eta
        if tag == JUMP:
            tries = [incompatible_edges(eta, mold, cast, payload.path)]
        else:
            p1, p2 = payload.paths
            bad = incompatible_edges(eta, mold, cast, p1) | incompatible_edges(eta, mold, cast, p2)
            ring = {e for e in mold.f_set if set(eta.edge_map[e]) <= set(payload.disk)}
            tries = [bad, bad | ring]
        for extra in tries:
            drop = self.removed | extra
            if not _pairwise_cofacial(eta.source, drop, self.faces):
                continue
            rest = self.mold.restrict(self.mold.f_set - drop)
            sub = cast.restrict(rest.f_set)
            if tag == FREE_CROSS and not is_compatible_cross(eta, rest, sub, *payload.paths):
                continue
            return set(extra)
        return None

    def outcome(self, tag: str, payload, notes: Sequence[str] = ()) -> ApexOutcome:
        if tag not in (UNITED, JUMP, FREE_CROSS, S_SEPARATION, PLANAR):
            raise EngineError(f"{tag} is not an outcome under a mold", payload=payload)
        removed = set(self.removed)
        if tag in (JUMP, FREE_CROSS):
            extra = self.removal(tag, payload)
            if extra is None:
                raise EngineError(f"{tag} has no compatible restriction", payload=payload)
            removed |= extra
        out = ApexOutcome(tag, self.eta, tuple(self.log), payload, frozenset(removed),
                          self.cast.restrict(self.mold.f_set - removed), self.ds,
                          self.initial_eta, self.initial_ds, tuple(notes) + tuple(self.notes))
        probs = apex_outcome_problems(out, self.h, self.mold)
        if probs:
            raise EngineError(f"{tag} outcome failed its re-check", problems=probs, outcome=out)
        return out


def run_mainapex(eta0: HomeomorphicEmbedding, h: Graph, mold: Mold,
                 budget: int | None = 10**5) -> ApexOutcome:
    """Reroute within h minus the apex set until a united cast, a compatible jump or
    free cross, a separation, or planarity appears."""
    g = eta0.source
    if not is_planar(g) or not is_internally_four_connected(g):
        raise PreconditionError("source graph is not internally 4-connected and planar")
    if _is_cube(g):
        raise PreconditionError("source graph is the cube")
    if eta0.host != h.remove_vertices(mold.apex_set):
        raise PreconditionError("embedding must live in the host minus the apex set")
    if not eta0.is_valid():
        raise PreconditionError("embedding is invalid")
    cast = check_feasible(eta0, h, mold, budget)
    if cast is None:
        raise PreconditionError("mold is not feasible for the embedding")
    ds = disk_system_for(eta0)
    run = _ApexRun(eta0, ds, h, mold, cast_normalize(eta0, h, mold, cast))
    try:
        if united_pair(eta0, h, mold, run.cast) is not None:
            raise _United()
        return _mainapex(run)
    except _United:
        return run.outcome(UNITED, united_pair(run.eta, run.h, run.active, run.cast))


def _segments_at(eta: HomeomorphicEmbedding, v: int) -> list[Edge]:
    return [norm_edge(v, w) for w in eta.source.neighbors(v)]


def _stabilize_under_mold(run: _ApexRun) -> None:
    # a move the cast cannot follow is skipped rather than taken
    skip: set = set()
    while True:
        move = _stabilizing_move(run.eta, frozenset(skip))
        if move is None:
            return
        _, b, x, y = move
        step = apply_i_rerouting(run.eta, b.segment, x, y, b.path(run.eta.host, x, y), check_proper=True)
        try:
            run.apply(step)
        except MoldLost:
            skip.add((min(b.vertices), x, y))
            run.notes.append(f"stabilizing move at {x},{y} skipped")


def _mainapex(run: _ApexRun) -> ApexOutcome:
    _stabilize_under_mold(run)
    hit = run.direct()
    if hit is not None:
        return run.outcome(*hit)
    sep = find_s_separation(run.eta)
    if sep is not None:
        return run.outcome(S_SEPARATION, sep)
    triad = find_triad(run.eta, run.ds)
    if triad is not None:
        return _pinned_triad(run, triad)
    weak = next((c for c in iter_crosses(run.eta, run.ds) if c.freedom == WEAKLY_FREE), None)
    if weak is not None:
        return _apex_weak_cross(run, weak)
    tunnel = find_tunnel(run.eta, run.ds)
    if tunnel is not None:
        return _apex_tunnel(run, tunnel)
    if is_planar(run.eta.host):
        return run.outcome(PLANAR, None)
    raise EngineError("no outcome under the mold", eta=run.eta)


def _pinned_triad(run: _ApexRun, triad) -> ApexOutcome:
    fr = _triad_frame(run.eta, triad) if triad.local else None
    if fr is None:
        raise EngineError("triad is not local", triad=triad)
    run.drop(_segments_at(run.eta, fr.center))
    run.pin_center = fr.center
    return _local_triad(run, triad)


def _local_triad_at(run: _ApexRun, center: int) -> ApexOutcome:
    for t in iter_triads(run.eta, run.ds):
        fr = _triad_frame(run.eta, t) if t.local else None
        if fr is not None and fr.center == center:
            run.drop(_segments_at(run.eta, center))
            run.pin_center = center
            return _local_triad(run, t)
    raise EngineError("no local triad at the expected centre", center=center)


def _apex_weak_cross(run: _ApexRun, cross: SCross) -> ApexOutcome:
    eta = run.eta
    img, e1, e2 = cross_center(eta, cross.feet)
    center = eta.preimage()[img]
    f = _frame(eta, cross, center, e1, e2) or _frame(eta, cross, center, e2, e1)
    if f is None:
        raise EngineError("weak cross is not centred", cross=cross)
    if eta.source.degree(center) == 3:
        run.drop(_segments_at(eta, center))
        run.apply(apply_t_rerouting(run.eta, f.center, f.e2, f.e1, f.y2, f.x2, f.p2))
        hit = run.direct()
        if hit is not None:
            return run.outcome(*hit)
        return _local_triad_at(run, center)
    d = source_cycle_of(eta, cross.disk)
    ring = {norm_edge(d[i], d[(i + 1) % len(d)]) for i in range(len(d))}
    run.drop(ring)
    return _weak_cross_degree_four(run, f)


def _apex_tunnel(run: _ApexRun, tunnel) -> ApexOutcome:
    eta = run.eta
    tri = tunnel.tripod
    base = tuple(tri.base)
    e0 = next(e for e, p in eta.edge_map.items() if tuple(p) in (base, base[::-1]))
    d = source_cycle_of(eta, tunnel.disk)
    ring = {norm_edge(d[i], d[(i + 1) % len(d)]) for i in range(len(d))} - {e0}
    p1, p2 = tri.paths[0], tri.paths[1]
    e1 = [e for e in sorted(ring & run.active.f_set)
          if any(run.cast.links[(e, z)].contains_path(p) for z in run.mold.z_sets[e] for p in (p1, p2))]
    run.drop([e0] + e1[:1])
    x1, y1 = tri.feet[0], tri.feet[1]
    run.apply(apply_i_rerouting(run.eta, e0, x1, y1, tuple(p1)))
    hit = run.direct()
    if hit is not None:
        return run.outcome(*hit)
    triad = next((t for t in iter_triads(run.eta, run.ds) if t.local and _triad_frame(run.eta, t)), None)
    if triad is None:
        raise EngineError("tunnel rerouting produced no local triad", eta=run.eta)
    return _pinned_triad(run, triad)


# --- minors for the corollary ---------------------------------------------------------------

@dataclass(frozen=True)
class ApexMinor:
    outcome: ApexOutcome
    mold: Mold                     # the mold left after dropping edges
    pattern: Graph                 # determined graph plus the new edges
    added: tuple[tuple[int, int], ...]
    model: MinorModel
    face: tuple[int, ...] | None = None


def _with_claims(asm: _Assembly, claims, extra_for=None, extra=()):
    try:
        sets = asm.sets([c for c in claims if c is not None])
    except _Clash:
        return None
    if extra_for is not None:
        taken = set().union(*sets.values())
        if set(extra) & taken:
            return None
        sets[extra_for].update(extra)
    return sets


def _path_minor(asm: _Assembly, path: Sequence[int]):
    """L plus one non-cofacial edge carried by an S-path."""
    faces = asm.faces()
    a, b = path[0], path[-1]
    plain = _with_claims(asm, ())
    owner_of_inside = None
    if plain is not None and len(path) > 2:
        owners = {v for v, s in plain.items() if s & set(path[1:-1])}
        if len(owners) == 1:
            owner_of_inside = owners.pop()
    if owner_of_inside is not None:
        cands = [((owner_of_inside, None), o) for x in (a, b) for o in asm.owners(x)]
        carry = None
    else:
        cands = list(product(asm.owners(a), asm.owners(b)))
        carry = tuple(path[1:-1])
    for (u, cu), (w, cw) in cands:
        if u == w or any(u in f and w in f for f in faces):
            continue
        sets = _with_claims(asm, (cu, cw), u if carry else None, carry or ())
        if sets is None:
            continue
        model = asm.model(sets, [(u, w)])
        if not model.violations():
            return (norm_edge(u, w),), model
    return None


def _cross_minor(asm: _Assembly, cross: SCross):
    """L plus two chords crossing inside one face, neither joining G-neighbours."""
    eta = asm.eta
    g = eta.source
    d = source_cycle_of(eta, cross.disk)
    face = next((f for f in asm.faces() if set(d) <= set(f) and len(set(f) & set(g.vertices)) == len(d)), None)
    if face is None:
        return None
    p1, p2 = cross.paths
    feet = (p1[0], p2[0], p1[-1], p2[-1])
    options = []
    for x, p in zip(feet, (p1, p2, p1, p2)):
        opts = list(asm.owners(x))
        for (e, z), link in asm.cast.links.items():
            if e in asm.external and link.contains_path(p) and x in (eta.edge_map[e][0], eta.edge_map[e][-1]):
                opts = [(asm.hats[e], None)]
        options.append([o for o in opts if o[0] in face])
    for choice in product(*options):
        verts = [c[0] for c in choice]
        if len(set(verts)) != 4:
            continue
        u1, u2, v1, v2 = verts
        if not interleaved(face, (u1, v1), (u2, v2)):
            continue
        if g.has_vertex(u1) and g.has_edge(u1, v1) or g.has_vertex(u2) and g.has_edge(u2, v2):
            continue
        sets = _with_claims(asm, [c[1] for c in choice])
        if sets is None:
            continue
        taken = set().union(*sets.values())
        ok = True
        for p, u in ((p1, u1), (p2, u2)):
            inside = set(p[1:-1])
            if inside & taken:
                if not any(inside <= s for s in sets.values()):
                    ok = False
            else:
                sets[u] |= inside
                taken |= inside
        if not ok:
            continue
        model = asm.model(sets, [(u1, v1), (u2, v2)])
        if not model.violations():
            return ((u1, v1), (u2, v2)), model, face
    return None


def _united_minor(asm: _Assembly, pair):
    """Join the two subdivision vertices through the bridge holding both links."""
    (e, z), (f, _) = pair
    sets = asm.sets()
    he, hf = asm.hats[e], asm.hats[f]
    bs = sz_bridges(asm.eta, asm.h, asm.mold)
    bridge = bs[_bridge_index(asm.cast.links[(e, z)], bs)][0]
    allowed = (bridge.vertices - _base(asm.eta, asm.mold)) - set().union(*sets.values())
    goal = {y for x in sets[hf] for y in asm.h.neighbors(x)}
    prev = {s: s for s in sets[he]}
    frontier = sorted(sets[he])
    end = next((s for s in frontier if s in goal), None)
    while frontier and end is None:
        nxt = []
        for x in frontier:
            for y in sorted(asm.h.neighbors(x)):
                if y in prev or y not in allowed:
                    continue
                prev[y] = x
                nxt.append(y)
                if y in goal and end is None:
                    end = y
        frontier = nxt
    while end is not None and prev[end] != end:
        sets[he].add(end)
        end = prev[end]
    added = (norm_edge(he, hf),)
    return added, asm.model(sets, added)


def run_apexcor(eta0: HomeomorphicEmbedding, h: Graph, mold: Mold, budget: int | None = 10**5) -> ApexMinor:
    """Drop at most one edge of F and certify L plus one edge, or L plus two crossing chords."""
    g = eta0.source
    if _has_triangle(g):
        raise PreconditionError("source graph has a triangle")
    faces = peripheral_cycles(g)
    for a, b in combinations(sorted(mold.f_set), 2):
        if cofacial_vertices(g, a, b, faces):
            raise PreconditionError(f"mold edges {a} and {b} share a face")
    hp = h.remove_vertices(mold.apex_set)
    if not is_internally_four_connected(hp) or is_planar(hp):
        raise PreconditionError("host minus the apex set is not internally 4-connected and non-planar")
    out = run_mainapex(eta0, h, mold, budget)
    if out.tag not in (UNITED, JUMP, FREE_CROSS):
        raise EngineError(f"{out.tag} in an internally 4-connected non-planar host", outcome=out)
    rest = out.remaining(mold)
    asm = _Assembly(out.final_eta, h, rest, out.cast)
    face = None
    if out.tag == UNITED:
        added, model = _united_minor(asm, out.payload)
        res = (added, model)
    elif out.tag == JUMP:
        res = _path_minor(asm, out.payload.path)
    else:
        found = _cross_minor(asm, out.payload)
        if found is not None:
            added, model, face = found
            res = (added, model)
        else:
            res = next((r for r in (_path_minor(asm, p) for p in out.payload.paths) if r is not None), None)
    if res is None:
        raise EngineError("no minor assembled from the outcome", outcome=out)
    added, model = res
    probs = model.violations()
    if probs:
        raise EngineError("apex minor failed its check", problems=probs)
    return ApexMinor(out, rest, model.pattern, tuple(added), model, face)


def apex_minor_problems(res: ApexMinor, g: Graph) -> list[str]:
    """Re-check an :class:`ApexMinor` against the statement it certifies."""
    probs = [f"model: {p}" for p in res.model.violations()]
    if len(res.outcome.removed) > 1:
        probs.append("more than one edge dropped")
    asm_mold, _ = source_labels(g, res.mold)
    base = determined_graph(g, asm_mold)
    if res.pattern != base.add_edges(res.added):
        probs.append("pattern is not the determined graph plus the added edges")
    hats = hat_vertices(g, asm_mold)
    faces = []
    for c in peripheral_cycles(g):
        walk = []
        for i, a in enumerate(c):
            walk.append(a)
            e = norm_edge(a, c[(i + 1) % len(c)])
            if e in hats:
                walk.append(hats[e])
        faces.append(tuple(walk))
    if len(res.added) == 1:
        u, v = res.added[0]
        if any(u in f and v in f for f in faces):
            probs.append("added edge joins cofacial vertices")
    elif len(res.added) == 2:
        (u1, v1), (u2, v2) = res.added
        if res.face not in faces or not interleaved(res.face, (u1, v1), (u2, v2)):
            probs.append("added chords do not cross inside a face")
        if any(g.has_vertex(a) and g.has_edge(a, b) for a, b in res.added):
            probs.append("added chord joins neighbours of the source graph")
    else:
        probs.append("wrong number of added edges")
    return probs


def run_oneapex(eta_l: HomeomorphicEmbedding, g: Graph, f_set: Iterable[Edge], apex_label: int,
                budget: int | None = 10**5):
    """Single apex joined to the subdivision vertices of F.

    ``eta_l`` embeds the determined graph (apex ``apex_label``) in the host.
    Returns the dropped edge of that graph and the certified minor.
    """
    lmold = Mold({norm_edge(*e): {apex_label} for e in f_set})
    if not lmold.f_set:
        raise PreconditionError("F is empty")
    if eta_l.source != determined_graph(g, lmold):
        raise PreconditionError("embedded graph is not the one determined by the mold")
    u = eta_l.vertex_map[apex_label]
    h = eta_l.host
    hats = hat_vertices(g, lmold)
    vm = eta_l.vertex_map
    em = {}
    for e in g.sorted_edges():
        if e in hats:
            w = hats[e]
            p1 = _oriented(eta_l.segment((e[0], w)), vm[e[0]])
            p2 = _oriented(eta_l.segment((w, e[1])), vm[w])
            em[e] = p1 + p2[1:]
        else:
            em[e] = tuple(eta_l.segment(e))
    eta = HomeomorphicEmbedding(g, h.remove_vertices([u]), {v: vm[v] for v in g.vertices}, em)
    mold = Mold({e: {u} for e in lmold.f_set})
    res = run_apexcor(eta, h, mold, budget)
    gone = sorted(res.outcome.removed) or sorted(mold.f_set)[:1]
    return norm_edge(apex_label, hats[gone[0]]), res


# --- pinwheels ---------------------------------------------------------------------------------

def pinwheel_mold(n: int, apex_set: Iterable[int]) -> Mold:
    """Apex set on every even rung of a ladder with n rungs."""
    zs = frozenset(apex_set)
    return Mold({norm_edge(ladder_x(2 * i, n), ladder_y(2 * i, n)): zs for i in range(1, n // 2 + 1)})


def _pinwheel(make, t: int, k: int) -> Graph:
    # two rungs make a multigraph, so a pinwheel needs at least two vanes
    if t < 1 or k < 2:
        raise GraphError("a pinwheel needs t >= 1 apex vertices and k >= 2 vanes")
    n = 2 * k
    return determined_graph(make(n), pinwheel_mold(n, range(2 * n, 2 * n + t)))


def build_pinwheel(t: int, k: int) -> Graph:
    g = _pinwheel(planar_ladder, t, k)
    g.name = f"pinwheel-{t}-{k}"
    return g


def build_moebius_pinwheel(t: int, k: int) -> Graph:
    g = _pinwheel(mobius_ladder, t, k)
    g.name = f"moebius-pinwheel-{t}-{k}"
    return g


@dataclass(frozen=True)
class PinwheelResult:
    tag: str                     # "Planar", "Minor" or "Undecided"
    model: MinorModel | None
    note: str = ""


def check_pinwheel_theorem(t: int, k: int, h: Graph, apex_set: Iterable[int],
                           budget: int | None = 10**7) -> PinwheelResult:
    """h minus the apex set is planar, or h has a Moebius t-pinwheel with k vanes as a minor."""
    apex = frozenset(apex_set)
    if len(apex) != t:
        raise PreconditionError("apex set size differs from t")
    if is_planar(h.remove_vertices(apex)):
        return PinwheelResult("Planar", None, "host minus the apex set is planar")
    target = build_moebius_pinwheel(t, k)
    try:
        model = has_minor(target, h, budget)
    except BudgetExhausted as exc:
        return PinwheelResult("Undecided", None, f"budget exhausted after {exc.expansions} expansions")
    if model is None:
        return PinwheelResult("Undecided", None, "no pinwheel minor found")
    return PinwheelResult("Minor", model, "minor found by search")
