"""Random instance generators: planar 3-connected graphs and planted subdivisions."""

from __future__ import annotations

import random

from .graph import (BudgetExhausted, Graph, is_almost_four_connected, is_internally_four_connected,
                    is_three_connected)
from .planarity import is_planar
from .subdivision import HomeomorphicEmbedding, embedding_from_paths


def random_triangulation(n: int, rng: random.Random) -> Graph:
    """Stacked-and-flipped triangulation on n >= 4 vertices."""
    edges = {(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)}
    faces = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for v in range(4, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        edges |= {(a, v), (b, v), (c, v)}
        faces += [(a, b, v), (a, c, v), (b, c, v)]
    g = Graph(range(n), edges)
    # edge flips mix the degree sequence away from the stacked shape
    for _ in range(2 * n):
        g = _random_flip(g, faces, rng)
    return g


def _random_flip(g: Graph, faces: list[tuple[int, int, int]], rng: random.Random) -> Graph:
    i, j = rng.sample(range(len(faces)), 2)
    shared = set(faces[i]) & set(faces[j])
    if len(shared) != 2:
        return g
    a, b = sorted(shared)
    c = (set(faces[i]) - shared).pop()
    d = (set(faces[j]) - shared).pop()
    if g.has_edge(c, d) or g.degree(a) <= 3 or g.degree(b) <= 3:
        return g
    faces[i], faces[j] = (a, c, d), (b, c, d)
    return g.remove_edges([(a, b)]).add_edges([(c, d)])


def random_planar_3c(n: int, rng: random.Random, deletions: int | None = None) -> Graph:
    """A triangulation thinned by random edge deletions that keep 3-connectivity."""
    g = random_triangulation(n, rng)
    budget = rng.randrange(n) if deletions is None else deletions
    es = g.sorted_edges()
    rng.shuffle(es)
    for e in es:
        if budget <= 0:
            break
        h = g.remove_edges([e])
        if is_three_connected(h):
            g, budget = h, budget - 1
    return g


def subdivide_randomly(g: Graph, rng: random.Random, extra: int) -> HomeomorphicEmbedding:
    """Subdivide random edges of g with ``extra`` new vertices; identity on branch vertices."""
    counts = {e: 0 for e in g.sorted_edges()}
    keys = list(counts)
    for _ in range(extra):
        counts[rng.choice(keys)] += 1
    nxt = max(g.vertices) + 1
    paths = {}
    for e, k in counts.items():
        paths[e] = (e[0], *range(nxt, nxt + k), e[1])
        nxt += k
    s = Graph(set(g.vertices) | {x for p in paths.values() for x in p},
              [ab for p in paths.values() for ab in zip(p, p[1:])])
    return embedding_from_paths(g, s, {v: v for v in g.vertices}, paths.values())


def add_random_bridges(host: Graph, rng: random.Random, count: int, max_vertices: int) -> Graph:
    """Attach ``count`` bridges: chords or fresh vertices joined to two to four old vertices."""
    vs = host.sorted_vertices()
    for _ in range(count):
        if rng.random() < 0.5 or host.order() >= max_vertices:
            u, v = rng.sample(vs, 2)
            if not host.has_edge(u, v):
                host = host.add_edges([(u, v)])
            continue
        z = host.next_id()
        nbrs = rng.sample(vs, rng.randint(2, min(4, len(vs))))
        host = host.add_vertices([z]).add_edges((z, w) for w in nbrs)
    return host


def planted_instance(g: Graph, rng: random.Random, bridges: int = 6,
                     max_vertices: int = 24) -> HomeomorphicEmbedding:
    """A subdivision of g inside a host made by adding up to ``bridges`` random bridges."""
    room = max(0, max_vertices - g.order() - bridges)
    eta = subdivide_randomly(g, rng, rng.randint(0, min(room, 2 * g.size())))
    host = add_random_bridges(eta.host, rng, rng.randint(1, bridges), max_vertices)
    return HomeomorphicEmbedding(g, host, eta.vertex_map, eta.edge_map)


def almost4_nonplanar_host(g: Graph, rng: random.Random, extra: int = 4,
                           tries: int = 200) -> HomeomorphicEmbedding:
    """A subdivision of g in an almost 4-connected non-planar host.

    Every subdividing vertex receives a chord so no vertex of degree two survives;
    further chords are added until the host is non-planar and almost 4-connected.
    """
    for _ in range(tries):
        eta = subdivide_randomly(g, rng, extra)
        host = eta.host
        vs = host.sorted_vertices()
        for x in vs:
            while host.degree(x) < 3:
                y = rng.choice(vs)
                if y != x and not host.has_edge(x, y):
                    host = host.add_edges([(x, y)])
        for _ in range(3 * len(vs)):
            if not is_planar(host) and is_almost_four_connected(host):
                return HomeomorphicEmbedding(g, host, eta.vertex_map, eta.edge_map)
            x, y = rng.sample(vs, 2)
            host = host.add_edges([(x, y)]) if not host.has_edge(x, y) else host
    raise RuntimeError("no almost 4-connected non-planar host found")


def near_planar_host(g: Graph, rng: random.Random, n: int = 14, crossings: int = 1,
                     tries: int = 100, budget: int | None = 10**6) -> HomeomorphicEmbedding:
    """A g-subdivision in a planar 3-connected graph plus a few edges, found by search.

    Almost all bridges sit inside faces, so the search-picked subdivision usually
    needs reroutings before an obstruction shows.
    """
    from .subdivision import find_subdivision
    for _ in range(tries):
        h = random_planar_3c(n, rng)
        vs = h.sorted_vertices()
        for _ in range(crossings):
            x, y = rng.sample(vs, 2)
            h = h.add_edges([(x, y)]) if not h.has_edge(x, y) else h
        if is_planar(h) or not is_almost_four_connected(h):
            continue
        perm = vs[:]
        rng.shuffle(perm)
        h = h.relabel(dict(zip(vs, perm)))
        try:
            eta = find_subdivision(g, h, budget)
        except BudgetExhausted:
            continue
        if eta is not None:
            return eta
    raise RuntimeError("no near-planar host found")


def apex_host(g: Graph, f_set, rng: random.Random, crossings: int = 0, face_crossings: int = 1,
              apex_extra: int = 0, tries: int = 50, search: bool = False, budget: int | None = 10**6):
    """An embedding of the graph determined by g and a one-vertex mold on ``f_set``.

    The host is that graph with random non-crossing diagonals in its faces,
    ``face_crossings`` pairs of crossing diagonals inside single faces, ``crossings``
    arbitrary extra edges and ``apex_extra`` extra apex edges. With ``search`` the
    host is relabelled and the embedding found by search, so it need not be the
    obvious one. Returns (embedding, apex label).
    """
    from .apex import Mold, determined_graph
    from .planarity import peripheral_cycles
    from .subdivision import find_subdivision
    label = max(g.vertices) + 1
    mold = Mold({e: {label} for e in f_set})
    lg = determined_graph(g, mold)
    flat = lg.remove_vertices([label])
    faces = peripheral_cycles(flat)
    for _ in range(tries):
        h = flat
        for c in rng.sample(faces, min(face_crossings, len(faces))):
            if len(c) < 4:
                continue
            i = rng.randrange(len(c))
            j = rng.randrange(2, len(c) - 1)
            a, b = c[i], c[(i + j) % len(c)]
            x = c[(i + rng.randrange(1, j)) % len(c)]
            y = c[(i + j + rng.randrange(1, len(c) - j)) % len(c)]
            h = h.add_edges(e for e in ((a, b), (x, y)) if not h.has_edge(*e))
        vs = h.sorted_vertices()
        # a degree-three vertex on a triangle would leave a 3-separation
        for x in vs:
            near = [y for c in faces if x in c for y in c if y != x]
            rng.shuffle(near)
            for y in near:
                if h.degree(x) >= 4:
                    break
                c = next(c for c in faces if x in c and y in c)
                if not h.has_edge(x, y) and not _crosses(h, c, x, y):
                    h = h.add_edges([(x, y)])
            while h.degree(x) < 4:
                y = rng.choice(vs)
                if y != x and not h.has_edge(x, y):
                    h = h.add_edges([(x, y)])
        for _ in range(crossings):
            a, b = rng.sample(vs, 2)
            if not h.has_edge(a, b):
                h = h.add_edges([(a, b)])
        h = h.add_vertices([label]).add_edges((label, w) for w in lg.neighbors(label))
        for w in rng.sample(vs, apex_extra):
            h = h.add_edges([(label, w)])
        if search:
            perm = h.sorted_vertices()
            rng.shuffle(perm)
            h = h.relabel(dict(zip(h.sorted_vertices(), perm)))
            try:
                eta = find_subdivision(lg, h, budget)
            except BudgetExhausted:
                continue
            if eta is None:
                continue
        else:
            eta = HomeomorphicEmbedding(lg, h, {v: v for v in lg.vertices}, {e: e for e in lg.edges})
        rest = h.remove_vertices([eta.vertex_map[label]])
        if not is_planar(rest) and is_internally_four_connected(rest):
            return eta, label
    raise RuntimeError("no apex host found")


def _crosses(h: Graph, face, a: int, b: int) -> bool:
    """Would the diagonal ab cross a diagonal already drawn inside this face?"""
    from .planarity import interleaved
    on = set(face)
    return any(interleaved(face, (a, b), (x, y)) for x, y in h.edges
               if x in on and y in on and {x, y} & {a, b} == set())
