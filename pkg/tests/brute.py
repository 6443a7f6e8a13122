"""Brute-force oracles shared by the tests and tools/derive_fixtures.py.

These use itertools and networkx only, never the planext search code.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from planext.graph import Graph


def nxg(g: Graph) -> nx.Graph:
    n = nx.Graph()
    n.add_nodes_from(g.vertices)
    n.add_edges_from(g.edges)
    return n


def cuts(g: Graph, k: int) -> list[tuple[int, ...]]:
    """k-subsets whose removal disconnects g."""
    out = []
    for c in combinations(g.sorted_vertices(), k):
        rest = nxg(g.remove_vertices(c))
        if rest.number_of_nodes() and not nx.is_connected(rest):
            out.append(c)
    return out


def three_connected(g: Graph) -> bool:
    return g.order() >= 4 and nx.is_connected(nxg(g)) and not cuts(g, 1) and not cuts(g, 2)


def _sides(g: Graph, c):
    comps = [frozenset(x) for x in nx.connected_components(nxg(g.remove_vertices(c)))]
    for r in range(1, len(comps)):
        for grp in combinations(comps, r):
            a = frozenset().union(*grp)
            yield a, frozenset(g.vertices) - a - set(c)


def almost_four(g: Graph) -> bool:
    if not three_connected(g) or g.order() < 5:
        return False
    return not any(len(a) >= 2 and len(b) >= 2 for c in cuts(g, 3) for a, b in _sides(g, c))


def internally_four(g: Graph) -> bool:
    if not three_connected(g) or g.order() < 5:
        return False
    return not any(g.edges_within(a | set(c)) > 3 and g.edges_within(b | set(c)) > 3
                   for c in cuts(g, 3) for a, b in _sides(g, c))


def separation_exists(g: Graph, k: int) -> bool:
    """Is there a separation of order exactly k with both sides proper?"""
    return bool(cuts(g, k))


def is_planar_nx(g: Graph) -> bool:
    return nx.check_planarity(nxg(g))[0]


def two_disjoint_paths(g: Graph, pairs, inner) -> bool:
    """Exhaustive: vertex-disjoint paths joining each pair with interiors in ``inner``."""
    (s1, t1), (s2, t2) = pairs
    inner = set(inner)
    for p in nx.all_simple_paths(nxg(g.subgraph(inner | {s1, t1})), s1, t1):
        rest = inner - set(p)
        h = nxg(g.subgraph(rest | {s2, t2}))
        if nx.has_path(h, s2, t2):
            return True
    return False
