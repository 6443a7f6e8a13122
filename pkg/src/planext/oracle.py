"""Brute-force ground truth: topological-minor search, minor search, Kuratowski test.

Nothing here calls into the planarity or subdivision search code; results are
checked against definitions only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .graph import Budget, Edge, Graph, GraphError, norm_edge
from .subdivision import HomeomorphicEmbedding


DEFAULT_BUDGET = 10**7


# --- minor models --------------------------------------------------------------

@dataclass(frozen=True)
class MinorModel:
    """Disjoint connected host vertex sets, one per pattern vertex."""

    pattern: Graph
    host: Graph
    branch_sets: Mapping[int, frozenset[int]]

    def violations(self) -> list[str]:
        out = []
        if set(self.branch_sets) != set(self.pattern.vertices):
            out.append("branch sets do not match pattern vertices")
            return out
        owner: dict[int, int] = {}
        for v, bs in sorted(self.branch_sets.items()):
            if not bs:
                out.append(f"branch set of {v} is empty")
                continue
            for x in sorted(bs):
                if not self.host.has_vertex(x):
                    out.append(f"branch set of {v} holds non-host vertex {x}")
                elif x in owner:
                    out.append(f"branch sets of {owner[x]} and {v} overlap at {x}")
                owner.setdefault(x, v)
            if all(self.host.has_vertex(x) for x in bs) and not self.host.is_connected(bs):
                out.append(f"branch set of {v} is not connected")
        if out:
            return out
        for u, v in self.pattern.sorted_edges():
            bu, bv = self.branch_sets[u], self.branch_sets[v]
            if not any(y in bv for x in bu for y in self.host.neighbors(x)):
                out.append(f"no host edge between branch sets of {u} and {v}")
        return out

    def is_valid(self) -> bool:
        return not self.violations()

    def to_text(self) -> str:
        return "".join(f"branch {v} : " + " ".join(map(str, sorted(self.branch_sets[v]))) + "\n"
                       for v in sorted(self.branch_sets))

    @classmethod
    def from_text(cls, text: str, pattern: Graph, host: Graph) -> MinorModel:
        sets: dict[int, frozenset[int]] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"branch\s+(\d+)\s*:\s*([\d\s]*)", line)
            if not m:
                raise GraphError(f"line {lineno}: unrecognised model line {line!r}")
            sets[int(m.group(1))] = frozenset(int(t) for t in m.group(2).split())
        return cls(pattern, host, sets)


def model_from_subdivision(eta: HomeomorphicEmbedding) -> MinorModel:
    """A topological minor gives a minor: branch vertex plus half of each path."""
    sets = {v: {x} for v, x in eta.vertex_map.items()}
    for (u, v), p in eta.edge_map.items():
        inner = p[1:-1]
        half = (len(inner) + 1) // 2
        sets[u].update(inner[:half])
        sets[v].update(inner[half:])
    return MinorModel(eta.source, eta.host, {v: frozenset(s) for v, s in sets.items()})


def contract_model(model: MinorModel) -> Graph:
    """The pattern-labelled graph obtained by contracting each branch set."""
    owner = {x: v for v, bs in model.branch_sets.items() for x in bs}
    es = {norm_edge(owner[a], owner[b]) for a, b in model.host.edges
          if a in owner and b in owner and owner[a] != owner[b]}
    return Graph(model.branch_sets, es)


# --- symmetry ----------------------------------------------------------------

def twin_classes(g: Graph) -> list[list[int]]:
    """Groups of pairwise interchangeable vertices (equal open or closed neighbourhoods)."""
    groups: dict[tuple, list[int]] = {}
    for v in g.sorted_vertices():
        groups.setdefault(("o", tuple(sorted(g.neighbors(v)))), []).append(v)
    closed: dict[tuple, list[int]] = {}
    for v in g.sorted_vertices():
        closed.setdefault(("c", tuple(sorted(g.neighbors(v) | {v}))), []).append(v)
    out = [c for c in groups.values() if len(c) > 1]
    out += [c for c in closed.values() if len(c) > 1]
    return out


def _twin_predecessor(g: Graph) -> dict[int, int]:
    pred = {}
    for cls in twin_classes(g):
        for a, b in zip(cls, cls[1:]):
            pred[b] = a
    return pred


# --- topological minors ------------------------------------------------------

def has_topological_minor(pattern: Graph, host: Graph,
                          budget: int | None = DEFAULT_BUDGET) -> HomeomorphicEmbedding | None:
    """Exhaustive search for a subdivision of ``pattern`` inside ``host``.

    Returns an embedding, or None once the whole tree is exhausted.  Raises
    BudgetExhausted if the node budget runs out first.
    """
    if pattern.order() > host.order() or pattern.size() > host.size():
        return None
    counter = Budget(budget)
    order = sorted(pattern.vertices, key=lambda v: (-pattern.degree(v), v))
    pred = _twin_predecessor(pattern)
    edges = sorted(pattern.edges, key=lambda e: (order.index(e[0]) + order.index(e[1]), e))
    vmap: dict[int, int] = {}
    used: set[int] = set()
    paths: dict[Edge, tuple[int, ...]] = {}

    def reachable(s: int, t: int) -> bool:
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in host.neighbors(x):
                if y == t:
                    return True
                if y not in used and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return False

    def feasible(k: int) -> bool:
        pending: dict[int, int] = {}
        for a, b in edges[k:]:
            pending[a] = pending.get(a, 0) + 1
            pending[b] = pending.get(b, 0) + 1
            if not reachable(vmap[a], vmap[b]):
                return False
        for v, need in pending.items():
            x = vmap[v]
            room = sum(1 for y in host.neighbors(x) if y not in used or y in vmap.values())
            if room < need:
                return False
        return True

    def route(k: int) -> bool:
        if k == len(edges):
            return True
        if not feasible(k):
            return False
        a, b = edges[k]
        s, t = vmap[a], vmap[b]
        stack = [(s, (s,))]
        while stack:
            x, p = stack.pop()
            counter.tick()
            for y in sorted(host.neighbors(x), reverse=True):
                if y == t:
                    q = p + (t,)
                    used.update(q[1:-1])
                    paths[(a, b)] = q
                    if route(k + 1):
                        return True
                    del paths[(a, b)]
                    used.difference_update(q[1:-1])
                elif y not in used and y not in p:
                    stack.append((y, p + (y,)))
        return False

    def place(i: int) -> bool:
        if i == len(order):
            return route(0)
        v = order[i]
        low = vmap.get(pred[v], -1) if v in pred else -1
        for x in host.sorted_vertices():
            if x in used or x <= low or host.degree(x) < pattern.degree(v):
                continue
            counter.tick()
            vmap[v] = x
            used.add(x)
            if place(i + 1):
                return True
            used.discard(x)
            del vmap[v]
        return False

    if place(0):
        return HomeomorphicEmbedding(pattern, host, dict(vmap), dict(paths))
    return None


def kuratowski_planar(g: Graph, budget: int | None = DEFAULT_BUDGET) -> bool:
    """Planar iff neither K5 nor K3,3 occurs as a topological minor."""
    k5 = Graph(range(5), ((i, j) for i in range(5) for j in range(i + 1, 5)))
    k33 = Graph(range(6), ((i, j) for i in range(3) for j in range(3, 6)))
    for pat in (k33, k5):
        if has_topological_minor(pat, g, budget) is not None:
            return False
    return True


# --- minors --------------------------------------------------------------------

def has_minor(pattern: Graph, host: Graph, budget: int | None = DEFAULT_BUDGET) -> MinorModel | None:
    """Branch-and-bound search for a minor model of ``pattern`` in ``host``.

    Branch sets are seeded and then grown one free vertex at a time toward an
    unsatisfied pattern edge.  Returns None only after full exhaustion; raises
    BudgetExhausted otherwise.
    """
    k = pattern.order()
    if k > host.order() or pattern.size() > host.size():
        return None
    counter = Budget(budget)
    pv = sorted(pattern.vertices, key=lambda v: (-pattern.degree(v), v))
    pred = _twin_predecessor(pattern)
    pedges = pattern.sorted_edges()
    sets: dict[int, set[int]] = {v: set() for v in pv}
    owner: dict[int, int] = {}
    seed: dict[int, int] = {}
    seen: set = set()
    hv = host.sorted_vertices()

    def touching(i: int, j: int) -> bool:
        bj = sets[j]
        return any(y in bj for x in sets[i] for y in host.neighbors(x))

    def free_dist(i: int, j: int) -> dict[int, int] | None:
        """BFS distances from set j over free vertices; None if set i unreachable."""
        dist = {x: 0 for x in sets[j]}
        frontier = list(sets[j])
        hit = False
        while frontier:
            nxt = []
            for x in frontier:
                for y in host.neighbors(x):
                    if y in sets[i]:
                        hit = True
                    if y not in dist and y not in owner:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        return dist if hit else None

    def add(i: int, x: int) -> None:
        sets[i].add(x)
        owner[x] = i

    def remove(i: int, x: int) -> None:
        sets[i].discard(x)
        del owner[x]

    def rec() -> bool:
        counter.tick()
        key = (tuple(frozenset(sets[v]) for v in pv), tuple(sorted(seed.items())))
        if key in seen:
            return False
        seen.add(key)
        empties = [v for v in pv if not sets[v]]
        if len(hv) - len(owner) < len(empties):
            return False
        if empties:
            def weight(v):
                placed = sum(1 for w in pattern.neighbors(v) if sets[w])
                return (-placed, -pattern.degree(v), v)
            i = min(empties, key=weight)
            if i in pred and not sets[pred[i]]:
                i = pred[i]
                while i in pred and not sets[pred[i]]:
                    i = pred[i]
            low = seed[pred[i]] if i in pred else -1
            anchors = [w for w in pattern.neighbors(i) if sets[w]]
            cands = [x for x in hv if x not in owner and x > low]
            if anchors:
                dist = free_dist_multi(anchors)
                cands = [x for x in cands if x in dist]
                cands.sort(key=lambda x: (dist[x], -host.degree(x), x))
            else:
                cands.sort(key=lambda x: (-host.degree(x), x))
            for x in cands:
                add(i, x)
                seed[i] = x
                if rec():
                    return True
                del seed[i]
                remove(i, x)
            return False
        unsat = [(a, b) for a, b in pedges if not touching(a, b)]
        if not unsat:
            return True
        best = None
        for a, b in unsat:
            dist = free_dist(a, b)
            if dist is None:
                return False
            reach = min((dist[y] for x in sets[a] for y in host.neighbors(x) if y in dist),
                        default=0)
            if best is None or reach < best[0]:
                best = (reach, a, b, dist)
        _, a, b, dist_b = best
        dist_a = free_dist(b, a)
        options = []
        for i, d in ((a, dist_b), (b, dist_a)):
            for x in sets[i]:
                for y in host.neighbors(x):
                    if y not in owner and y in d:
                        options.append((d[y], i, y))
        for _, i, y in sorted(set(options)):
            add(i, y)
            if rec():
                return True
            remove(i, y)
        return False

    def free_dist_multi(anchors: list[int]) -> dict[int, int]:
        """Summed free distances to the anchor sets, over vertices reaching all of them."""
        dist: dict[int, int] = {}
        hits: dict[int, int] = {}
        for j in anchors:
            d = {x: 0 for x in sets[j]}
            frontier = list(sets[j])
            while frontier:
                nxt = []
                for x in frontier:
                    for y in host.neighbors(x):
                        if y not in d and y not in owner:
                            d[y] = d[x] + 1
                            nxt.append(y)
                frontier = nxt
            for x, dx in d.items():
                if x not in owner:
                    dist[x] = dist.get(x, 0) + dx
                    hits[x] = hits.get(x, 0) + 1
        return {x: d for x, d in dist.items() if hits[x] == len(anchors)}

    if rec():
        return MinorModel(pattern, host, {v: frozenset(s) for v, s in sets.items()})
    return None
