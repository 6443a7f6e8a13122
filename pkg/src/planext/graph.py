"""Immutable simple graphs, separations and connectivity predicates."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence


Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class GraphError(ValueError):
    """Raised for malformed graph input."""


class Graph:
    """A finite simple undirected graph on non-negative integer ids.

    Instances are immutable; every transform returns a new graph.
    """

    __slots__ = ("_adj", "_edges", "name")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = (),
                 name: str = ""):
        adj: dict[int, set[int]] = {}
        for v in vertices:
            if not isinstance(v, int) or v < 0:
                raise GraphError(f"vertex ids must be non-negative integers, got {v!r}")
            adj.setdefault(v, set())
        es: set[Edge] = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            for w in (u, v):
                if not isinstance(w, int) or w < 0:
                    raise GraphError(f"vertex ids must be non-negative integers, got {w!r}")
                adj.setdefault(w, set())
            adj[u].add(v)
            adj[v].add(u)
            es.add(norm_edge(u, v))
        self._adj = {v: frozenset(n) for v, n in adj.items()}
        self._edges = frozenset(es)
        self.name = name

    # --- basic access -----------------------------------------------------

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def order(self) -> int:
        return len(self._adj)

    def size(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self._edges)

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._adj))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.vertices, self._edges))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Graph{label} |V|={self.order()} |E|={self.size()}>"

    # --- transforms -------------------------------------------------------

    def subgraph(self, vs: Iterable[int]) -> Graph:
        keep = set(vs)
        return Graph(keep, (e for e in self._edges if e[0] in keep and e[1] in keep))

    def remove_vertices(self, vs: Iterable[int]) -> Graph:
        drop = set(vs)
        return self.subgraph(v for v in self._adj if v not in drop)

    def remove_edges(self, es: Iterable[tuple[int, int]]) -> Graph:
        drop = {norm_edge(*e) for e in es}
        return Graph(self._adj, (e for e in self._edges if e not in drop), self.name)

    def add_edges(self, es: Iterable[tuple[int, int]]) -> Graph:
        return Graph(self._adj, list(self._edges) + list(es), self.name)

    def add_vertices(self, vs: Iterable[int]) -> Graph:
        return Graph(list(self._adj) + list(vs), self._edges, self.name)

    def union(self, other: Graph) -> Graph:
        return Graph(list(self._adj) + list(other._adj), self._edges | other._edges)

    def relabel(self, mapping: dict[int, int]) -> Graph:
        return Graph((mapping[v] for v in self._adj),
                     (norm_edge(mapping[u], mapping[v]) for u, v in self._edges), self.name)

    def contract_edge(self, u: int, v: int) -> Graph:
        """Contract uv onto u, dropping loops and parallel edges."""
        if not self.has_edge(u, v):
            raise GraphError(f"({u},{v}) is not an edge")
        es = []
        for a, b in self._edges:
            a = u if a == v else a
            b = u if b == v else b
            if a != b:
                es.append((a, b))
        return Graph((w for w in self._adj if w != v), es, self.name)

    def subdivide_edge(self, u: int, v: int, new: int) -> Graph:
        if not self.has_edge(u, v):
            raise GraphError(f"({u},{v}) is not an edge")
        if new in self._adj:
            raise GraphError(f"vertex {new} already present")
        es = [e for e in self._edges if e != norm_edge(u, v)] + [(u, new), (new, v)]
        return Graph(list(self._adj) + [new], es, self.name)

    def next_id(self) -> int:
        return max(self._adj, default=-1) + 1

    # --- traversal --------------------------------------------------------

    def components(self, within: Iterable[int] | None = None) -> list[frozenset[int]]:
        """Connected components of the subgraph induced on ``within``."""
        allowed = set(self._adj) if within is None else set(within)
        seen: set[int] = set()
        comps = []
        for s in sorted(allowed):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y in allowed and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self, within: Iterable[int] | None = None) -> bool:
        allowed = set(self._adj) if within is None else set(within)
        if not allowed:
            return True
        return len(self.components(allowed)) == 1

    def shortest_path(self, s: int, t: int, allowed: Iterable[int] | None = None) -> list[int] | None:
        """BFS path from s to t whose vertices all lie in ``allowed`` (ends excepted)."""
        if s == t:
            return [s]
        ok = None if allowed is None else set(allowed)
        prev = {s: s}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in sorted(self._adj[x]):
                    if y in prev:
                        continue
                    if y != t and ok is not None and y not in ok:
                        continue
                    prev[y] = x
                    if y == t:
                        path = [t]
                        while path[-1] != s:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    nxt.append(y)
            frontier = nxt
        return None

    def edges_within(self, vs: Iterable[int]) -> int:
        s = set(vs)
        return sum(1 for a, b in self._edges if a in s and b in s)


def iter_paths(g: Graph, s: int, t: int, inner: Iterable[int], limit: int | None = None
               ) -> Iterator[list[int]]:
    """Simple s-t paths whose internal vertices all lie in ``inner``, shortest-ish first."""
    inner = set(inner)
    count = 0
    stack = [(s, [s])]
    while stack:
        x, p = stack.pop()
        for y in sorted(g.neighbors(x), reverse=True):
            if y == t and len(p) >= 1 and y != s:
                yield p + [t]
                count += 1
                if limit is not None and count >= limit:
                    return
            elif y in inner and y not in p:
                stack.append((y, p + [y]))


def fan(g: Graph, hub: int, targets: Sequence[int], inner: Iterable[int]) -> list[list[int]] | None:
    """Paths from hub to every target, disjoint except at hub, interiors in ``inner``.

    Unit-capacity augmenting paths on the vertex-split graph.
    """
    tset = set(targets)
    inner = set(inner) - {hub} - tset
    cap: dict[tuple, dict[tuple, int]] = {}

    def arc(a, b, c=1):
        cap.setdefault(a, {})[b] = cap.get(a, {}).get(b, 0) + c
        cap.setdefault(b, {}).setdefault(a, 0)

    src, snk = ("s", hub), ("t", -1)
    for v in inner:
        arc(("i", v), ("o", v))
    for v in tset:
        arc(("i", v), snk)
    for v in inner | {hub}:
        tail = src if v == hub else ("o", v)
        for w in g.neighbors(v):
            if w in inner or w in tset:
                arc(tail, ("i", w))
    for _ in range(len(tset)):
        prev = {src: None}
        queue = [src]
        while queue and snk not in prev:
            a = queue.pop(0)
            for b, c in sorted(cap.get(a, {}).items()):
                if c > 0 and b not in prev:
                    prev[b] = a
                    queue.append(b)
        if snk not in prev:
            return None
        b = snk
        while prev[b] is not None:
            a = prev[b]
            cap[a][b] -= 1
            cap[b][a] += 1
            b = a
    paths = []
    for b in sorted(cap[src]):
        if b[0] != "i" or cap[b].get(src, 0) <= 0:
            continue
        p = [hub]
        node = b
        while node != snk:
            if node[0] == "i":
                p.append(node[1])
            # follow an arc carrying flow
            node = next(n for n, c in sorted(cap[node].items())
                        if n != src and _carries(cap, node, n))
        paths.append(p)
    return paths


def _carries(cap, a, b) -> bool:
    # a forward arc a->b carries flow exactly when its reverse residual is positive
    if cap[b].get(a, 0) <= 0:
        return False
    if a[0] == "i":
        return b[0] == "t" or (b[0] == "o" and b[1] == a[1])
    return a[0] == "o" and b[0] == "i" and b[1] != a[1]


# --- separations ----------------------------------------------------------

@dataclass(frozen=True)
class Separation:
    side_a: frozenset[int]
    side_b: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.side_a & self.side_b)

    @property
    def cut(self) -> frozenset[int]:
        return self.side_a & self.side_b

    def swapped(self) -> Separation:
        return Separation(self.side_b, self.side_a)

    def is_valid_for(self, g: Graph) -> bool:
        if self.side_a | self.side_b != g.vertices:
            return False
        only_a = self.side_a - self.side_b
        only_b = self.side_b - self.side_a
        return not any((u in only_a and v in only_b) or (u in only_b and v in only_a)
                       for u, v in g.edges)

    def key(self) -> tuple:
        a, b = sorted(self.side_a), sorted(self.side_b)
        return tuple(min(a, b)), tuple(max(a, b))


def _groupings(comps: list[frozenset[int]]) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
    """Split components into two non-empty groups, each split once."""
    k = len(comps)
    if k < 2:
        return
    first, rest = comps[0], comps[1:]
    for mask in range(0, 1 << (k - 1)):
        if mask == (1 << (k - 1)) - 1:
            continue
        a = set(first)
        b: set[int] = set()
        for i, c in enumerate(rest):
            (a if mask >> i & 1 else b).update(c)
        yield frozenset(a), frozenset(b)


def enumerate_separations(g: Graph, max_order: int) -> list[Separation]:
    """All separations of order at most ``max_order`` with both sides proper.

    Each separation is listed once (up to swapping sides).
    """
    if max_order > 4:
        raise ValueError("max_order above 4 is not supported")
    vs = g.sorted_vertices()
    out: dict[tuple, Separation] = {}
    for k in range(0, max_order + 1):
        for cut in combinations(vs, k):
            cs = frozenset(cut)
            comps = g.components(v for v in vs if v not in cs)
            for a, b in _groupings(comps):
                sep = Separation(a | cs, b | cs)
                out.setdefault(sep.key(), sep)
    return [out[k] for k in sorted(out)]


# --- connectivity ---------------------------------------------------------

def is_three_connected(g: Graph) -> bool:
    n = g.order()
    if n < 4 or not g.is_connected():
        return False
    vs = g.sorted_vertices()
    for k in (1, 2):
        for cut in combinations(vs, k):
            if not g.is_connected(v for v in vs if v not in cut):
                return False
    return True


def _three_cuts(g: Graph) -> Iterator[tuple[frozenset[int], list[frozenset[int]]]]:
    vs = g.sorted_vertices()
    for cut in combinations(vs, 3):
        cs = frozenset(cut)
        comps = g.components(v for v in vs if v not in cs)
        if len(comps) >= 2:
            yield cs, comps


def _two_sided_sum(weights: list[int], low: int) -> bool:
    """Can the items be split into two non-empty groups each of weight >= low?"""
    total = sum(weights)
    # the first item is pinned to group A so each split is seen once
    reach = {weights[0]}
    for w in weights[1:]:
        reach |= {r + w for r in reach}
    return any(low <= r <= total - low and r != total for r in reach)


def is_almost_four_connected(g: Graph) -> bool:
    if g.order() < 5 or not is_three_connected(g):
        return False
    for _, comps in _three_cuts(g):
        if _two_sided_sum([len(c) for c in comps], 2):
            return False
    return True


def is_internally_four_connected(g: Graph) -> bool:
    if g.order() < 5 or not is_three_connected(g):
        return False
    for cut, comps in _three_cuts(g):
        base = g.edges_within(cut)
        weights = [g.edges_within(c | cut) - base for c in comps]
        # both sides would induce at least four edges
        if _two_sided_sum(weights, max(4 - base, 0)):
            return False
    return True


class PreconditionError(ValueError):
    """Raised when an operation's input does not meet its stated precondition."""


def topological_reduction(g: Graph) -> Graph | None:
    """Suppress degree-2 vertices.

    Returns None when suppression would create a loop or a parallel edge, or
    when some vertex has degree below two, i.e. when ``g`` is not a
    subdivision of a simple graph of minimum degree three.
    """
    if any(g.degree(v) < 2 for v in g):
        return None
    branch = {v for v in g if g.degree(v) != 2}
    if not branch:
        return None
    es: set[Edge] = set()
    seen_darts: set[tuple[int, int]] = set()
    for b in sorted(branch):
        for first in sorted(g.neighbors(b)):
            if (b, first) in seen_darts:
                continue
            prev, cur = b, first
            while cur not in branch:
                prev, cur = cur, next(w for w in g.neighbors(cur) if w != prev)
            seen_darts.add((b, first))
            seen_darts.add((cur, prev))
            if cur == b:
                return None
            e = norm_edge(b, cur)
            if e in es:
                return None
            es.add(e)
    return Graph(branch, es)


class BudgetExhausted(RuntimeError):
    """A bounded search ran out of node expansions before deciding."""

    def __init__(self, expansions: int):
        super().__init__(f"search budget exhausted after {expansions} expansions")
        self.expansions = expansions


class Budget:
    """Counts node expansions and raises once the limit is passed."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(self.used)
