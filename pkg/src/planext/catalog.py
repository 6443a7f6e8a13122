"""Named graphs used throughout the package, plus edge-list text I/O."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, TextIO

from .graph import Graph, GraphError


def complete(n: int) -> Graph:
    return Graph(range(n), combinations(range(n), 2), name=f"K{n}")


def complete_bipartite(m: int, n: int) -> Graph:
    return Graph(range(m + n), ((i, m + j) for i in range(m) for j in range(n)),
                 name=f"K{m},{n}")


def cycle(n: int, start: int = 0) -> Graph:
    vs = list(range(start, start + n))
    return Graph(vs, ((vs[i], vs[(i + 1) % n]) for i in range(n)), name=f"C{n}")


def path(n: int) -> Graph:
    return Graph(range(n), ((i, i + 1) for i in range(n - 1)), name=f"P{n}")


def cube() -> Graph:
    es = [(v, v ^ (1 << b)) for v in range(8) for b in range(3) if v < v ^ (1 << b)]
    return Graph(range(8), es, name="cube")


def w_graph() -> Graph:
    # 0 = 000 and 7 = 111 are at distance three
    g = cube().add_edges([(0, 7)])
    g.name = "W"
    return g


def v8() -> Graph:
    es = [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
    return Graph(range(8), es, name="V8")


def _lcf(n: int, jumps: list[int]) -> list[tuple[int, int]]:
    es = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    for i in range(n):
        es.add(tuple(sorted((i, (i + jumps[i % len(jumps)]) % n))))
    return sorted(es)


def dodecahedron() -> Graph:
    return Graph(range(20), _lcf(20, [10, 7, 4, -4, -7, 10, -4, 7, -7, 4]),
                 name="dodecahedron")


def petersen() -> Graph:
    es = [(i, (i + 1) % 5) for i in range(5)]
    es += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    es += [(i, i + 5) for i in range(5)]
    return Graph(range(10), es, name="Petersen")


def petersen_minus_edge() -> Graph:
    g = petersen().remove_edges([(0, 1)])
    g.name = "PetersenMinusEdge"
    return g


def prism() -> Graph:
    g = planar_ladder(3)
    g.name = "prism"
    return g


def ladder_x(i: int, n: int) -> int:
    """Vertex id of x_i (1-based) in a ladder with n rungs."""
    return i - 1


def ladder_y(i: int, n: int) -> int:
    return n + i - 1


def planar_ladder(n: int) -> Graph:
    if n < 3:
        raise GraphError("a ladder needs at least 3 rungs")
    es = []
    for i in range(1, n + 1):
        j = i % n + 1
        es.append((ladder_x(i, n), ladder_x(j, n)))
        es.append((ladder_y(i, n), ladder_y(j, n)))
        es.append((ladder_x(i, n), ladder_y(i, n)))
    return Graph(range(2 * n), es, name=f"ladder{n}")


def mobius_ladder(n: int) -> Graph:
    x1, xn, y1, yn = ladder_x(1, n), ladder_x(n, n), ladder_y(1, n), ladder_y(n, n)
    g = planar_ladder(n).remove_edges([(x1, xn), (y1, yn)]).add_edges([(x1, yn), (y1, xn)])
    g.name = f"mobius{n}"
    return g


CATALOG: dict[str, Callable[[], Graph]] = {
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "K6": lambda: complete(6),
    "K33": lambda: complete_bipartite(3, 3),
    "cube": cube,
    "W": w_graph,
    "V8": v8,
    "dodecahedron": dodecahedron,
    "PetersenMinusEdge": petersen_minus_edge,
    "prism": prism,
}


def named(name: str) -> Graph:
    """Look up a catalog graph; ``ladderN`` and ``mobiusN`` are parametric."""
    if name in CATALOG:
        return CATALOG[name]()
    for prefix, build in (("ladder", planar_ladder), ("mobius", mobius_ladder)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return build(int(name[len(prefix):]))
    raise KeyError(f"unknown catalog graph {name!r}")


# --- edge-list format -----------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    name = ""
    vertices: list[int] = []
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("name:"):
                name = body[5:].strip()
            continue
        parts = line.split()
        try:
            ids = [int(p) for p in parts]
        except ValueError:
            raise GraphError(f"line {lineno}: expected integer ids, got {line!r}") from None
        if any(i < 0 for i in ids):
            raise GraphError(f"line {lineno}: negative vertex id")
        if len(ids) == 1:
            vertices.append(ids[0])
        elif len(ids) == 2:
            if ids[0] == ids[1]:
                raise GraphError(f"line {lineno}: loop at vertex {ids[0]}")
            edges.append((ids[0], ids[1]))
        else:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
    return Graph(vertices, edges, name=name)


def read_edge_list(fh: TextIO) -> Graph:
    return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [f"# name: {g.name}"] if g.name else []
    covered = {v for e in g.edges for v in e}
    lines += [str(v) for v in g.sorted_vertices() if v not in covered]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"
