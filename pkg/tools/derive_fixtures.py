"""Recompute the frozen oracle values used by the test-suite.

Every value here comes from exhaustive enumeration or an independent search
(itertools, networkx, the brute-force oracle), never from the code under test.
Run it and compare against the constants in tests/; they must agree.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import networkx as nx

from planext.catalog import complete, cube, dodecahedron, mobius_ladder, prism, v8, w_graph
from planext.certificates import brute_faces
from planext.graph import Graph
from planext.oracle import has_minor, has_topological_minor, kuratowski_planar

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from brute import almost_four, cuts, internally_four, nxg  # noqa: E402


def two_k4_triangle() -> Graph:
    # two K4s glued on a triangle, each apex side padded to >= 2 vertices
    es = [(0, 1), (0, 2), (1, 2)]
    es += [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 3)]
    es += [(5, 0), (5, 1), (5, 2), (6, 1), (6, 2), (6, 5)]
    return Graph(range(7), es)


def main() -> None:
    c, d = cube(), dodecahedron()
    out: dict = {}
    out["cube_2cuts"] = len(cuts(c, 1)) + len(cuts(c, 2))
    out["cube_3cuts"] = [list(x) for x in cuts(c, 3)]
    out["cube_almost4"] = almost_four(c)
    out["cube_int4"] = internally_four(c)
    out["prism_int4"] = internally_four(prism())
    out["prism_almost4"] = almost_four(prism())
    out["two_k4_almost4"] = almost_four(two_k4_triangle())
    out["v8_planar"] = kuratowski_planar(v8())
    out["w_planar"] = kuratowski_planar(w_graph())
    faces = brute_faces(d)
    out["dodeca_faces"] = [len(faces), sorted({len(f) for f in faces})]
    dist = dict(nx.all_pairs_shortest_path_length(nxg(d)))
    far = min((u, v) for u in dist for v in dist[u] if dist[u][v] == 5)
    out["dodeca_far_pair"] = [far, any(far[0] in f and far[1] in f for f in faces)]
    anti = (0, 7)
    out["cube_antipodal_cofacial"] = [nx.shortest_path_length(nxg(c), *anti),
                                      any(0 in f and 7 in f for f in brute_faces(c))]
    k4 = complete(4)
    wheel = k4.add_vertices([4]).add_edges([(4, 0), (4, 1), (4, 2)])
    out["k4_three_boundary_disk"] = nx.check_planarity(nxg(wheel))[0]
    k4c = k4.add_vertices([4]).add_edges([(4, i) for i in range(4)])
    out["k4_four_boundary_disk"] = nx.check_planarity(nxg(k4c))[0]
    k33 = Graph(range(6), [(i, j) for i in range(3) for j in range(3, 6)])
    out["k33_topological_in_v8"] = has_topological_minor(k33, v8()) is not None
    out["mobius3_is_k33"] = nx.is_isomorphic(nxg(mobius_ladder(3)), nxg(k33))
    cc = c.add_edges([(0, 3), (1, 2)])
    out["v8_minor_of_cube_cross"] = has_minor(v8(), cc) is not None
    out["v8_in_cube"] = has_topological_minor(v8(), c) is not None
    print(json.dumps(out))


if __name__ == "__main__":
    main()
