"""Certificate files and their independent verifier.

A certificate is a header of ``key value`` fields plus named sections of raw
lines (edge lists, embeddings, models, paths).  ``verify`` re-derives every
claim from definitions using only the graph type, brute-force face enumeration
and networkx planarity; it never calls the searches that produced the data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .catalog import format_edge_list, parse_edge_list
from .graph import Edge, Graph, GraphError, norm_edge

FORMAT_LINE = "planext-certificate 1"

OUTCOME, MINOR, SUBDIVISION, APEX = "outcome", "minor", "subdivision", "apex"


class CertificateError(ValueError):
    """The certificate cannot be parsed at all."""


@dataclass
class Certificate:
    kind: str
    fields: dict[str, str] = field(default_factory=dict)
    sections: dict[str, list[str]] = field(default_factory=dict)

    def to_text(self) -> str:
        lines = [FORMAT_LINE, f"kind {self.kind}"]
        lines += [f"{k} {v}" for k, v in self.fields.items()]
        for name, body in self.sections.items():
            lines.append(f"== {name}")
            lines += body
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Certificate:
        raw = [l.rstrip() for l in text.splitlines()]
        if not raw or raw[0].strip() != FORMAT_LINE:
            raise CertificateError("missing certificate header line")
        kind = None
        fields: dict[str, str] = {}
        sections: dict[str, list[str]] = {}
        current = None
        for lineno, line in enumerate(raw[1:], 2):
            if line.startswith("== "):
                current = line[3:].strip()
                sections[current] = []
            elif current is not None:
                if line.strip():
                    sections[current].append(line)
            elif line.strip():
                key, _, value = line.strip().partition(" ")
                if key == "kind":
                    kind = value.strip()
                else:
                    fields[key] = value.strip()
        if kind is None:
            raise CertificateError("missing kind line")
        return cls(kind, fields, sections)

    def to_json(self) -> str:
        return json.dumps({"format": FORMAT_LINE, "kind": self.kind, "fields": self.fields,
                           "sections": self.sections}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> Certificate:
        try:
            d = json.loads(text)
            return cls(d["kind"], dict(d.get("fields", {})),
                       {k: list(v) for k, v in d.get("sections", {}).items()})
        except (ValueError, KeyError, TypeError) as exc:
            raise CertificateError(f"bad json certificate: {exc}") from None

    @classmethod
    def load(cls, text: str) -> Certificate:
        return cls.from_json(text) if text.lstrip().startswith("{") else cls.from_text(text)

    # --- section access ---------------------------------------------------

    def need(self, name: str) -> list[str]:
        if name not in self.sections:
            raise CertificateError(f"missing section {name!r}")
        return self.sections[name]

    def graph(self, name: str) -> Graph:
        try:
            return parse_edge_list("\n".join(self.need(name)))
        except GraphError as exc:
            raise CertificateError(f"section {name!r}: {exc}") from None


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# --- writing -----------------------------------------------------------------------

def _graph_lines(g: Graph) -> list[str]:
    return format_edge_list(g).splitlines()


def _ints(xs: Iterable[int]) -> str:
    return " ".join(map(str, xs))


def _embedding_lines(vertex_map: Mapping[int, int], edge_map: Mapping[Edge, Sequence[int]]) -> list[str]:
    out = [f"vertex {v} -> {vertex_map[v]}" for v in sorted(vertex_map)]
    out += [f"edge {u} {v} -> {_ints(edge_map[(u, v)])}" for u, v in sorted(edge_map)]
    return out


def _model_lines(sets: Mapping[int, Iterable[int]]) -> list[str]:
    return [f"branch {v} : {_ints(sorted(sets[v]))}" for v in sorted(sets)]


def outcome_certificate(out) -> Certificate:
    """Jump, free cross, S-separation or planar outcome of the extension engine."""
    from .engine import FREE_CROSS, JUMP, PLANAR, S_SEPARATION
    from .rerouting import format_log
    eta = out.final_eta
    cert = Certificate(OUTCOME, {"tag": out.tag})
    cert.sections["source"] = _graph_lines(eta.source)
    cert.sections["host"] = _graph_lines(eta.host)
    cert.sections["embedding"] = _embedding_lines(eta.vertex_map, eta.edge_map)
    if out.disks is not None:
        cert.sections["disks"] = [_ints(c) for c in out.disks.disks]
    p = out.payload
    if out.tag == JUMP:
        cert.sections["payload"] = [f"path {_ints(p.path)}"]
    elif out.tag == FREE_CROSS:
        cert.fields["freedom"] = p.freedom
        cert.sections["payload"] = [f"path {_ints(q)}" for q in p.paths]
        cert.sections["payload"] += [f"disk {_ints(p.disk)}", f"feet {_ints(p.feet)}"]
    elif out.tag == S_SEPARATION:
        cert.sections["payload"] = [f"side {_ints(sorted(p.side_a))}", f"side {_ints(sorted(p.side_b))}"]
    elif out.tag == PLANAR:
        cert.sections["payload"] = []
    else:
        raise ValueError(f"no certificate format for outcome {out.tag}")
    if out.initial_eta is not None and out.log:
        ini = out.initial_eta
        cert.sections["initial"] = _embedding_lines(ini.vertex_map, ini.edge_map)
        cert.sections["log"] = format_log(out.log).splitlines()
    return cert


def minor_certificate(pattern: Graph, host: Graph, sets: Mapping[int, Iterable[int]],
                      base: Graph | None = None, added: Sequence[tuple[int, int]] = (),
                      mode: str | None = None, face: Sequence[int] | None = None,
                      name: str | None = None) -> Certificate:
    """A minor model; with ``base`` the pattern must be base plus ``added``.

    ``mode`` is ``jump`` (one edge between non-cofacial vertices of base) or
    ``cross`` (two chords crossing inside a face of base).
    """
    cert = Certificate(MINOR)
    if name:
        cert.fields["name"] = name
    if mode:
        cert.fields["mode"] = mode
    cert.sections["pattern"] = _graph_lines(pattern)
    cert.sections["host"] = _graph_lines(host)
    cert.sections["model"] = _model_lines(sets)
    if base is not None:
        cert.sections["base"] = _graph_lines(base)
        cert.sections["added"] = [f"{u} {v}" for u, v in added]
    if face is not None:
        cert.sections["face"] = [_ints(face)]
    return cert


def extension_minor_certificate(g2: Graph, model, info: Mapping, base: Graph) -> Certificate:
    pairs = info["pairs"]
    mode = "jump" if len(pairs) == 1 else "cross"
    face = None
    if mode == "cross":
        vs = {x for p in pairs for x in p}
        face = next((c for c in brute_faces(base) if vs <= set(c)), None)
    return minor_certificate(g2, model.host, model.branch_sets, base, pairs, mode, face)


def subdivision_certificate(name: str, eta) -> Certificate:
    cert = Certificate(SUBDIVISION, {"name": name})
    cert.sections["pattern"] = _graph_lines(eta.source)
    cert.sections["host"] = _graph_lines(eta.host)
    cert.sections["embedding"] = _embedding_lines(eta.vertex_map, eta.edge_map)
    return cert


def apex_certificate(res, g: Graph, h: Graph, mold) -> Certificate:
    """The corollary outcome: at most one F-edge dropped, pattern L' <= host."""
    cert = Certificate(APEX, {"tag": res.outcome.tag})
    cert.sections["source"] = _graph_lines(g)
    cert.sections["mold"] = mold.to_text().splitlines()
    cert.sections["removed"] = [f"{u} {v}" for u, v in sorted(res.outcome.removed)]
    cert.sections["pattern"] = _graph_lines(res.pattern)
    cert.sections["host"] = _graph_lines(h)
    cert.sections["model"] = _model_lines(res.model.branch_sets)
    cert.sections["added"] = [f"{u} {v}" for u, v in res.added]
    if res.face is not None:
        cert.sections["face"] = [_ints(res.face)]
    return cert


# --- reading helpers ------------------------------------------------------------------

def _int_list(s: str, what: str) -> list[int]:
    try:
        return [int(t) for t in s.split()]
    except ValueError:
        raise CertificateError(f"bad {what}: {s!r}") from None


def _keyed(lines: list[str], key: str) -> list[list[int]]:
    out = []
    for line in lines:
        k, _, rest = line.strip().partition(" ")
        if k == key:
            out.append(_int_list(rest, key))
    return out


def _pairs(lines: list[str], what: str) -> list[Edge]:
    out = []
    for line in lines:
        xs = _int_list(line, what)
        if len(xs) != 2:
            raise CertificateError(f"bad {what} line {line!r}")
        out.append((xs[0], xs[1]))
    return out


def _parse_embedding(lines: list[str]) -> tuple[dict[int, int], dict[Edge, tuple[int, ...]]]:
    vm: dict[int, int] = {}
    em: dict[Edge, tuple[int, ...]] = {}
    for line in lines:
        head, sep, tail = line.partition("->")
        words = head.split()
        if not sep or not words or words[0] not in ("vertex", "edge"):
            raise CertificateError(f"bad embedding line {line!r}")
        ids = _int_list(" ".join(words[1:]), "embedding line")
        target = _int_list(tail, "embedding line")
        if words[0] == "vertex" and len(ids) == 1 and len(target) == 1:
            vm[ids[0]] = target[0]
        elif words[0] == "edge" and len(ids) == 2 and target:
            u, v = ids
            em[norm_edge(u, v)] = tuple(target) if u < v else tuple(target[::-1])
        else:
            raise CertificateError(f"bad embedding line {line!r}")
    return vm, em


def _parse_model(lines: list[str]) -> dict[int, frozenset[int]]:
    sets = {}
    for line in lines:
        head, sep, tail = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] != "branch":
            raise CertificateError(f"bad model line {line!r}")
        v = _int_list(words[1], "model line")[0]
        if v in sets:
            raise CertificateError(f"branch set of {v} given twice")
        sets[v] = frozenset(_int_list(tail, "model line"))
    return sets


# --- definitions ----------------------------------------------------------------------

def _walk_witness(host: Graph, p: Sequence[int], what: str) -> list[str]:
    if len(p) < 2:
        return [f"{what} has no edge"]
    out = []
    if len(set(p)) != len(p):
        out.append(f"{what} repeats a vertex")
    for a, b in zip(p, p[1:]):
        if not host.has_edge(a, b):
            out.append(f"{what} uses ({a},{b}), which is not a host edge")
    return out


def embedding_witness(src: Graph, host: Graph, vm: Mapping[int, int],
                      em: Mapping[Edge, Sequence[int]]) -> list[str]:
    """Why (vm, em) fails to map src homeomorphically into host; empty if it does."""
    out = []
    if set(vm) != set(src.vertices):
        out.append(f"vertex map covers {sorted(vm)}, source has {src.sorted_vertices()}")
    if len(set(vm.values())) != len(vm):
        out.append("two source vertices share an image")
    out += [f"image {x} of {v} is not a host vertex" for v, x in sorted(vm.items()) if x not in host]
    if set(em) != set(src.edges):
        out.append("edge map does not cover exactly the source edges")
        return out
    branch = set(vm.values())
    seen: dict[int, Edge] = {}
    for e in sorted(em):
        p = em[e]
        out += _walk_witness(host, p, f"path of {e}")
        if len(p) >= 2 and (p[0], p[-1]) != (vm.get(e[0]), vm.get(e[1])):
            out.append(f"path of {e} runs {p[0]}..{p[-1]}, not between the images of its ends")
        for x in p[1:-1]:
            if x in branch:
                out.append(f"path of {e} passes through branch vertex {x}")
            if x in seen:
                out.append(f"paths of {seen[x]} and {e} share {x}")
            seen[x] = e
    return out


def model_witness(pattern: Graph, host: Graph, sets: Mapping[int, frozenset[int]]) -> list[str]:
    """Why the branch sets fail to model pattern as a minor of host; empty if they do."""
    if set(sets) != set(pattern.vertices):
        return [f"branch sets given for {sorted(sets)}, pattern has {pattern.sorted_vertices()}"]
    out = []
    owner: dict[int, int] = {}
    for v in sorted(sets):
        bs = sets[v]
        if not bs:
            out.append(f"branch set of {v} is empty")
        for x in sorted(bs):
            if x not in host:
                out.append(f"branch set of {v} holds {x}, which is not a host vertex")
            elif x in owner:
                out.append(f"branch sets of {owner[x]} and {v} overlap at {x}")
            else:
                owner[x] = v
        if bs and bs <= host.vertices and not _connected(host, bs):
            out.append(f"branch set of {v} is not connected")
    if out:
        return out
    for u, v in pattern.sorted_edges():
        if not any(owner.get(y) == v for x in sets[u] for y in host.neighbors(x)):
            out.append(f"no host edge between the branch sets of {u} and {v}")
    return out


def _connected(g: Graph, vs: Iterable[int]) -> bool:
    vs = set(vs)
    if not vs:
        return True
    start = next(iter(vs))
    seen, stack = {start}, [start]
    while stack:
        for y in g.neighbors(stack.pop()):
            if y in vs and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == vs


def _canon(c: Sequence[int]) -> tuple[int, ...]:
    i = c.index(min(c))
    a = tuple(c[i:]) + tuple(c[:i])
    b = (a[0],) + a[1:][::-1]
    return min(a, b)


def brute_faces(g: Graph) -> list[tuple[int, ...]]:
    """Induced cycles whose removal leaves the rest connected, by exhaustive search."""
    found = set()
    order = g.sorted_vertices()

    def grow(path: list[int], on: set[int]):
        end = path[-1]
        for y in sorted(g.neighbors(end)):
            if y == path[0] and len(path) >= 3:
                found.add(_canon(path))
            elif y > path[0] and y not in on:
                # chords would make the cycle non-induced, so cut them early
                if any(g.has_edge(y, x) for x in path[1:-1]):
                    continue
                path.append(y)
                on.add(y)
                grow(path, on)
                on.discard(y)
                path.pop()

    for s in order:
        grow([s], {s})
    out = []
    for c in sorted(found):
        k = len(c)
        if any(g.has_edge(c[i], c[j]) for i in range(k) for j in range(i + 2, k)
               if not (i == 0 and j == k - 1)):
            continue
        if _connected(g, g.vertices - set(c)):
            out.append(c)
    return out


def _cyclic_order(c: Sequence[int], xs: Sequence[int]) -> list[int]:
    return sorted(xs, key=list(c).index)


def _crossing(c: Sequence[int], p: tuple[int, int], q: tuple[int, int]) -> bool:
    """Do chords p and q of the cycle c have interleaved ends?"""
    if set(p) & set(q):
        return False
    pos = {x: i for i, x in enumerate(c)}
    a, b = sorted((pos[p[0]], pos[p[1]]))
    return (a < pos[q[0]] < b) != (a < pos[q[1]] < b)


def _image_of_cycle(vm, em, c: Sequence[int]) -> tuple[int, ...]:
    walk: list[int] = []
    for i, a in enumerate(c):
        b = c[(i + 1) % len(c)]
        p = em[norm_edge(a, b)]
        walk += list(p if p[0] == vm[a] else p[::-1])[:-1]
    return _canon(walk)


# --- verification -----------------------------------------------------------------------

def verify(cert: Certificate) -> Verdict:
    """Re-derive the certificate's claim; malformed input raises CertificateError."""
    check = {OUTCOME: _verify_outcome, MINOR: _verify_minor, SUBDIVISION: _verify_subdivision,
             APEX: _verify_apex}.get(cert.kind)
    if check is None:
        raise CertificateError(f"unknown certificate kind {cert.kind!r}")
    witness = check(cert)
    return Verdict(not witness, tuple(witness))


def verify_text(text: str) -> Verdict:
    return verify(Certificate.load(text))


def _verify_subdivision(cert: Certificate) -> list[str]:
    pattern, host = cert.graph("pattern"), cert.graph("host")
    vm, em = _parse_embedding(cert.need("embedding"))
    out = embedding_witness(pattern, host, vm, em)
    name = cert.fields.get("name")
    if name:
        from .catalog import named
        try:
            ref = named(name)
        except KeyError:
            ref = None
        if ref is not None and not nx.is_isomorphic(_nx(ref), _nx(pattern)):
            out.append(f"pattern is not isomorphic to {name}")
    return out


def _nx(g: Graph) -> nx.Graph:
    n = nx.Graph()
    n.add_nodes_from(g.vertices)
    n.add_edges_from(g.edges)
    return n


def _verify_outcome(cert: Certificate) -> list[str]:
    tag = cert.fields.get("tag")
    g, host = cert.graph("source"), cert.graph("host")
    vm, em = _parse_embedding(cert.need("embedding"))
    out = embedding_witness(g, host, vm, em)
    if out:
        return out
    s_vertices = set(vm.values()).union(*map(set, em.values()))
    s_edges = {norm_edge(a, b) for p in em.values() for a, b in zip(p, p[1:])}
    out += _log_witness(cert, g, host, vm, em)
    payload = cert.need("payload")
    if tag in ("Jump", "FreeCross"):
        disks = [_canon(_int_list(l, "disk")) for l in cert.need("disks")]
        out += _disk_witness(g, vm, em, s_edges, disks)
        if out:
            return out
        paths = _keyed(payload, "path")
        for i, p in enumerate(paths):
            out += _s_path_witness(host, s_vertices, s_edges, p, f"path {i + 1}")
        if out:
            return out
        if tag == "Jump":
            if len(paths) != 1:
                return ["a jump carries exactly one path"]
            a, b = paths[0][0], paths[0][-1]
            shared = [c for c in disks if a in c and b in c]
            if shared:
                out.append(f"ends {a},{b} share the disk {list(shared[0])}")
        else:
            out += _cross_witness(cert, vm, em, disks, paths)
    elif tag == "SSeparation":
        out += _separation_witness(host, set(vm.values()), _keyed(payload, "side"))
    elif tag == "Planar":
        if not nx.check_planarity(_nx(host))[0]:
            out.append("host is not planar")
    else:
        raise CertificateError(f"unknown outcome tag {tag!r}")
    return out


def _log_witness(cert, g, host, vm, em) -> list[str]:
    if "log" not in cert.sections:
        return []
    from .rerouting import ReroutingError, parse_log, replay
    from .subdivision import HomeomorphicEmbedding
    ivm, iem = _parse_embedding(cert.need("initial"))
    bad = embedding_witness(g, host, ivm, iem)
    if bad:
        return [f"initial embedding: {w}" for w in bad]
    try:
        log = parse_log("\n".join(cert.sections["log"]))
    except (ValueError, KeyError) as exc:
        raise CertificateError(f"bad log: {exc}") from None
    try:
        end = replay(HomeomorphicEmbedding(g, host, ivm, iem), log)
    except ReroutingError as exc:
        return [f"log step fails: {exc}"]
    if dict(end.vertex_map) != vm or {e: tuple(p) for e, p in end.edge_map.items()} != em:
        return ["log does not lead to the final embedding"]
    return []


def _s_path_witness(host: Graph, s_vertices, s_edges, p: Sequence[int], what: str) -> list[str]:
    out = _walk_witness(host, p, what)
    if out:
        return out
    if p[0] not in s_vertices or p[-1] not in s_vertices:
        out.append(f"{what} does not end on S")
    inside = [x for x in p[1:-1] if x in s_vertices]
    if inside:
        out.append(f"{what} meets S internally at {inside[0]}")
    if len(p) == 2 and norm_edge(p[0], p[1]) in s_edges:
        out.append(f"{what} is an edge of S")
    return out


def _disk_witness(g: Graph, vm, em, s_edges, disks) -> list[str]:
    out = []
    cover: dict[Edge, int] = {}
    for c in disks:
        ring = [norm_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]
        if len(set(c)) != len(c) or any(e not in s_edges for e in ring):
            out.append(f"disk {list(c)} is not a cycle of S")
            continue
        for e in ring:
            cover[e] = cover.get(e, 0) + 1
    if out:
        return out
    thin = sorted(e for e in s_edges if cover.get(e, 0) != 2)
    if thin:
        out.append(f"edge {thin[0]} of S lies on {cover.get(thin[0], 0)} disks, not two")
    faces = brute_faces(g)
    want = sorted(_image_of_cycle(vm, em, c) for c in faces)
    if want and sorted(disks) != want:
        missing = sorted(set(want) - set(disks)) or sorted(set(disks) - set(want))
        out.append(f"disks differ from the images of the faces of the source at {list(missing[0])}")
    return out


def _cross_witness(cert, vm, em, disks, paths) -> list[str]:
    out = []
    if len(paths) != 2:
        return ["a cross carries exactly two paths"]
    p1, p2 = paths
    common = set(p1) & set(p2)
    if common:
        out.append(f"paths share {sorted(common)[0]}")
    disk = _keyed(cert.need("payload"), "disk")
    feet = _keyed(cert.need("payload"), "feet")
    if len(disk) != 1 or len(feet) != 1 or len(feet[0]) != 4:
        raise CertificateError("a cross needs one disk line and four feet")
    c, feet = _canon(disk[0]), feet[0]
    if c not in disks:
        return out + [f"{list(c)} is not a disk"]
    u1, u2, v1, v2 = feet
    if {p1[0], p1[-1]} != {u1, v1} or {p2[0], p2[-1]} != {u2, v2}:
        out.append(f"feet {feet} do not match the path ends")
    off = [f for f in feet if f not in c]
    if off:
        return out + [f"foot {off[0]} is off the disk"]
    seen = _cyclic_order(c, feet)
    k = seen.index(u1)
    turn = seen[k:] + seen[:k]
    if turn not in ([u1, u2, v1, v2], [u1, v2, v1, u2]):
        out.append(f"feet appear on the disk in the order {turn}, claimed {feet}")
    freedom = cert.fields.get("freedom", "None")
    if freedom in ("WeaklyFree", "Free"):
        for a, b in ((u1, v1), (u2, v2)):
            seg = next((e for e, p in em.items() if a in p and b in p), None)
            if seg is not None:
                out.append(f"segment {seg} holds both ends {a},{b} of a path")
    if freedom == "Free":
        for (e1, q1), (e2, q2) in combinations(sorted(em.items()), 2):
            if set(e1) & set(e2) and all(f in q1 or f in q2 for f in feet):
                out.append(f"segments {e1} and {e2} at a common end hold all four feet")
                break
    return out


def _separation_witness(host: Graph, branch: set[int], sides: list[list[int]]) -> list[str]:
    if len(sides) != 2:
        raise CertificateError("a separation needs two side lines")
    x, y = set(sides[0]), set(sides[1])
    if x | y != set(host.vertices):
        return ["sides do not cover the host"]
    across = next(((a, b) for a, b in host.sorted_edges()
                   if (a in x - y and b in y - x) or (a in y - x and b in x - y)), None)
    if across:
        return [f"edge {across} crosses the separation"]
    out = []
    cut = sorted(x & y)
    if len(cut) > 3:
        out.append(f"order {len(cut)} exceeds three")
    if len((x - y) & branch) > 1:
        out.append(f"the small side holds branch vertices {sorted((x - y) & branch)}")
    hx = _nx(host.subgraph(x))
    hub = max(host.vertices) + 1
    hx.add_edges_from((hub, c) for c in cut)
    if nx.check_planarity(hx)[0]:
        out.append("the small side draws in a disk with the cut on its boundary")
    return out


def _verify_minor(cert: Certificate) -> list[str]:
    pattern, host = cert.graph("pattern"), cert.graph("host")
    sets = _parse_model(cert.need("model"))
    out = model_witness(pattern, host, sets)
    if "base" not in cert.sections:
        return out
    base = cert.graph("base")
    added = _pairs(cert.need("added"), "added edge")
    face = [_int_list(l, "face") for l in cert.sections.get("face", [])]
    out += _added_witness(base, pattern, added, cert.fields.get("mode"), face[0] if face else None,
                          brute_faces(base))
    return out


def _added_witness(base: Graph, pattern: Graph, added, mode, face, faces,
                   forbid: Graph | None = None) -> list[str]:
    out = []
    if pattern != base.add_edges(added) or any(base.has_edge(*e) for e in added):
        out.append("pattern is not the base graph plus the new edges")
    if mode == "jump":
        if len(added) != 1:
            return out + ["a jump adds exactly one edge"]
        u, v = added[0]
        both = [c for c in faces if u in c and v in c]
        if both:
            out.append(f"{u} and {v} share the face {list(both[0])}")
    elif mode == "cross":
        if len(added) != 2:
            return out + ["a cross adds exactly two edges"]
        if face is None or _canon(face) not in faces:
            return out + ["the chords name no face of the base graph"]
        p, q = added
        if not all(x in face for x in (*p, *q)):
            out.append("a chord end is off the face")
        elif not _crossing(face, p, q):
            out.append(f"chords {p} and {q} do not cross in the face")
        if forbid is not None:
            near = [e for e in added if forbid.has_edge(*e)]
            if near:
                out.append(f"chord {near[0]} joins neighbours of the source graph")
    else:
        raise CertificateError(f"unknown mode {mode!r}")
    return out


def _verify_apex(cert: Certificate) -> list[str]:
    from .apex import Mold, determined_graph, hat_vertices, source_labels
    g, host, pattern = cert.graph("source"), cert.graph("host"), cert.graph("pattern")
    try:
        mold = Mold.from_text("\n".join(cert.need("mold")))
    except GraphError as exc:
        raise CertificateError(f"bad mold: {exc}") from None
    removed = [norm_edge(*e) for e in _pairs(cert.sections.get("removed", []), "removed edge")]
    added = _pairs(cert.need("added"), "added edge")
    sets = _parse_model(cert.need("model"))
    out = model_witness(pattern, host, sets)
    if len(removed) > 1:
        out.append(f"{len(removed)} edges of F dropped, at most one allowed")
    if not set(removed) <= mold.f_set:
        out.append("a dropped edge is not in F")
    rest, _ = source_labels(g, mold.restrict(mold.f_set - set(removed)))
    try:
        base = determined_graph(g, rest)
    except GraphError as exc:
        return out + [f"mold does not fit the source: {exc}"]
    hats = hat_vertices(g, rest)
    faces = []
    for c in brute_faces(g):
        walk = []
        for i, a in enumerate(c):
            walk.append(a)
            e = norm_edge(a, c[(i + 1) % len(c)])
            if e in hats:
                walk.append(hats[e])
        faces.append(_canon(walk))
    face = [_int_list(l, "face") for l in cert.sections.get("face", [])]
    mode = "jump" if len(added) == 1 else "cross"
    out += _added_witness(base, pattern, added, mode, face[0] if face else None, faces, forbid=g)
    return out
