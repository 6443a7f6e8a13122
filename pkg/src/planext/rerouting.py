"""Reroutings of a homeomorphic embedding, triad exchange and F-safety."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Edge, norm_edge
from .subdivision import HomeomorphicEmbedding, Path, bridge_containing


class ReroutingError(ValueError):
    """A rerouting precondition failed; ``rule`` names the violated condition."""

    def __init__(self, rule: str, detail: str = ""):
        super().__init__(f"{rule}: {detail}" if detail else rule)
        self.rule = rule


class ProperViolation(ReroutingError):
    def __init__(self, detail: str = ""):
        super().__init__("ProperViolation", detail)


@dataclass(frozen=True)
class Rerouting:
    """One logged rerouting step.

    ``base`` lists the source edges whose images the step is based at, ``center``
    the source vertex at which T, V, X and triad steps are centered.
    """

    kind: str
    anchors: tuple[int, ...]
    replaced: tuple[Path, ...]
    inserted: tuple[Path, ...]
    base: tuple[Edge, ...] = ()
    center: int | None = None
    proper: bool = False
    tags: tuple[str, ...] = ()

    def to_line(self) -> str:
        def paths(ps):
            return ";".join("-".join(map(str, p)) for p in ps) or "."
        parts = [
            self.kind,
            "anchors=" + (",".join(map(str, self.anchors)) or "."),
            "replaced=" + paths(self.replaced),
            "inserted=" + paths(self.inserted),
            "base=" + (";".join(f"{u},{v}" for u, v in self.base) or "."),
            "center=" + ("." if self.center is None else str(self.center)),
            "proper=" + ("1" if self.proper else "0"),
            "tags=" + (",".join(self.tags) or "."),
        ]
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> Rerouting:
        kind, *fields = line.split()
        kv = dict(f.split("=", 1) for f in fields)

        def paths(s):
            return () if s == "." else tuple(tuple(int(t) for t in p.split("-")) for p in s.split(";"))

        def ints(s):
            return () if s == "." else tuple(int(t) for t in s.split(","))

        base = () if kv["base"] == "." else tuple(
            tuple(int(t) for t in b.split(",")) for b in kv["base"].split(";"))
        return cls(kind, ints(kv["anchors"]), paths(kv["replaced"]), paths(kv["inserted"]),
                   base, None if kv["center"] == "." else int(kv["center"]),
                   kv["proper"] == "1", () if kv["tags"] == "." else tuple(kv["tags"].split(",")))


def format_log(log: Iterable[Rerouting]) -> str:
    return "".join(r.to_line() + "\n" for r in log)


def parse_log(text: str) -> list[Rerouting]:
    return [Rerouting.from_line(l) for l in text.splitlines() if l.strip() and not l.startswith("#")]


# --- helpers ------------------------------------------------------------------

def _check_s_path(eta: HomeomorphicEmbedding, q: Sequence[int], ends: tuple[int, int]) -> None:
    h = eta.host
    sv = eta.image_vertices()
    s = eta.image()
    q = tuple(q)
    if len(q) < 2 or {q[0], q[-1]} != set(ends) or q[0] == q[-1]:
        raise ReroutingError("SPath", f"path {q} does not join {ends}")
    if len(set(q)) != len(q):
        raise ReroutingError("SPath", f"path {q} repeats a vertex")
    for a, b in zip(q, q[1:]):
        if not h.has_edge(a, b):
            raise ReroutingError("SPath", f"({a},{b}) is not a host edge")
        if s.has_edge(a, b):
            raise ReroutingError("SPath", f"({a},{b}) already lies in S")
    if any(x in sv for x in q[1:-1]):
        raise ReroutingError("SPath", f"path {q} meets S internally")


def _oriented(q: Sequence[int], start: int) -> Path:
    q = tuple(q)
    return q if q[0] == start else q[::-1]


def _subpath(p: Path, a: int, b: int) -> Path:
    i, j = p.index(a), p.index(b)
    return p[i:j + 1] if i <= j else p[j:i + 1][::-1]


def _segments_at(eta: HomeomorphicEmbedding, v: int) -> list[Edge]:
    return [norm_edge(v, w) for w in sorted(eta.source.neighbors(v))]


def _from_center(eta: HomeomorphicEmbedding, e: Edge, v: int) -> Path:
    """The image of e read from the image of v outwards."""
    p = eta.edge_map[e]
    return p if p[0] == eta.vertex_map[v] else p[::-1]


def _attachments_within(eta: HomeomorphicEmbedding, q: Sequence[int], edges: Iterable[Edge]) -> bool:
    allowed = set()
    for e in edges:
        allowed.update(eta.edge_map[e])
    return bridge_containing(eta, q).attachments <= allowed


# --- I, V, T, X --------------------------------------------------------------

def apply_i_rerouting(eta: HomeomorphicEmbedding, segment: Edge, x: int, y: int,
                      q: Sequence[int], check_proper: bool = False,
                      kind: str = "I", center: int | None = None,
                      base: tuple[Edge, ...] | None = None, allow_edge: bool = False):
    """Replace the subpath xP1y of the segment image by the S-path q.

    ``allow_edge`` admits a one-edge segment; such steps are tagged ``edge``.
    """
    segment = norm_edge(*segment)
    p1 = eta.edge_map[segment]
    if len(p1) < 3 and not (allow_edge and len(p1) == 2):
        raise ReroutingError("SegmentLength", "the segment must have at least two edges")
    if x not in p1 or y not in p1 or x == y:
        raise ReroutingError("Anchors", "x and y must be distinct vertices of the segment")
    _check_s_path(eta, q, (x, y))
    if p1.index(x) > p1.index(y):
        x, y = y, x
    q = _oriented(q, x)
    proper_base = base if base is not None else (segment,)
    proper = _attachments_within(eta, q, proper_base)
    if check_proper and not proper:
        raise ProperViolation("the bridge of q attaches outside the base segments")
    i, j = p1.index(x), p1.index(y)
    new = p1[:i] + q + p1[j + 1:]
    out = eta.with_paths({segment: new})
    tags = ("I",) if kind == "I" else ("I", kind)
    if len(p1) == 2:
        tags += ("edge",)
    r = Rerouting(kind, (x, y), (p1[i:j + 1],), (q,), proper_base, center, proper, tags)
    return out, r


def apply_v_rerouting(eta: HomeomorphicEmbedding, v: int, e1: Edge, e2: Edge, on_second: bool,
                      x: int, y: int, q: Sequence[int], check_proper: bool = False):
    """An I-rerouting on one of two segments at a vertex of degree at least four."""
    e1, e2 = norm_edge(*e1), norm_edge(*e2)
    if eta.source.degree(v) < 4:
        raise ReroutingError("Degree", "V-rerouting needs a center of degree at least four")
    if v not in e1 or v not in e2 or e1 == e2:
        raise ReroutingError("Anchors", "base edges must be distinct and incident with the center")
    seg = e2 if on_second else e1
    return apply_i_rerouting(eta, seg, x, y, q, check_proper, kind="V", center=v, base=(e1, e2))


def apply_t_rerouting(eta: HomeomorphicEmbedding, v: int, e1: Edge, e2: Edge,
                      x: int, y: int, q: Sequence[int]):
    """Replace xP1v by q; the branch vertex moves from the image of v to y."""
    e1, e2 = norm_edge(*e1), norm_edge(*e2)
    if eta.source.degree(v) != 3:
        raise ReroutingError("Degree", "T-rerouting needs a center of degree three")
    if v not in e1 or v not in e2 or e1 == e2:
        raise ReroutingError("Anchors", "base edges must be distinct and incident with the center")
    p1 = _from_center(eta, e1, v)
    p2 = _from_center(eta, e2, v)
    if x not in p1 or x == p1[0]:
        raise ReroutingError("Anchors", "x must lie on P1 away from the center")
    if y not in p2[1:-1]:
        raise ReroutingError("Anchors", "y must be an internal vertex of P2")
    _check_s_path(eta, q, (x, y))
    e3 = next(e for e in _segments_at(eta, v) if e not in (e1, e2))
    p3 = _from_center(eta, e3, v)
    q = _oriented(q, y)
    ix, iy = p1.index(x), p2.index(y)
    new1 = q + p1[ix + 1:]                 # y .. x .. v1
    new2 = p2[iy:]                         # y .. v2
    new3 = p2[:iy + 1][::-1] + p3[1:]      # y .. v .. v3
    out = eta.with_paths({e1: new1, e2: new2, e3: new3}, {v: y})
    r = Rerouting("T", (x, y), (p1[:ix + 1][::-1],), (q,), (e1, e2), v,
                  _attachments_within(eta, q, (e1, e2)), ("T",))
    return out, r


def apply_x_rerouting(eta: HomeomorphicEmbedding, v: int, e1: Edge, e2: Edge,
                      q1: Sequence[int], q2: Sequence[int], check_proper: bool = False):
    """Exchange segment pieces through two disjoint S-paths q1 (x1-y1), q2 (x2-y2).

    The ends must appear as x1, x2, v, y1, y2 along P1 followed by P2.
    """
    e1, e2 = norm_edge(*e1), norm_edge(*e2)
    if eta.source.degree(v) < 4:
        raise ReroutingError("Degree", "X-rerouting needs a center of degree at least four")
    if v not in e1 or v not in e2 or e1 == e2:
        raise ReroutingError("Anchors", "base edges must be distinct and incident with the center")
    p1 = _from_center(eta, e1, v)[::-1]    # v1 .. v
    p2 = _from_center(eta, e2, v)          # v .. v2
    q1, q2 = tuple(q1), tuple(q2)
    if set(q1) & set(q2):
        raise ReroutingError("Disjoint", "q1 and q2 intersect")

    def split(q):
        a, b = q[0], q[-1]
        if a in p1[:-1] and b in p2[1:]:
            return q
        if b in p1[:-1] and a in p2[1:]:
            return q[::-1]
        raise ReroutingError("Order", f"path {q} must join P1 - v to P2 - v")

    q1, q2 = split(q1), split(q2)
    x1, y1, x2, y2 = q1[0], q1[-1], q2[0], q2[-1]
    if not (p1.index(x1) < p1.index(x2) and p2.index(y1) < p2.index(y2)):
        raise ReroutingError("Order", "ends must appear as x1, x2, v, y1, y2")
    _check_s_path(eta, q1, (x1, y1))
    _check_s_path(eta, q2, (x2, y2))
    proper = (_attachments_within(eta, q1, (e1, e2)) and _attachments_within(eta, q2, (e1, e2)))
    if check_proper and not proper:
        raise ProperViolation("a bridge of q1 or q2 attaches outside P1 and P2")
    i1, i2 = p1.index(x1), p1.index(x2)
    j1, j2 = p2.index(y1), p2.index(y2)
    new1 = p1[:i1] + q1 + p2[:j1][::-1]        # v1 .. x1 Q1 y1 .. v
    new2 = p2[j2:][::-1][:-1] + q2[::-1] + p1[i2 + 1:]  # v2 .. y2 Q2 x2 .. v
    out = eta.with_paths({e1: new1, e2: new2})
    r = Rerouting("X", (x1, x2, eta.vertex_map[v], y1, y2), (p1[i1:i2 + 1], p2[j1:j2 + 1]),
                  (q1, q2), (e1, e2), v, proper, ("X",))
    return out, r


# --- triad exchange ----------------------------------------------------------

def apply_triad_exchange(eta: HomeomorphicEmbedding, v: int, hub: int,
                         paths: Sequence[Sequence[int]]):
    """Swap the degree-3 branch vertex at v for the hub of a local triad.

    ``paths`` run from the hub to one foot on each segment at v.
    """
    if eta.source.degree(v) != 3:
        raise ReroutingError("Local", "triad center must have degree three")
    segs = _segments_at(eta, v)
    center = eta.vertex_map[v]
    paths = [tuple(p) if p[0] == hub else tuple(p)[::-1] for p in paths]
    if len(paths) != 3:
        raise ReroutingError("Local", "a triad has three paths")
    sv = eta.image_vertices()
    if hub in sv:
        raise ReroutingError("Local", "the hub must lie off S")
    seen = {hub}
    for p in paths:
        if any(x in sv for x in p[:-1]) or p[-1] not in sv:
            raise ReroutingError("Local", f"path {p} is not a hub-to-foot path")
        if seen & set(p[1:]):
            raise ReroutingError("Local", "triad paths overlap")
        seen.update(p[1:])
        for a, b in zip(p, p[1:]):
            if not eta.host.has_edge(a, b):
                raise ReroutingError("Local", f"({a},{b}) is not a host edge")
    updates = {}
    replaced = []
    used_segs = set()
    for p in paths:
        foot = p[-1]
        owners = [e for e in segs if foot in _from_center(eta, e, v)[1:]]
        if len(owners) != 1 or foot == center:
            raise ReroutingError("Local", f"foot {foot} is not on exactly one segment at the center")
        e = owners[0]
        if e in used_segs:
            raise ReroutingError("Local", "two feet on one segment")
        used_segs.add(e)
        z = _from_center(eta, e, v)
        k = z.index(foot)
        replaced.append(z[:k + 1][::-1])
        updates[e] = p + z[k + 1:]
    out = eta.with_paths(updates, {v: hub})
    r = Rerouting("TriadExchange", (center, hub), tuple(replaced), tuple(paths),
                  tuple(segs), v, False, ("TriadExchange",))
    return out, r


# --- replay and F-safety -----------------------------------------------------

def replay(eta: HomeomorphicEmbedding, log: Iterable[Rerouting]) -> HomeomorphicEmbedding:
    """Re-apply a logged sequence of reroutings."""
    for r in log:
        eta = replay_one(eta, r)
    return eta


def replay_one(eta: HomeomorphicEmbedding, r: Rerouting) -> HomeomorphicEmbedding:
    if r.kind == "I":
        return apply_i_rerouting(eta, r.base[0], r.anchors[0], r.anchors[1], r.inserted[0],
                                 allow_edge="edge" in r.tags)[0]
    if r.kind == "V":
        p = r.replaced[0]
        on_second = set(p) <= set(eta.edge_map[r.base[1]]) and not set(p) <= set(eta.edge_map[r.base[0]])
        return apply_v_rerouting(eta, r.center, r.base[0], r.base[1], on_second,
                                 r.anchors[0], r.anchors[1], r.inserted[0])[0]
    if r.kind == "T":
        return apply_t_rerouting(eta, r.center, r.base[0], r.base[1],
                                 r.anchors[0], r.anchors[1], r.inserted[0])[0]
    if r.kind == "X":
        return apply_x_rerouting(eta, r.center, r.base[0], r.base[1], r.inserted[0], r.inserted[1])[0]
    if r.kind == "TriadExchange":
        return apply_triad_exchange(eta, r.center, r.anchors[1], r.inserted)[0]
    raise ValueError(f"unknown rerouting kind {r.kind!r}")


def is_f_safe(r: Rerouting, eta: HomeomorphicEmbedding, f_set: Iterable[Edge]) -> bool:
    """Check the three safety conditions against the pre-rerouting embedding."""
    fs = {norm_edge(*e) for e in f_set}
    for q in r.inserted:
        b = bridge_containing(eta, q)
        for e in sorted(fs):
            p = eta.edge_map[e]
            touches = bool(b.attachments & set(p[1:-1])) or {p[0], p[-1]} <= b.attachments
            if touches and not (r.kind == "I" and r.base == (e,)):
                return False
    if r.kind == "T" and any(norm_edge(*e) in fs for e in _segments_at(eta, r.center)):
        return False
    if r.kind in ("V", "X") and any(e in fs for e in r.base):
        return False
    return True
