"""Command-line front end.

Exit codes: 0 success, 1 a property or precondition fails (or a certificate is
rejected), 2 unreadable input, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Callable

from . import certificates as certs
from .catalog import CATALOG, format_edge_list, named, parse_edge_list
from .graph import (BudgetExhausted, Graph, GraphError, PreconditionError, is_almost_four_connected,
                    is_internally_four_connected, is_three_connected)

OK, FAILS, BAD_INPUT, EXHAUSTED = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise _Exit(BAD_INPUT, f"cannot read {path}: {exc.strerror}") from None


def _graph(path: str) -> Graph:
    """An edge-list file, or ``catalog:NAME`` for a built-in graph."""
    if path.startswith("catalog:"):
        try:
            return named(path[len("catalog:"):])
        except KeyError as exc:
            raise _Exit(BAD_INPUT, str(exc.args[0])) from None
        except GraphError as exc:
            raise _Exit(BAD_INPUT, str(exc)) from None
    try:
        g = parse_edge_list(_read(path))
    except GraphError as exc:
        raise _Exit(BAD_INPUT, f"{path}: {exc}") from None
    if not g.vertices:
        raise _Exit(BAD_INPUT, f"{path}: empty graph")
    return g


def _embedding(path: str, source: Graph, host: Graph):
    from .subdivision import HomeomorphicEmbedding
    try:
        eta = HomeomorphicEmbedding.from_text(_read(path), source, host)
    except GraphError as exc:
        raise _Exit(BAD_INPUT, f"{path}: {exc}") from None
    probs = eta.violations()
    if probs:
        raise _Exit(BAD_INPUT, f"{path}: {probs[0]}")
    return eta


def _search(g: Graph, h: Graph, budget: int):
    from .subdivision import find_subdivision
    eta = find_subdivision(g, h, budget)
    if eta is None:
        raise _Exit(FAILS, "the host contains no subdivision of the source graph")
    return eta


def _emit(args, cert: certs.Certificate) -> None:
    print(cert.to_json() if args.format == "json" else cert.to_text(), end="" if args.format == "text" else "\n")


# --- commands ------------------------------------------------------------------------

def cmd_check(args) -> int:
    from .planarity import is_planar
    g = _graph(args.graph)
    props = {
        "planar": is_planar(g),
        "3-connected": is_three_connected(g),
        "almost-4-connected": is_almost_four_connected(g),
        "internally-4-connected": is_internally_four_connected(g),
    }
    for k, v in props.items():
        print(f"{k}: {'yes' if v else 'no'}")
    return OK if props["3-connected"] and props["internally-4-connected"] else FAILS


def cmd_faces(args) -> int:
    from .planarity import is_subdivided_planar_3c, peripheral_cycles
    g = _graph(args.graph)
    if not is_subdivided_planar_3c(g):
        print("graph is not a subdivision of a 3-connected planar graph", file=sys.stderr)
        return FAILS
    for c in peripheral_cycles(g):
        print(" ".join(map(str, c)))
    return OK


def cmd_embed(args) -> int:
    g, h = _graph(args.source), _graph(args.host)
    eta = _search(g, h, args.budget)
    if args.format == "json":
        _emit(args, certs.subdivision_certificate(g.name or "", eta))
    else:
        print(eta.to_text(), end="")
    return OK


def _outcome(args):
    from .engine import run_main
    from .planarity import is_subdivided_planar_3c
    g, h = _graph(args.source), _graph(args.host)
    if not args.unsafe and not is_subdivided_planar_3c(g):
        raise _Exit(FAILS, "source graph is not 3-connected and planar")
    eta = _embedding(args.embedding, g, h) if args.embedding else _search(g, h, args.budget)
    return run_main(eta)


def cmd_extend(args) -> int:
    _emit(args, certs.outcome_certificate(_outcome(args)))
    return OK


def cmd_minorize(args) -> int:
    from .engine import outcome_to_minor
    if args.certificate:
        out = _outcome_from_certificate(args.certificate)
    else:
        if not (args.source and args.host):
            raise _Exit(BAD_INPUT, "give a certificate or both graph files")
        out = _outcome(args)
    g2, model, info = outcome_to_minor(out)
    _emit(args, certs.extension_minor_certificate(g2, model, info, out.final_eta.source))
    return OK


def _outcome_from_certificate(path: str):
    from .engine import FREE_CROSS, JUMP, ExtensionOutcome
    from .patterns import SCross, SJump
    from .subdivision import HomeomorphicEmbedding
    cert = _load_cert(path)
    if cert.kind != certs.OUTCOME or cert.fields.get("tag") not in (JUMP, FREE_CROSS):
        raise _Exit(BAD_INPUT, "minorize needs a Jump or FreeCross certificate")
    verdict = certs.verify(cert)
    if not verdict:
        raise _Exit(FAILS, "certificate does not verify: " + verdict.witness[0])
    g, h = cert.graph("source"), cert.graph("host")
    vm, em = certs._parse_embedding(cert.need("embedding"))
    eta = HomeomorphicEmbedding(g, h, vm, em)
    payload = cert.need("payload")
    paths = [tuple(p) for p in certs._keyed(payload, "path")]
    if cert.fields["tag"] == JUMP:
        return ExtensionOutcome(JUMP, eta, (), SJump(paths[0]))
    disk = tuple(certs._keyed(payload, "disk")[0])
    feet = tuple(certs._keyed(payload, "feet")[0])
    cross = SCross((paths[0], paths[1]), disk, feet, cert.fields.get("freedom", "None"))
    return ExtensionOutcome(FREE_CROSS, eta, (), cross)


def _load_cert(path: str) -> certs.Certificate:
    try:
        return certs.Certificate.load(_read(path))
    except certs.CertificateError as exc:
        raise _Exit(BAD_INPUT, f"{path}: {exc}") from None


def cmd_verify(args) -> int:
    cert = _load_cert(args.certificate)
    try:
        verdict = certs.verify(cert)
    except (certs.CertificateError, GraphError) as exc:
        raise _Exit(BAD_INPUT, f"malformed certificate: {exc}") from None
    if verdict:
        print("pass")
        return OK
    print("fail")
    for w in verdict.witness:
        print(f"  {w}")
    return FAILS


def cmd_cube_demo(args) -> int:
    from .engine import cube_application
    h = _graph(args.host)
    name, eta, note = cube_application(h, args.budget)
    print(f"# {name}: {note}", file=sys.stderr)
    _emit(args, certs.subdivision_certificate(name, eta))
    return OK


def cmd_apex(args) -> int:
    from .apex import Mold, run_apexcor
    g, h = _graph(args.source), _graph(args.host)
    try:
        mold = Mold.from_text(_read(args.mold))
    except GraphError as exc:
        raise _Exit(BAD_INPUT, f"{args.mold}: {exc}") from None
    missing = sorted(mold.apex_set - h.vertices)
    if missing:
        raise _Exit(BAD_INPUT, f"apex vertex {missing[0]} is not a host vertex")
    rest = h.remove_vertices(mold.apex_set)
    eta = _embedding(args.embedding, g, rest) if args.embedding else _search(g, rest, args.budget)
    res = run_apexcor(eta, h, mold, args.budget)
    _emit(args, certs.apex_certificate(res, g, h, mold))
    return OK


def cmd_pinwheel(args) -> int:
    from .apex import build_moebius_pinwheel, build_pinwheel
    from .oracle import has_minor
    build = build_moebius_pinwheel if args.moebius else build_pinwheel
    try:
        p = build(args.t, args.k)
    except GraphError as exc:
        raise _Exit(BAD_INPUT, str(exc)) from None
    if not args.contains:
        print(format_edge_list(p), end="")
        return OK
    pattern = _graph(args.contains)
    model = has_minor(pattern, p, args.budget)
    if model is None:
        print("no minor", file=sys.stderr)
        return FAILS
    _emit(args, certs.minor_certificate(pattern, p, model.branch_sets, name=args.contains))
    return OK


def cmd_catalog(args) -> int:
    if not args.name:
        for name in sorted(CATALOG):
            print(name)
        print("ladderN\nmobiusN\nrandomN (random 3-connected planar, uses --seed)")
        return OK
    if args.name.startswith("random") and args.name[6:].isdigit():
        from .instances import random_planar_3c
        n = int(args.name[6:])
        if n < 4:
            raise _Exit(BAD_INPUT, "random graphs need at least four vertices")
        g = random_planar_3c(n, random.Random(args.seed))
    else:
        g = _graph("catalog:" + args.name)
    print(format_edge_list(g), end="")
    return OK


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=10**6, help="search node budget")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="planext", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=fn)
        return p

    p = add("check", cmd_check, "planarity and connectivity report")
    p.add_argument("graph")
    p = add("faces", cmd_faces, "peripheral cycles of a 3-connected planar graph")
    p.add_argument("graph")
    p = add("embed", cmd_embed, "find a subdivision of SOURCE in HOST")
    p.add_argument("source")
    p.add_argument("host")
    for name, fn, text in (("extend", cmd_extend, "jump or free cross certificate"),
                           ("minorize", cmd_minorize, "minor of source plus one or two edges")):
        p = add(name, fn, text)
        if name == "minorize":
            p.add_argument("--certificate", help="outcome certificate written by extend")
            p.add_argument("source", nargs="?")
            p.add_argument("host", nargs="?")
        else:
            p.add_argument("source")
            p.add_argument("host")
        p.add_argument("--embedding", help="embedding file of SOURCE in HOST")
        p.add_argument("--unsafe", action="store_true", help="skip the source graph check")
    p = add("verify", cmd_verify, "re-check a certificate")
    p.add_argument("certificate")
    p = add("cube-demo", cmd_cube_demo, "V8 or W subdivision in a non-planar host")
    p.add_argument("host")
    p = add("apex", cmd_apex, "certified minor from a mold")
    p.add_argument("source")
    p.add_argument("host")
    p.add_argument("mold")
    p.add_argument("--embedding", help="embedding of SOURCE in HOST minus the apex set")
    p = add("pinwheel", cmd_pinwheel, "build a pinwheel, optionally search a minor in it")
    p.add_argument("t", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--moebius", action="store_true")
    p.add_argument("--contains", help="graph file or catalog:NAME to find as a minor")
    p = add("catalog", cmd_catalog, "list or print built-in graphs")
    p.add_argument("name", nargs="?")
    return parser


def main(argv: list[str] | None = None) -> int:
    from .engine import EngineError
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except _Exit as exc:
        if str(exc):
            print(str(exc), file=sys.stderr)
        return exc.code
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    except PreconditionError as exc:
        print(f"precondition fails: {exc}", file=sys.stderr)
        return FAILS
    except EngineError as exc:
        print(f"internal case reached: {exc}", file=sys.stderr)
        return FAILS


if __name__ == "__main__":
    sys.exit(main())
