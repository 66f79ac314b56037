"""Command-line entry point: ``hypercolor {extend,classify,generate,verify,dot}``.

Exit codes: 0 extendable (or success), 2 bad input or scale guard,
3 not extendable, 4 unknown (node cap hit).  ``verify`` exits 1 when a
violation is found; the conj15 target is report-only and exits 0.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Tuple

import networkx as nx

from . import fileformat, generators, harness
from .classify import in_class_c
from .coloring import to_ids
from .core import Edge, Subcube, is_extension
from .extend import (
    SubcubeColoring,
    TwoCubesInstance,
    _is_induced_matching,
    extend_full_subcube,
    extend_partial_subcube,
    extend_small,
    induced_matching_extend,
    two_cubes_decide,
    two_cubes_extend,
)
from .solver import EXTENDABLE, NOT_EXTENDABLE, UNKNOWN, Instance, enumerate_precolorings, is_extendable

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NOT_EXTENDABLE, EXIT_UNKNOWN = 0, 1, 2, 3, 4
STATUS_EXIT = {EXTENDABLE: EXIT_OK, NOT_EXTENDABLE: EXIT_NOT_EXTENDABLE, UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


def _span(edges) -> Subcube:
    """Smallest subcube containing the given edges."""
    verts = [x for e in edges for x in e.endpoints()]
    v0 = verts[0]
    mask = 0
    for v in verts:
        mask |= v ^ v0
    return Subcube.make(v0, [j for j in range(mask.bit_length()) if (mask >> j) & 1])


def _components(pc: Dict[Edge, int]) -> List[Dict[Edge, int]]:
    g = nx.Graph()
    for e in pc:
        g.add_edge(*e.endpoints(), edge=e)
    out = []
    for comp in sorted(nx.connected_components(g), key=min):
        out.append({e: pc[e] for e in pc if e.base in comp})
    return out


def _tight_cube(part: Dict[Edge, int]) -> Optional[SubcubeColoring]:
    cube = _span(part)
    if set(part) != set(cube.edges()):
        return None
    sc = SubcubeColoring(cube, dict(part))
    return sc if sc.tight else None


def constructive_route(d: int, pc: Dict[Edge, int]) -> Optional[str]:
    """Name of the first constructive method whose hypothesis ``pc`` meets."""
    if len(pc) <= d - 1:
        return "small"
    cube = _span(pc)
    if set(pc) == set(cube.edges()):
        return "full_subcube"
    if 2 * cube.dim <= d:
        return "partial_subcube"
    parts = _components(pc)
    if len(parts) == 2 and all(_tight_cube(p) is not None for p in parts):
        return "two_cubes"
    if len({e.dim for e in pc}) <= 2 and _is_induced_matching(d, list(pc)):
        return "induced_matching"
    return None


def run_constructive(d: int, pc: Dict[Edge, int], route: str, node_cap: Optional[int]) -> Tuple[Optional[Dict[Edge, int]], str]:
    if route == "small":
        return extend_small(d, pc), "at most d-1 precolored edges"
    if route == "full_subcube":
        return extend_full_subcube(d, SubcubeColoring(_span(pc), dict(pc))), "precoloring is a full subcube coloring"
    if route == "partial_subcube":
        cube = _span(pc)
        return extend_partial_subcube(d, cube, pc, node_cap=node_cap), f"precoloring inside a subcube of dimension {cube.dim} <= d/2"
    if route == "two_cubes":
        a, b = (_tight_cube(p) for p in _components(pc))
        inst = TwoCubesInstance(d, a, b)
        verdict = two_cubes_decide(inst)
        if not verdict.extendable:
            return None, verdict.reason
        return two_cubes_extend(inst, node_cap=node_cap), verdict.reason
    if route == "induced_matching":
        return induced_matching_extend(d, pc), "induced matching in at most two dimensions"
    raise ValueError(route)


def _load(path: str) -> Instance:
    try:
        return fileformat.read(path)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(obj, out: Optional[str] = None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_extend(args) -> int:
    inst = _load(args.input)
    hyper = inst.family == "hypercube" and inst.t == inst.params[0]
    report = {"input": args.input, "method": None, "status": None, "reason": None, "nodes": 0}
    coloring_ids = None
    route = constructive_route(inst.d, inst.hypercube_precoloring()) if hyper else None
    if args.method == "constructive" and route is None:
        raise UsageError("no constructive method applies to this instance")
    if args.method != "oracle" and route is not None:
        d, pc = inst.d, inst.hypercube_precoloring()
        out, reason = run_constructive(d, pc, route, args.node_cap)
        report["method"], report["reason"] = route, reason
        if out is None:
            report["status"] = NOT_EXTENDABLE
        else:
            if not is_extension(d, pc, out):
                raise RuntimeError(f"constructive method {route} returned an invalid coloring")
            report["status"] = EXTENDABLE
            coloring_ids = to_ids(d, out)
    else:
        res = is_extendable(inst, node_cap=args.node_cap)
        report.update(method="oracle", status=res.status, nodes=res.nodes)
        coloring_ids = res.witness
    if coloring_ids is not None and args.out:
        fileformat.write(inst.with_precoloring(coloring_ids), args.out)
        report["output"] = args.out
    _emit(report)
    return STATUS_EXIT[report["status"]]


def cmd_classify(args) -> int:
    inst = _load(args.input)
    if inst.family != "hypercube" or inst.t != inst.params[0]:
        raise UsageError("classify needs a hypercube instance with t = d")
    rep = in_class_c(inst.d, inst.hypercube_precoloring())
    _emit({"input": args.input, "d": inst.d, "precolored": len(inst.precoloring), **rep.as_dict()})
    return EXIT_OK


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for {args.family}")
    return [getattr(args, n) for n in names]


def build_family(args) -> Instance:
    fam = args.family
    if fam == "cor7-sharp":
        return generators.cor7_sharp(*_need(args, "d"))
    if fam == "induced-matching-sharp":
        return generators.induced_matching_sharp(*_need(args, "d"), with_blocker=not args.no_blocker)
    if fam == "chain":
        d, r = _need(args, "d", "r")
        return generators.chain(d, r, same_color=args.same_color)
    if fam == "doubling":
        return generators.doubling(*_need(args, "n"))
    if fam == "knn-power":
        n, d = _need(args, "n", "d")
        return generators.knn_power(n, d, m=args.m, seed=args.seed)
    if fam == "random":
        d, m = _need(args, "d", "m")
        return next(enumerate_precolorings(d, m, mode="random", seed=args.seed, samples=1))
    raise UsageError(f"unknown family {fam!r}")


def cmd_generate(args) -> int:
    inst = build_family(args)
    text = fileformat.to_dot(inst) if args.dot else fileformat.dumps(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dot(args) -> int:
    inst = _load(args.input)
    text = fileformat.to_dot(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run_target(args) -> harness.RunReport:
    t, cap = args.target, args.node_cap
    d = args.d if args.d is not None else 3
    if t == "thm5":
        return harness.verify_thm5(d, node_cap=cap, mode=args.mode, seed=args.seed, samples=args.samples or 10_000)
    if t == "thm12":
        return harness.verify_thm12(d, mode=args.mode, seed=args.seed, samples=args.samples or 10_000, node_cap=cap, workers=args.workers)
    if t == "claim-q3":
        return harness.verify_claim_q3()
    if t == "prop6":
        return harness.verify_prop6(d, node_cap=cap)
    if t == "cor7":
        return harness.verify_cor7(d, node_cap=cap)
    if t == "prop11":
        return harness.verify_prop11(d, node_cap=cap)
    if t == "twocubes":
        return harness.verify_twocubes(d, node_cap=cap)
    if t == "generators":
        return harness.verify_generators(node_cap=cap)
    if t == "galvin":
        return harness.verify_galvin(args.samples or 1000, seed=args.seed)
    if t == "conj15":
        n = args.n if args.n is not None else 3
        d = args.d if args.d is not None else 2
        return harness.verify_conj15(n, d, samples=args.samples or 1000, seed=args.seed, node_cap=cap)
    raise UsageError(f"unknown target {t!r}")


def cmd_verify(args, argv: List[str]) -> int:
    rep = run_target(args)
    rep.command = ["hypercolor"] + list(argv)
    _emit(rep.as_dict(), args.out)
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypercolor", description="Edge precoloring extension for hypercubes.")
    sub = p.add_subparsers(dest="command", required=True)

    def node_cap(sp):
        sp.add_argument("--node-cap", type=int, default=None, help="search node budget (default: $HYPERCOLOR_NODE_CAP or 2000000)")

    sp = sub.add_parser("extend", help="extend a precoloring")
    sp.add_argument("input")
    sp.add_argument("--method", choices=("auto", "constructive", "oracle"), default="auto")
    sp.add_argument("--out", help="write the total coloring here as an instance file")
    node_cap(sp)

    sp = sub.add_parser("classify", help="test a hypercube precoloring for the obstruction conditions C1-C4")
    sp.add_argument("input")

    sp = sub.add_parser("generate", help="write an instance of a named family")
    sp.add_argument("family", choices=("cor7-sharp", "induced-matching-sharp", "chain", "doubling", "knn-power", "random"))
    sp.add_argument("--d", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--same-color", action="store_true", help="chain: color bridge 0 and an inner edge with 1")
    sp.add_argument("--no-blocker", action="store_true", help="induced-matching-sharp: omit the color-2 edge")
    sp.add_argument("--dot", action="store_true", help="emit Graphviz text instead of an instance file")
    sp.add_argument("--out")

    sp = sub.add_parser("verify", help="run a verification target and print a JSON report")
    sp.add_argument("target", choices=harness.TARGETS)
    sp.add_argument("--d", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--workers", type=int, default=1, help="worker processes (thm12 only)")
    sp.add_argument("--out", help="write the report here instead of stdout")
    node_cap(sp)

    sp = sub.add_parser("dot", help="export an instance as Graphviz text")
    sp.add_argument("input")
    sp.add_argument("--out")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "extend":
            return cmd_extend(args)
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "generate":
            return cmd_generate(args)
        if args.command == "verify":
            return cmd_verify(args, argv)
        return cmd_dot(args)
    except (UsageError, ValueError) as exc:
        print(f"hypercolor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
