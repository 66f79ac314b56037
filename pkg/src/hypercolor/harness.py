"""Reproducible verification runs, one per checked statement.

Each ``verify_*`` function returns a :class:`RunReport`.  ``violations``
lists every instance where a constructive routine failed or disagreed with
the exact solver; for the (K_{n,n})^d sampler they are candidate
counterexamples and are reported, never dropped.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from . import generators
from .classify import CONDITIONS, verify_theorem12
from .coloring import BipartiteGraph, galvin_list_color, hypercube_graph, is_proper
from .core import (
    Edge,
    Subcube,
    all_edges,
    check_dim,
    induced_by_dims,
    is_extension,
    is_proper_partial,
    subcube_intersection,
)
from .extend import (
    SubcubeColoring,
    TwoCubesInstance,
    _is_induced_matching,
    extend_full_subcube,
    extend_partial_subcube,
    extend_small,
    induced_matching_extend,
    q3_avoiding_matching,
    two_cubes_decide,
    two_cubes_extend,
)
from .solver import (
    EXTENDABLE,
    NOT_EXTENDABLE,
    UNKNOWN,
    Instance,
    enumerate_precolorings,
    hypercube_instance,
    is_extendable,
)

EXHAUSTIVE_DIM_CAP = 4

TARGETS = ("thm5", "thm12", "claim-q3", "prop6", "cor7", "prop11", "twocubes", "generators", "galvin", "conj15")


@dataclass
class RunReport:
    target: str
    params: Dict[str, object]
    seed: Optional[int] = None
    instances: int = 0
    counts: Dict[str, int] = field(default_factory=lambda: {EXTENDABLE: 0, NOT_EXTENDABLE: 0, UNKNOWN: 0})
    conditions: Optional[Dict[str, int]] = None
    violations: List[dict] = field(default_factory=list)
    nodes: int = 0
    report_only: bool = False
    command: Optional[List[str]] = None
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return self.report_only or not self.violations

    def tally(self, status: str, nodes: int = 0) -> None:
        self.counts[status] += 1
        self.nodes += nodes

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "target": self.target,
            "params": self.params,
            "seed": self.seed,
            "instances": self.instances,
            "counts": dict(self.counts),
            "conditions": self.conditions,
            "violations": self.violations,
            "ok": self.ok,
            "report_only": self.report_only,
            "nodes": self.nodes,
            "wall_time": round(self.wall_time, 3),
        }


def pc_record(pc: Mapping[Edge, int]) -> List[list]:
    return [[e.base, e.dim, c] for e, c in sorted(pc.items())]


def edge_colorings(
    edges: Sequence[Edge],
    palette: Sequence[int],
    canonical: bool = False,
    total: bool = True,
    fixed: Optional[Mapping[Edge, int]] = None,
    blocked: Optional[Mapping[int, Iterable[int]]] = None,
) -> Iterator[Dict[Edge, int]]:
    """Proper colorings of ``edges`` with colors from ``palette``.

    ``total=False`` also lets edges stay uncolored.  ``canonical=True`` keeps
    one coloring per renaming of the palette: colors are taken in palette
    order of first use.  Edges in ``fixed`` keep their color, and no other
    edge at vertex v may use a color in ``blocked[v]``.
    """
    fixed = fixed or {}
    at: Dict[int, set] = {v: set(cs) for v, cs in (blocked or {}).items()}
    cur: Dict[Edge, int] = {}
    for e, c in fixed.items():
        if c not in palette:
            return
        for x in e.endpoints():
            if c in at.get(x, ()):
                return
        for x in e.endpoints():
            at.setdefault(x, set()).add(c)
        cur[e] = c
    edges = [e for e in edges if e not in fixed]
    n_fixed = len({palette.index(c) for c in fixed.values()})

    def rec(k: int, n_used: int):
        if k == len(edges):
            yield dict(cur)
            return
        e = edges[k]
        u, v = e.endpoints()
        if not total:
            yield from rec(k + 1, n_used)
        limit = min(len(palette), n_used + 1) if canonical else len(palette)
        for idx in range(limit):
            c = palette[idx]
            if c in at.get(u, ()) or c in at.get(v, ()):
                continue
            cur[e] = c
            at.setdefault(u, set()).add(c)
            at.setdefault(v, set()).add(c)
            yield from rec(k + 1, max(n_used, idx + 1))
            at[u].discard(c)
            at[v].discard(c)
            del cur[e]

    if canonical and fixed:
        raise ValueError("canonical enumeration does not combine with fixed edges")
    yield from rec(0, n_fixed)


def all_subcubes(d: int, min_dim: int = 0, max_dim: Optional[int] = None) -> List[Subcube]:
    max_dim = d if max_dim is None else max_dim
    out = []
    for r in range(min_dim, max_dim + 1):
        for dims in itertools.combinations(range(d), r):
            out.extend(induced_by_dims(d, dims))
    return out


def _guard(d: int, cap: int = EXHAUSTIVE_DIM_CAP) -> None:
    check_dim(d)
    if d > cap:
        raise ValueError(f"exhaustive run needs d <= {cap}, got {d}")


def _oracle(d: int, pc: Mapping[Edge, int], node_cap: Optional[int]):
    return is_extendable(hypercube_instance(d, pc), node_cap=node_cap)


def _finish(report: RunReport, start: float) -> RunReport:
    report.wall_time = time.perf_counter() - start
    return report


def verify_thm5(d: int, node_cap: Optional[int] = None, mode: str = "exhaustive", seed: int = 0, samples: int = 10_000) -> RunReport:
    """Every precoloring of at most d - 1 edges is extended by ``extend_small``.

    Exhaustive mode runs all m <= d - 1 for d <= 4; random mode draws
    ``samples`` instances with m spread over 1..d-1.
    """
    if mode == "exhaustive":
        _guard(d)
    elif mode != "random":
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    rep = RunReport("thm5", {"d": d, "mode": mode}, seed if mode == "random" else None)
    if mode == "exhaustive":
        streams = [enumerate_precolorings(d, m) for m in range(d)]
    else:
        per = max(1, samples // max(1, d - 1))
        streams = [enumerate_precolorings(d, m, mode="random", seed=seed * 1000 + m, samples=per) for m in range(1, d)]
    for stream in streams:
        for inst in stream:
            pc = inst.hypercube_precoloring()
            rep.instances += 1
            try:
                out = extend_small(d, pc)
                ok = is_extension(d, pc, out)
            except Exception as exc:  # reported as a violation
                ok, out = False, repr(exc)
            if ok:
                rep.tally(EXTENDABLE)
            else:
                rep.violations.append({"precoloring": pc_record(pc), "error": str(out)[:200]})
    return _finish(rep, start)


def verify_claim_q3() -> RunReport:
    """Every independent edge set of Q_3 is avoided by some perfect matching."""
    start = time.perf_counter()
    rep = RunReport("claim-q3", {})
    edges = all_edges(3)
    for k in range(0, 5):
        for sub in itertools.combinations(edges, k):
            ends = [x for e in sub for x in e.endpoints()]
            if len(ends) != len(set(ends)):
                continue
            rep.instances += 1
            m = q3_avoiding_matching(sub)
            cover = sorted(x for e in m for x in e.endpoints())
            if cover != list(range(8)) or set(m) & set(sub):
                rep.violations.append({"edges": [list(e) for e in sub], "matching": [list(e) for e in m]})
            else:
                rep.tally(EXTENDABLE)
    return _finish(rep, start)


def verify_prop6(d: int, node_cap: Optional[int] = None, all_colorings: bool = True) -> RunReport:
    """Total colorings of every subcube position extend constructively, and the
    oracle agrees.  Colorings are taken up to renaming: tight ones always; all
    colorings with colors 1..d when ``all_colorings`` (subcube dim < d)."""
    _guard(d)
    start = time.perf_counter()
    rep = RunReport("prop6", {"d": d, "all_colorings": all_colorings})
    palette = list(range(1, d + 1))
    for cube in all_subcubes(d, 1):
        r = cube.dim
        if all_colorings and r < d:
            colorings = edge_colorings(cube.edges(), palette, canonical=True)
        else:
            colorings = edge_colorings(cube.edges(), palette[:r], canonical=True)
        for f in colorings:
            rep.instances += 1
            try:
                out = extend_full_subcube(d, SubcubeColoring(cube, f))
                ok = is_extension(d, f, out)
            except Exception as exc:
                ok = False
            res = _oracle(d, f, node_cap)
            rep.tally(res.status, res.nodes)
            if not ok or res.status != EXTENDABLE:
                rep.violations.append({"cube": [cube.base, list(cube.free)], "coloring": pc_record(f), "constructive": ok, "oracle": res.status})
    return _finish(rep, start)


def verify_cor7(d: int, node_cap: Optional[int] = None) -> RunReport:
    """Partial colorings inside every subcube of dimension <= d/2 extend
    constructively and the oracle agrees; for even d the sharpness instance
    is rejected by the oracle."""
    _guard(d)
    start = time.perf_counter()
    rep = RunReport("cor7", {"d": d})
    palette = list(range(1, d + 1))
    for cube in all_subcubes(d, 1, d // 2):
        for pc in edge_colorings(cube.edges(), palette, canonical=True, total=False):
            rep.instances += 1
            try:
                out = extend_partial_subcube(d, cube, pc, node_cap=node_cap)
                ok = is_extension(d, pc, out)
            except Exception:
                ok = False
            res = _oracle(d, pc, node_cap)
            rep.tally(res.status, res.nodes)
            if not ok or res.status != EXTENDABLE:
                rep.violations.append({"cube": [cube.base, list(cube.free)], "precoloring": pc_record(pc), "constructive": ok, "oracle": res.status})
    if d % 2 == 0:
        sharp = generators.cor7_sharp(d)
        res = is_extendable(sharp, node_cap=node_cap)
        rep.instances += 1
        rep.tally(res.status, res.nodes)
        if res.status != NOT_EXTENDABLE:
            rep.violations.append({"sharpness": pc_record(sharp.hypercube_precoloring()), "oracle": res.status})
    return _finish(rep, start)


def induced_two_dim_precolorings(d: int) -> Iterator[Dict[Edge, int]]:
    """Every coloring (colors 1..d) of every induced matching of Q_d whose
    edges use at most two dimensions."""
    edges = all_edges(d)
    by_pair: List[Tuple[Edge, ...]] = []
    stack: List[Edge] = []

    def rec(start: int):
        by_pair.append(tuple(stack))
        for k in range(start, len(edges)):
            e = edges[k]
            if len({x.dim for x in stack} | {e.dim}) > 2:
                continue
            if not _is_induced_matching(d, stack + [e]):
                continue
            stack.append(e)
            rec(k + 1)
            stack.pop()

    rec(0)
    for sub in by_pair:
        for cols in itertools.product(range(1, d + 1), repeat=len(sub)):
            yield dict(zip(sub, cols))


def verify_prop11(d: int, node_cap: Optional[int] = None) -> RunReport:
    _guard(d)
    start = time.perf_counter()
    rep = RunReport("prop11", {"d": d})
    for pc in induced_two_dim_precolorings(d):
        rep.instances += 1
        try:
            out = induced_matching_extend(d, pc)
            ok = is_extension(d, pc, out)
        except Exception:
            ok = False
        res = _oracle(d, pc, node_cap)
        rep.tally(res.status, res.nodes)
        if not ok or res.status != EXTENDABLE:
            rep.violations.append({"precoloring": pc_record(pc), "constructive": ok, "oracle": res.status})
    return _finish(rep, start)


def two_cube_instances(d: int, max_dim: Optional[int] = None) -> Iterator[TwoCubesInstance]:
    """Ordered pairs of subcubes (dimensions 1..max_dim, default d-1) with
    tight colorings, up to renaming colors.

    The first cube uses colors 1..k1, each of its tight colorings taken once
    up to permuting those colors.  The second cube's color set is any S of
    the first's colors plus the next unused colors; all its tight colorings
    that agree with the first on shared edges and keep the union proper are
    produced.
    """
    max_dim = d - 1 if max_dim is None else max_dim
    cubes = all_subcubes(d, 1, max_dim)
    canon_cache: Dict[Subcube, List[Dict[Edge, int]]] = {}
    for a in cubes:
        k1 = a.dim
        if a not in canon_cache:
            canon_cache[a] = list(edge_colorings(a.edges(), list(range(1, k1 + 1)), canonical=True))
        for b in cubes:
            k2 = b.dim
            inter = subcube_intersection(a, b)
            shared = inter.edges() if inter is not None else []
            for s in range(max(0, k2 - (d - k1)), min(k1, k2) + 1):
                for S in itertools.combinations(range(1, k1 + 1), s):
                    A2 = tuple(S) + tuple(range(k1 + 1, k1 + 1 + k2 - s))
                    for f1 in canon_cache[a]:
                        blocked: Dict[int, set] = {}
                        for e, c in f1.items():
                            for x in e.endpoints():
                                blocked.setdefault(x, set()).add(c)
                        fixed = {e: f1[e] for e in shared}
                        # a shared edge is fixed, so it must not be blocked by itself
                        for e, c in fixed.items():
                            for x in e.endpoints():
                                blocked[x].discard(c)
                        for f2 in edge_colorings(b.edges(), list(A2), fixed=fixed, blocked=blocked):
                            joint = dict(f1)
                            joint.update(f2)
                            if not is_proper_partial(joint):
                                continue
                            yield TwoCubesInstance(d, SubcubeColoring(a, f1), SubcubeColoring(b, f2))


def verify_twocubes(d: int, node_cap: Optional[int] = None, max_dim: Optional[int] = None) -> RunReport:
    """The decision rule agrees with the oracle, and extendable instances are
    extended constructively."""
    _guard(d)
    start = time.perf_counter()
    rep = RunReport("twocubes", {"d": d, "max_dim": d - 1 if max_dim is None else max_dim})
    for inst in two_cube_instances(d, max_dim):
        rep.instances += 1
        pc = inst.union()
        verdict = two_cubes_decide(inst)
        res = _oracle(d, pc, node_cap)
        rep.tally(res.status, res.nodes)
        record = {
            "cubes": [[inst.c1.cube.base, list(inst.c1.cube.free)], [inst.c2.cube.base, list(inst.c2.cube.free)]],
            "precoloring": pc_record(pc),
        }
        if res.status == UNKNOWN or verdict.extendable != (res.status == EXTENDABLE):
            rep.violations.append({**record, "decide": verdict.extendable, "oracle": res.status})
            continue
        if verdict.extendable:
            try:
                out = two_cubes_extend(inst, node_cap=node_cap)
                ok = is_extension(d, pc, out)
            except Exception as exc:
                ok = False
            if not ok:
                rep.violations.append({**record, "constructive": False})
    return _finish(rep, start)


def verify_generators(node_cap: Optional[int] = None) -> RunReport:
    """All sharpness families at desk scale are non-extendable and
    structurally as claimed."""
    import networkx as nx

    start = time.perf_counter()
    rep = RunReport("generators", {})
    cases: List[Tuple[str, Instance, Callable[[Instance], bool]]] = []
    for d in (2, 4):
        cases.append((f"cor7_sharp(d={d})", generators.cor7_sharp(d), lambda i, d=d: len(i.precoloring) == d))
    for d in (3, 4):
        cases.append((f"induced_matching_sharp(d={d})", generators.induced_matching_sharp(d), lambda i, d=d: len(i.precoloring) == 2 ** (d - 2) + 1))
    for d in (2, 3):
        for r in (2, 3):
            for same in (False, True):
                def shape(i, d=d, r=r):
                    g = i.graph
                    ok = g.is_regular() and g.max_degree == d and len(g.vertices) == 2 * d * r
                    return ok and nx.node_connectivity(nx.Graph(g.to_networkx())) >= 2
                cases.append((f"chain(d={d}, r={r}, same_color={same})", generators.chain(d, r, same), shape))
    for n in (2, 3):
        def shape(i, n=n):
            g = i.graph
            ok = g.is_regular() and g.max_degree == n and len(g.vertices) == 2 * (2 * n - 1)
            return ok and nx.node_connectivity(nx.Graph(g.to_networkx())) >= n - 1
        cases.append((f"doubling(n={n})", generators.doubling(n), shape))
    for name, inst, shape in cases:
        rep.instances += 1
        res = is_extendable(inst, node_cap=node_cap)
        rep.tally(res.status, res.nodes)
        structural = is_proper(inst.graph, inst.precoloring) and shape(inst)
        if res.status != NOT_EXTENDABLE or not structural:
            rep.violations.append({"family": name, "oracle": res.status, "structure": structural})
    return _finish(rep, start)


def verify_galvin(trials: int = 1000, seed: int = 0) -> RunReport:
    """Random lists of size >= Delta on Q_2, Q_3 and K_{3,3}; every output
    must be proper and inside the lists."""
    import random

    start = time.perf_counter()
    rep = RunReport("galvin", {"trials": trials}, seed)
    k33 = BipartiteGraph((0, 1, 2), (3, 4, 5), tuple((x, y) for x in range(3) for y in range(3, 6)))
    graphs = {"Q2": hypercube_graph(2), "Q3": hypercube_graph(3), "K33": k33}
    for name, g in graphs.items():
        delta = g.max_degree
        for k in range(trials):
            rng = random.Random(f"{seed}:{name}:{k}")
            top = rng.randint(delta, 2 * delta + 2)
            lists = {i: set(rng.sample(range(1, top + 1), rng.randint(delta, top))) for i in range(len(g.edges))}
            rep.instances += 1
            col = galvin_list_color(g, lists)
            ok = len(col) == len(g.edges) and is_proper(g, col) and all(col[i] in lists[i] for i in col)
            if ok:
                rep.tally(EXTENDABLE)
            else:
                rep.violations.append({"graph": name, "lists": {i: sorted(v) for i, v in lists.items()}})
    return _finish(rep, start)


def verify_conj15(n: int, d: int, samples: int = 1000, seed: int = 0, node_cap: Optional[int] = None) -> RunReport:
    """Random (nd-1)-edge precolorings of (K_{n,n})^d; report-only.

    A non-extendable outcome is a counterexample candidate and is listed under
    ``violations`` with its full precoloring; unknown outcomes are listed too.
    """
    start = time.perf_counter()
    rep = RunReport("conj15", {"n": n, "d": d, "samples": samples}, seed, report_only=True)
    for k in range(samples):
        inst = generators.knn_power(n, d, seed=hash_seed(seed, k))
        rep.instances += 1
        res = is_extendable(inst, node_cap=node_cap)
        rep.tally(res.status, res.nodes)
        if res.status != EXTENDABLE:
            rep.violations.append({"sample": k, "precoloring": sorted(inst.precoloring.items()), "oracle": res.status, "counterexample": res.status == NOT_EXTENDABLE})
    return _finish(rep, start)


def hash_seed(seed: int, k: int) -> int:
    """Counter-mode per-sample seed."""
    import hashlib

    return int.from_bytes(hashlib.sha256(f"{seed}:{k}".encode()).digest()[:8], "big")


def verify_thm12(d: int, mode: str = "exhaustive", seed: int = 0, samples: int = 10_000, node_cap: Optional[int] = None, workers: int = 1) -> RunReport:
    t12 = verify_theorem12(d, mode=mode, seed=seed, samples=samples, node_cap=node_cap, workers=workers)
    rep = RunReport("thm12", {"d": d, "mode": mode, "samples": samples if mode == "random" else None}, seed if mode == "random" else None)
    rep.instances = t12.instances
    rep.counts = {EXTENDABLE: t12.extendable, NOT_EXTENDABLE: t12.not_extendable, UNKNOWN: t12.unknown}
    rep.conditions = dict(t12.condition_counts)
    rep.violations = list(t12.violations) + [{"unresolved": u["precoloring"]} for u in t12.unresolved]
    rep.nodes = t12.nodes
    rep.wall_time = t12.wall_time
    return rep
