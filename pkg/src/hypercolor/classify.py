"""Membership in the class of obstructed d-edge precolorings of Q_d.

The four conditions, for a precoloring ``pc`` of Q_d with colors 1..d:

C1  an uncolored edge uv whose end color sets are disjoint and together
    hold all d colors;
C2  a vertex u with color set S and a color c outside S such that u has an
    uncolored edge and every uncolored edge uv at u has v incident with an
    edge colored c (so c can never reach u);
C3  a vertex u with no colored edge and a color c such that every edge at u
    is adjacent to an edge colored c;
C4  d = 3 and exactly three precolored edges, of three distinct colors, in a
    single dimensional matching.

Each condition alone makes ``pc`` non-extendable.  With exactly d
precolored edges the converse holds, which :func:`verify_theorem12` checks
against the exact solver.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .core import Edge, all_edges, check_dim, incident_edges, is_proper_partial

CONDITIONS = ("C1", "C2", "C3", "C4")


@dataclass
class ClassCReport:
    member: bool
    conditions: Tuple[str, ...]
    witness: Dict[str, tuple]
    exactly_d_edges: bool

    def as_dict(self) -> dict:
        return {
            "member": self.member,
            "conditions": list(self.conditions),
            "witness": {k: list(v) for k, v in self.witness.items()},
            "exactly_d_edges": self.exactly_d_edges,
        }


def _color_sets(d: int, pc: Mapping[Edge, int]) -> List[set]:
    at = [set() for _ in range(1 << d)]
    for e, c in pc.items():
        u, v = e.endpoints()
        at[u].add(c)
        at[v].add(c)
    return at


def check_c1(d: int, pc: Mapping[Edge, int], at=None) -> Optional[tuple]:
    at = _color_sets(d, pc) if at is None else at
    for e in all_edges(d):
        if e in pc:
            continue
        u, v = e.endpoints()
        if not at[u] & at[v] and len(at[u]) + len(at[v]) == d:
            return (e.base, e.dim)
    return None


def check_c2(d: int, pc: Mapping[Edge, int], at=None) -> Optional[tuple]:
    at = _color_sets(d, pc) if at is None else at
    for u in range(1 << d):
        open_ends = [e.base ^ e.top ^ u for e in incident_edges(d, u) if e not in pc]
        if not open_ends:
            continue
        for c in range(1, d + 1):
            if c in at[u]:
                continue
            if all(c in at[v] for v in open_ends):
                return (u, c)
    return None


def check_c3(d: int, pc: Mapping[Edge, int], at=None) -> Optional[tuple]:
    at = _color_sets(d, pc) if at is None else at
    for u in range(1 << d):
        if at[u]:
            continue
        ends = [u ^ (1 << j) for j in range(d)]
        for c in range(1, d + 1):
            if all(c in at[v] for v in ends):
                return (u, c)
    return None


def check_c4(d: int, pc: Mapping[Edge, int]) -> Optional[tuple]:
    if d != 3 or len(pc) != 3:
        return None
    dims = {e.dim for e in pc}
    if len(dims) == 1 and len(set(pc.values())) == 3:
        return (dims.pop(),)
    return None


def in_class_c(d: int, pc: Mapping[Edge, int]) -> ClassCReport:
    check_dim(d)
    for e, c in pc.items():
        if not 1 <= c <= d:
            raise ValueError(f"color {c} of {e} outside 1..{d}")
    if not is_proper_partial(pc):
        raise ValueError("precoloring is not proper")
    at = _color_sets(d, pc)
    found = {
        "C1": check_c1(d, pc, at),
        "C2": check_c2(d, pc, at),
        "C3": check_c3(d, pc, at),
        "C4": check_c4(d, pc),
    }
    witness = {k: v for k, v in found.items() if v is not None}
    conds = tuple(k for k in CONDITIONS if k in witness)
    return ClassCReport(bool(conds), conds, witness, len(pc) == d)


@dataclass
class ExactSizeReport:
    d: int
    mode: str
    instances: int = 0
    extendable: int = 0
    not_extendable: int = 0
    unknown: int = 0
    members: int = 0
    condition_counts: Dict[str, int] = field(default_factory=lambda: {k: 0 for k in CONDITIONS})
    violations: List[dict] = field(default_factory=list)
    unresolved: List[dict] = field(default_factory=list)
    nodes: int = 0
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def _pc_record(pc: Mapping[Edge, int]) -> List[list]:
    return [[e.base, e.dim, c] for e, c in sorted(pc.items())]


def _check_one(d: int, pc: Dict[Edge, int], node_cap: Optional[int]):
    from .solver import hypercube_instance, is_extendable

    report = in_class_c(d, pc)
    res = is_extendable(hypercube_instance(d, pc), node_cap=node_cap)
    return report, res


def verify_theorem12(
    d: int,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 10_000,
    node_cap: Optional[int] = None,
    workers: int = 1,
    canonical: Optional[bool] = None,
) -> ExactSizeReport:
    """Compare class membership with the exact solver on d-edge precolorings.

    ``mode="exhaustive"`` covers every precoloring, or one per symmetry class
    when ``canonical`` (the default for d >= 4; d <= 4 only);
    ``mode="random"`` draws ``samples`` instances.  A violation is any
    instance where membership and extendability agree (both true or both
    false).
    """
    from .solver import enumerate_precolorings

    check_dim(d)
    start = time.perf_counter()
    if mode == "exhaustive":
        canonical = d >= 4 if canonical is None else canonical
        stream = enumerate_precolorings(d, d, mode="exhaustive", canonical=canonical)
    elif mode == "random":
        stream = enumerate_precolorings(d, d, mode="random", seed=seed, samples=samples)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    pcs = [inst.hypercube_precoloring() for inst in stream]

    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_one, [d] * len(pcs), pcs, [node_cap] * len(pcs), chunksize=64))
    else:
        results = [_check_one(d, pc, node_cap) for pc in pcs]

    out = ExactSizeReport(d, mode if mode == "random" or not canonical else "canonical")
    for pc, (report, res) in zip(pcs, results):
        out.instances += 1
        out.nodes += res.nodes
        if report.member:
            out.members += 1
            for k in report.conditions:
                out.condition_counts[k] += 1
        if res.status == "unknown":
            out.unknown += 1
            out.unresolved.append({"precoloring": _pc_record(pc)})
            continue
        if res.extendable:
            out.extendable += 1
        else:
            out.not_extendable += 1
        if report.member == res.extendable:
            out.violations.append(
                {
                    "precoloring": _pc_record(pc),
                    "member": report.member,
                    "conditions": list(report.conditions),
                    "extendable": res.extendable,
                }
            )
    out.violations.sort(key=lambda r: r["precoloring"])
    out.wall_time = time.perf_counter() - start
    return out
