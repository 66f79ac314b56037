"""Exact extendability oracle for edge precolorings.

Complete backtracking over the uncolored edges.  Per-vertex bitmasks of used
colors give each edge's remaining domain; the search branches on the edge with
the fewest remaining colors, and at every vertex whose missing colors must all
be placed (|missing| equals the number of uncolored edges there) it applies a
Hall-type check and forces colors that have a single possible edge.  Colors
absent from the precoloring that are still unused anywhere are
interchangeable, so only the least of them is tried.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .coloring import BipartiteGraph, hypercube_graph, is_proper
from .core import Edge, all_edges, canonical_key, check_dim, edge_from_index, edge_index

NODE_CAP_ENV = "HYPERCOLOR_NODE_CAP"
DEFAULT_NODE_CAP = 2_000_000

EXTENDABLE = "extendable"
NOT_EXTENDABLE = "not_extendable"
UNKNOWN = "unknown"


def default_node_cap() -> int:
    raw = os.environ.get(NODE_CAP_ENV)
    if raw:
        return int(raw)
    return DEFAULT_NODE_CAP


@dataclass(frozen=True, eq=False)
class Instance:
    """A graph, a precoloring of some of its edge ids, and a color budget ``t``.

    ``family``/``params`` describe how the graph was built (``("hypercube",
    (d,))``, ``("knn_power", (n, d))`` or ``("bipartite", ())``) so the
    instance can be written back canonically.
    """

    graph: BipartiteGraph
    precoloring: Dict[int, int]
    t: int
    family: str = "bipartite"
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        m = len(self.graph.edges)
        for i, c in self.precoloring.items():
            if not 0 <= i < m:
                raise ValueError(f"precolored edge id {i} not in graph")
            if not 1 <= c <= self.t:
                raise ValueError(f"edge {i} has color {c} outside 1..{self.t}")
        if not is_proper(self.graph, self.precoloring):
            raise ValueError("precoloring is not proper")

    @property
    def d(self) -> int:
        if self.family != "hypercube":
            raise AttributeError("not a hypercube instance")
        return self.params[0]

    def hypercube_precoloring(self) -> Dict[Edge, int]:
        d = self.d
        return {edge_from_index(d, i): c for i, c in self.precoloring.items()}

    def with_precoloring(self, pc: Mapping[int, int]) -> "Instance":
        return Instance(self.graph, dict(pc), self.t, self.family, self.params)

    def key(self):
        return (self.family, self.params, self.t, tuple(sorted(self.precoloring.items())))

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.key() == other.key() and self.graph == other.graph

    def __hash__(self):
        return hash(self.key())


def hypercube_instance(d: int, pc: Mapping[Edge, int], t: Optional[int] = None) -> Instance:
    check_dim(d)
    return Instance(
        hypercube_graph(d),
        {edge_index(d, e): c for e, c in pc.items()},
        d if t is None else t,
        "hypercube",
        (d,),
    )


@dataclass
class ExtendResult:
    status: str
    witness: Optional[Dict[int, int]] = None
    nodes: int = 0

    @property
    def extendable(self) -> bool:
        return self.status == EXTENDABLE


class BudgetExhausted(Exception):
    def __init__(self, nodes: int):
        super().__init__(f"node cap exhausted after {nodes} nodes")
        self.nodes = nodes


class _Search:
    def __init__(self, inst: Instance, node_cap: int, seed: Optional[int]):
        g = inst.graph
        index = {v: k for k, v in enumerate(g.vertices)}
        self.t = inst.t
        self.full = (1 << inst.t) - 1
        m = len(g.edges)
        self.eu = [index[x] for x, _ in g.edges]
        self.ev = [index[y] for _, y in g.edges]
        n = len(index)
        self.inc: List[List[int]] = [[] for _ in range(n)]
        for i in range(m):
            self.inc[self.eu[i]].append(i)
            self.inc[self.ev[i]].append(i)
        self.used = [0] * n
        self.unc = [len(ids) for ids in self.inc]
        self.color = [0] * m
        self.count = [0] * (inst.t + 1)
        pc_mask = 0
        for i, c in inst.precoloring.items():
            self._assign(i, c)
            pc_mask |= 1 << (c - 1)
        self.interchangeable = self.full & ~pc_mask
        order = list(range(m))
        if seed is not None:
            random.Random(seed).shuffle(order)
        self.order = [i for i in order if not self.color[i]]
        self.nodes = 0
        self.node_cap = node_cap

    def _assign(self, i: int, c: int) -> None:
        bit = 1 << (c - 1)
        u, v = self.eu[i], self.ev[i]
        self.color[i] = c
        self.used[u] |= bit
        self.used[v] |= bit
        self.unc[u] -= 1
        self.unc[v] -= 1
        self.count[c] += 1

    def _unassign(self, i: int) -> None:
        c = self.color[i]
        bit = 1 << (c - 1)
        u, v = self.eu[i], self.ev[i]
        self.color[i] = 0
        self.used[u] &= ~bit
        self.used[v] &= ~bit
        self.unc[u] += 1
        self.unc[v] += 1
        self.count[c] -= 1

    def _unused_free(self) -> int:
        mask = 0
        rest = self.interchangeable
        while rest:
            low = rest & -rest
            if not self.count[low.bit_length()]:
                mask |= low
            rest ^= low
        return mask

    def _choose(self):
        """Return None when all edges are colored, False on contradiction, or
        ``(edge, domain)`` with domain the colors to try."""
        color, used, eu, ev, full = self.color, self.used, self.eu, self.ev, self.full
        best = -1
        best_dom = 0
        best_size = 99
        for i in self.order:
            if color[i]:
                continue
            dom = full & ~(used[eu[i]] | used[ev[i]])
            if not dom:
                return False
            size = bin(dom).count("1")
            if size < best_size:
                best, best_dom, best_size = i, dom, size
                if size == 1:
                    return best, best_dom
        if best < 0:
            return None
        # vertices that must receive every missing color
        for v, ids in enumerate(self.inc):
            k = self.unc[v]
            if k < 2:
                continue
            missing = full & ~used[v]
            if bin(missing).count("1") != k:
                continue
            once = twice = 0
            for i in ids:
                if color[i]:
                    continue
                dom = full & ~(used[eu[i]] | used[ev[i]])
                twice |= once & dom
                once |= dom
            if missing & ~once:
                return False
            single = missing & ~twice
            if single:
                low = single & -single
                forced = [i for i in ids if not color[i] and (full & ~(used[eu[i]] | used[ev[i]])) & low]
                return forced[0], low
        return best, best_dom

    def _branches(self, dom: int):
        """Yield (color, weight); the least unused interchangeable color stands
        for all of them."""
        free = self._unused_free()
        rep = free & -free
        rest = dom & ~free
        while rest:
            low = rest & -rest
            yield low.bit_length(), 1
            rest ^= low
        if dom & rep:
            yield rep.bit_length(), bin(free & dom).count("1")

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExhausted(self.nodes)

    def find(self) -> bool:
        self._tick()
        pick = self._choose()
        if pick is None:
            return True
        if pick is False:
            return False
        i, dom = pick
        for c, _ in self._branches(dom):
            self._assign(i, c)
            if self.find():
                return True
            self._unassign(i)
        return False

    def count_all(self) -> int:
        self._tick()
        pick = self._choose()
        if pick is None:
            return 1
        if pick is False:
            return 0
        i, dom = pick
        total = 0
        for c, w in self._branches(dom):
            self._assign(i, c)
            total += w * self.count_all()
            self._unassign(i)
        return total

    def witness(self) -> Dict[int, int]:
        return {i: c for i, c in enumerate(self.color)}


def is_extendable(inst: Instance, node_cap: Optional[int] = None, seed: Optional[int] = None) -> ExtendResult:
    """Decide whether ``inst.precoloring`` extends to a proper ``inst.t``-coloring.

    ``seed`` shuffles the tie-break order among edges; ``None`` keeps edge-id
    order.  Exceeding ``node_cap`` gives status ``"unknown"``.
    """
    cap = default_node_cap() if node_cap is None else node_cap
    if inst.graph.max_degree > inst.t:
        return ExtendResult(NOT_EXTENDABLE, None, 0)
    s = _Search(inst, cap, seed)
    try:
        ok = s.find()
    except BudgetExhausted as exc:
        return ExtendResult(UNKNOWN, None, exc.nodes)
    if ok:
        return ExtendResult(EXTENDABLE, s.witness(), s.nodes)
    return ExtendResult(NOT_EXTENDABLE, None, s.nodes)


def count_extensions(inst: Instance, node_cap: Optional[int] = None) -> int:
    """Number of total proper ``inst.t``-colorings agreeing with the precoloring.

    Raises :class:`BudgetExhausted` past ``node_cap``.
    """
    cap = default_node_cap() if node_cap is None else node_cap
    if inst.graph.max_degree > inst.t:
        return 0
    return _Search(inst, cap, None).count_all()


EXHAUSTIVE_MAX_DIM = 4


def _is_proper_edges(d: int, edges: Sequence[Edge], colors: Sequence[int]) -> bool:
    seen = set()
    for e, c in zip(edges, colors):
        for x in e.endpoints():
            if (x, c) in seen:
                return False
            seen.add((x, c))
    return True


def _canonical_levels(d: int, m: int, colors: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Canonical keys of all proper m-edge precolorings, built one edge at a time."""
    edges = all_edges(d)
    level = {canonical_key(d, {})}
    for _ in range(m):
        nxt = set()
        for edge_ids, cols in level:
            pc = {edges[i]: c for i, c in zip(edge_ids, cols)}
            blocked: Dict[int, set] = {}
            for e, c in pc.items():
                for x in e.endpoints():
                    blocked.setdefault(x, set()).add(c)
            # colors are interchangeable, so one new color suffices
            palette = range(1, min(colors, len(set(cols)) + 1) + 1)
            for j, e in enumerate(edges):
                if e in pc:
                    continue
                u, v = e.endpoints()
                for c in palette:
                    if c in blocked.get(u, ()) or c in blocked.get(v, ()):
                        continue
                    pc[e] = c
                    nxt.add(canonical_key(d, pc))
                    del pc[e]
        level = nxt
    return sorted(level)


def enumerate_precolorings(
    d: int,
    m: int,
    colors: Optional[int] = None,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 0,
    canonical: bool = False,
) -> Iterator[Instance]:
    """Proper precolorings of exactly ``m`` edges of Q_d with colors ``1..colors``.

    ``mode="exhaustive"`` (d <= 4, m <= d) walks edge subsets in index order
    and color tuples lexicographically; with ``canonical=True`` it instead
    yields one representative per symmetry class, sorted by canonical key.
    ``mode="random"`` yields ``samples`` instances, the i-th drawn by
    rejection from a generator seeded with ``(seed, i)``.  Budget is ``d``.
    """
    check_dim(d)
    colors = d if colors is None else colors
    edges = all_edges(d)
    if mode == "exhaustive":
        if d > EXHAUSTIVE_MAX_DIM or m > d:
            raise ValueError(f"exhaustive enumeration needs d <= {EXHAUSTIVE_MAX_DIM} and m <= d (got d={d}, m={m})")
        if canonical:
            for edge_ids, cols in _canonical_levels(d, m, colors):
                yield hypercube_instance(d, {edges[i]: c for i, c in zip(edge_ids, cols)}, d)
            return
        for subset in itertools.combinations(edges, m):
            for cols in itertools.product(range(1, colors + 1), repeat=m):
                if _is_proper_edges(d, subset, cols):
                    yield hypercube_instance(d, dict(zip(subset, cols)), d)
    elif mode == "random":
        if m > len(edges):
            raise ValueError("more edges requested than Q_d has")
        for k in range(samples):
            rng = random.Random(f"{seed}:{k}")
            while True:
                subset = rng.sample(edges, m)
                cols = [rng.randint(1, colors) for _ in range(m)]
                if _is_proper_edges(d, subset, cols):
                    break
            yield hypercube_instance(d, dict(zip(subset, cols)), d)
    else:
        raise ValueError(f"unknown mode {mode!r}")
