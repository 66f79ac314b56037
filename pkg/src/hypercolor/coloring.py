"""Proper edge colorings of bipartite multigraphs.

Colorings are plain dicts from edge id (index into ``BipartiteGraph.edges``)
to a positive color.  Besides the propriety test this module provides
König's Delta-coloring, a structured completion routine, and a list edge
coloring that realizes Galvin's theorem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from .core import Edge, all_edges, check_dim, edge_index, popcount


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite multigraph; edge ``i`` is ``edges[i] == (x, y)`` with x in left."""

    left: Tuple[Hashable, ...]
    right: Tuple[Hashable, ...]
    edges: Tuple[Tuple[Hashable, Hashable], ...]
    labels: Optional[Tuple[Hashable, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        lset, rset = set(self.left), set(self.right)
        if lset & rset:
            raise ValueError("parts overlap")
        for i, (x, y) in enumerate(self.edges):
            if x not in lset or y not in rset:
                raise ValueError(f"edge {i} = {(x, y)!r} does not join left to right")

    @cached_property
    def vertices(self) -> Tuple[Hashable, ...]:
        return self.left + self.right

    @cached_property
    def incidence(self) -> Dict[Hashable, Tuple[int, ...]]:
        inc: Dict[Hashable, List[int]] = {v: [] for v in self.vertices}
        for i, (x, y) in enumerate(self.edges):
            inc[x].append(i)
            inc[y].append(i)
        return {v: tuple(ids) for v, ids in inc.items()}

    def degree(self, v: Hashable) -> int:
        return len(self.incidence[v])

    @cached_property
    def max_degree(self) -> int:
        return max((len(ids) for ids in self.incidence.values()), default=0)

    def is_regular(self) -> bool:
        return len({len(ids) for ids in self.incidence.values()}) <= 1

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.left, bipartite=0)
        g.add_nodes_from(self.right, bipartite=1)
        for i, (x, y) in enumerate(self.edges):
            g.add_edge(x, y, key=i)
        return g


def hypercube_graph(d: int) -> BipartiteGraph:
    """Q_d with edge ids in ``all_edges(d)`` order; even-weight vertices on the left."""
    check_dim(d)
    edges = all_edges(d)
    even = tuple(v for v in range(1 << d) if popcount(v) % 2 == 0)
    odd = tuple(v for v in range(1 << d) if popcount(v) % 2 == 1)
    pairs = []
    for e in edges:
        u, v = e.endpoints()
        pairs.append((u, v) if popcount(u) % 2 == 0 else (v, u))
    return BipartiteGraph(even, odd, tuple(pairs), labels=tuple(edges))


def to_ids(d: int, coloring: Mapping[Edge, int]) -> Dict[int, int]:
    return {edge_index(d, e): c for e, c in coloring.items()}


def from_ids(d: int, coloring: Mapping[int, int]) -> Dict[Edge, int]:
    edges = all_edges(d)
    return {edges[i]: c for i, c in coloring.items()}


def is_proper(g: BipartiteGraph, coloring: Mapping[int, int]) -> bool:
    """True iff no vertex sees a repeated color.  Unknown edge ids raise KeyError."""
    m = len(g.edges)
    seen: Dict[Hashable, Set[int]] = {}
    for i, c in coloring.items():
        if not 0 <= i < m:
            raise KeyError(f"unknown edge id {i}")
        for v in g.edges[i]:
            s = seen.setdefault(v, set())
            if c in s:
                return False
            s.add(c)
    return True


def _regular_completion(g: BipartiteGraph, delta: int):
    """Pad ``g`` to a delta-regular bipartite multigraph; returns (left, right, edges)."""
    left = list(g.left)
    right = list(g.right)
    n = max(len(left), len(right))
    left += [("pad", "L", i) for i in range(n - len(left))]
    right += [("pad", "R", i) for i in range(n - len(right))]
    edges = list(g.edges)
    deg = {v: 0 for v in left + right}
    for x, y in edges:
        deg[x] += 1
        deg[y] += 1
    j = 0
    for x in left:
        while deg[x] < delta:
            while deg[right[j]] >= delta:
                j += 1
            y = right[j]
            edges.append((x, y))
            deg[x] += 1
            deg[y] += 1
    return left, right, edges


def konig_color(g: BipartiteGraph) -> Dict[int, int]:
    """Total proper coloring of ``g`` with colors ``1..Delta``.

    The graph is first padded to a Delta-regular bipartite multigraph; each
    round removes a perfect matching of the padded graph and gives its real
    edges the next color.
    """
    delta = g.max_degree
    if delta == 0:
        return {}
    left, right, edges = _regular_completion(g, delta)
    real = len(g.edges)
    remaining: Dict[Tuple[Hashable, Hashable], List[int]] = {}
    for i, (x, y) in enumerate(edges):
        remaining.setdefault((x, y), []).append(i)
    out: Dict[int, int] = {}
    for color in range(1, delta + 1):
        h = nx.Graph()
        h.add_nodes_from(left)
        h.add_nodes_from(right)
        h.add_edges_from(pair for pair, ids in remaining.items() if ids)
        matching = nx.bipartite.hopcroft_karp_matching(h, top_nodes=left)
        for x in left:
            y = matching[x]
            i = remaining[(x, y)].pop(0)
            if i < real:
                out[i] = color
    return out


class InfeasibleError(Exception):
    """Raised when a requested completion does not exist."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


def supported_completion(g: BipartiteGraph, pc: Mapping[int, int], t: int) -> Optional[Tuple[int, ...]]:
    """Colors left for König when ``pc`` fits the structured regime, else None.

    The regime: every vertex touched by an uncolored edge already sees every
    color of ``pc`` (so those colors are spent there), and the uncolored
    subgraph has maximum degree at most ``t - |colors(pc)|``.
    """
    used = set(pc.values())
    free_colors = tuple(c for c in range(1, t + 1) if c not in used)
    at: Dict[Hashable, Set[int]] = {}
    for i, c in pc.items():
        for v in g.edges[i]:
            at.setdefault(v, set()).add(c)
    unc_deg: Dict[Hashable, int] = {}
    for i, (x, y) in enumerate(g.edges):
        if i not in pc:
            unc_deg[x] = unc_deg.get(x, 0) + 1
            unc_deg[y] = unc_deg.get(y, 0) + 1
    for v, k in unc_deg.items():
        if at.get(v, set()) != used or k > len(free_colors):
            return None
    return free_colors


def complete_partial(g: BipartiteGraph, pc: Mapping[int, int], t: int, node_cap: Optional[int] = None) -> Dict[int, int]:
    """Extend ``pc`` to a total proper t-coloring.

    Inside the regime of :func:`supported_completion` the uncolored edges are
    König-colored with the unused colors.  Any other input goes to the exact
    solver.  Raises :class:`InfeasibleError` if no extension exists or the
    solver gives up.
    """
    if not is_proper(g, pc):
        raise ValueError("precoloring is not proper")
    free_colors = supported_completion(g, pc, t)
    if free_colors is not None:
        rest_ids = [i for i in range(len(g.edges)) if i not in pc]
        sub = BipartiteGraph(g.left, g.right, tuple(g.edges[i] for i in rest_ids))
        out = dict(pc)
        for j, c in konig_color(sub).items():
            out[rest_ids[j]] = free_colors[c - 1]
        return out

    from .solver import Instance, is_extendable

    res = is_extendable(Instance(g, dict(pc), t), node_cap=node_cap)
    if res.status != "extendable":
        raise InfeasibleError(f"no completion found ({res.status})", res)
    return dict(res.witness)


def _stable_kernel(
    g: BipartiteGraph, ids: Sequence[int], ref: Mapping[int, int]
) -> Set[int]:
    """Stable matching of the edges ``ids``; left vertices prefer high reference
    colors, right vertices prefer low ones.  Left vertices propose in
    ascending vertex order."""
    order = {v: k for k, v in enumerate(g.vertices)}
    prefs: Dict[Hashable, List[int]] = {}
    for i in ids:
        prefs.setdefault(g.edges[i][0], []).append(i)
    for x in prefs:
        prefs[x].sort(key=lambda i: -ref[i])
    nxt = {x: 0 for x in prefs}
    held: Dict[Hashable, int] = {}
    free = sorted(prefs, key=order.__getitem__, reverse=True)
    while free:
        x = free.pop()
        if nxt[x] >= len(prefs[x]):
            continue
        i = prefs[x][nxt[x]]
        nxt[x] += 1
        y = g.edges[i][1]
        cur = held.get(y)
        if cur is None:
            held[y] = i
        elif ref[i] < ref[cur]:
            held[y] = i
            free.append(g.edges[cur][0])
        else:
            free.append(x)
    return set(held.values())


def galvin_list_color(g: BipartiteGraph, lists: Mapping[int, Iterable[int]]) -> Dict[int, int]:
    """Color every edge from its own list, properly.

    Each list must contain at least Delta(g) colors.  A König coloring fixes
    an orientation of the line graph in which every edge has out-degree at
    most Delta - 1.  Colors are processed in ascending order; for each color
    the edges still holding it in their list are given a kernel, found as a
    stable matching, and the kernel receives the color.
    """
    delta = g.max_degree
    work = {i: set(lists[i]) for i in range(len(g.edges))}
    for i, lst in work.items():
        if len(lst) < delta:
            raise ValueError(f"list of edge {i} has {len(lst)} colors, need {delta}")
    ref = konig_color(g)
    out: Dict[int, int] = {}
    palette = sorted(set().union(*work.values())) if work else []
    for color in palette:
        cand = [i for i in sorted(work) if color in work[i]]
        if not cand:
            continue
        kernel = _stable_kernel(g, cand, ref)
        for i in cand:
            work[i].discard(color)
        for i in kernel:
            out[i] = color
            del work[i]
    if work:
        raise AssertionError(f"list coloring left edges {sorted(work)} uncolored")
    return out
