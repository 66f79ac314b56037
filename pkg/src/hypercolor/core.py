"""Hypercube combinatorics on bitmask coordinates.

A vertex of Q_d is an int below 2**d whose bit j is the coordinate in
dimension j.  An edge is stored in canonical form ``Edge(base, dim)`` where
``base`` is the endpoint with bit ``dim`` clear.
"""

from __future__ import annotations

import itertools
from collections import deque
from functools import lru_cache
from typing import Dict, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

MAX_DIM = 20
MAX_SYMMETRY_DIM = 5


class Edge(NamedTuple):
    base: int
    dim: int

    @property
    def top(self) -> int:
        return self.base | (1 << self.dim)

    def endpoints(self) -> Tuple[int, int]:
        return self.base, self.base | (1 << self.dim)


def check_dim(d: int, cap: int = MAX_DIM) -> int:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if d > cap:
        raise ValueError(f"dimension {d} exceeds cap {cap}")
    return d


def make_edge(u: int, v: int) -> Edge:
    """Canonical edge joining two adjacent vertices."""
    diff = u ^ v
    if diff == 0 or diff & (diff - 1):
        raise ValueError(f"vertices {u:b} and {v:b} are not adjacent")
    dim = diff.bit_length() - 1
    return Edge(min(u, v), dim)


def popcount(x: int) -> int:
    return bin(x).count("1")


def fmt_vertex(v: int, d: int) -> str:
    """Bit string with dimension d-1 leftmost, so `fmt_vertex(1, 3) == '001'`."""
    return format(v, f"0{d}b")


def all_edges(d: int) -> List[Edge]:
    check_dim(d)
    return [Edge(base, j) for j in range(d) for base in range(1 << d) if not (base >> j) & 1]


def edge_index(d: int, e: Edge) -> int:
    """Position of ``e`` in ``all_edges(d)``."""
    low = e.base & ((1 << e.dim) - 1)
    high = e.base >> (e.dim + 1)
    return (e.dim << (d - 1)) | (high << e.dim) | low


def edge_from_index(d: int, i: int) -> Edge:
    dim, rank = divmod(i, 1 << (d - 1))
    low = rank & ((1 << dim) - 1)
    high = rank >> dim
    return Edge((high << (dim + 1)) | low, dim)


def neighbors(d: int, v: int) -> List[int]:
    return [v ^ (1 << j) for j in range(d)]


def incident_edges(d: int, v: int) -> List[Edge]:
    return [Edge(v & ~(1 << j), j) for j in range(d)]


def dimensional_matching(d: int, j: int) -> List[Edge]:
    """All edges flipping coordinate ``j``, ordered by base."""
    check_dim(d)
    if not 0 <= j < d:
        raise ValueError(f"dimension index {j} out of range for d={d}")
    return [Edge(base, j) for base in range(1 << d) if not (base >> j) & 1]


class Subcube(NamedTuple):
    """Sub-hypercube ``{base ^ s : s supported on free}``; base is zero on free dims."""

    base: int
    free: Tuple[int, ...]

    @classmethod
    def make(cls, vertex: int, free: Iterable[int]) -> "Subcube":
        dims = tuple(sorted(set(free)))
        mask = 0
        for j in dims:
            mask |= 1 << j
        return cls(vertex & ~mask, dims)

    @property
    def mask(self) -> int:
        m = 0
        for j in self.free:
            m |= 1 << j
        return m

    @property
    def dim(self) -> int:
        return len(self.free)

    def vertices(self) -> List[int]:
        out = []
        for bits in itertools.product((0, 1), repeat=len(self.free)):
            v = self.base
            for j, b in zip(self.free, bits):
                if b:
                    v |= 1 << j
            out.append(v)
        return sorted(out)

    def edges(self) -> List[Edge]:
        verts = self.vertices()
        return [Edge(v, j) for j in self.free for v in verts if not (v >> j) & 1]

    def contains_vertex(self, v: int) -> bool:
        return (v & ~self.mask) == self.base

    def contains_edge(self, e: Edge) -> bool:
        return e.dim in self.free and self.contains_vertex(e.base)

    def translate(self, offset: int) -> "Subcube":
        return Subcube((self.base ^ offset) & ~self.mask, self.free)


def induced_by_dims(d: int, dims: Iterable[int]) -> List[Subcube]:
    """Components of the subgraph spanned by the given dimensional matchings."""
    check_dim(d)
    free = tuple(sorted(set(dims)))
    if any(not 0 <= j < d for j in free):
        raise ValueError(f"dimension indices {free} out of range for d={d}")
    mask = sum(1 << j for j in free)
    return [Subcube(b, free) for b in range(1 << d) if not b & mask]


def subcube_intersection(a: Subcube, b: Subcube) -> Optional[Subcube]:
    ma, mb = a.mask, b.mask
    if (a.base ^ b.base) & ~(ma | mb):
        return None
    # coordinates fixed by either cube are pinned in the intersection
    base = (a.base & ~ma) | (b.base & ~mb)
    base &= ~(ma & mb)
    return Subcube(base, tuple(j for j in a.free if j in b.free))


def subcube_distance(a: Subcube, b: Subcube) -> int:
    """Least Hamming distance between a vertex of ``a`` and a vertex of ``b``."""
    return popcount((a.base ^ b.base) & ~(a.mask | b.mask))


def embed_check(
    edges: Sequence[Tuple[Hashable, Hashable]],
    colors: Sequence[int],
    d: int,
) -> Optional[Dict[Hashable, int]]:
    """Realize a colored graph inside Q_d with edge colors as dimensions.

    ``colors[i]`` in ``1..d`` is the color of ``edges[i]``.  Returns a map from
    vertices to d-bit labels such that every edge ``(u, v)`` of color ``c``
    has labels differing exactly in bit ``c - 1``, or ``None`` when no such
    labeling exists.  Labels are assigned by XOR along a BFS tree from the
    least vertex of each component.

    Raises ``ValueError`` if the coloring is not proper or uses a color
    outside ``1..d``.
    """
    if len(edges) != len(colors):
        raise ValueError("edges and colors differ in length")
    adj: Dict[Hashable, List[Tuple[Hashable, int]]] = {}
    for (u, v), c in zip(edges, colors):
        if not 1 <= c <= d:
            raise ValueError(f"color {c} outside 1..{d}")
        if u == v:
            raise ValueError(f"loop at {u!r}")
        adj.setdefault(u, []).append((v, c))
        adj.setdefault(v, []).append((u, c))
    for u, nbrs in adj.items():
        seen = [c for _, c in nbrs]
        if len(seen) != len(set(seen)):
            raise ValueError(f"coloring is not proper at vertex {u!r}")

    labels: Dict[Hashable, int] = {}
    for root in sorted(adj, key=repr):
        if root in labels:
            continue
        labels[root] = 0
        used = {0}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, c in adj[u]:
                want = labels[u] ^ (1 << (c - 1))
                if v in labels:
                    if labels[v] != want:
                        return None
                    continue
                if want in used:
                    return None
                labels[v] = want
                used.add(want)
                queue.append(v)
    return labels


class SignedPermutation(NamedTuple):
    """Automorphism of Q_d: move bit j to bit ``perm[j]``, then XOR ``flips``."""

    perm: Tuple[int, ...]
    flips: int

    def apply_vertex(self, v: int) -> int:
        w = 0
        for j, pj in enumerate(self.perm):
            if (v >> j) & 1:
                w |= 1 << pj
        return w ^ self.flips

    def apply_edge(self, e: Edge) -> Edge:
        u, v = e.endpoints()
        return make_edge(self.apply_vertex(u), self.apply_vertex(v))


def automorphisms(d: int, cap: int = MAX_SYMMETRY_DIM) -> List[SignedPermutation]:
    """The full automorphism group of Q_d (order 2**d * d!)."""
    check_dim(d, cap)
    return [
        SignedPermutation(perm, flips)
        for perm in itertools.permutations(range(d))
        for flips in range(1 << d)
    ]


@lru_cache(maxsize=None)
def _edge_tables(d: int) -> Tuple[Tuple[int, ...], ...]:
    edges = all_edges(d)
    return tuple(
        tuple(edge_index(d, g.apply_edge(e)) for e in edges) for g in automorphisms(d)
    )


def canonical_key(d: int, pc: Mapping[Edge, int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Orbit invariant of a precoloring under Aut(Q_d) and color renaming.

    The key is the lexicographic minimum, over automorphisms, of the sorted
    edge indices paired with colors renamed by first appearance.
    """
    check_dim(d, MAX_SYMMETRY_DIM)
    items = [(edge_index(d, e), c) for e, c in pc.items()]
    best = None
    for table in _edge_tables(d):
        img = sorted((table[i], c) for i, c in items)
        edges_key = tuple(i for i, _ in img)
        if best is not None and edges_key > best[0]:
            continue
        rename: Dict[int, int] = {}
        colors_key = tuple(rename.setdefault(c, len(rename) + 1) for _, c in img)
        key = (edges_key, colors_key)
        if best is None or key < best:
            best = key
    return best if best is not None else ((), ())


def canonicalize(d: int, pc: Mapping[Edge, int]) -> Dict[Edge, int]:
    """Canonical representative of the symmetry class of ``pc``."""
    edges_key, colors_key = canonical_key(d, pc)
    return {edge_from_index(d, i): c for i, c in zip(edges_key, colors_key)}


def dimension_coloring(d: int) -> Dict[Edge, int]:
    """Color every edge of dimension j with j + 1."""
    return {e: e.dim + 1 for e in all_edges(d)}


def colors_at(coloring: Mapping[Edge, int], v: int, d: int) -> List[int]:
    out = []
    for e in incident_edges(d, v):
        c = coloring.get(e)
        if c is not None:
            out.append(c)
    return out


def is_proper_partial(coloring: Mapping[Edge, int]) -> bool:
    seen: Dict[int, set] = {}
    for e, c in coloring.items():
        for x in e.endpoints():
            s = seen.setdefault(x, set())
            if c in s:
                return False
            s.add(c)
    return True


def is_extension(d: int, pc: Mapping[Edge, int], coloring: Mapping[Edge, int], t: Optional[int] = None) -> bool:
    """True iff ``coloring`` is a total proper t-coloring of Q_d agreeing with ``pc``."""
    t = d if t is None else t
    if len(coloring) != d << (d - 1):
        return False
    for e, c in coloring.items():
        if e.dim >= d or (e.base >> e.dim) & 1 or e.base >= 1 << d or not 1 <= c <= t:
            return False
    if any(coloring.get(e) != c for e, c in pc.items()):
        return False
    return is_proper_partial(coloring)
