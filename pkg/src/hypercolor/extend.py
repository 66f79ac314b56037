"""Constructive extension of hypercube precolorings.

Every routine takes and returns colorings as ``dict[Edge, int]`` in the
caller's color names; the result is a total proper d-coloring of Q_d.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .coloring import BipartiteGraph, galvin_list_color
from .core import (
    Edge,
    Subcube,
    check_dim,
    dimensional_matching,
    incident_edges,
    induced_by_dims,
    is_proper_partial,
    popcount,
    subcube_distance,
    subcube_intersection,
)

log = logging.getLogger(__name__)

Coloring = Dict[Edge, int]


def _validate(d: int, pc: Mapping[Edge, int]) -> None:
    check_dim(d)
    for e, c in pc.items():
        if not 0 <= e.dim < d or e.base >> d or (e.base >> e.dim) & 1:
            raise ValueError(f"{e} is not a canonical edge of Q_{d}")
        if not 1 <= c <= d:
            raise ValueError(f"color {c} of {e} outside 1..{d}")
    if not is_proper_partial(pc):
        raise ValueError("precoloring is not proper")


def _color_dims(cube: Subcube, dims: Sequence[int], colors: Sequence[int], out: Coloring) -> None:
    verts = cube.vertices()
    for j, c in zip(dims, colors):
        for v in verts:
            if not (v >> j) & 1:
                out[Edge(v, j)] = c


def extend_small(d: int, pc: Mapping[Edge, int]) -> Coloring:
    """Extend a precoloring of at most d - 1 edges to a proper d-coloring of Q_d.

    Works by induction on the dimension.  A dimensional matching with no
    precolored edge splits the cube into two halves.  If each half holds at
    most k - 2 precolored edges, both halves are extended with k - 1 colors
    and the matching gets the spare color.  Otherwise one half holds all
    k - 1 edges: one color class is set aside, the rest is extended
    recursively, the class is put back, the half is mirrored onto the other
    half, and each matching edge takes the single color missing at its ends.
    """
    _validate(d, pc)
    if len(pc) > d - 1:
        raise ValueError(f"{len(pc)} precolored edges, at most {d - 1} allowed")
    out: Coloring = {}
    _small(Subcube(0, tuple(range(d))), tuple(range(1, d + 1)), dict(pc), out)
    return out


def _small(cube: Subcube, colors: Tuple[int, ...], pc: Coloring, out: Coloring) -> None:
    free = cube.free
    if not pc:
        _color_dims(cube, free, colors, out)
        return
    k = len(free)
    busy = {e.dim for e in pc}
    j = next(x for x in free if x not in busy)
    rest = tuple(x for x in free if x != j)
    bit = 1 << j
    lo = {e: c for e, c in pc.items() if not e.base & bit}
    hi = {e: c for e, c in pc.items() if e.base & bit}
    low_cube = Subcube(cube.base, rest)
    high_cube = Subcube(cube.base | bit, rest)

    if len(lo) <= k - 2 and len(hi) <= k - 2:
        present = set(pc.values())
        spare = max(c for c in colors if c not in present)
        sub = tuple(c for c in colors if c != spare)
        _small(low_cube, sub, lo, out)
        _small(high_cube, sub, hi, out)
        for v in low_cube.vertices():
            out[Edge(v, j)] = spare
        return

    side, other, part = (low_cube, high_cube, lo) if lo else (high_cube, low_cube, hi)
    set_aside = min(part.values())
    stripped = {e: c for e, c in part.items() if c != set_aside}
    sub = tuple(c for c in colors if c != set_aside)
    half: Coloring = {}
    _small(side, sub, stripped, half)
    for e, c in part.items():
        if c == set_aside:
            half[e] = c
    out.update(half)
    for e, c in half.items():
        out[Edge(e.base ^ bit, e.dim)] = c
    palette = set(colors)
    for v in side.vertices():
        seen = {half[Edge(v & ~(1 << x), x)] for x in rest}
        (missing,) = palette - seen
        out[Edge(v & ~bit, j)] = missing


@dataclass(frozen=True)
class SubcubeColoring:
    """A total proper coloring of the edges of one subcube."""

    cube: Subcube
    coloring: Mapping[Edge, int]

    def __post_init__(self):
        edges = set(self.cube.edges())
        if set(self.coloring) != edges:
            raise ValueError("coloring must cover exactly the subcube's edges")
        if not is_proper_partial(self.coloring):
            raise ValueError("subcube coloring is not proper")

    @property
    def colors(self) -> FrozenSet[int]:
        return frozenset(self.coloring.values())

    @property
    def tight(self) -> bool:
        return len(self.colors) == self.cube.dim


def _replicate(
    ambient: Subcube,
    cube: Subcube,
    coloring: Mapping[Edge, int],
    order: Sequence[int],
    out: Coloring,
) -> None:
    """Color the ambient subcube from a total coloring of ``cube`` inside it.

    Every translate of ``cube`` inside ``ambient`` gets a copy of its
    coloring.  The fiber through a vertex v of ``cube`` (along the remaining
    ambient dimensions) gets, on its i-th dimension, the i-th color of
    ``order`` that is absent at v.
    """
    fiber = [j for j in ambient.free if j not in cube.free]
    offsets = Subcube(0, tuple(fiber)).vertices()
    flip = (ambient.base ^ cube.base) & ~ambient.mask
    if flip:
        raise ValueError("cube does not lie in the ambient subcube")
    for s in offsets:
        for e, c in coloring.items():
            out[Edge(e.base ^ s, e.dim)] = c
    if not fiber:
        return
    seen: Dict[int, set] = {}
    for e, c in coloring.items():
        for x in e.endpoints():
            seen.setdefault(x, set()).add(c)
    for v in cube.vertices():
        avail = [c for c in order if c not in seen.get(v, ())]
        if len(avail) < len(fiber):
            raise ValueError(f"not enough colors left at vertex {v:b}")
        for s in offsets:
            w = v ^ s
            for j, c in zip(fiber, avail):
                if not (w >> j) & 1:
                    out[Edge(w, j)] = c


def extend_full_subcube(d: int, sc: SubcubeColoring, order: Optional[Sequence[int]] = None) -> Coloring:
    """Extend a total proper coloring of a subcube Q_r (colors in 1..d) to Q_d.

    The coloring is copied onto every parallel translate of the subcube, and
    each complementary fiber through a vertex v takes the colors missing at v
    in ascending order (or in ``order``).
    """
    check_dim(d)
    if sc.cube.dim > d or any(j >= d for j in sc.cube.free) or sc.cube.base >> d:
        raise ValueError("subcube does not fit in Q_d")
    if any(not 1 <= c <= d for c in sc.coloring.values()):
        raise ValueError(f"colors must lie in 1..{d}")
    out: Coloring = {}
    _replicate(Subcube(0, tuple(range(d))), sc.cube, sc.coloring, order or range(1, d + 1), out)
    return out


def extend_partial_subcube(d: int, cube: Subcube, pc: Mapping[Edge, int], node_cap: Optional[int] = None) -> Coloring:
    """Extend a precoloring confined to a subcube of dimension r <= d/2.

    The precoloring is first completed inside the subcube with colors 1..d
    by the exact solver, then spread over Q_d as in :func:`extend_full_subcube`.
    """
    from .solver import Instance, is_extendable

    _validate(d, pc)
    r = cube.dim
    if 2 * r > d:
        raise ValueError(f"subcube dimension {r} exceeds d/2 = {d / 2}")
    if any(not cube.contains_edge(e) for e in pc):
        raise ValueError("precolored edge outside the subcube")
    edges = cube.edges()
    index = {e: i for i, e in enumerate(edges)}
    left = tuple(v for v in cube.vertices() if popcount(v) % 2 == 0)
    right = tuple(v for v in cube.vertices() if popcount(v) % 2 == 1)
    pairs = tuple((u, v) if popcount(u) % 2 == 0 else (v, u) for u, v in (e.endpoints() for e in edges))
    inst = Instance(BipartiteGraph(left, right, pairs), {index[e]: c for e, c in pc.items()}, d)
    res = is_extendable(inst, node_cap=node_cap)
    if not res.extendable:
        raise RuntimeError(f"completion inside the subcube failed ({res.status})")
    inner = {edges[i]: c for i, c in res.witness.items()}
    return extend_full_subcube(d, SubcubeColoring(cube, inner))


@dataclass(frozen=True)
class TwoCubesInstance:
    """Two subcubes of Q_d, each with a coloring using exactly dim-many colors."""

    d: int
    c1: SubcubeColoring
    c2: SubcubeColoring

    def __post_init__(self):
        check_dim(self.d)
        for sc in (self.c1, self.c2):
            if not sc.tight:
                raise ValueError("subcube colorings must use exactly dim colors")
            if any(j >= self.d for j in sc.cube.free) or sc.cube.base >> self.d:
                raise ValueError("subcube does not fit in Q_d")
            if any(not 1 <= c <= self.d for c in sc.colors):
                raise ValueError(f"colors must lie in 1..{self.d}")
        if self.c1.cube.dim < 1 or self.c2.cube.dim < 1:
            raise ValueError("subcubes must have dimension at least 1")
        if any(self.c2.coloring.get(e, c) != c for e, c in self.c1.coloring.items()):
            raise ValueError("colorings disagree on a shared edge")
        if not is_proper_partial(self.union()):
            raise ValueError("joint coloring is not proper")

    def union(self) -> Coloring:
        out = dict(self.c1.coloring)
        out.update(self.c2.coloring)
        return out


class Verdict(NamedTuple):
    extendable: bool
    reason: str


def two_cubes_decide(inst: TwoCubesInstance) -> Verdict:
    """Extendable unless the cubes are disjoint, adjacent, and their color
    sets together cover all d colors."""
    a, b = inst.c1.cube, inst.c2.cube
    if subcube_intersection(a, b) is not None:
        return Verdict(True, "cubes intersect")
    if subcube_distance(a, b) > 1:
        return Verdict(True, "cubes disjoint and not adjacent")
    union = inst.c1.colors | inst.c2.colors
    if len(union) >= inst.d:
        return Verdict(False, f"cubes adjacent and |A1 u A2| = {len(union)} >= d")
    return Verdict(True, f"cubes adjacent with spare color (|A1 u A2| = {len(union)} < d)")


def _grow_intersecting(inst: TwoCubesInstance) -> Tuple[Subcube, Coloring]:
    """Color the span of two intersecting cubes, keeping both colorings.

    Starting from the first cube, double along each dimension of the second
    cube that the first lacks (ascending).  The copy repeats the current
    coloring except on edges of the second cube, which keep theirs, and the
    new connecting edges outside the second cube get the next unused color of
    A2 minus A1 (ascending).
    """
    a, b = inst.c1.cube, inst.c2.cube
    f2 = inst.c2.coloring
    grow_dims = [j for j in b.free if j not in a.free]
    spares = sorted(inst.c2.colors - inst.c1.colors)
    if len(spares) < len(grow_dims):
        raise AssertionError("fewer spare colors than growth dimensions")
    region = a
    g: Coloring = dict(inst.c1.coloring)
    for j, c in zip(grow_dims, spares):
        bit = 1 << j
        nxt: Coloring = dict(g)
        for e, col in g.items():
            e2 = Edge(e.base ^ bit, e.dim)
            nxt[e2] = f2.get(e2, col)
        for v in region.vertices():
            e2 = Edge(v & ~bit, j)
            nxt[e2] = f2.get(e2, c)
        g = nxt
        region = Subcube.make(region.base, region.free + (j,))
    return region, g


def _preferred_order(d: int, first: Iterable[int]) -> List[int]:
    head = sorted(first)
    return head + [c for c in range(1, d + 1) if c not in head]


def two_cubes_extend(inst: TwoCubesInstance, node_cap: Optional[int] = None) -> Coloring:
    """Constructive extension for an instance that :func:`two_cubes_decide` accepts.

    Intersecting cubes: grow a joint coloring of their span, then spread it.
    Disjoint adjacent cubes: color each spanning block with the same k
    colors plus the bridge matching with a spare color, then spread.
    Disjoint non-adjacent cubes: list-color the quotient graph of blocks and
    give each block the colors its quotient edges leave free.
    """
    verdict = two_cubes_decide(inst)
    if not verdict.extendable:
        raise ValueError(f"instance is not extendable: {verdict.reason}")
    d = inst.d
    a, b = inst.c1.cube, inst.c2.cube
    A1, A2 = inst.c1.colors, inst.c2.colors
    span = tuple(sorted(set(a.free) | set(b.free)))

    if subcube_intersection(a, b) is not None:
        region, g = _grow_intersecting(inst)
        return extend_full_subcube(d, SubcubeColoring(region, g))

    h1 = Subcube.make(a.base, span)
    h2 = Subcube.make(b.base, span)
    g1: Coloring = {}
    g2: Coloring = {}
    _replicate(h1, a, inst.c1.coloring, _preferred_order(d, A2 - A1), g1)
    _replicate(h2, b, inst.c2.coloring, _preferred_order(d, A1 - A2), g2)

    if subcube_distance(a, b) == 1:
        used = set(g1.values()) | set(g2.values())
        spare = min(c for c in range(1, d + 1) if c not in used)
        j = ((h1.base ^ h2.base)).bit_length() - 1
        joint = dict(g1)
        joint.update(g2)
        low = h1 if not (h1.base >> j) & 1 else h2
        for v in low.vertices():
            joint[Edge(v, j)] = spare
        region = Subcube.make(low.base, span + (j,))
        return extend_full_subcube(d, SubcubeColoring(region, joint))

    return _quotient_extend(inst, span, h1, h2, g1, g2, node_cap)


def _quotient_extend(inst, span, h1, h2, g1, g2, node_cap) -> Coloring:
    d = inst.d
    blocks = induced_by_dims(d, span)
    outside = [j for j in range(d) if j not in span]
    left = tuple(B.base for B in blocks if popcount(B.base) % 2 == 0)
    right = tuple(B.base for B in blocks if popcount(B.base) % 2 == 1)
    links: List[Tuple[int, int]] = []
    pairs = []
    for B in blocks:
        for j in outside:
            if not (B.base >> j) & 1:
                u, w = B.base, B.base | (1 << j)
                links.append((u, j))
                pairs.append((u, w) if popcount(u) % 2 == 0 else (w, u))
    quotient = BipartiteGraph(left, right, tuple(pairs))
    c1, c2 = set(g1.values()), set(g2.values())
    lists = {}
    for i, (u, j) in enumerate(links):
        ends = {u, u | (1 << j)}
        lst = set(range(1, d + 1))
        if h1.base in ends:
            lst -= c1
        if h2.base in ends:
            lst -= c2
        lists[i] = lst
    link_colors = galvin_list_color(quotient, lists)

    out: Coloring = dict(g1)
    out.update(g2)
    at_block: Dict[int, set] = {}
    for i, (u, j) in enumerate(links):
        c = link_colors[i]
        for v in Subcube(u, span).vertices():
            out[Edge(v, j)] = c
        at_block.setdefault(u, set()).add(c)
        at_block.setdefault(u | (1 << j), set()).add(c)
    for B in blocks:
        if B.base in (h1.base, h2.base):
            continue
        remaining = [c for c in range(1, d + 1) if c not in at_block.get(B.base, ())]
        if len(remaining) != len(span):
            log.warning("block %s has %d free colors, expected %d; using the oracle", B, len(remaining), len(span))
            return _oracle_fallback(inst, node_cap)
        _color_dims(B, span, remaining, out)
    return out


def _oracle_fallback(inst: TwoCubesInstance, node_cap: Optional[int]) -> Coloring:
    from .coloring import from_ids
    from .solver import hypercube_instance, is_extendable

    res = is_extendable(hypercube_instance(inst.d, inst.union()), node_cap=node_cap)
    if not res.extendable:
        raise RuntimeError(f"oracle fallback failed ({res.status})")
    return from_ids(inst.d, res.witness)


def _is_induced_matching(d: int, edges: Sequence[Edge]) -> bool:
    ends = [set(e.endpoints()) for e in edges]
    for x in range(len(edges)):
        for y in range(x + 1, len(edges)):
            for u in ends[x]:
                for w in ends[y]:
                    if popcount(u ^ w) <= 1:
                        return False
    return True


def induced_matching_extend(d: int, pc: Mapping[Edge, int]) -> Coloring:
    """Extend a precolored induced matching lying in at most two dimensional matchings.

    With the two matchings of dimensions i and j, Q_d splits into 4-cycles
    spanned by i and j and four blocks Q_{d-2} along the other dimensions.
    Each 4-cycle holding a precolored edge also gets its opposite edge in
    that color.  One block is list-colored avoiding the 4-cycle colors at its
    vertices and copied to the other three blocks; the leftover 4-cycle
    edges take the colors still missing at their ends.
    """
    _validate(d, pc)
    edges = sorted(pc)
    dims = sorted({e.dim for e in edges})
    if len(dims) > 2:
        raise ValueError(f"precolored edges span {len(dims)} dimensions, at most 2 allowed")
    if not _is_induced_matching(d, edges):
        raise ValueError("precolored edges are not an induced matching")
    if d == 1:
        return {Edge(0, 0): 1}
    for x in range(d):
        if len(dims) == 2:
            break
        if x not in dims:
            dims.append(x)
    i, j = sorted(dims)
    square_mask = (1 << i) | (1 << j)
    rest = tuple(x for x in range(d) if x not in (i, j))

    # precolored edge and its opposite on each 4-cycle
    pair_color: Dict[int, int] = {}
    for e, c in pc.items():
        pair_color[e.base & ~square_mask] = c

    block = Subcube(0, rest)
    bedges = block.edges()
    lists = {}
    for k, e in enumerate(bedges):
        lst = set(range(1, d + 1))
        for v in e.endpoints():
            c = pair_color.get(v)
            if c is not None:
                lst.discard(c)
        lists[k] = lst
    left = tuple(v for v in block.vertices() if popcount(v) % 2 == 0)
    right = tuple(v for v in block.vertices() if popcount(v) % 2 == 1)
    pairs = tuple((u, v) if popcount(u) % 2 == 0 else (v, u) for u, v in (e.endpoints() for e in bedges))
    fcol = galvin_list_color(BipartiteGraph(left, right, pairs), lists) if bedges else {}

    out: Coloring = {}
    corners = (0, 1 << i, 1 << j, square_mask)
    for k, e in enumerate(bedges):
        for s in corners:
            out[Edge(e.base | s, e.dim)] = fcol[k]
    palette = set(range(1, d + 1))
    for v in block.vertices():
        seen = {out[Edge(v & ~(1 << x), x)] for x in rest}
        c = pair_color.get(v)
        sq_i = [Edge(v, i), Edge(v | (1 << j), i)]
        sq_j = [Edge(v, j), Edge(v | (1 << i), j)]
        if c is None:
            x, y = sorted(palette - seen)
            for e in sq_i:
                out[e] = x
            for e in sq_j:
                out[e] = y
            continue
        (other,) = palette - seen - {c}
        hit = next(e for e in sq_i + sq_j if e in pc)
        same, cross = (sq_i, sq_j) if hit.dim == i else (sq_j, sq_i)
        for e in same:
            out[e] = c
        for e in cross:
            out[e] = other
    return out


def _q3_perfect_matchings() -> List[Tuple[Edge, ...]]:
    """All 9 perfect matchings of Q_3: the dimensional ones first, then the
    rest in lexicographic order."""
    dims = [tuple(dimensional_matching(3, j)) for j in range(3)]
    found = []

    def rec(covered: int, chosen: List[Edge]):
        if covered == 0xFF:
            found.append(tuple(sorted(chosen)))
            return
        v = next(x for x in range(8) if not (covered >> x) & 1)
        for e in incident_edges(3, v):
            w = e.base ^ e.top ^ v
            if not (covered >> w) & 1:
                chosen.append(e)
                rec(covered | (1 << v) | (1 << w), chosen)
                chosen.pop()

    rec(0, [])
    dim_sets = [tuple(sorted(m)) for m in dims]
    return dim_sets + sorted(m for m in set(found) if m not in dim_sets)


def q3_avoiding_matching(forbidden: Iterable[Edge]) -> List[Edge]:
    """A perfect matching of Q_3 sharing no edge with the independent set ``forbidden``."""
    bad = set(forbidden)
    for e in bad:
        if not 0 <= e.dim < 3 or e.base >> 3 or (e.base >> e.dim) & 1:
            raise ValueError(f"{e} is not a canonical edge of Q_3")
    seen = set()
    for e in bad:
        for x in e.endpoints():
            if x in seen:
                raise ValueError("edge set is not independent")
            seen.add(x)
    for m in _q3_perfect_matchings():
        if not bad.intersection(m):
            return list(m)
    raise AssertionError(f"no perfect matching of Q_3 avoids {sorted(bad)}")
