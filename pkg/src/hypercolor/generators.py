"""Instance families whose precolorings are built to be non-extendable,
plus random precolorings of Cartesian powers of K_{n,n}."""

from __future__ import annotations

import random
from typing import Dict, List, Tuple

from .coloring import BipartiteGraph, is_proper
from .core import Edge, Subcube, check_dim, dimensional_matching, popcount
from .solver import Instance, hypercube_instance

KNN_POWER_MAX_VERTICES = 64


def cor7_sharp(d: int) -> Instance:
    """Q_d precoloring inside a Q_{d/2+1} that crowds one uncolored edge.

    Inside the subcube on dimensions 0..d/2 take u = 0 and v = 1 (the edge
    uv in dimension 0).  The other d/2 edges at u get colors 1..d/2 and the
    other d/2 edges at v get colors d/2+1..d.
    """
    check_dim(d)
    if d % 2:
        raise ValueError(f"d must be even, got {d}")
    half = d // 2
    u, v = 0, 1
    pc: Dict[Edge, int] = {}
    for k, j in enumerate(range(1, half + 1)):
        pc[Edge(u, j)] = 1 + k
        pc[Edge(v, j)] = half + 1 + k
    return hypercube_instance(d, pc, d)


def cor7_sharp_cube(d: int) -> Subcube:
    """The Q_{d/2+1} that contains :func:`cor7_sharp`'s precoloring."""
    return Subcube(0, tuple(range(d // 2 + 1)))


def induced_matching_sharp(d: int, with_blocker: bool = True) -> Instance:
    """A maximum induced matching of dimension-0 edges colored 1, plus one
    more dimension-0 edge colored 2.

    The induced matching takes the dimension-0 edges whose base has even
    weight; the extra edge is the first odd-weight one.  With
    ``with_blocker=False`` the extra edge is left out.
    """
    check_dim(d)
    if d < 3:
        raise ValueError(f"d must be at least 3, got {d}")
    matching = dimensional_matching(d, 0)
    pc = {e: 1 for e in matching if popcount(e.base) % 2 == 0}
    if with_blocker:
        extra = next(e for e in matching if popcount(e.base) % 2 == 1)
        pc[extra] = 2
    return hypercube_instance(d, pc, d)


def chain(d: int, r: int, same_color: bool = False) -> Instance:
    """r copies of K_{d,d} minus an edge, joined in a cycle, two edges precolored.

    Copy i has left vertices "xi.a" and right vertices "yi.b" for a, b in
    0..d-1, with edge xi.0-yi.0 removed.  Bridge i joins "xi.0" to
    "y(i+1).0", indices mod r.  In any d-coloring both bridges at a copy
    share a color, so all bridges do.  Bridges 0 and 1 are colored 1 and 2.

    ``same_color=True`` colors bridge 0 and the copy-0 edge x0.1-y0.0
    with 1.  Bridge r-1 ends at y0.0 and is forced to color 1, which that
    vertex already has.
    """
    if d < 2 or r < 2:
        raise ValueError(f"chain needs d >= 2 and r >= 2, got d={d}, r={r}")
    left = tuple(f"x{i}.{a}" for i in range(r) for a in range(d))
    right = tuple(f"y{i}.{b}" for i in range(r) for b in range(d))
    edges: List[Tuple[str, str]] = []
    for i in range(r):
        for a in range(d):
            for b in range(d):
                if a == 0 and b == 0:
                    continue
                edges.append((f"x{i}.{a}", f"y{i}.{b}"))
    bridges = []
    for i in range(r):
        bridges.append(len(edges))
        edges.append((f"x{i}.0", f"y{(i + 1) % r}.0"))
    g = BipartiteGraph(left, right, tuple(edges))
    if same_color:
        inner = edges.index(("x0.1", "y0.0"))
        pc = {bridges[0]: 1, inner: 1}
    else:
        pc = {bridges[0]: 1, bridges[1]: 2}
    return Instance(g, pc, d, "bipartite", ())


def doubling(n: int) -> Instance:
    """Two copies of K_{n,n-1} whose degree-(n-1) vertices are matched to
    their copies; two of the matching edges are colored 1.

    The result is n-regular and (n-1)-connected.  Each color misses exactly
    one big-side vertex of a copy, so the n matching edges need n distinct
    colors.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    # big side of copy 1 and small side of copy 2 on the left
    a1 = tuple(f"a1.{i}" for i in range(n))
    b1 = tuple(f"b1.{j}" for j in range(n - 1))
    a2 = tuple(f"a2.{i}" for i in range(n))
    b2 = tuple(f"b2.{j}" for j in range(n - 1))
    edges = []
    for i in range(n):
        for j in range(n - 1):
            edges.append((f"a1.{i}", f"b1.{j}"))
    for i in range(n):
        for j in range(n - 1):
            edges.append((f"b2.{j}", f"a2.{i}"))
    cross = []
    for i in range(n):
        cross.append(len(edges))
        edges.append((f"a1.{i}", f"a2.{i}"))
    g = BipartiteGraph(a1 + b2, b1 + a2, tuple(edges))
    return Instance(g, {cross[0]: 1, cross[1]: 1}, n, "bipartite", ())


def knn_power_graph(n: int, d: int) -> BipartiteGraph:
    """(K_{n,n})^d on vertices 0..(2n)^d - 1 read as d base-2n digits.

    In each factor, digits below n are one side and digits n..2n-1 the other.
    Edges are listed by position p, then by the remaining digits, then by
    the factor edge (a, b) with a < n <= b.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    base = 2 * n
    size = base ** d
    if size > KNN_POWER_MAX_VERTICES:
        raise ValueError(f"(K_{{{n},{n}}})^{d} has {size} vertices, cap is {KNN_POWER_MAX_VERTICES}")

    def digits(v):
        out = []
        for _ in range(d):
            v, r = divmod(v, base)
            out.append(r)
        return out

    def side(v):
        return sum(x >= n for x in digits(v)) % 2

    edges = []
    for p in range(d):
        weight = base ** p
        for v in range(size):
            dv = digits(v)
            if dv[p] != 0:
                continue
            for a in range(n):
                for b in range(n, base):
                    x, y = v + a * weight, v + b * weight
                    edges.append((x, y) if side(x) == 0 else (y, x))
    left = tuple(v for v in range(size) if side(v) == 0)
    right = tuple(v for v in range(size) if side(v) == 1)
    return BipartiteGraph(left, right, tuple(edges))


def knn_power(n: int, d: int, m: int = None, seed: int = 0) -> Instance:
    """(K_{n,n})^d with a uniformly random proper precoloring of m edges.

    ``m`` defaults to nd - 1; colors are 1..nd.  Draws are by rejection from
    ``random.Random(seed)``.
    """
    g = knn_power_graph(n, d)
    t = n * d
    m = t - 1 if m is None else m
    rng = random.Random(seed)
    ids = list(range(len(g.edges)))
    while True:
        chosen = rng.sample(ids, m)
        pc = {i: rng.randint(1, t) for i in chosen}
        if is_proper(g, pc):
            return Instance(g, pc, t, "knn_power", (n, d))
