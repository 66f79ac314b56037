import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hypercolor.core import (
    Edge,
    MAX_DIM,
    Subcube,
    all_edges,
    automorphisms,
    canonical_key,
    canonicalize,
    check_dim,
    dimensional_matching,
    edge_from_index,
    edge_index,
    embed_check,
    induced_by_dims,
    make_edge,
    subcube_distance,
    subcube_intersection,
)


def b(s):
    return int(s, 2)


def test_all_edges_examples():
    assert all_edges(1) == [Edge(0, 0)]
    assert len(all_edges(2)) == 4
    assert len(all_edges(4)) == 32


def test_all_edges_sorted_and_canonical():
    for d in range(1, 7):
        edges = all_edges(d)
        assert edges == sorted(edges, key=lambda e: (e.dim, e.base))
        assert len(edges) == d * 2 ** (d - 1)
        assert all(not (e.base >> e.dim) & 1 for e in edges)


def test_dimension_guard():
    with pytest.raises(ValueError):
        check_dim(0)
    with pytest.raises(ValueError):
        all_edges(MAX_DIM + 1)


def test_edge_index_roundtrip():
    for d in range(1, 7):
        for i, e in enumerate(all_edges(d)):
            assert edge_index(d, e) == i
            assert edge_from_index(d, i) == e


def test_make_edge():
    assert make_edge(b("101"), b("001")) == Edge(1, 2)
    with pytest.raises(ValueError):
        make_edge(0, 3)


def test_dimensional_matching_examples():
    m = dimensional_matching(3, 0)
    assert {e.base for e in m} == {b("000"), b("010"), b("100"), b("110")}
    assert all(e.dim == 0 for e in m)
    assert len(dimensional_matching(2, 1)) == 2
    with pytest.raises(ValueError):
        dimensional_matching(3, 3)


@pytest.mark.parametrize("d", range(1, 9))
def test_dimensional_matchings_partition_edges(d):
    seen = []
    for j in range(d):
        m = dimensional_matching(d, j)
        ends = [x for e in m for x in e.endpoints()]
        assert sorted(ends) == list(range(2 ** d))
        seen.extend(m)
    assert len(seen) == len(set(seen))
    assert set(seen) == set(all_edges(d))


def test_removing_matching_leaves_two_smaller_cubes():
    import networkx as nx

    d = 4
    for j in range(d):
        g = nx.Graph()
        g.add_nodes_from(range(2 ** d))
        g.add_edges_from(e.endpoints() for e in all_edges(d) if e.dim != j)
        comps = list(nx.connected_components(g))
        assert len(comps) == 2
        for comp in comps:
            assert nx.is_isomorphic(g.subgraph(comp), nx.hypercube_graph(d - 1))


def test_induced_by_dims_examples():
    cubes = induced_by_dims(3, {0, 1})
    assert [c.base for c in cubes] == [0, b("100")]
    assert len(induced_by_dims(3, set())) == 8
    big = induced_by_dims(4, {0, 1, 2})
    assert len(big) == 2 and all(c.dim == 3 for c in big)


@pytest.mark.parametrize("d", range(1, 7))
def test_induced_subcubes_cover_and_embed(d):
    for r in range(d + 1):
        for dims in itertools.combinations(range(d), r):
            cubes = induced_by_dims(d, dims)
            assert len(cubes) == 2 ** (d - r)
            verts = [v for c in cubes for v in c.vertices()]
            assert sorted(verts) == list(range(2 ** d))
            if r == 0:
                continue
            # re-index each subcube as Q_r and embed it with colors = local dims
            local = {j: k + 1 for k, j in enumerate(dims)}
            for c in cubes:
                edges = c.edges()
                labels = embed_check([e.endpoints() for e in edges], [local[e.dim] for e in edges], r)
                assert labels is not None
                assert sorted(labels.values()) == list(range(2 ** r))


def _vset(c: Subcube):
    return set(c.vertices())


def test_subcube_intersection_examples():
    assert subcube_intersection(Subcube(0, (0, 1)), Subcube(0, (1, 2))) == Subcube(0, (1,))
    assert subcube_intersection(Subcube(1, (1,)), Subcube(0, (1,))) is None
    assert subcube_intersection(Subcube(0, (0,)), Subcube(0, (0, 1, 2))) == Subcube(0, (0,))


def _all_subcubes(d):
    out = []
    for r in range(d + 1):
        for dims in itertools.combinations(range(d), r):
            out.extend(induced_by_dims(d, dims))
    return out


@pytest.mark.parametrize("d", range(1, 6))
def test_subcube_intersection_matches_vertex_sets(d):
    cubes = _all_subcubes(d)
    vsets = {c: _vset(c) for c in cubes}
    for a in cubes:
        for c in cubes:
            got = subcube_intersection(a, c)
            want = vsets[a] & vsets[c]
            if not want:
                assert got is None
            else:
                assert got is not None and vsets[got] == want
                assert got.free == tuple(j for j in a.free if j in c.free)
            dist = min(bin(u ^ v).count("1") for u in vsets[a] for v in vsets[c])
            assert subcube_distance(a, c) == dist


def test_subcube_make_and_membership():
    c = Subcube.make(b("111"), (0, 2))
    assert c == Subcube(b("010"), (0, 2))
    assert c.contains_vertex(b("011")) and not c.contains_vertex(b("001"))
    assert c.contains_edge(Edge(b("010"), 2)) and not c.contains_edge(Edge(b("000"), 1))
    assert len(c.edges()) == 4


def test_embed_check_examples():
    cyc = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]
    labels = embed_check(cyc, [1, 2, 1, 2], 2)
    assert labels == {"a": b("00"), "b": b("01"), "c": b("11"), "d": b("10")}
    hexagon = [(i, (i + 1) % 6) for i in range(6)]
    assert embed_check(hexagon, [1, 2, 3, 1, 2, 3], 3) is not None
    square = [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert embed_check(square, [1, 2, 1, 3], 3) is None


def test_embed_check_rejects_bad_input():
    with pytest.raises(ValueError):
        embed_check([(0, 1), (1, 2)], [1, 1], 2)
    with pytest.raises(ValueError):
        embed_check([(0, 1)], [3], 2)


def test_embed_check_path_condition():
    # path colored 1,2,1,2 returns to its start label: not injective
    path = [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert embed_check(path, [1, 2, 1, 2], 3) is None
    assert embed_check(path, [1, 2, 3, 1], 3) is not None


def _check_sound(edges, colors, labels):
    for (u, v), c in zip(edges, colors):
        assert labels[u] ^ labels[v] == 1 << (c - 1)


def test_embed_check_complete_on_q3_subgraphs():
    edges = all_edges(3)
    for mask in range(1, 1 << len(edges)):
        sub = [e for k, e in enumerate(edges) if mask >> k & 1]
        pairs = [e.endpoints() for e in sub]
        cols = [e.dim + 1 for e in sub]
        labels = embed_check(pairs, cols, 3)
        assert labels is not None
        _check_sound(pairs, cols, labels)


@settings(max_examples=200, deadline=None)
@given(st.integers(4, 5), st.randoms(use_true_random=False))
def test_embed_check_complete_random_subgraphs(d, rnd):
    edges = [e for e in all_edges(d) if rnd.random() < 0.4]
    if not edges:
        return
    # relabel vertices so the test does not lean on coordinates
    perm = list(range(2 ** d))
    rnd.shuffle(perm)
    pairs = [(perm[e.base], perm[e.top]) for e in edges]
    cols = [e.dim + 1 for e in edges]
    labels = embed_check(pairs, cols, d)
    assert labels is not None
    _check_sound(pairs, cols, labels)


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_embed_check_sound_on_random_graphs(rnd):
    n = rnd.randint(2, 8)
    d = rnd.randint(1, 4)
    pairs, cols, at = [], [], {}
    for _ in range(rnd.randint(1, 12)):
        u, v = rnd.sample(range(n), 2)
        c = rnd.randint(1, d)
        if c in at.get(u, ()) or c in at.get(v, ()) or (u, v) in pairs or (v, u) in pairs:
            continue
        pairs.append((u, v))
        cols.append(c)
        at.setdefault(u, set()).add(c)
        at.setdefault(v, set()).add(c)
    if not pairs:
        return
    labels = embed_check(pairs, cols, d)
    if labels is None:
        return
    _check_sound(pairs, cols, labels)
    import networkx as nx

    g = nx.Graph(pairs)
    for comp in nx.connected_components(g):
        assert len({labels[v] for v in comp}) == len(comp)


@pytest.mark.parametrize("d", range(1, 5))
def test_automorphism_group(d):
    group = automorphisms(d)
    assert len(group) == 2 ** d * len(list(itertools.permutations(range(d))))
    edges = set(all_edges(d))
    for g in group:
        assert {g.apply_edge(e) for e in edges} == edges
    assert len(set(group)) == len(group)


def test_canonicalize_examples():
    target = canonicalize(3, {Edge(0, 0): 1})
    for e in all_edges(3):
        for c in (1, 2, 3):
            assert canonicalize(3, {e: c}) == target
    assert canonicalize(3, {}) == {}
    assert canonical_key(3, {}) == ((), ())


def test_canonicalize_c4_witnesses():
    w1 = {Edge(b("000"), 2): 1, Edge(b("001"), 2): 2, Edge(b("011"), 2): 3}
    w2 = {Edge(b("010"), 0): 3, Edge(b("100"), 0): 1, Edge(b("110"), 0): 2}
    assert canonical_key(3, w1) == canonical_key(3, w2)
    # independent confirmation: w2 lies in the orbit of w1 under the 48
    # automorphisms combined with the 6 color permutations
    orbit = set()
    for g in automorphisms(3):
        for perm in itertools.permutations((1, 2, 3)):
            img = frozenset((g.apply_edge(e), perm[c - 1]) for e, c in w1.items())
            orbit.add(img)
    assert frozenset(w2.items()) in orbit


def test_canonical_classes_match_explicit_orbits():
    d = 3
    edges = all_edges(d)
    group = automorphisms(d)
    pcs = []
    for pair in itertools.combinations(edges, 2):
        for cols in itertools.product((1, 2, 3), repeat=2):
            pc = dict(zip(pair, cols))
            if pair[0].dim != pair[1].dim and set(pair[0].endpoints()) & set(pair[1].endpoints()) and cols[0] == cols[1]:
                continue
            pcs.append(pc)
    seen, orbits = set(), 0
    for pc in pcs:
        key = frozenset(pc.items())
        if key in seen:
            continue
        orbits += 1
        for g in group:
            for perm in itertools.permutations((1, 2, 3)):
                seen.add(frozenset((g.apply_edge(e), perm[c - 1]) for e, c in pc.items()))
    assert len({canonical_key(d, pc) for pc in pcs}) == orbits


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), st.randoms(use_true_random=False))
def test_canonical_key_invariant(d, rnd):
    edges = rnd.sample(all_edges(d), rnd.randint(0, d))
    pc = {e: rnd.randint(1, d) for e in edges}
    g = rnd.choice(automorphisms(d))
    perm = list(range(1, d + 1))
    rnd.shuffle(perm)
    img = {g.apply_edge(e): perm[c - 1] for e, c in pc.items()}
    assert canonical_key(d, img) == canonical_key(d, pc)
    assert canonical_key(d, canonicalize(d, pc)) == canonical_key(d, pc)


def test_canonicalize_guard():
    with pytest.raises(ValueError):
        canonicalize(6, {})
