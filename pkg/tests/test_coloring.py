import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hypercolor.coloring import (
    BipartiteGraph,
    InfeasibleError,
    complete_partial,
    galvin_list_color,
    hypercube_graph,
    is_proper,
    konig_color,
    supported_completion,
    to_ids,
)
from hypercolor.core import Edge, all_edges, dimension_coloring, dimensional_matching


def knn(n):
    return BipartiteGraph(tuple(range(n)), tuple(range(n, 2 * n)), tuple((x, y) for x in range(n) for y in range(n, 2 * n)))


def cycle4():
    return BipartiteGraph((0, 2), (1, 3), ((0, 1), (2, 1), (2, 3), (0, 3)))


def star(k):
    return BipartiteGraph((0,), tuple(range(1, k + 1)), tuple((0, y) for y in range(1, k + 1)))


def random_regular(rnd, n, k):
    """Union of k random perfect matchings; may contain parallel edges."""
    edges = []
    for _ in range(k):
        perm = list(range(n, 2 * n))
        rnd.shuffle(perm)
        edges += list(zip(range(n), perm))
    return BipartiteGraph(tuple(range(n)), tuple(range(n, 2 * n)), tuple(edges))


def test_graph_validation():
    with pytest.raises(ValueError):
        BipartiteGraph((0, 1), (1, 2), ((0, 1),))
    with pytest.raises(ValueError):
        BipartiteGraph((0,), (1,), ((1, 0),))


def test_is_proper_examples():
    g = cycle4()
    assert not is_proper(g, {0: 1, 1: 1})
    assert is_proper(g, {})
    assert is_proper(hypercube_graph(3), to_ids(3, dimension_coloring(3)))
    with pytest.raises(KeyError):
        is_proper(g, {7: 1})


def test_konig_examples():
    for g, k in ((hypercube_graph(3), 3), (knn(3), 3), (star(4), 4)):
        col = konig_color(g)
        assert len(col) == len(g.edges)
        assert is_proper(g, col)
        assert set(col.values()) == set(range(1, k + 1))


def test_konig_deterministic():
    g = hypercube_graph(4)
    assert konig_color(g) == konig_color(g)


def _check_konig(g):
    col = konig_color(g)
    assert len(col) == len(g.edges)
    assert is_proper(g, col)
    assert max(col.values(), default=0) <= g.max_degree


def test_konig_corpus():
    for d in range(1, 7):
        _check_konig(hypercube_graph(d))
    for n in range(1, 7):
        _check_konig(knn(n))
    rnd = random.Random(5)
    for _ in range(30):
        n = rnd.randint(2, 20)
        _check_konig(random_regular(rnd, n, rnd.randint(1, 5)))


@settings(max_examples=150, deadline=None)
@given(st.randoms(use_true_random=False))
def test_konig_irregular(rnd):
    nl, nr = rnd.randint(1, 6), rnd.randint(1, 6)
    edges = tuple((rnd.randrange(nl), nl + rnd.randrange(nr)) for _ in range(rnd.randint(0, 18)))
    _check_konig(BipartiteGraph(tuple(range(nl)), tuple(range(nl, nl + nr)), edges))


def test_complete_partial_examples():
    q2 = hypercube_graph(2)
    out = complete_partial(q2, {0: 1}, 2)
    assert len(out) == 4 and is_proper(q2, out) and out[0] == 1

    q3 = hypercube_graph(3)
    pc = to_ids(3, {e: 3 for e in dimensional_matching(3, 0)})
    assert supported_completion(q3, pc, 3) == (1, 2)
    out = complete_partial(q3, pc, 3)
    assert len(out) == 12 and is_proper(q3, out)
    assert all(out[i] == 3 for i in pc)


def test_complete_partial_two_color_skeleton():
    # spanning 2-factor of Q_4 colored with {1, 2}; the 4-cycles on dims
    # {0, 1} alternate, with the color roles swapped on every other cycle
    d = 4
    pc = {}
    for e in all_edges(d):
        if e.dim in (0, 1):
            flip = (e.base >> 2) & 1
            pc[e] = 1 + ((e.dim + flip) % 2)
    g = hypercube_graph(d)
    ids = to_ids(d, pc)
    assert is_proper(g, ids)
    assert supported_completion(g, ids, d) == (3, 4)
    out = complete_partial(g, ids, d)
    assert len(out) == len(g.edges) and is_proper(g, out)
    assert all(out[i] == c for i, c in ids.items())


def test_complete_partial_falls_back_and_reports_failure():
    g = hypercube_graph(4)
    # cor7-style crowding: both ends of edge (0000, 0) see disjoint color pairs
    pc = to_ids(4, {Edge(0, 1): 1, Edge(0, 2): 2, Edge(1, 1): 3, Edge(1, 2): 4})
    assert supported_completion(g, pc, 4) is None
    with pytest.raises(InfeasibleError) as info:
        complete_partial(g, pc, 4)
    assert info.value.result.status == "not_extendable"
    with pytest.raises(ValueError):
        complete_partial(g, {0: 1, 8: 1}, 4)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_complete_partial_agrees_with_input(rnd):
    d = 3
    g = hypercube_graph(d)
    pc = {}
    for i in rnd.sample(range(len(g.edges)), rnd.randint(0, 3)):
        pc[i] = rnd.randint(1, d)
        if not is_proper(g, pc):
            del pc[i]
    try:
        out = complete_partial(g, pc, d)
    except InfeasibleError:
        return
    assert len(out) == len(g.edges) and is_proper(g, out)
    assert all(out[i] == c for i, c in pc.items())


def _in_lists(g, col, lists):
    return len(col) == len(g.edges) and is_proper(g, col) and all(col[i] in lists[i] for i in lists)


def test_galvin_examples():
    g = cycle4()
    col = galvin_list_color(g, {i: {1, 2} for i in range(4)})
    assert _in_lists(g, col, {i: {1, 2} for i in range(4)})
    assert col[0] != col[1] and col[0] == col[2]
    q3 = hypercube_graph(3)
    lists = {i: {1, 2, 3} for i in range(12)}
    assert _in_lists(q3, galvin_list_color(q3, lists), lists)


def test_galvin_rejects_short_lists():
    with pytest.raises(ValueError):
        galvin_list_color(hypercube_graph(3), {i: {1, 2} for i in range(12)})


def _feasible(g, lists):
    """Plain backtracking over the lists, independent of the kernel method."""
    col = {}

    def rec(i):
        if i == len(g.edges):
            return True
        for c in sorted(lists[i]):
            col[i] = c
            if is_proper(g, col) and rec(i + 1):
                return True
            del col[i]
        return False

    return rec(0)


def test_galvin_adversarial_q3_lists():
    g = hypercube_graph(3)
    rnd = random.Random(11)
    for _ in range(100):
        lists = {i: set(rnd.sample(range(1, 7), 3)) for i in range(12)}
        assert _feasible(g, lists)
        assert _in_lists(g, galvin_list_color(g, lists), lists)


def test_galvin_multigraph():
    g = BipartiteGraph((0, 1), (2, 3), ((0, 2), (0, 2), (1, 3), (0, 3), (1, 2)))
    rnd = random.Random(3)
    for _ in range(100):
        lists = {i: set(rnd.sample(range(1, 6), 3)) for i in range(len(g.edges))}
        assert _in_lists(g, galvin_list_color(g, lists), lists)


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_galvin_random_regular(rnd):
    g = random_regular(rnd, rnd.randint(2, 6), rnd.randint(1, 4))
    delta = g.max_degree
    lists = {i: set(rnd.sample(range(1, 2 * delta + 2), delta + rnd.randint(0, 2))) for i in range(len(g.edges))}
    assert _in_lists(g, galvin_list_color(g, lists), lists)
