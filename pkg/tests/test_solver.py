import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hypercolor.coloring import BipartiteGraph, hypercube_graph, is_proper, to_ids
from hypercolor.core import Edge, all_edges, automorphisms
from hypercolor.solver import (
    DEFAULT_NODE_CAP,
    EXTENDABLE,
    NOT_EXTENDABLE,
    UNKNOWN,
    BudgetExhausted,
    Instance,
    count_extensions,
    default_node_cap,
    enumerate_precolorings,
    hypercube_instance,
    is_extendable,
)
from hypercolor import generators
from oracles import brute_count, proper_precolorings_count

# number of proper 3-edge-colorings of Q_3, from oracles.brute_count
N3 = 24


def b(s):
    return int(s, 2)


def assert_witness(inst, res):
    w = res.witness
    assert len(w) == len(inst.graph.edges)
    assert is_proper(inst.graph, w)
    assert all(1 <= c <= inst.t for c in w.values())
    assert all(w[i] == c for i, c in inst.precoloring.items())


def test_examples():
    res = is_extendable(hypercube_instance(2, {Edge(0, 0): 1}))
    assert res.status == EXTENDABLE
    assert_witness(hypercube_instance(2, {Edge(0, 0): 1}), res)
    c4 = {Edge(b("000"), 2): 1, Edge(b("001"), 2): 2, Edge(b("011"), 2): 3}
    res = is_extendable(hypercube_instance(3, c4))
    assert res.status == NOT_EXTENDABLE and res.witness is None
    assert is_extendable(generators.cor7_sharp(4)).status == NOT_EXTENDABLE


def test_counts():
    assert count_extensions(hypercube_instance(2, {})) == 2
    assert count_extensions(hypercube_instance(2, {Edge(0, 0): 1})) == 1
    assert count_extensions(hypercube_instance(3, {})) == N3


def test_n3_matches_oracle():
    from oracles import hypercube_edge_pairs

    assert brute_count(hypercube_edge_pairs(3), {}, 3) == N3


def test_instance_validation():
    g = hypercube_graph(2)
    with pytest.raises(ValueError):
        Instance(g, {9: 1}, 2)
    with pytest.raises(ValueError):
        Instance(g, {0: 3}, 2)
    with pytest.raises(ValueError):
        Instance(g, {0: 1, 2: 1}, 2)


def test_node_cap_gives_unknown(monkeypatch):
    inst = hypercube_instance(4, {Edge(0, 0): 1})
    res = is_extendable(inst, node_cap=1)
    assert res.status == UNKNOWN and res.witness is None
    with pytest.raises(BudgetExhausted):
        count_extensions(hypercube_instance(3, {}), node_cap=2)
    monkeypatch.setenv("HYPERCOLOR_NODE_CAP", "1")
    assert default_node_cap() == 1
    assert is_extendable(inst).status == UNKNOWN
    monkeypatch.delenv("HYPERCOLOR_NODE_CAP")
    assert default_node_cap() == DEFAULT_NODE_CAP


def test_witness_deterministic_and_seeded():
    inst = hypercube_instance(4, {Edge(0, 0): 2, Edge(3, 2): 1})
    a, b_ = is_extendable(inst), is_extendable(inst)
    assert a.witness == b_.witness
    for seed in range(5):
        res = is_extendable(inst, seed=seed)
        assert res.status == EXTENDABLE
        assert_witness(inst, res)
        assert res.witness == is_extendable(inst, seed=seed).witness


def test_enumerate_examples():
    assert sum(1 for _ in enumerate_precolorings(2, 1)) == 8
    assert sum(1 for _ in enumerate_precolorings(3, 3)) == proper_precolorings_count(3, 3)
    with pytest.raises(ValueError):
        next(enumerate_precolorings(5, 2))
    with pytest.raises(ValueError):
        next(enumerate_precolorings(3, 4))


def test_enumerate_random_reproducible():
    first = [i.key() for i in enumerate_precolorings(5, 5, mode="random", seed=42, samples=10_000)]
    assert len(first) == 10_000
    again = [i.key() for i in enumerate_precolorings(5, 5, mode="random", seed=42, samples=300)]
    assert again == first[:300]
    other = [i.key() for i in enumerate_precolorings(5, 5, mode="random", seed=43, samples=300)]
    assert other != again
    assert all(len(k[3]) == 5 for k in first)


def test_enumerate_canonical_one_per_orbit():
    from hypercolor.core import canonical_key

    for d, m in ((2, 2), (3, 2), (3, 3)):
        keys = {canonical_key(d, i.hypercube_precoloring()) for i in enumerate_precolorings(d, m)}
        canon = [canonical_key(d, i.hypercube_precoloring()) for i in enumerate_precolorings(d, m, canonical=True)]
        assert sorted(canon) == sorted(keys)


BRUTE_LIMIT = 2_000_000


def random_small_instance(rnd):
    """Random bipartite graph with at most 12 edges and a proper precoloring,
    redrawn until the naive enumerator's search space is at most BRUTE_LIMIT."""
    while True:
        if rnd.random() < 0.3:
            g = hypercube_graph(rnd.choice((2, 3)))
        else:
            nl, nr = rnd.randint(1, 4), rnd.randint(1, 4)
            edges = tuple((rnd.randrange(nl), nl + rnd.randrange(nr)) for _ in range(rnd.randint(1, 12)))
            g = BipartiteGraph(tuple(range(nl)), tuple(range(nl, nl + nr)), edges)
        t = g.max_degree + rnd.choice((0, 0, 1))
        pc = {}
        for i in rnd.sample(range(len(g.edges)), rnd.randint(0, min(4, len(g.edges)))):
            pc[i] = rnd.randint(1, t)
            if not is_proper(g, pc):
                del pc[i]
        if t ** (len(g.edges) - len(pc)) <= BRUTE_LIMIT:
            return Instance(g, pc, t)


def check_against_brute(inst):
    want = brute_count(inst.graph.edges, inst.precoloring, inst.t)
    res = is_extendable(inst)
    assert res.status == (EXTENDABLE if want else NOT_EXTENDABLE)
    if want:
        assert_witness(inst, res)
    assert count_extensions(inst) == want


def test_against_naive_enumerator():
    rnd = random.Random(2024)
    for _ in range(60):
        check_against_brute(random_small_instance(rnd))


def test_parallel_edges_need_distinct_colors():
    g = BipartiteGraph((0,), (1,), ((0, 1), (0, 1)))
    assert count_extensions(Instance(g, {}, 2)) == 2
    assert is_extendable(Instance(g, {}, 1)).status == NOT_EXTENDABLE


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_count_invariant_under_symmetry(rnd):
    d = rnd.choice((2, 3))
    edges = all_edges(d)
    pc = {}
    for e in rnd.sample(edges, rnd.randint(0, d)):
        pc[e] = rnd.randint(1, d)
        if not is_proper(hypercube_graph(d), to_ids(d, pc)):
            del pc[e]
    g = rnd.choice(automorphisms(d))
    perm = list(range(1, d + 1))
    rnd.shuffle(perm)
    img = {g.apply_edge(e): perm[c - 1] for e, c in pc.items()}
    assert count_extensions(hypercube_instance(d, img)) == count_extensions(hypercube_instance(d, pc))


@settings(max_examples=80, deadline=None)
@given(st.randoms(use_true_random=False))
def test_monotone(rnd):
    d = rnd.choice((3, 4))
    inst = next(enumerate_precolorings(d, rnd.randint(1, d), mode="random", seed=rnd.randrange(10 ** 6), samples=1))
    base = is_extendable(inst).status
    g = inst.graph
    free = [i for i in range(len(g.edges)) if i not in inst.precoloring]
    i = rnd.choice(free)
    for c in range(1, d + 1):
        pc = dict(inst.precoloring, **{}) | {i: c}
        if not is_proper(g, pc):
            continue
        more = is_extendable(inst.with_precoloring(pc)).status
        if base == NOT_EXTENDABLE:
            assert more == NOT_EXTENDABLE
        if more == EXTENDABLE:
            assert base == EXTENDABLE
