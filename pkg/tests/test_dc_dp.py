import itertools
import random

import pytest

from degbound.bench import random_join_instance
from degbound.dc_dp import (
    DcParams,
    dc_count,
    dc_decide,
    decode_state,
    encode_state,
    identifier,
    join_fast,
    join_naive,
    node_forget,
    node_introduce,
    node_leaf,
)
from degbound.decomp import NiceNode, TreeDecomposition, heuristic_decomposition, to_nice
from degbound.graph import Graph, verify_coloring
from degbound.oracle import dc_count_bruteforce, dc_decide_bruteforce

K3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
P4 = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)])


def nice(g: Graph):
    return to_nice(heuristic_decomposition(g), g)


def test_count_examples():
    single = Graph.from_edges(1, [])
    assert dc_count(single, nice(single), 3, 0) == 3
    assert dc_count(K3, nice(K3), 2, 1) == 6
    assert dc_count(P4, nice(P4), 2, 1) == 10
    assert dc_count(P4, nice(P4), 2, 1, join="naive") == 10


def test_state_encoding_round_trip():
    p = DcParams(3, 2)
    pairs = ((1, 0), (3, 2), (2, 1))
    assert decode_state(p, encode_state(p, pairs)) == pairs
    with pytest.raises(ValueError):
        DcParams(0, 1)


def test_leaf_table():
    p = DcParams(2, 1)
    table = node_leaf(NiceNode("leaf", (1,), 1), p)
    assert table == {encode_state(p, [(1, 0)]): 1, encode_state(p, [(2, 0)]): 1}
    assert encode_state(p, [(1, 1)]) not in table


def test_introduce_respects_bag_check():
    g = Graph.from_edges(2, [(1, 2)])
    p = DcParams(1, 0)
    child = node_leaf(NiceNode("leaf", (1,), 1), p)
    assert node_introduce(child, NiceNode("introduce", (1, 2), 2, (0,)), g, p) == {}
    p1 = DcParams(1, 1)
    full = {encode_state(p1, [(1, 1)]): 1}
    assert node_introduce(full, NiceNode("introduce", (1, 2), 2, (0,)), g, p1) == {}


def test_forget_isolated_vertex_doubles():
    g = Graph.from_edges(2, [])
    p = DcParams(2, 1)
    child = {encode_state(p, [(1, 0), (c, 0)]): 1 for c in (1, 2)}
    out = node_forget(child, NiceNode("forget", (1,), 2, (0,)), g, p)
    assert out == {encode_state(p, [(1, 0)]): 2}


def test_join_naive_hand_example():
    g = Graph.from_edges(1, [])
    p = DcParams(1, 1)
    a = {encode_state(p, [(1, 0)]): 2, encode_state(p, [(1, 1)]): 1}
    node = NiceNode("join", (1,), None, (0, 1))
    out = join_naive(a, dict(a), node, g, p)
    assert out[encode_state(p, [(1, 1)])] == 4
    assert out[encode_state(p, [(1, 0)])] == 4
    assert join_fast(a, dict(a), node, g, p) == out


def test_join_with_zero_indicator_is_identity_on_zero_slice():
    inst = random_join_instance(3, 2, 2, seed=1)
    base = inst.params.base
    ones = {s: 1 for s in inst.right if all(x % base == 0 for x in s)}
    args = (inst.node, inst.graph, inst.params)
    out = join_naive(inst.left, ones, *args)
    for s, v in inst.left.items():
        if tuple(x // base for x in s) in {tuple(x // base for x in t) for t in ones}:
            assert out[s] == v


def test_join_empty_bag_is_scalar_product():
    node = NiceNode("join", (), None, (0, 1))
    g = Graph.from_edges(0, [])
    p = DcParams(2, 1)
    assert join_naive({(): 6}, {(): 7}, node, g, p) == {(): 42}
    assert join_fast({(): 6}, {(): 7}, node, g, p) == {(): 42}


def test_identifier_and_carry():
    assert identifier((2, 1), 2) == 5
    # Digits 2 and 2 at Delta=2 add to identifier 4 = "11" in base 3, digit sum 2 instead of 4.
    combined = identifier((2,), 2) + identifier((2,), 2)
    assert combined == identifier((1, 1), 2)
    p = DcParams(1, 2)
    g = Graph.from_edges(1, [])
    node = NiceNode("join", (1,), None, (0, 1))
    a = {encode_state(p, [(1, 2)]): 1}
    assert join_fast(a, a, node, g, p) == join_naive(a, a, node, g, p) == {}


@pytest.mark.parametrize("multiply", ["schoolbook", "ntt", "auto"])
def test_join_fast_matches_naive_small(multiply):
    for seed in range(40):
        rng = random.Random(seed)
        inst = random_join_instance(rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 2), seed)
        args = (inst.left, inst.right, inst.node, inst.graph, inst.params)
        assert join_fast(*args, multiply=multiply) == join_naive(*args)


def test_join_fast_rejects_unknown_backend():
    inst = random_join_instance(1, 1, 1, seed=0)
    with pytest.raises(ValueError):
        join_fast(inst.left, inst.right, inst.node, inst.graph, inst.params, multiply="fft")


def test_random_counts_and_decisions_match_oracle():
    rng = random.Random(8)
    for _ in range(25):
        n = rng.randint(1, 7)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5])
        ntd = nice(g)
        for chi in (1, 2, 3):
            for delta in (0, 1, 2):
                assert dc_count(g, ntd, chi, delta) == dc_count_bruteforce(g, chi, delta)
                yes, col = dc_decide(g, ntd, chi, delta)
                assert yes == (dc_decide_bruteforce(g, chi, delta) is not None)
                assert dc_decide(g, ntd, chi, delta, witness=False)[0] == yes
                if yes:
                    assert verify_coloring(g, delta, col, chi)


def test_root_must_be_empty():
    g = Graph.from_edges(2, [(1, 2)])
    ntd = to_nice(TreeDecomposition({1: frozenset({1, 2})}, ()), g, keep=(1,))
    with pytest.raises(ValueError):
        dc_count(g, ntd, 2, 1)
