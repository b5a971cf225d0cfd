import itertools
import random

import pytest

from degbound.bdvd_dp import bdvd_solve
from degbound.csp import make_csp
from degbound.decomp import TreeDecomposition, heuristic_decomposition, path_decomposition_from_bags, to_nice
from degbound.graph import Graph, verify_deletion_set
from degbound.oracle import bdvd_min_bruteforce
from degbound.reductions.pw import bdvd_pw_delta1

P3 = Graph.from_edges(3, [(1, 2), (2, 3)])
C4 = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


def nice(g: Graph):
    return to_nice(heuristic_decomposition(g), g)


def test_p3_trivial_decomposition():
    ntd = to_nice(TreeDecomposition({1: frozenset({1, 2, 3})}, ()), P3)
    res = bdvd_solve(P3, ntd, 1)
    assert res.k_min == 1 and verify_deletion_set(P3, 1, res.witness)


def test_c4_matches_oracle():
    ntd = to_nice(path_decomposition_from_bags([{1, 2, 4}, {2, 3, 4}]), C4)
    # One deletion leaves P3, which still has a degree-2 vertex.
    assert bdvd_solve(C4, ntd, 1).k_min == bdvd_min_bruteforce(C4, 1)[0] == 2


@pytest.mark.parametrize("delta", [0, 1, 2, 3])
def test_star(delta):
    g = Graph.from_edges(delta + 2, [(1, v) for v in range(2, delta + 3)])
    assert bdvd_solve(g, nice(g), delta).k_min == 1


def test_reduction_witness_budget():
    phi = make_csp(1, 3, [([1], [(2,)])])
    bd = bdvd_pw_delta1(phi)
    res = bdvd_solve(bd.graph, to_nice(bd.witness, bd.graph), 1, budget=bd.params["k"])
    assert res.within_budget


def test_random_against_oracle_and_monotone():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.45])
        ntd = nice(g)
        prev = None
        for delta in range(4):
            res = bdvd_solve(g, ntd, delta)
            assert res.k_min == bdvd_min_bruteforce(g, delta)[0]
            assert len(res.witness) == res.k_min and verify_deletion_set(g, delta, res.witness)
            assert bdvd_solve(g, ntd, delta, witness=False).k_min == res.k_min
            if prev is not None:
                assert res.k_min <= prev
            prev = res.k_min


def test_budget_answers():
    g = Graph.from_edges(5, list(itertools.combinations(range(1, 6), 2)))
    ntd = nice(g)
    k = bdvd_min_bruteforce(g, 1)[0]
    assert bdvd_solve(g, ntd, 1, budget=k).within_budget
    assert not bdvd_solve(g, ntd, 1, budget=k - 1).within_budget
    assert not bdvd_solve(g, ntd, 1, budget=k - 1, witness=False).within_budget


def test_loops_rejected():
    g = Graph.from_edges(2, [(1, 1), (1, 2)])
    with pytest.raises(ValueError):
        bdvd_solve(g, to_nice(TreeDecomposition({1: frozenset({1, 2})}, ()), g), 1)
