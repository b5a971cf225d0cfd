import itertools

from degbound.graph import Graph, verify_coloring, verify_deletion_set
from degbound.oracle import (
    bdvd_min_bruteforce,
    dc_count_bruteforce,
    dc_decide_bruteforce,
    verify_detecting_family,
)

K3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
K4 = Graph.from_edges(4, list(itertools.combinations(range(1, 5), 2)))
P3 = Graph.from_edges(3, [(1, 2), (2, 3)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(1, v) for v in range(2, leaves + 2)])


def test_bdvd_examples():
    k, s = bdvd_min_bruteforce(P3, 1)
    assert k == 1 and verify_deletion_set(P3, 1, s)
    # Any single vertex works on P3 at Delta=1; the middle vertex is one witness.
    assert verify_deletion_set(P3, 1, [2])
    for delta in range(4):
        assert bdvd_min_bruteforce(star(delta + 1), delta)[0] == 1
    assert bdvd_min_bruteforce(K3, 2) == (0, [])


def test_bdvd_witness_minimality():
    import random

    rng = random.Random(1)
    for _ in range(20):
        g = Graph.from_edges(7, [e for e in itertools.combinations(range(1, 8), 2) if rng.random() < 0.5])
        for delta in range(3):
            k, s = bdvd_min_bruteforce(g, delta)
            assert len(s) == k and verify_deletion_set(g, delta, s)
            if k:
                assert not any(verify_deletion_set(g, delta, t) for t in itertools.combinations(g.vertices(), k - 1))


def test_dc_count_examples():
    assert dc_count_bruteforce(Graph.from_edges(1, []), 4, 0) == 4
    assert dc_count_bruteforce(K3, 2, 1) == 6
    assert dc_count_bruteforce(K3, 3, 0) == 6


def test_dc_count_path_p4():
    # Frozen from enumeration: the 16 colorings of P4 minus the 6 with a monochromatic P3.
    p4 = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    assert dc_count_bruteforce(p4, 2, 1) == 10


def test_dc_decide_examples():
    assert dc_decide_bruteforce(K3, 2, 0) is None
    c = dc_decide_bruteforce(K4, 2, 1)
    assert c is not None and verify_coloring(K4, 1, c, 2)
    assert sorted(list(c.values()).count(x) for x in (1, 2)) == [2, 2]
    assert dc_decide_bruteforce(Graph.from_edges(3, []), 1, 0) == {1: 1, 2: 1, 3: 1}


def test_detecting_family_examples():
    assert verify_detecting_family(3, 2, [[1], [2], [3]])
    assert not verify_detecting_family(3, 2, [[1, 2], [2, 3]])
    assert verify_detecting_family(1, 4, [[1]])


def test_detecting_family_pairs_formulation():
    # Cross-check against the definition over all pairs of functions on a small universe.
    fams = [[[1], [2]], [[1, 2]], [[1], [1, 2]], [[1, 2], [2, 3], [1, 3]], [[1, 2, 3]]]
    for fam in fams:
        u = max(max(s) for s in fam)
        for d in (2, 3):
            sums = {}
            injective = True
            for f in itertools.product(range(d), repeat=u):
                key = tuple(sum(f[x - 1] for x in s) for s in fam)
                if key in sums:
                    injective = False
                sums[key] = f
            assert verify_detecting_family(u, d, fam) == injective
