import pytest

from degbound.bdvd_dp import bdvd_solve
from degbound.csp import csp_bruteforce, make_csp, random_csp
from degbound.dc_dp import dc_decide
from degbound.decomp import to_nice
from degbound.reductions.pw import (
    bdvd_pw_delta1,
    bdvd_pw_general,
    dc_pw_delta1,
    dc_pw_general,
    dc_value_split,
    vertex_count_block_bdvd,
    width_bound,
)

TINY3 = make_csp(1, 3, [([1], [(2,)])])


def test_bdvd_delta1_counts():
    bd = bdvd_pw_delta1(TINY3)
    assert bd.meta["k_per_copy"] == 1 and bd.meta["copies"] == 3
    assert bd.params["k"] == 3 and bd.graph.n == 15
    assert bd.witness_problems() == []


def test_bdvd_delta1_forward_and_unsat():
    bd = bdvd_pw_delta1(TINY3)
    s = bd.forward_builder({1: 2})
    assert len(s) == 3 and bd.certificate_ok(s)
    unsat = make_csp(1, 3, [([1], [(1,)]), ([1], [(2,)])])
    bu = bdvd_pw_delta1(unsat)
    res = bdvd_solve(bu.graph, to_nice(bu.witness, bu.graph), 1)
    assert res.k_min > bu.params["k"]


def test_bdvd_general_counts():
    phi = make_csp(1, 4, [([1], [(3,)])])
    bd = bdvd_pw_general(phi)
    assert bd.delta == 2 and bd.meta["k_per_copy"] == 3 and bd.meta["copies"] == 12
    assert bd.params["k"] == 37
    assert vertex_count_block_bdvd(2) == 2 + 1 + 2 + 6 + 2
    assert bd.witness_problems() == []
    for v in (1, 2, 3, 4):
        one = make_csp(1, 4, [([1], [(v,)])])
        b = bdvd_pw_general(one)
        assert b.certificate_ok(b.forward_builder({1: v}))


def test_bdvd_general_block_vertex_count():
    # One column with no constraint tuples touching the block: only block and clique vertices.
    phi = make_csp(1, 5, [([1], [(1,)])])
    bd = bdvd_pw_general(phi)
    delta = bd.delta
    columns = bd.meta["copies"]
    per_block = vertex_count_block_bdvd(delta) - 1  # the right end is shared with the next block
    clique = 1 + delta
    assert bd.graph.n == 1 + columns * (per_block + clique)


def test_wrong_domain_rejected():
    with pytest.raises(ValueError):
        bdvd_pw_delta1(make_csp(1, 4, [([1], [(1,)])]))
    with pytest.raises(ValueError):
        bdvd_pw_general(TINY3)
    with pytest.raises(ValueError):
        dc_pw_delta1(TINY3, 2)
    with pytest.raises(ValueError):
        dc_pw_general(make_csp(1, 4, [([1], [(1,)])]), 2, 2)


def test_dc_delta1_copies_and_forward():
    phi = make_csp(1, 4, [([1], [(3,)])])
    bd = dc_pw_delta1(phi, 2)
    assert bd.meta["copies"] == 2
    assert bd.graph.n > 0 and bd.witness_problems() == []
    col = bd.forward_builder({1: 3})
    assert bd.certificate_ok(col)
    yes, _ = dc_decide(bd.graph, to_nice(bd.witness, bd.graph), 2, 1, witness=False)
    assert yes


def test_dc_general_copies_and_split():
    phi = make_csp(1, 6, [([1], [(5,)])])
    bd = dc_pw_general(phi, 2, 2)
    assert bd.meta["copies"] == 3
    assert [dc_value_split(v, 2) for v in range(1, 7)] == [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
    assert bd.certificate_ok(bd.forward_builder({1: 5}))
    assert bd.witness_problems() == []


def test_witness_widths_within_bound():
    for seed in range(3):
        for gen, B in ((bdvd_pw_delta1, 3), (bdvd_pw_general, 4)):
            phi = random_csp(2, 2, 2, B, 0.4, seed)
            bd = gen(phi)
            assert bd.witness_measure() <= bd.witness_bound
        phi = random_csp(2, 2, 2, 4, 0.4, seed)
        assert dc_pw_delta1(phi, 2).witness_measure() <= width_bound(phi)


def test_forward_certificates_on_satisfiable_instances():
    for seed in range(6):
        for gen, B in (
            (bdvd_pw_delta1, 3),
            (bdvd_pw_general, 4),
            (lambda p: dc_pw_delta1(p, 2), 4),
            (lambda p: dc_pw_general(p, 2, 2), 6),
        ):
            phi = random_csp(2, 2, 2, B, 0.5, seed)
            f = csp_bruteforce(phi)
            if f is None:
                continue
            bd = gen(phi)
            assert bd.certificate_ok(bd.forward_builder(f))
            with pytest.raises(ValueError):
                bd.forward_builder({1: 1})
