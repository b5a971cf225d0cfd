import pytest

from degbound.decomp import forest_to_decomposition, validate
from degbound.graph import Graph, same_color_counts
from degbound.reductions.td import (
    bdvd_td,
    bdvd_td_budget,
    check_mcc,
    dc_td,
    dc_td_delta,
    depth_bound,
    extend_clique,
    pad_mcc,
    random_mcc,
)

COMPLETE_2_2 = Graph.from_edges(4, [(v, v) for v in range(1, 5)] + [(1, 3), (1, 4), (2, 3), (2, 4)])


def test_check_mcc_rejects_bad_inputs():
    with pytest.raises(ValueError):
        check_mcc(COMPLETE_2_2, 3)
    with pytest.raises(ValueError):
        check_mcc(Graph.from_edges(4, [(1, 1), (2, 2), (3, 3), (1, 3)]), 2)
    with pytest.raises(ValueError):
        check_mcc(Graph.from_edges(4, [(v, v) for v in range(1, 5)] + [(1, 2)]), 2)
    assert check_mcc(COMPLETE_2_2, 2).n == 2


def test_pad_mcc_keeps_cliques():
    g, clique = random_mcc(3, 2, 0.3, seed=1)
    padded, k, dummies = pad_mcc(g, 3)
    assert k == 4 and len(dummies) == 2
    inst = check_mcc(padded, k)
    assert inst.is_clique(extend_clique(clique, 2, 3, 4))


def test_bdvd_td_counts():
    bd = bdvd_td(COMPLETE_2_2, 2)
    assert bd.meta["choice_instances"] == 2 * 2 * 3
    assert bd.delta == 8
    mult = bd.meta["edge_multiplicity"]
    assert all(c == (1 if u == v else 2) for key, c in mult.items() for u, v in [key.split("-")])
    assert bd.params["k"] == bdvd_td_budget(2, 2, 8)


def test_bdvd_td_forward_has_exact_budget_size():
    bd = bdvd_td(COMPLETE_2_2, 2)
    s = bd.forward_builder([1, 3])
    assert len(s) == bd.params["k"] and bd.certificate_ok(s)
    with pytest.raises(ValueError):
        bd.forward_builder([1, 2])


def test_bdvd_td_depth():
    bd = bdvd_td(COMPLETE_2_2, 2)
    depth = bd.witness_measure()
    assert depth <= depth_bound(2)
    assert validate(forest_to_decomposition(bd.witness, bd.graph), bd.graph) <= depth - 1


def test_dc_td_delta_formula():
    assert dc_td_delta(2, 2, 8) == 8
    assert dc_td(COMPLETE_2_2, 2).delta == 8


def test_dc_td_forward_coloring_and_hub_load():
    bd = dc_td(COMPLETE_2_2, 2)
    col = bd.forward_builder([2, 4])
    assert bd.certificate_ok(col)
    assert same_color_counts(bd.graph, col)[bd.meta["u"]] == bd.delta
    assert bd.witness_measure() <= depth_bound(2)


def test_dc_td_needs_large_delta():
    sparse = Graph.from_edges(4, [(v, v) for v in range(1, 5)] + [(1, 3)])
    with pytest.raises(ValueError):
        dc_td(sparse, 2)


def test_random_planted_instances():
    for seed in range(3):
        g, clique = random_mcc(2, 3, 0.6, seed)
        bd = bdvd_td(g, 2)
        assert bd.certificate_ok(bd.forward_builder(clique))
        assert bd.witness_problems() == []
        dc = dc_td(g, 2)
        assert dc.certificate_ok(dc.forward_builder(clique))
        assert dc.witness_problems() == []
