import dataclasses

import pytest

from degbound.gadgets import (
    GadgetBuilder,
    all_hosts,
    clique_palette,
    contract_violations,
    difference_gadget,
    empty_palette,
    equality_gadget,
    exclusion_gadget,
    extend_coloring,
    implication_gadget,
    palette_gadget,
    reference_equality,
    rigid_equality,
    splice_bruteforce_violations,
    verify_gadget_contract,
)
from degbound.graph import verify_coloring


def test_reference_equality_shape():
    for delta, connectors in ((1, 3), (2, 5)):
        q = reference_equality(2, delta)
        local, ids = q.local_graph()
        assert len(q.internal) == connectors
        for lab in q.internal:
            x = ids[lab]
            assert set(local.adj[x]) == {ids["u1"], ids["u2"]}


def test_reference_equality_contract():
    assert verify_gadget_contract(reference_equality(2, 1), 2, 1, all_hosts(2, 4))
    assert verify_gadget_contract(reference_equality(2, 2), 2, 2)


def test_too_few_connectors_rejected():
    assert not verify_gadget_contract(reference_equality(2, 1, 2), 2, 1)
    assert not verify_gadget_contract(reference_equality(2, 2, 4), 2, 2)


def test_chi3_gadgets_verified():
    assert verify_gadget_contract(equality_gadget(3, 1), 3, 1)
    assert verify_gadget_contract(palette_gadget(3, 1), 3, 1)
    assert verify_gadget_contract(rigid_equality(3, 1), 3, 1)


def test_palette_gadgets():
    assert empty_palette(2, 3).internal == ()
    assert palette_gadget(2, 1).internal == ()
    assert verify_gadget_contract(palette_gadget(2, 1), 2, 1)
    assert not verify_gadget_contract(empty_palette(3, 1), 3, 1)
    with pytest.raises(ValueError):
        clique_palette(2, 1)


def test_difference_gadget():
    d = difference_gadget(2, 1, 2)
    assert len(d.internal) == 2 + 2 * 3
    assert verify_gadget_contract(d, 2, 1)
    assert difference_gadget(2, 1, 0).internal == ()
    assert verify_gadget_contract(difference_gadget(2, 2, 3), 2, 2)
    assert verify_gadget_contract(difference_gadget(2, 2, 1), 2, 2)


def test_exclusion_structure_equal_indices():
    e = exclusion_gadget(2, 1, 1, 1)
    local, ids = e.local_graph()
    v1, a, v2 = ids[("e", "v1")], ids[("e", "a")], ids[("e", "v2")]
    assert set(local.adj[a]) & {v1, v2} == {v1, v2}
    assert verify_gadget_contract(e, 2, 1)


def test_exclusion_chain_for_distinct_indices_chi3():
    e = exclusion_gadget(3, 1, 1, 2)
    local, ids = e.local_graph()
    chain = [("e", "v1"), ("e", "a", 1), ("e", "a", 2), ("e", "a", 3), ("e", "v2")]
    for x, y in zip(chain, chain[1:]):
        assert ids[y] in local.adj[ids[x]]


def test_implication_uses_one_exclusion_at_chi2():
    i = implication_gadget(2, 1, 1, 2)
    assert sum(1 for lab in i.internal if lab[-1] == "a") == 1
    assert verify_gadget_contract(i, 2, 1)


def test_broken_gadget_rejected():
    e = exclusion_gadget(2, 1, 1, 2)
    broken = dataclasses.replace(e, key=e.key + "-broken", edges=e.edges[1:])
    assert contract_violations(broken, 2, 1)


def test_profile_matches_splice_bruteforce():
    for g in (reference_equality(2, 1), reference_equality(2, 1, 2), difference_gadget(2, 1, 1)):
        profile_ok = verify_gadget_contract(g, 2, 1, all_hosts(2, 3))
        brute_ok = all(not splice_bruteforce_violations(g, h) for h in all_hosts(2, 3))
        assert profile_ok == brute_ok


def test_wrong_parameters_rejected():
    with pytest.raises(ValueError):
        contract_violations(reference_equality(2, 1), 2, 2)
    with pytest.raises(ValueError):
        reference_equality(3, 1)
    with pytest.raises(ValueError):
        exclusion_gadget(2, 0, 1, 1)


def test_builder_splice_and_extend_coloring():
    b = GadgetBuilder()
    u, v = b.add("u"), b.add("v")
    b.splice(equality_gadget(2, 1), {"u1": u, "u2": v}, "q")
    g = b.build()
    col = extend_coloring(b, {u: 1, v: 1})
    assert verify_coloring(g, 1, col, 2)
