import math
import random

import pytest

from degbound.reductions.xsat import (
    DetectingFamily,
    VarClausePartition,
    build_detecting_family,
    check_detecting_family,
    emit_cnf,
    make_formula,
    pad_variables,
    parse_cnf,
    partition_problems,
    partition_variables_clauses,
    random_satisfiable_xsat,
    random_xsat,
    sat34_to_xsat34,
    sat_bruteforce,
    sat_satisfied,
    xsat_aux,
    xsat_bruteforce,
    xsat_forward,
    xsat_satisfied,
)


def test_formula_validation():
    with pytest.raises(ValueError):
        make_formula(3, [(1, 2)])
    with pytest.raises(ValueError):
        make_formula(3, [(1, 1, 2)])
    with pytest.raises(ValueError):
        make_formula(3, [(1, 2, 4)])
    with pytest.raises(ValueError):
        make_formula(4, [(1, 2, 3)] * 5)


def test_transform_counts():
    phi = make_formula(3, [(1, 2, 3)])
    out = sat34_to_xsat34(phi)
    assert out.n == 7 and out.m == 3


@pytest.mark.parametrize("assignment", [[None, False, True, False], [None, True, True, True], [None, True, False, False], [None, False, False, True], [None, True, False, True]])
def test_forward_cases(assignment):
    phi = make_formula(3, [(1, 2, 3)])
    ext = xsat_forward(phi, assignment)
    assert xsat_satisfied(sat34_to_xsat34(phi), ext)
    if assignment[2]:
        _, beta, gamma, _ = xsat_aux(3, 0)
        assert not ext[beta] and not ext[gamma]


def test_forward_rejects_unsatisfying():
    phi = make_formula(3, [(1, 2, 3)])
    with pytest.raises(ValueError):
        xsat_forward(phi, [None, False, False, False])


def test_transform_equivalence_on_random_formulas():
    for seed in range(60):
        phi = random_xsat(5, 2, seed)
        left = sat_bruteforce(phi)
        right = xsat_bruteforce(sat34_to_xsat34(phi))
        assert (left is None) == (right is None)
        if left is not None:
            assert sat_satisfied(phi, left)
            assert xsat_satisfied(sat34_to_xsat34(phi), xsat_forward(phi, left))


def test_cnf_round_trip():
    phi = make_formula(4, [(1, -2, 3), (-1, 2, 4)])
    assert parse_cnf(emit_cnf(phi)) == phi


def test_partition_bound_example():
    phi, _ = random_satisfiable_xsat(16, 10, seed=2)
    part = partition_variables_clauses(phi, 4)
    assert len(part.var_groups) <= 9 + 16 / 4
    assert partition_problems(phi, part) == []


def test_single_clause_lands_in_three_groups():
    phi = make_formula(9, [(1, 2, 3)])
    part = partition_variables_clauses(phi, 3)
    group = part.group_of()
    assert len({group[1], group[2], group[3]}) == 3


def test_partition_checker_rejects_shared_group():
    phi = make_formula(9, [(1, 2, 3)])
    bad = VarClausePartition(3, ((1, 2, 4), (3, 5, 6), (7, 8, 9)), ((0,),))
    assert partition_problems(phi, bad)


def test_partition_rejects_large_b():
    with pytest.raises(ValueError):
        partition_variables_clauses(make_formula(9, [(1, 2, 3)]), 4)


def test_random_partitions():
    rng = random.Random(0)
    for seed in range(10):
        n = rng.randint(9, 40)
        phi = random_xsat(n, rng.randint(1, n), seed)
        b = rng.randint(1, math.isqrt(n))
        assert partition_problems(phi, partition_variables_clauses(phi, b)) == []


def test_pad_variables():
    phi = make_formula(3, [(1, 2, 3)])
    padded = pad_variables(phi, 8)
    assert padded.n == 8 and padded.clauses == phi.clauses


def test_detecting_families():
    assert build_detecting_family(3, 2).sets == ((1,), (2,), (3,))
    assert build_detecting_family(6, 4).universe == 6
    with pytest.raises(ValueError):
        check_detecting_family(DetectingFamily(3, 2, ((1, 2), (2, 3))))
    with pytest.raises(ValueError):
        build_detecting_family(3, 2, provider="lindstrom")
