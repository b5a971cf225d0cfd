import pytest

from degbound.csp import csp_bruteforce, emit_csp, make_csp, parse_csp, random_csp
from degbound.graph import ParseError


def test_bruteforce_examples():
    assert csp_bruteforce(make_csp(1, 2, [([1], [(2,)])])) == {1: 2}
    assert csp_bruteforce(make_csp(1, 2, [([1], [(1,)]), ([1], [(2,)])])) is None
    assert csp_bruteforce(make_csp(2, 3, [([1, 2], [(1, 2), (2, 1)])])) == {1: 1, 2: 2}


def test_round_trip():
    phi = make_csp(2, 3, [([1, 2], [(1, 2), (2, 1)])])
    assert parse_csp(emit_csp(phi)) == phi
    empty = make_csp(3, 2, [], q=2)
    assert emit_csp(empty).strip() == "csp 3 0 2 2"
    assert parse_csp(emit_csp(empty)) == empty


@pytest.mark.parametrize(
    "text",
    [
        "csp 2 1 2 2\nscope 1 1\nsat 1 1",
        "csp 2 1 2 2\nscope 1 2\nsat 1",
        "csp 2 1 2 2\nscope 1 2\nsat 1 3",
        "csp 2 1 2 2\nscope 1 3\nsat 1 1",
        "bogus",
    ],
)
def test_parse_errors(text):
    with pytest.raises((ParseError, ValueError)):
        parse_csp(text)


def test_random_csp_full_density_and_determinism():
    phi = random_csp(2, 1, 2, 3, 1.0, seed=11)
    assert len(phi.constraints[0].sat) == 9
    assert csp_bruteforce(phi) is not None
    assert random_csp(3, 4, 2, 3, 0.3, seed=5) == random_csp(3, 4, 2, 3, 0.3, seed=5)
    with pytest.raises(ValueError):
        random_csp(2, 1, 3, 2, 0.5, seed=0)


def test_bruteforce_answers_satisfy_every_constraint():
    seen = set()
    for seed in range(60):
        phi = random_csp(3, 3, 2, 2, 0.25, seed)
        f = csp_bruteforce(phi)
        seen.add(f is None)
        if f is not None:
            assert all(tuple(f[v] for v in c.scope) in c.sat for c in phi.constraints)
    assert seen == {True, False}


def test_instance_validation():
    with pytest.raises(ValueError):
        make_csp(1, 1, [])
    with pytest.raises(ValueError):
        make_csp(1, 2, [([1], [])])
