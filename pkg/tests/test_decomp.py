import itertools
import random
from collections import Counter

import pytest

from degbound.decomp import (
    EliminationForest,
    TreeDecomposition,
    emit_forest,
    emit_td,
    forest_to_decomposition,
    heuristic_decomposition,
    parse_forest,
    parse_td,
    path_decomposition_from_bags,
    to_nice,
    validate,
    validate_forest,
    validate_nice,
)
from degbound.graph import Graph, ParseError

K3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
K4 = Graph.from_edges(4, list(itertools.combinations(range(1, 5), 2)))
P4 = Graph.from_edges(4, [(1, 2), (2, 3), (3, 4)])
C5 = Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < p])


def test_validate_examples():
    assert validate(TreeDecomposition({1: frozenset({1, 2, 3})}, ()), K3) == 2
    split = TreeDecomposition(
        {1: frozenset({1, 2}), 2: frozenset({2, 3}), 3: frozenset({1, 3})}, ((1, 2), (2, 3))
    )
    problems = validate(split, K3)
    assert isinstance(problems, list) and any("1" in p for p in problems)
    missing = path_decomposition_from_bags([{1, 2}, {3}])
    assert isinstance(validate(missing, K3), list)


def test_validate_reports_uncovered_vertex_and_cycle():
    assert isinstance(validate(TreeDecomposition({1: frozenset({1, 2})}, ()), K3), list)
    cyc = TreeDecomposition({1: frozenset({1, 2, 3}), 2: frozenset({1}), 3: frozenset({1})}, ((1, 2), (2, 3), (3, 1)))
    assert isinstance(validate(cyc, K3), list)


def test_to_nice_examples():
    ntd = to_nice(TreeDecomposition({1: frozenset({1, 2, 3})}, ()), K3)
    kinds = Counter(nd.kind for nd in ntd.nodes)
    assert kinds == Counter({"leaf": 1, "introduce": 2, "forget": 3})
    assert ntd.nodes[-1].bag == ()
    p4 = to_nice(path_decomposition_from_bags([{1, 2}, {2, 3}, {3, 4}]), P4)
    assert p4.width == 1 and validate_nice(p4, P4) == 1
    one = to_nice(TreeDecomposition({1: frozenset({1})}, ()), Graph.from_edges(1, []))
    assert [nd.kind for nd in one.nodes] == ["leaf", "forget"]


def test_to_nice_rejects_invalid_input():
    with pytest.raises(ValueError):
        to_nice(path_decomposition_from_bags([{1, 2}, {3}]), K3)


def test_to_nice_preserves_width_and_validates():
    for seed in range(40):
        g = random_graph(2 + seed % 9, 0.4, seed)
        for strategy in ("min-degree", "min-fill"):
            td = heuristic_decomposition(g, strategy)
            width = validate(td, g)
            ntd = to_nice(td, g)
            assert validate_nice(ntd, g) == width
            assert ntd.nodes[-1].bag == ()
            assert len(ntd.nodes) <= 4 * (width + 1) * max(g.n, 1) + 1


def test_heuristic_examples():
    tree = Graph.from_edges(6, [(1, 2), (1, 3), (3, 4), (3, 5), (5, 6)])
    assert validate(heuristic_decomposition(tree, "min-degree"), tree) == 1
    assert validate(heuristic_decomposition(K4, "min-degree"), K4) == 3
    assert validate(heuristic_decomposition(C5, "min-fill"), C5) == 2


def test_heuristic_ignores_loops_and_handles_isolated_vertices():
    g = Graph.from_edges(4, [(1, 1), (1, 2)])
    assert validate(heuristic_decomposition(g), g) == 1


def test_forest_to_decomposition_examples():
    star = Graph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    f = EliminationForest({1: None, 2: 1, 3: 1, 4: 1})
    assert validate(forest_to_decomposition(f, star), star) == 1
    balanced = EliminationForest({2: None, 1: 2, 3: 2, 4: 3})
    assert validate_forest(balanced, P4) == 3
    assert validate(forest_to_decomposition(balanced, P4), P4) <= 2
    single = Graph.from_edges(1, [])
    assert validate(forest_to_decomposition(EliminationForest({1: None}), single), single) == 0


def test_forest_to_decomposition_rejects_bad_forest():
    with pytest.raises(ValueError):
        forest_to_decomposition(EliminationForest({1: None, 2: None}), Graph.from_edges(2, [(1, 2)]))


def test_validate_forest_examples():
    assert validate_forest(EliminationForest({1: None, 2: 1, 3: 2}), K3) == 3
    problems = validate_forest(EliminationForest({1: None, 2: 1, 3: 1}), K3)
    assert isinstance(problems, list) and problems
    edgeless = Graph.from_edges(3, [])
    assert validate_forest(EliminationForest({1: None, 2: None, 3: None}), edgeless) == 1


def test_td_and_forest_formats_round_trip():
    td = heuristic_decomposition(C5)
    text = emit_td(td, 5)
    assert text.startswith(f"s td {len(td.bags)} {validate(td, C5) + 1} 5")
    back, n = parse_td(text)
    assert n == 5 and validate(back, C5) == validate(td, C5)
    f = EliminationForest({2: None, 1: 2, 3: 2, 4: 3})
    assert parse_forest(emit_forest(f)).parent == f.parent


def test_parse_td_rejects_garbage():
    with pytest.raises((ParseError, ValueError)):
        parse_td("s td 1 2 3\nb 1 1 2 9\n")
