import itertools
import random

import pytest

from degbound.graph import (
    DuplicateEdgeError,
    Graph,
    GraphBuilder,
    HeaderError,
    VertexRangeError,
    emit_gr,
    max_degree,
    parse_gr,
    verify_coloring,
    verify_deletion_set,
)

K3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
P3 = Graph.from_edges(3, [(1, 2), (2, 3)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(1, n + 1), 2) if rng.random() < p])


def test_max_degree_examples():
    assert max_degree(Graph.from_edges(3, [])) == 0
    assert max_degree(K3) == 2
    assert max_degree(Graph.from_edges(1, [(1, 1)])) == 1


def test_parse_gr_examples():
    g = parse_gr("p tw 2 1\n1 2")
    assert g == Graph.from_edges(2, [(1, 2)])
    assert emit_gr(K3).strip() == "p tw 3 3\n1 2\n1 3\n2 3"
    loop = parse_gr("p tw 1 1\n1 1")
    assert loop.edges == frozenset({(1, 1)})


def test_parse_gr_ignores_comments():
    assert parse_gr("c hello\np tw 2 1\nc mid\n1 2\n") == Graph.from_edges(2, [(1, 2)])


@pytest.mark.parametrize(
    "text, err",
    [
        ("p td 2 1\n1 2", HeaderError),
        ("1 2", HeaderError),
        ("p tw 2 1\n1 3", VertexRangeError),
        ("p tw 2 2\n1 2\n2 1", DuplicateEdgeError),
    ],
)
def test_parse_gr_errors_are_distinct(text, err):
    with pytest.raises(err):
        parse_gr(text)


def test_round_trip_on_random_graphs():
    for seed in range(50):
        g = random_graph(1 + seed % 9, 0.4, seed)
        assert parse_gr(emit_gr(g)) == g


def test_verify_deletion_set_examples():
    assert verify_deletion_set(P3, 1, [2])
    assert not verify_deletion_set(P3, 1, [])
    assert verify_deletion_set(K3, 2, [])
    with pytest.raises(ValueError):
        verify_deletion_set(P3, 1, [4])


def test_deleting_everything_always_works():
    for seed in range(20):
        g = random_graph(7, 0.6, seed)
        for delta in range(3):
            assert verify_deletion_set(g, delta, g.vertices())


def test_verify_coloring_examples():
    assert verify_coloring(K3, 1, {1: 1, 2: 1, 3: 2}, 2)
    assert not verify_coloring(K3, 1, {1: 1, 2: 1, 3: 1}, 2)
    assert verify_coloring(Graph.from_edges(4, []), 0, {v: 1 for v in range(1, 5)}, 1)
    with pytest.raises(ValueError):
        verify_coloring(K3, 1, {1: 1, 2: 3, 3: 2}, 2)


def test_self_loop_counts_as_same_colored_neighbor():
    g = Graph.from_edges(1, [(1, 1)])
    assert not verify_coloring(g, 0, {1: 1}, 1)
    assert verify_coloring(g, 1, {1: 1}, 1)


def test_verify_coloring_monotone_in_delta():
    rng = random.Random(3)
    for seed in range(30):
        g = random_graph(6, 0.5, seed)
        c = {v: rng.randint(1, 2) for v in g.vertices()}
        for delta in range(4):
            if verify_coloring(g, delta, c, 2):
                assert verify_coloring(g, delta + 1, c, 2)


def test_graph_builder_assigns_ids_in_order():
    b = GraphBuilder()
    x = b.add("x")
    y = b.add("y")
    b.edge(x, y)
    g = b.build()
    assert (x, y) == (1, 2)
    assert g.edges == frozenset({(1, 2)})
