"""Random join inputs and timing suites comparing the naive and polynomial joins."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from .dc_dp import DcParams, DcTable, bag_check, dc_count, join_fast, join_naive
from .decomp import NiceNode, heuristic_decomposition, to_nice
from .graph import Graph


@dataclass(frozen=True)
class JoinInstance:
    graph: Graph
    node: NiceNode
    params: DcParams
    left: DcTable
    right: DcTable


def random_join_instance(
    bag_size: int,
    chi: int,
    delta: int,
    seed: int,
    edge_p: float = 0.5,
    fill: float = 0.5,
    max_bits: int = 128,
    entries: int | None = None,
    color_vectors: int | None = None,
) -> JoinInstance:
    """A join node over a random bag graph on 1..bag_size, with two random child tables.

    By default every valid state enters each table with probability `fill`.
    With `entries`, each table instead holds up to that many sampled states
    whose colors come from `color_vectors` fixed random color vectors (all
    color vectors if None). Counts are uniform in [1, 2^max_bits].
    """
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(1, bag_size + 1), 2) if rng.random() < edge_p]
    g = Graph.from_edges(bag_size, edges)
    node = NiceNode("join", tuple(range(1, bag_size + 1)), None, (0, 1))
    params = DcParams(chi, delta)
    base = params.base
    nbrs = [[j for j in range(bag_size) if (min(i, j) + 1, max(i, j) + 1) in g.edges] for i in range(bag_size)]

    if entries is None:
        states = [
            s for s in itertools.product(range(chi * base), repeat=bag_size) if bag_check(s, nbrs, base, delta)
        ]

        def table() -> DcTable:
            return {s: rng.randint(1, 1 << max_bits) for s in states if rng.random() < fill}

    else:
        palette = None
        if color_vectors is not None:
            palette = [tuple(rng.randrange(chi) for _ in range(bag_size)) for _ in range(color_vectors)]

        def table() -> DcTable:
            out: DcTable = {}
            for _ in range(4 * entries):
                if len(out) >= entries:
                    break
                cols = rng.choice(palette) if palette else tuple(rng.randrange(chi) for _ in range(bag_size))
                s = tuple(c * base + rng.randrange(base) for c in cols)
                if bag_check(s, nbrs, base, delta):
                    out[s] = rng.randint(1, 1 << max_bits)
            return out

    return JoinInstance(g, node, params, table(), table())


def time_call(fn, repetitions: int) -> tuple[float, object]:  # type: ignore[no-untyped-def]
    """Best wall time over `repetitions` runs, with the last result."""
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    best, out = float("inf"), None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_join(
    sizes: list[int], chi: int, delta: int, repetitions: int, seed: int = 0, entries: int = 2000
) -> list[dict]:
    """One row per bag size over an edgeless bag and a single color vector, so every sampled
    state is valid and all pairs meet in one group."""
    rows = []
    for s in sizes:
        inst = random_join_instance(s, chi, delta, seed + s, edge_p=0.0, max_bits=64, entries=entries, color_vectors=1)
        args = (inst.left, inst.right, inst.node, inst.graph, inst.params)
        t_naive, r_naive = time_call(lambda: join_naive(*args), repetitions)
        t_fast, r_fast = time_call(lambda: join_fast(*args), repetitions)
        rows.append(
            {
                "bag": s,
                "entries": len(inst.left),
                "naive_s": t_naive,
                "fast_s": t_fast,
                "agree": r_naive == r_fast,
            }
        )
    return rows


def bench_dp(sizes: list[int], chi: int, delta: int, repetitions: int, seed: int = 0) -> list[dict]:
    """Random graphs with n = 2 * size and edge probability 0.5; counts with both joins."""
    rows = []
    for s in sizes:
        rng = random.Random(seed + s)
        n = 2 * s
        g = Graph.from_edges(n, [(u, v) for u, v in itertools.combinations(range(1, n + 1), 2) if rng.random() < 0.5])
        ntd = to_nice(heuristic_decomposition(g), g)
        t_naive, c_naive = time_call(lambda: dc_count(g, ntd, chi, delta, join="naive"), repetitions)
        t_fast, c_fast = time_call(lambda: dc_count(g, ntd, chi, delta, join="fast"), repetitions)
        rows.append({"n": n, "width": ntd.width, "naive_s": t_naive, "fast_s": t_fast, "agree": c_naive == c_fast})
    return rows
