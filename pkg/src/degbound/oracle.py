"""Exhaustive reference solvers. Deliberately unoptimized so they stay obviously correct."""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence

import numpy as np

from .graph import Coloring, Graph, verify_coloring, verify_deletion_set


def bdvd_min_bruteforce(g: Graph, delta: int) -> tuple[int, list[int]]:
    """Minimum deletion set leaving max degree <= delta, by increasing subset size."""
    for k in range(g.n + 1):
        for s in itertools.combinations(g.vertices(), k):
            if verify_deletion_set(g, delta, s):
                return k, list(s)
    raise AssertionError("deleting every vertex always works")


def _colorings(g: Graph, chi: int) -> Iterable[Coloring]:
    for values in itertools.product(range(1, chi + 1), repeat=g.n):
        yield {v: values[v - 1] for v in g.vertices()}


def dc_count_bruteforce(g: Graph, chi: int, delta: int) -> int:
    """Number of colorings in 1..chi whose classes induce max degree <= delta."""
    return sum(1 for c in _colorings(g, chi) if verify_coloring(g, delta, c, chi))


def dc_decide_bruteforce(g: Graph, chi: int, delta: int) -> Coloring | None:
    """First valid coloring in lexicographic order, or None."""
    for c in _colorings(g, chi):
        if verify_coloring(g, delta, c, chi):
            return c
    return None


def verify_detecting_family(universe_size: int, d: int, family: Sequence[Iterable[int]]) -> bool:
    """True iff no nonzero h in {-(d-1)..d-1}^U has zero sum over every family set.

    Family sets are 1-indexed subsets of the universe.
    """
    u = universe_size
    if u == 0:
        return True
    incidence = np.zeros((len(family), u), dtype=np.int64)
    for row, subset in enumerate(family):
        for x in subset:
            if not 1 <= x <= u:
                raise ValueError(f"family element {x} outside 1..{u}")
            incidence[row, x - 1] = 1
    values = np.arange(-(d - 1), d, dtype=np.int64)
    # Enumerate h in chunks: a full product over the tail coordinates, one head value at a time.
    tail = u - 1
    grids = np.meshgrid(*([values] * tail), indexing="ij") if tail else []
    tail_vectors = np.stack([gr.ravel() for gr in grids], axis=1) if tail else np.zeros((1, 0), np.int64)
    for head in values:
        h = np.concatenate([np.full((len(tail_vectors), 1), head, np.int64), tail_vectors], axis=1)
        sums = h @ incidence.T if len(family) else np.zeros((len(h), 0), np.int64)
        zero_everywhere = np.all(sums == 0, axis=1)
        nonzero_h = np.any(h != 0, axis=1)
        if np.any(zero_everywhere & nonzero_h):
            return False
    return True
