"""Minimum bounded-degree vertex deletion over a nice tree decomposition.

Each bag vertex is either deleted (encoded -1) or kept with j in 0..Delta
already-forgotten kept neighbors, so a node has at most (Delta+2)^bag states.
Tables map state tuples (aligned with the sorted bag) to the minimum number of
deletions below the node.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import vecdp
from .decomp import NiceNode, NiceTreeDecomposition
from .graph import Graph

DELETED = -1
BdvdTable = dict[tuple[int, ...], int]


@dataclass(frozen=True)
class BdvdResult:
    k_min: int | None  # None when a budget was given and exceeded
    witness: list[int] | None
    within_budget: bool | None = None


def _bag_nbrs(g: Graph, bag: tuple[int, ...]) -> list[list[int]]:
    """Positions of each bag vertex's bag neighbors; bag is sorted, so (u, v) pairs are normalized."""
    es = g.edges
    return [[j for j, u in enumerate(bag) if u != v and ((u, v) if u < v else (v, u)) in es] for v in bag]


def _kept_ok(z: tuple[int, ...] | list[int], i: int, nbrs: list[list[int]], delta: int) -> bool:
    """A kept vertex's forgotten kept neighbors plus kept bag neighbors must not exceed delta.

    Pruning here is sound: every kept bag neighbor is either forgotten before
    this vertex (raising its j) or still in the bag when it is forgotten.
    """
    return z[i] + sum(1 for j in nbrs[i] if z[j] != DELETED) <= delta


def node_leaf(node: NiceNode, delta: int) -> BdvdTable:
    return {(DELETED,): 1, (0,): 0}


def node_introduce(child: BdvdTable, node: NiceNode, g: Graph, delta: int) -> BdvdTable:
    bag = node.bag
    p = bag.index(node.vertex)  # type: ignore[arg-type]
    nbrs = _bag_nbrs(g, bag)
    out: BdvdTable = {}
    for t, cost in child.items():
        out[t[:p] + (DELETED,) + t[p:]] = cost + 1
        z = t[:p] + (0,) + t[p:]
        if _kept_ok(z, p, nbrs, delta) and all(z[j] == DELETED or _kept_ok(z, j, nbrs, delta) for j in nbrs[p]):
            out[z] = cost
    return out


def node_forget(child: BdvdTable, node: NiceNode, g: Graph, delta: int) -> tuple[BdvdTable, dict]:
    """Returns the table and, per parent state, the child state achieving the minimum."""
    v = node.vertex
    child_bag = tuple(sorted(node.bag + (v,)))  # type: ignore[operator]
    p = child_bag.index(v)  # type: ignore[arg-type]
    vn = _bag_nbrs(g, child_bag)[p]
    out: BdvdTable = {}
    back: dict[tuple[int, ...], tuple[int, ...]] = {}
    for t, cost in child.items():
        z = list(t)
        if t[p] != DELETED:
            kept = [j for j in vn if t[j] != DELETED]
            if t[p] + len(kept) > delta:
                continue
            overflow = False
            for j in kept:
                z[j] += 1
                if z[j] > delta:
                    overflow = True
            if overflow:
                continue
        del z[p]
        key = tuple(z)
        if key not in out or cost < out[key]:
            out[key] = cost
            back[key] = t
    return out, back


def node_join(a: BdvdTable, b: BdvdTable, node: NiceNode, g: Graph, delta: int) -> tuple[BdvdTable, dict]:
    """Combine children with equal deletion patterns; j values add, shared deletions count once."""
    nbrs = _bag_nbrs(g, node.bag)
    by_pattern: dict[tuple[bool, ...], list[tuple[tuple[int, ...], int]]] = {}
    for t, cost in b.items():
        by_pattern.setdefault(tuple(x == DELETED for x in t), []).append((t, cost))
    out: BdvdTable = {}
    back: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for t1, c1 in a.items():
        pattern = tuple(x == DELETED for x in t1)
        shared = sum(pattern)
        for t2, c2 in by_pattern.get(pattern, ()):
            z = tuple(DELETED if x == DELETED else x + y for x, y in zip(t1, t2))
            if any(x > delta for x in z):
                continue
            if not all(x == DELETED or _kept_ok(z, i, nbrs, delta) for i, x in enumerate(z)):
                continue
            cost = c1 + c2 - shared
            if z not in out or cost < out[z]:
                out[z] = cost
                back[z] = (t1, t2)
    return out, back


def bdvd_solve(
    g: Graph,
    ntd: NiceTreeDecomposition,
    delta: int,
    budget: int | None = None,
    witness: bool = True,
) -> BdvdResult:
    """Minimum deletion count (and a witness set) for max degree <= delta.

    With a budget, entries costing more than the budget are pruned (costs never
    decrease towards the root), and `within_budget` reports the yes/no answer.
    Without a witness the array-based evaluator in `vecdp` is used.
    """
    if g.has_loops():
        raise ValueError("the deletion DP expects a loop-free graph")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not ntd.nodes:
        return BdvdResult(0, [] if witness else None, None if budget is None else True)
    if ntd.nodes[-1].bag:
        raise ValueError("root bag must be empty")
    if not witness:
        best = vecdp.bdvd_min(g, ntd, delta, budget)
        return BdvdResult(best, None, None if budget is None else best is not None)
    tables: list[BdvdTable | None] = [None] * len(ntd.nodes)
    backs: list[dict | None] = [None] * len(ntd.nodes)
    for i, nd in enumerate(ntd.nodes):
        back = None
        if nd.kind == "leaf":
            t = node_leaf(nd, delta)
        elif nd.kind == "introduce":
            t = node_introduce(tables[nd.children[0]], nd, g, delta)  # type: ignore[arg-type]
        elif nd.kind == "forget":
            t, back = node_forget(tables[nd.children[0]], nd, g, delta)  # type: ignore[arg-type]
        elif nd.kind == "join":
            t, back = node_join(tables[nd.children[0]], tables[nd.children[1]], nd, g, delta)  # type: ignore[arg-type]
        else:
            raise ValueError(f"unknown node kind {nd.kind!r}")
        if budget is not None:
            t = {z: c for z, c in t.items() if c <= budget}
        assert len(t) <= (delta + 2) ** len(nd.bag), "table exceeds (Delta+2)^bag entries"
        tables[i] = t
        if witness:
            backs[i] = back
        else:
            for c in nd.children:
                tables[c] = None
    root = tables[-1]
    best = root.get(())  # type: ignore[union-attr]
    if best is None:
        return BdvdResult(None, None, False)
    within = None if budget is None else True
    if not witness:
        return BdvdResult(best, None, within)
    return BdvdResult(best, _traceback(ntd, tables, backs), within)


def _traceback(ntd: NiceTreeDecomposition, tables: list, backs: list) -> list[int]:
    deleted: set[int] = set()
    stack = [(len(ntd.nodes) - 1, ())]
    while stack:
        i, z = stack.pop()
        nd = ntd.nodes[i]
        for v, x in zip(nd.bag, z):
            if x == DELETED:
                deleted.add(v)
        if nd.kind == "leaf":
            continue
        if nd.kind == "introduce":
            p = nd.bag.index(nd.vertex)
            stack.append((nd.children[0], z[:p] + z[p + 1 :]))
        elif nd.kind == "forget":
            stack.append((nd.children[0], backs[i][z]))
        else:
            t1, t2 = backs[i][z]
            stack.append((nd.children[0], t1))
            stack.append((nd.children[1], t2))
    return sorted(deleted)
