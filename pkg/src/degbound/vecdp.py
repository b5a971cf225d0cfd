"""Array-based evaluation of the decision DPs over nice tree decompositions.

Same state encodings and transitions as the dict-based solvers in `dc_dp`
and `bdvd_dp`, but each table is a 2-D numpy array (one row per state), so a
node costs a handful of vectorized operations. No traceback is kept; the
dict-based solvers remain the source of witnesses and exact counts.
"""

from __future__ import annotations

import numpy as np

from .decomp import NiceNode, NiceTreeDecomposition
from .graph import Graph

_STATE = np.int16


class _Nbrs:
    """Lazily computed positions of each bag vertex's bag neighbors."""

    def __init__(self, g: Graph, bag: tuple[int, ...]) -> None:
        self.edges = g.edges
        self.bag = bag
        self.cache: dict[int, list[int]] = {}

    def __getitem__(self, i: int) -> list[int]:
        out = self.cache.get(i)
        if out is None:
            v, es = self.bag[i], self.edges
            out = [j for j, u in enumerate(self.bag) if u != v and ((u, v) if u < v else (v, u)) in es]
            self.cache[i] = out
        return out


def _radix(s: np.ndarray) -> tuple[int, int, np.ndarray] | None:
    """(offset, radix, place values) of an injective row encoding, or None if int64 would overflow."""
    lo = int(s.min())
    radix = int(s.max()) - lo + 1
    w = s.shape[1]
    if radix**w >= 1 << 62:
        return None
    return lo, radix, radix ** np.arange(w - 1, -1, -1, dtype=np.int64)


def _row_keys(s: np.ndarray, enc: tuple[int, int, np.ndarray] | None = None) -> np.ndarray | None:
    """Injective int64 key per row, or None if it would overflow."""
    enc = enc or _radix(s)
    if enc is None:
        return None
    lo, _, place = enc
    return (s.astype(np.int64) - lo) @ place


def _unique_rows(s: np.ndarray, cost: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray | None]:
    """Distinct rows; with costs, each row keeps its minimum cost."""
    if len(s) == 0:
        return s, cost
    if s.shape[1] == 0:
        return s[:1], None if cost is None else cost.min(keepdims=True)
    key = _row_keys(s)
    if key is None:
        if cost is not None:
            order = np.argsort(cost, kind="stable")
            s, cost = s[order], cost[order]
        _, idx = np.unique(s, axis=0, return_index=True)
    elif cost is None:
        _, idx = np.unique(key, return_index=True)
    else:
        order = np.lexsort((cost, key))
        first = np.ones(len(order), dtype=bool)
        first[1:] = key[order][1:] != key[order][:-1]
        idx = order[first]
    return s[idx], None if cost is None else cost[idx]


def _drop_dominated(s: np.ndarray, step_ok: np.ndarray, cost: np.ndarray | None = None) -> np.ndarray:
    """Mask of rows to keep: a row is dropped when the row obtained by lowering one
    counter (where `step_ok` allows it) by one is also present, at no greater cost.

    Counters only ever grow and are only ever compared against upper bounds, so a
    dropped row can never lead to an answer its dominating row does not reach.
    """
    n, w = s.shape
    keep = np.ones(n, dtype=bool)
    if n < 2 or w == 0:
        return keep
    enc = _radix(s)
    if enc is None:
        return keep
    lo, _, place = enc
    key = _row_keys(s, enc)
    rows, cols = np.nonzero(step_ok & (s - 1 >= lo))
    if len(rows) == 0:
        return keep
    order = np.argsort(key)
    sorted_keys = key[order]
    target = key[rows] - place[cols]
    pos = np.minimum(np.searchsorted(sorted_keys, target), n - 1)
    found = sorted_keys[pos] == target
    if cost is not None:
        found &= cost[order[pos]] <= cost[rows]
    keep[rows[found]] = False
    return keep


# ---------------------------------------------------------------------------
# Defective coloring feasibility


def _dc_check(s: np.ndarray, cols: list[int], nbrs: _Nbrs, base: int, delta: int) -> np.ndarray:
    color = s // base
    ok = np.ones(len(s), dtype=bool)
    for i in cols:
        cnt = s[:, i] % base
        for j in nbrs[i]:
            cnt = cnt + (color[:, j] == color[:, i])
        ok &= cnt <= delta
    return ok


def _dc_introduce(s: np.ndarray, node: NiceNode, g: Graph, chi: int, base: int, delta: int, fixed: int) -> np.ndarray:
    p = node.bag.index(node.vertex)  # type: ignore[arg-type]
    nbrs = _Nbrs(g, node.bag)
    colors = range(1) if node.vertex == fixed else range(chi)
    parts = [np.insert(s, p, c * base, axis=1) for c in colors]
    z = np.concatenate(parts) if parts else s
    z = z[_dc_check(z, [p, *nbrs[p]], nbrs, base, delta)]
    return z[_drop_dominated(z, z % base > 0)]


def _dc_forget(s: np.ndarray, node: NiceNode, g: Graph, base: int) -> np.ndarray:
    v = node.vertex
    child_bag = tuple(sorted(node.bag + (v,)))  # type: ignore[operator]
    p = child_bag.index(v)  # type: ignore[arg-type]
    vn = _Nbrs(g, child_bag)[p]
    z = s.copy()
    cv = s[:, p] // base
    for j in vn:
        z[:, j] += (s[:, j] // base == cv).astype(_STATE)
    z = _unique_rows(np.delete(z, p, axis=1))[0]
    return z[_drop_dominated(z, z % base > 0)]


def _dc_join(a: np.ndarray, b: np.ndarray, node: NiceNode, g: Graph, base: int, delta: int) -> np.ndarray:
    nbrs = _Nbrs(g, node.bag)
    w = len(node.bag)
    if w == 0:
        return a[:1] if len(a) and len(b) else a[:0]
    ca, cb = a // base, b // base
    keys, inv = np.unique(np.concatenate([ca, cb]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    ia, ib = inv[: len(a)], inv[len(a) :]
    out = []
    for key in np.intersect1d(ia, ib):
        da = a[ia == key] % base
        db = b[ib == key] % base
        d = (da[:, None, :] + db[None, :, :]).reshape(-1, w)
        color = keys[key]
        same = np.array([sum(int(color[j] == color[i]) for j in nbrs[i]) for i in range(w)])
        d = d[(d + same <= delta).all(axis=1)]
        out.append((color * base + d).astype(_STATE))
    if not out:
        return a[:0]
    z = _unique_rows(np.concatenate(out))[0]
    return z[_drop_dominated(z, z % base > 0)]


def dc_feasible(g: Graph, ntd: NiceTreeDecomposition, chi: int, delta: int) -> bool:
    """Whether g has a (chi, delta)-coloring.

    Colorings are closed under permuting colors, so the vertex of the first leaf
    is pinned to color 1 wherever it is introduced.
    """
    if g.has_loops():
        raise ValueError("the coloring DP expects a loop-free graph")
    if not ntd.nodes:
        return True
    if ntd.nodes[-1].bag:
        raise ValueError("root bag must be empty")
    base = delta + 1
    fixed = ntd.nodes[0].bag[0]
    tables: list[np.ndarray | None] = [None] * len(ntd.nodes)
    for i, nd in enumerate(ntd.nodes):
        if nd.kind == "leaf":
            count = 1 if nd.bag[0] == fixed else chi
            t = (np.arange(count, dtype=_STATE) * base).reshape(-1, 1)
        elif nd.kind == "introduce":
            t = _dc_introduce(tables[nd.children[0]], nd, g, chi, base, delta, fixed)  # type: ignore[arg-type]
        elif nd.kind == "forget":
            t = _dc_forget(tables[nd.children[0]], nd, g, base)  # type: ignore[arg-type]
        elif nd.kind == "join":
            t = _dc_join(tables[nd.children[0]], tables[nd.children[1]], nd, g, base, delta)  # type: ignore[arg-type]
        else:
            raise ValueError(f"unknown node kind {nd.kind!r}")
        for c in nd.children:
            tables[c] = None
        if len(t) == 0:
            return False
        tables[i] = t
    return True


# ---------------------------------------------------------------------------
# Bounded-degree deletion minimum


def _kept_check(s: np.ndarray, cols: list[int], nbrs: _Nbrs, delta: int) -> np.ndarray:
    kept = s >= 0
    ok = np.ones(len(s), dtype=bool)
    for i in cols:
        cnt = s[:, i] + kept[:, nbrs[i]].sum(axis=1)
        ok &= ~kept[:, i] | (cnt <= delta)
    return ok


def _bdvd_introduce(s: np.ndarray, cost: np.ndarray, node: NiceNode, g: Graph, delta: int) -> tuple[np.ndarray, np.ndarray]:
    p = node.bag.index(node.vertex)  # type: ignore[arg-type]
    nbrs = _Nbrs(g, node.bag)
    dele = np.insert(s, p, -1, axis=1)
    kept = np.insert(s, p, 0, axis=1)
    ok = _kept_check(kept, [p, *nbrs[p]], nbrs, delta)
    return np.concatenate([dele, kept[ok]]), np.concatenate([cost + 1, cost[ok]])


def _bdvd_prune(s: np.ndarray, cost: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    keep = _drop_dominated(s, s > 0, cost)
    return s[keep], cost[keep]


def _bdvd_forget(s: np.ndarray, cost: np.ndarray, node: NiceNode, g: Graph, delta: int) -> tuple[np.ndarray, np.ndarray]:
    v = node.vertex
    child_bag = tuple(sorted(node.bag + (v,)))  # type: ignore[operator]
    p = child_bag.index(v)  # type: ignore[arg-type]
    vn = _Nbrs(g, child_bag)[p]
    kp = s[:, p] >= 0
    kn = s[:, vn] >= 0
    ok = ~kp | (s[:, p] + kn.sum(axis=1) <= delta)
    z = s.copy()
    z[:, vn] += (kp[:, None] & kn).astype(_STATE)
    ok &= (z[:, vn] <= delta).all(axis=1)
    z = np.delete(z[ok], p, axis=1)
    out, c = _unique_rows(z, cost[ok])
    return _bdvd_prune(out, c)  # type: ignore[arg-type]


def _bdvd_join(
    a: np.ndarray, ca: np.ndarray, b: np.ndarray, cb: np.ndarray, node: NiceNode, g: Graph, delta: int
) -> tuple[np.ndarray, np.ndarray]:
    nbrs = _Nbrs(g, node.bag)
    w = len(node.bag)
    if w == 0:
        return a[:1], (ca.min() + cb.min()).reshape(1)
    pa, pb = a < 0, b < 0
    keys, inv = np.unique(np.concatenate([pa, pb]), axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    ia, ib = inv[: len(a)], inv[len(a) :]
    states, costs = [], []
    for key in np.intersect1d(ia, ib):
        deleted = keys[key]
        kept_nbrs = np.array([sum(1 for j in nbrs[i] if not deleted[j]) for i in range(w)])
        sa, sb = a[ia == key], b[ib == key]
        z = (sa[:, None, :] + sb[None, :, :]).reshape(-1, w)
        c = (ca[ia == key][:, None] + cb[ib == key][None, :]).reshape(-1) - int(deleted.sum())
        ok = (deleted | (z + kept_nbrs <= delta)).all(axis=1)
        z = np.where(deleted, -1, z)[ok].astype(_STATE)
        states.append(z)
        costs.append(c[ok])
    if not states:
        return a[:0], ca[:0]
    out, c = _unique_rows(np.concatenate(states), np.concatenate(costs))
    return _bdvd_prune(out, c)  # type: ignore[arg-type]


def bdvd_min(g: Graph, ntd: NiceTreeDecomposition, delta: int, budget: int | None = None) -> int | None:
    """Minimum deletion count; None when a budget is given and every solution exceeds it."""
    if g.has_loops():
        raise ValueError("the deletion DP expects a loop-free graph")
    if not ntd.nodes:
        return 0
    if ntd.nodes[-1].bag:
        raise ValueError("root bag must be empty")
    tables: list[tuple[np.ndarray, np.ndarray] | None] = [None] * len(ntd.nodes)
    for i, nd in enumerate(ntd.nodes):
        if nd.kind == "leaf":
            t = (np.array([[-1], [0]], dtype=_STATE), np.array([1, 0], dtype=np.int64))
        elif nd.kind == "introduce":
            t = _bdvd_introduce(*tables[nd.children[0]], nd, g, delta)  # type: ignore[misc]
        elif nd.kind == "forget":
            t = _bdvd_forget(*tables[nd.children[0]], nd, g, delta)  # type: ignore[misc]
        elif nd.kind == "join":
            t = _bdvd_join(*tables[nd.children[0]], *tables[nd.children[1]], nd, g, delta)  # type: ignore[misc]
        else:
            raise ValueError(f"unknown node kind {nd.kind!r}")
        if budget is not None:
            keep = t[1] <= budget
            t = (t[0][keep], t[1][keep])
        for c in nd.children:
            tables[c] = None
        if len(t[0]) == 0:
            return None
        tables[i] = t
    return int(tables[-1][1].min())  # type: ignore[index]
