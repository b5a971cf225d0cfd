"""Counting (chi, delta)-colorings over a nice tree decomposition.

A table maps a state tuple (one entry per vertex of the sorted bag) to the
number of colorings of the subgraph below the node that realize it. Each entry
encodes a pair (color c in 1..chi, delta in 0..Delta) as the integer
(c - 1) * (Delta + 1) + delta, where delta counts same-colored neighbors that
have already been forgotten. Tuples violating the bag check (same-colored bag
neighbors plus delta exceeding Delta) are never stored.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ntt, vecdp
from .decomp import NiceNode, NiceTreeDecomposition
from .graph import Coloring, Graph

DcTable = dict[tuple[int, ...], int]


@dataclass(frozen=True)
class DcParams:
    chi: int
    delta: int

    def __post_init__(self) -> None:
        if self.chi < 1 or self.delta < 0:
            raise ValueError("need chi >= 1 and delta >= 0")

    @property
    def base(self) -> int:
        return self.delta + 1

    def encode(self, color: int, d: int) -> int:
        return (color - 1) * self.base + d

    def decode(self, code: int) -> tuple[int, int]:
        return code // self.base + 1, code % self.base


def encode_state(params: DcParams, pairs: list[tuple[int, int]] | tuple[tuple[int, int], ...]) -> tuple[int, ...]:
    """State tuple from (color, delta) pairs."""
    return tuple(params.encode(c, d) for c, d in pairs)


def decode_state(params: DcParams, state: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    return tuple(params.decode(x) for x in state)


def identifier(deltas: tuple[int, ...], delta: int) -> int:
    """Base-(Delta+1) number whose j-th digit (least significant first) is deltas[j]."""
    out = 0
    for d in reversed(deltas):
        out = out * (delta + 1) + d
    return out


def _bag_nbrs(g: Graph, bag: tuple[int, ...]) -> list[list[int]]:
    """Positions of each bag vertex's bag neighbors; bag is sorted, so (u, v) pairs are normalized."""
    es = g.edges
    return [[j for j, u in enumerate(bag) if u != v and ((u, v) if u < v else (v, u)) in es] for v in bag]


def _vertex_ok(state: tuple[int, ...] | list[int], i: int, nbrs: list[list[int]], base: int, delta: int) -> bool:
    ci = state[i] // base
    same = sum(1 for j in nbrs[i] if state[j] // base == ci)
    return same + state[i] % base <= delta


def bag_check(state: tuple[int, ...], nbrs: list[list[int]], base: int, delta: int) -> bool:
    """Same-colored bag neighbors plus forgotten same-colored neighbors stay within delta."""
    return all(_vertex_ok(state, i, nbrs, base, delta) for i in range(len(state)))


def node_leaf(node: NiceNode, params: DcParams) -> DcTable:
    return {(params.encode(c, 0),): 1 for c in range(1, params.chi + 1)}


def node_introduce(child: DcTable, node: NiceNode, g: Graph, params: DcParams) -> DcTable:
    bag = node.bag
    p = bag.index(node.vertex)
    nbrs = _bag_nbrs(g, bag)
    base, delta = params.base, params.delta
    vn = nbrs[p]
    out: DcTable = {}
    for t, val in child.items():
        for c in range(params.chi):
            z = t[:p] + (c * base,) + t[p:]
            if not _vertex_ok(z, p, nbrs, base, delta):
                continue
            if all(z[j] // base != c or _vertex_ok(z, j, nbrs, base, delta) for j in vn):
                out[z] = val
    return out


def node_forget(child: DcTable, node: NiceNode, g: Graph, params: DcParams) -> DcTable:
    v = node.vertex
    child_bag = tuple(sorted(node.bag + (v,)))  # type: ignore[operator]
    p = child_bag.index(v)  # type: ignore[arg-type]
    vn = _bag_nbrs(g, child_bag)[p]
    base = params.base
    out: DcTable = defaultdict(int)
    for t, val in child.items():
        cv = t[p] // base
        z = list(t)
        for j in vn:
            if z[j] // base == cv:
                z[j] += 1
                assert z[j] % base != 0, "bag check admitted an overfull tuple"
        del z[p]
        out[tuple(z)] += val
    return dict(out)


def _colors(t: tuple[int, ...], base: int) -> tuple[int, ...]:
    return tuple(x // base for x in t)


def join_naive(a: DcTable, b: DcTable, node: NiceNode, g: Graph, params: DcParams) -> DcTable:
    """Sum over child tuple pairs with equal colors and deltas adding up."""
    base, delta = params.base, params.delta
    nbrs = _bag_nbrs(g, node.bag)
    by_colors: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = defaultdict(list)
    for t, val in b.items():
        by_colors[_colors(t, base)].append((t, val))
    out: DcTable = defaultdict(int)
    for t1, v1 in a.items():
        for t2, v2 in by_colors.get(_colors(t1, base), ()):
            z = tuple(x + y % base for x, y in zip(t1, t2))
            if any(x % base < y % base for x, y in zip(z, t1)):
                continue  # some delta sum overflowed past Delta
            if bag_check(z, nbrs, base, delta):
                out[z] += v1 * v2
    return dict(out)


@lru_cache(maxsize=64)
def _digit_sums(base: int, s: int) -> np.ndarray:
    size = base**s
    e = np.arange(size, dtype=np.int64)
    out = np.zeros(size, dtype=np.int64)
    for _ in range(s):
        out += e % base
        e //= base
    return out


def _digits(e: int, base: int, s: int) -> tuple[int, ...]:
    out = []
    for _ in range(s):
        out.append(e % base)
        e //= base
    return tuple(out)


Buckets = dict[int, dict[int, int]]  # digit sum -> identifier -> count


def _buckets(entries: list[tuple[tuple[int, ...], int]], base: int) -> Buckets:
    out: Buckets = defaultdict(dict)
    for t, val in entries:
        deltas = tuple(x % base for x in t)
        out[sum(deltas)][identifier(deltas, base - 1)] = val
    return out


def _products_schoolbook(pa: Buckets, pb: Buckets) -> dict[int, dict[int, int]]:
    """For every bucket pair, multiply the polynomials and accumulate by total digit sum."""
    acc: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for s1, poly1 in pa.items():
        for s2, poly2 in pb.items():
            r = acc[s1 + s2]
            for i1, v1 in poly1.items():
                for i2, v2 in poly2.items():
                    r[i1 + i2] += v1 * v2
    return acc


def _products_ntt(pa: Buckets, pb: Buckets, base: int, s: int) -> dict[int, dict[int, int]]:
    """Same result as the schoolbook path (restricted to carry-free monomials), computed by
    transforms modulo several primes; pair products are accumulated per digit sum in the
    transform domain before one inverse transform per sum."""
    length = base**s
    size = 1
    while size < 2 * length:
        size *= 2
    rows_a = max(pa) + 1
    rows_b = max(pb) + 1
    max_a = max(v for poly in pa.values() for v in poly.values())
    max_b = max(v for poly in pb.values() for v in poly.values())
    terms = min(sum(len(p) for p in pa.values()), sum(len(p) for p in pb.values()))
    primes = ntt.primes_for_bound(terms * max_a * max_b)
    digit_sums = _digit_sums(base, s)
    residues: list[np.ndarray] = []
    for p in primes:
        arr_a = np.zeros((rows_a, size), dtype=np.int64)
        for s1, poly in pa.items():
            for i, v in poly.items():
                arr_a[s1, i] = v % p
        arr_b = np.zeros((rows_b, size), dtype=np.int64)
        for s2, poly in pb.items():
            for i, v in poly.items():
                arr_b[s2, i] = v % p
        residues.append(ntt.convolve_buckets(arr_a, arr_b, p))
    crt = ntt.CrtReconstructor(primes)
    acc: dict[int, dict[int, int]] = {}
    for total in range(rows_a + rows_b - 1):
        idx = np.nonzero(digit_sums == total)[0]
        if not len(idx):
            continue
        digits = crt.mixed_radix([r[total, idx] for r in residues])
        nonzero = np.nonzero(np.any(np.stack(digits) != 0, axis=0))[0]
        acc[total] = {int(idx[k]): crt.value(digits, int(k)) for k in nonzero}
    return acc


def join_fast(
    a: DcTable,
    b: DcTable,
    node: NiceNode,
    g: Graph,
    params: DcParams,
    multiply: str = "auto",
) -> DcTable:
    """Join by polynomial multiplication over degree-sum buckets, one bag coloring at a time.

    `multiply` selects "schoolbook" (sparse big-integer products), "ntt", or
    "auto" (ntt when the dense transform is cheaper than the sparse product).
    """
    if multiply not in ("auto", "schoolbook", "ntt"):
        raise ValueError(f"unknown multiply backend {multiply!r}")
    base, delta = params.base, params.delta
    s = len(node.bag)
    nbrs = _bag_nbrs(g, node.bag)
    length = base**s
    groups_a: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = defaultdict(list)
    groups_b: dict[tuple[int, ...], list[tuple[tuple[int, ...], int]]] = defaultdict(list)
    for t, val in a.items():
        groups_a[_colors(t, base)].append((t, val))
    for t, val in b.items():
        groups_b[_colors(t, base)].append((t, val))
    out: DcTable = {}
    for cols, entries_a in groups_a.items():
        entries_b = groups_b.get(cols)
        if not entries_b:
            continue
        pa = _buckets(entries_a, base)
        pb = _buckets(entries_b, base)
        use_ntt = multiply == "ntt" or (
            multiply == "auto" and delta > 0 and len(entries_a) * len(entries_b) > 64 * length * max(s, 1)
        )
        if use_ntt and delta > 0:
            acc = _products_ntt(pa, pb, base, s)
        else:
            acc = _products_schoolbook(pa, pb)
        digit_sums = _digit_sums(base, s)
        offsets = tuple(c * base for c in cols)
        for total, poly in acc.items():
            for e, coef in poly.items():
                if coef == 0 or e >= length or digit_sums[e] != total:
                    continue
                z = tuple(o + d for o, d in zip(offsets, _digits(e, base, s)))
                if bag_check(z, nbrs, base, delta):
                    out[z] = coef
    return out


JoinFn = Callable[[DcTable, DcTable, NiceNode, Graph, DcParams], DcTable]


def run_tables(
    g: Graph,
    ntd: NiceTreeDecomposition,
    chi: int,
    delta: int,
    join: str | JoinFn = "fast",
    decision: bool = False,
    keep_all: bool = False,
) -> list[DcTable | None]:
    """Evaluate every node bottom-up. Returns per-node tables (only the root's unless keep_all).

    In decision mode every stored count is clamped to 1, so tables record feasibility only.
    """
    if g.has_loops():
        raise ValueError("the coloring DP expects a loop-free graph")
    params = DcParams(chi, delta)
    if join == "fast":
        join_fn: JoinFn = join_fast
    elif join == "naive":
        join_fn = join_naive
    elif callable(join):
        join_fn = join
    else:
        raise ValueError(f"unknown join {join!r}")
    tables: list[DcTable | None] = [None] * len(ntd.nodes)
    states = params.chi * params.base
    for i, nd in enumerate(ntd.nodes):
        if nd.kind == "leaf":
            t = node_leaf(nd, params)
        elif nd.kind == "introduce":
            t = node_introduce(tables[nd.children[0]], nd, g, params)  # type: ignore[arg-type]
        elif nd.kind == "forget":
            t = node_forget(tables[nd.children[0]], nd, g, params)  # type: ignore[arg-type]
        elif nd.kind == "join":
            t = join_fn(tables[nd.children[0]], tables[nd.children[1]], nd, g, params)  # type: ignore[arg-type]
        else:
            raise ValueError(f"unknown node kind {nd.kind!r}")
        assert len(t) <= states ** len(nd.bag), "table exceeds (chi*(Delta+1))^bag entries"
        if decision:
            t = dict.fromkeys(t, 1)
        tables[i] = t
        if not keep_all:
            for c in nd.children:
                tables[c] = None
    return tables


def dc_count(
    g: Graph,
    ntd: NiceTreeDecomposition,
    chi: int,
    delta: int,
    join: str | JoinFn = "fast",
) -> int:
    """Exact number of (chi, delta)-colorings of g."""
    if not ntd.nodes:
        return 1
    if ntd.nodes[-1].bag:
        raise ValueError("root bag must be empty")
    root = run_tables(g, ntd, chi, delta, join)[-1]
    return root.get((), 0)  # type: ignore[union-attr]


def dc_root_table(g: Graph, ntd: NiceTreeDecomposition, chi: int, delta: int) -> DcTable:
    """Table at the root, for decompositions whose root bag is a kept boundary."""
    if not ntd.nodes:
        return {(): 1}
    return run_tables(g, ntd, chi, delta)[-1]  # type: ignore[return-value]


def traceback(
    g: Graph,
    ntd: NiceTreeDecomposition,
    tables: list[DcTable | None],
    params: DcParams,
    root_state: tuple[int, ...] = (),
) -> Coloring:
    """Recover one coloring realizing `root_state` from tables computed with keep_all."""
    base = params.base
    coloring: Coloring = {}
    stack = [(len(ntd.nodes) - 1, root_state)]
    while stack:
        i, z = stack.pop()
        nd = ntd.nodes[i]
        for v, x in zip(nd.bag, z):
            coloring[v] = x // base + 1
        if nd.kind == "leaf":
            continue
        if nd.kind == "introduce":
            p = nd.bag.index(nd.vertex)  # type: ignore[arg-type]
            stack.append((nd.children[0], z[:p] + z[p + 1 :]))
            continue
        if nd.kind == "forget":
            child = tables[nd.children[0]]
            child_bag = ntd.nodes[nd.children[0]].bag
            p = child_bag.index(nd.vertex)  # type: ignore[arg-type]
            vn = _bag_nbrs(g, child_bag)[p]
            found = None
            for code in range(params.chi * base):
                t = list(z[:p]) + [code] + list(z[p:])
                cv = code // base
                ok = True
                for j in vn:
                    if t[j] // base == cv:
                        if t[j] % base == 0:
                            ok = False
                            break
                        t[j] -= 1
                if ok and child.get(tuple(t), 0):  # type: ignore[union-attr]
                    found = tuple(t)
                    break
            assert found is not None, "traceback lost a nonzero entry"
            stack.append((nd.children[0], found))
            continue
        ta, tb = tables[nd.children[0]], tables[nd.children[1]]
        cols = _colors(z, base)
        pick = None
        for t1 in ta:  # type: ignore[union-attr]
            if _colors(t1, base) != cols:
                continue
            t2 = tuple(x - y % base for x, y in zip(z, t1))
            if all(x % base >= y % base for x, y in zip(z, t1)) and tb.get(t2, 0):  # type: ignore[union-attr]
                pick = (t1, t2)
                break
        assert pick is not None, "traceback lost a nonzero join entry"
        stack.append((nd.children[0], pick[0]))
        stack.append((nd.children[1], pick[1]))
    return coloring


def dc_decide(g: Graph, ntd: NiceTreeDecomposition, chi: int, delta: int, witness: bool = True) -> tuple[bool, Coloring | None]:
    """Decide colorability; with `witness`, also return a coloring recovered by traceback.

    Without a witness the array-based evaluator in `vecdp` is used.
    """
    if not ntd.nodes:
        return True, {}
    if not witness:
        return vecdp.dc_feasible(g, ntd, chi, delta), None
    tables = run_tables(g, ntd, chi, delta, decision=True, keep_all=witness)
    yes = bool(tables[-1].get((), 0))  # type: ignore[union-attr]
    if not yes or not witness:
        return yes, None
    return True, traceback(g, ntd, tables, DcParams(chi, delta))
