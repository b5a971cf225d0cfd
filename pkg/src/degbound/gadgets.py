"""Coloring gadgets (equality Q, palette P, difference D, exclusion E, implication I),
splicing into host graphs, and exhaustive contract verification.

A gadget is a graph fragment with named endpoints. Q and P come from a
provider; D, E and I are composed from them. Each constructor fixes the
contract the gadget must satisfy when spliced into any host graph:

* forcing: every valid coloring of host plus gadget satisfies the predicate;
* extension: every valid host coloring satisfying the hypothesis extends to
  the gadget while adding at most the stated load of same-colored neighbors
  to each endpoint (zero for all gadgets except D with k <= Delta).

E and I assume a rainbow palette: endpoints c1..c_chi carry distinct colors.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

from .dc_dp import DcParams, run_tables, traceback
from .decomp import TreeDecomposition, heuristic_decomposition, to_nice
from .graph import Graph, GraphBuilder

Label = object
Colors = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Gadget:
    """Endpoints are named; internal vertices are labels listed in a layout order."""

    key: str
    kind: str
    endpoints: tuple[str, ...]
    internal: tuple[Label, ...]
    edges: tuple[tuple[Label, Label], ...]
    chi: int
    delta: int
    meta: Mapping[str, int] = field(default_factory=dict)

    def local_graph(self) -> tuple[Graph, dict[Label, int]]:
        """The gadget alone, endpoints numbered 1..e first, then internals in order."""
        ids: dict[Label, int] = {}
        for name in self.endpoints:
            ids[name] = len(ids) + 1
        for lab in self.internal:
            ids[lab] = len(ids) + 1
        return Graph.from_edges(len(ids), ((ids[a], ids[b]) for a, b in self.edges)), ids


class _Fragment:
    def __init__(self, endpoints: Sequence[str]) -> None:
        self.endpoints = tuple(endpoints)
        self.internal: list[Label] = []
        self.edges: list[tuple[Label, Label]] = []
        self._names = set(self.endpoints)

    def new(self, label: Label) -> Label:
        if label in self._names:
            raise ValueError(f"duplicate label {label!r}")
        self._names.add(label)
        self.internal.append(label)
        return label

    def edge(self, a: Label, b: Label) -> None:
        self.edges.append((a, b))

    def embed(self, sub: Gadget, mapping: Mapping[str, Label], prefix: Label) -> None:
        """Copy `sub` in, with its endpoints identified with local vertices."""
        local: dict[Label, Label] = dict(mapping)
        for lab in sub.internal:
            local[lab] = self.new((prefix, lab))
        for a, b in sub.edges:
            self.edge(local[a], local[b])

    def freeze(self, key: str, kind: str, chi: int, delta: int, **meta: int) -> Gadget:
        return Gadget(key, kind, self.endpoints, tuple(self.internal), tuple(self.edges), chi, delta, dict(meta))


# ---------------------------------------------------------------------------
# Providers for Q and P


def _check(chi: int, delta: int) -> None:
    if chi < 1 or delta < 0:
        raise ValueError("need chi >= 1 and delta >= 0")


@lru_cache(maxsize=None)
def reference_equality(chi: int, delta: int, connectors: int | None = None) -> Gadget:
    """Two-color equality gadget: independent connectors adjacent to both endpoints.

    With 2*delta+1 connectors, endpoints of different colors would leave one of
    them with delta+1 same-colored connectors. `connectors` overrides the count
    (used to build deliberately broken variants).
    """
    _check(chi, delta)
    if chi != 2:
        raise ValueError("the reference equality gadget is defined for chi = 2")
    count = 2 * delta + 1 if connectors is None else connectors
    f = _Fragment(("u1", "u2"))
    for i in range(count):
        x = f.new(("q", i))
        f.edge("u1", x)
        f.edge("u2", x)
    return f.freeze(f"Q[ref,{chi},{delta},{count}]", "equality", chi, delta)


@lru_cache(maxsize=None)
def rigid_equality(chi: int, delta: int) -> Gadget:
    """Equality gadget for any chi: a clique K on chi*(delta+1) vertices with a marked subset T
    of delta+1 vertices; both endpoints see every vertex of K outside T.

    Color classes of K all have size delta+1 and saturate their members, so an
    endpoint can only take a color absent from K minus T, which exists only if T
    is a whole class; both endpoints then share T's color.
    """
    _check(chi, delta)
    size = chi * (delta + 1)
    f = _Fragment(("u1", "u2"))
    members = [f.new(("k", i)) for i in range(size)]
    for a, b in itertools.combinations(members, 2):
        f.edge(a, b)
    for x in members[delta + 1 :]:
        f.edge("u1", x)
        f.edge("u2", x)
    return f.freeze(f"Q[rigid,{chi},{delta}]", "equality", chi, delta)


@lru_cache(maxsize=None)
def empty_palette(chi: int, delta: int) -> Gadget:
    """No vertices: correct whenever chi <= 2, since three vertices then never see three colors."""
    _check(chi, delta)
    return _Fragment(("u1", "u2", "u3")).freeze(f"P[empty,{chi},{delta}]", "palette", chi, delta)


@lru_cache(maxsize=None)
def clique_palette(chi: int, delta: int) -> Gadget:
    """Palette gadget for chi >= 3: a clique of chi-2 vertices z adjacent to all three endpoints,
    each z carrying delta leaves equality-linked to it, so the z's take chi-2 colors that
    the endpoints cannot use."""
    _check(chi, delta)
    if chi < 3:
        raise ValueError("the clique palette gadget needs chi >= 3")
    q = equality_gadget(chi, delta)
    f = _Fragment(("u1", "u2", "u3"))
    zs = [f.new(("z", i)) for i in range(chi - 2)]
    for a, b in itertools.combinations(zs, 2):
        f.edge(a, b)
    for i, z in enumerate(zs):
        for u in ("u1", "u2", "u3"):
            f.edge(z, u)
        for leaf in range(delta):
            lab = f.new(("zl", i, leaf))
            f.edge(z, lab)
            f.embed(q, {"u1": z, "u2": lab}, ("zq", i, leaf))
    return f.freeze(f"P[clique,{chi},{delta}]", "palette", chi, delta)


def equality_gadget(chi: int, delta: int) -> Gadget:
    """Q(u1, u2) from the default provider."""
    _check(chi, delta)
    if chi == 1:
        return _Fragment(("u1", "u2")).freeze(f"Q[trivial,1,{delta}]", "equality", chi, delta)
    if chi == 2:
        return reference_equality(chi, delta)
    return rigid_equality(chi, delta)


def palette_gadget(chi: int, delta: int) -> Gadget:
    """P(u1, u2, u3) from the default provider."""
    _check(chi, delta)
    return empty_palette(chi, delta) if chi <= 2 else clique_palette(chi, delta)


# ---------------------------------------------------------------------------
# Composed gadgets


@lru_cache(maxsize=None)
def difference_gadget(chi: int, delta: int, k: int) -> Gadget:
    """D(u1, u2, k): k leaves on u2, each equality-linked to u1.

    For k >= delta+1 it forces distinct colors; for k <= delta it adds exactly
    k same-colored neighbors to u2 when the endpoints share a color.
    """
    _check(chi, delta)
    if k < 0:
        raise ValueError("k must be nonnegative")
    q = equality_gadget(chi, delta)
    f = _Fragment(("u1", "u2"))
    for i in range(k):
        leaf = f.new(("d", i))
        f.edge("u2", leaf)
        f.embed(q, {"u1": "u1", "u2": leaf}, ("dq", i))
    return f.freeze(f"D[{chi},{delta},{k}]", "difference", chi, delta, k=k)


def _palette_names(chi: int) -> tuple[str, ...]:
    return tuple(f"c{i}" for i in range(1, chi + 1))


def _exclusion_into(f: _Fragment, chi: int, delta: int, i: int, j: int, u1: str, u2: str, prefix: Label) -> None:
    q = equality_gadget(chi, delta)
    ci, cj = f"c{i}", f"c{j}"
    # Internals are created along the chain u1, v1, a, v2, u2 so that a linear
    # layout keeps at most two of them active at a time.
    if i == j or chi == 2:
        v1 = f.new((prefix, "v1"))
        f.embed(q, {"u1": u1, "u2": v1}, (prefix, "q1"))
        a = f.new((prefix, "a"))
        f.edge(a, v1)
        f.embed(q, {"u1": ci, "u2": a}, (prefix, "qa"))
        f.embed(difference_gadget(chi, delta, delta - 1), {"u1": ci, "u2": a}, (prefix, "da"))
        v2 = f.new((prefix, "v2"))
        f.edge(a, v2)
        if i == j:
            f.embed(q, {"u1": u2, "u2": v2}, (prefix, "q2"))
        else:
            f.embed(difference_gadget(chi, delta, delta + 1), {"u1": u2, "u2": v2}, (prefix, "d2"))
        return
    third = next(x for x in range(1, chi + 1) if x not in (i, j))
    c3 = f"c{third}"
    p = palette_gadget(chi, delta)
    d = difference_gadget(chi, delta, delta)
    v1 = f.new((prefix, "v1"))
    f.embed(q, {"u1": u1, "u2": v1}, (prefix, "q1"))
    prev = v1
    for t, (x, y) in enumerate([(ci, c3), (ci, c3), (ci, cj)]):
        node = f.new((prefix, "a", t + 1))
        f.edge(prev, node)
        f.embed(p, {"u1": x, "u2": y, "u3": node}, (prefix, "p", t))
        f.embed(d, {"u1": x, "u2": node}, (prefix, "dx", t))
        f.embed(d, {"u1": y, "u2": node}, (prefix, "dy", t))
        prev = node
    v2 = f.new((prefix, "v2"))
    f.edge(prev, v2)
    f.embed(q, {"u1": u2, "u2": v2}, (prefix, "q2"))


@lru_cache(maxsize=None)
def exclusion_gadget(chi: int, delta: int, c1_index: int, c2_index: int) -> Gadget:
    """E(u1, u2, c_i, c_j): forbids u1 colored as c_i together with u2 colored as c_j."""
    _check(chi, delta)
    if delta < 1 or chi < 2:
        raise ValueError("exclusion gadgets need delta >= 1 and chi >= 2")
    if not (1 <= c1_index <= chi and 1 <= c2_index <= chi):
        raise ValueError("palette index out of range")
    f = _Fragment(("u1", "u2", *_palette_names(chi)))
    _exclusion_into(f, chi, delta, c1_index, c2_index, "u1", "u2", "e")
    return f.freeze(f"E[{chi},{delta},{c1_index},{c2_index}]", "exclusion", chi, delta, c1=c1_index, c2=c2_index)


@lru_cache(maxsize=None)
def implication_gadget(chi: int, delta: int, c1_index: int, c2_index: int) -> Gadget:
    """I(u1, u2, c_i, c_j): if u1 is colored as c_i then u2 is colored as c_j."""
    _check(chi, delta)
    if delta < 1 or chi < 2:
        raise ValueError("implication gadgets need delta >= 1 and chi >= 2")
    if not (1 <= c1_index <= chi and 1 <= c2_index <= chi):
        raise ValueError("palette index out of range")
    f = _Fragment(("u1", "u2", *_palette_names(chi)))
    for k in range(1, chi + 1):
        if k != c2_index:
            _exclusion_into(f, chi, delta, c1_index, k, "u1", "u2", ("e", k))
    return f.freeze(f"I[{chi},{delta},{c1_index},{c2_index}]", "implication", chi, delta, c1=c1_index, c2=c2_index)


# ---------------------------------------------------------------------------
# Contracts


@dataclass(frozen=True)
class Contract:
    precondition: Callable[[Colors], bool]
    forced: Callable[[Colors], bool]
    hypothesis: Callable[[Colors], bool]
    load: Callable[[Colors], Colors]
    exact_load: bool = False  # the load on u2 is forced, not just an upper bound


def contract_of(g: Gadget) -> Contract:
    """Contract implied by the gadget's kind; colors are listed in endpoint order."""
    e = len(g.endpoints)
    zero = (0,) * e

    def rainbow(col: Colors) -> bool:
        pal = col[2:]
        return len(set(pal)) == len(pal)

    if g.kind == "equality":
        return Contract(lambda c: True, lambda c: c[0] == c[1], lambda c: c[0] == c[1], lambda c: zero)
    if g.kind == "palette":
        return Contract(lambda c: True, lambda c: len(set(c)) < 3, lambda c: len(set(c)) < 3, lambda c: zero)
    if g.kind == "difference":
        k = g.meta["k"]
        if k >= g.delta + 1:
            return Contract(lambda c: True, lambda c: c[0] != c[1], lambda c: c[0] != c[1], lambda c: zero)
        return Contract(lambda c: True, lambda c: True, lambda c: True, lambda c: (0, k if c[0] == c[1] else 0), True)
    i, j = g.meta["c1"], g.meta["c2"]
    if g.kind == "exclusion":
        def excl(c: Colors) -> bool:
            return not (c[0] == c[1 + i] and c[1] == c[1 + j])

        return Contract(rainbow, excl, excl, lambda c: zero)
    if g.kind == "implication":
        def impl(c: Colors) -> bool:
            return c[0] != c[1 + i] or c[1] == c[1 + j]

        return Contract(rainbow, impl, impl, lambda c: zero)
    raise ValueError(f"no contract for kind {g.kind!r}")


def _profile_decomposition(g: Gadget) -> tuple[Graph, object]:
    graph, _ = g.local_graph()
    e = len(g.endpoints)
    inner_n = graph.n - e
    inner = Graph.from_edges(inner_n, ((a - e, b - e) for a, b in graph.edges if a > e and b > e))
    boundary = frozenset(range(1, e + 1))
    if inner_n:
        td = heuristic_decomposition(inner)
        bags = {t: frozenset(v + e for v in bag) | boundary for t, bag in td.bags.items()}
        td = TreeDecomposition(bags, td.tree)
    else:
        td = TreeDecomposition({1: boundary}, ())
    return graph, to_nice(td, graph, keep=boundary)


@lru_cache(maxsize=None)
def _profile_tables(g: Gadget) -> tuple[Graph, object, list]:
    graph, ntd = _profile_decomposition(g)
    tables = run_tables(graph, ntd, g.chi, g.delta, decision=True, keep_all=True)
    return graph, ntd, tables


def interface_profile(g: Gadget) -> dict[Colors, set[Colors]]:
    """Endpoint colors -> the set of same-colored-neighbor vectors the gadget can contribute."""
    _, _, tables = _profile_tables(g)
    params = DcParams(g.chi, g.delta)
    out: dict[Colors, set[Colors]] = {}
    for state in tables[-1] or {(): 1}:
        pairs = [params.decode(x) for x in state]
        out.setdefault(tuple(c for c, _ in pairs), set()).add(tuple(d for _, d in pairs))
    return out


def all_hosts(endpoints: int, max_vertices: int = 5) -> Iterable[Graph]:
    """Every labeled graph on endpoints..max_vertices vertices; the endpoints are vertices 1..e."""
    for h in range(endpoints, max_vertices + 1):
        pairs = list(itertools.combinations(range(1, h + 1), 2))
        for mask in range(1 << len(pairs)):
            yield Graph.from_edges(h, (pairs[b] for b in range(len(pairs)) if mask >> b & 1))


def contract_violations(
    g: Gadget,
    chi: int | None = None,
    delta: int | None = None,
    host_corpus: Iterable[Graph] | None = None,
    limit: int = 5,
) -> list[str]:
    """Counterexamples to the gadget's contract over a host corpus (empty list when it holds)."""
    if chi is not None and chi != g.chi or delta is not None and delta != g.delta:
        raise ValueError("gadget was built for different parameters")
    contract = contract_of(g)
    profile = interface_profile(g)
    e = len(g.endpoints)
    dmax = g.delta
    problems: list[str] = []
    for col, deltas in profile.items():
        if contract.exact_load and any(d[1] != contract.load(col)[1] for d in deltas):
            problems.append(f"endpoint colors {col}: u2 receives {sorted(deltas)}, expected exactly {contract.load(col)[1]}")
    hosts = all_hosts(e) if host_corpus is None else host_corpus
    for host in hosts:
        if host.n < e:
            raise ValueError("host smaller than the endpoint count")
        for values in itertools.product(range(1, g.chi + 1), repeat=host.n):
            col = values[:e]
            if not contract.precondition(col):
                continue
            same = [sum(1 for u in host.adj[v] if values[u - 1] == values[v - 1]) for v in range(1, host.n + 1)]
            if any(same[v] > dmax for v in range(e, host.n)):
                continue
            for d in profile.get(col, ()):
                if all(same[x] + d[x] <= dmax for x in range(e)) and not contract.forced(col):
                    problems.append(f"host {sorted(host.edges)} colors {values}: valid splice violates the predicate")
                    break
            if all(same[x] <= dmax for x in range(e)) and contract.hypothesis(col):
                load = contract.load(col)
                if all(same[x] + load[x] <= dmax for x in range(e)):
                    if not any(all(d[x] <= load[x] for x in range(e)) for d in profile.get(col, ())):
                        problems.append(f"host {sorted(host.edges)} colors {values}: no extension within load {load}")
            if len(problems) >= limit:
                return problems
    return problems


def verify_gadget_contract(
    g: Gadget,
    chi: int,
    delta: int,
    host_corpus: Iterable[Graph] | None = None,
) -> bool:
    """Exhaustive contract check over the host corpus (default: all hosts with <= 5 vertices)."""
    return not contract_violations(g, chi, delta, host_corpus, limit=1)


def splice_bruteforce_violations(g: Gadget, host: Graph) -> list[str]:
    """Contract check on one host by enumerating colorings of the whole spliced graph.

    Exponential in the gadget size; used to cross-check the profile method.
    """
    contract = contract_of(g)
    e = len(g.endpoints)
    local, _ = g.local_graph()
    n = host.n + local.n - e
    edges = set(host.edges)
    shift = host.n - e
    for a, b in local.edges:
        edges.add((a if a <= e else a + shift, b if b <= e else b + shift))
    full = Graph.from_edges(n, edges)
    problems: list[str] = []
    best: dict[tuple[int, ...], tuple[int, ...]] = {}
    for values in itertools.product(range(1, g.chi + 1), repeat=n):
        col = values[:e]
        if not contract.precondition(col):
            continue
        same = [sum(1 for u in full.adj[v] if values[u - 1] == values[v - 1]) for v in range(1, n + 1)]
        if any(x > g.delta for x in same):
            continue
        if not contract.forced(col):
            problems.append(f"colors {values}: valid splice violates the predicate")
        host_part = values[: host.n]
        extra = tuple(same[x] - sum(1 for u in host.adj[x + 1] if values[u - 1] == values[x]) for x in range(e))
        prev = best.get(host_part)
        if prev is None or extra < prev:
            best[host_part] = extra
    for values in itertools.product(range(1, g.chi + 1), repeat=host.n):
        col = values[:e]
        if not contract.precondition(col) or not contract.hypothesis(col):
            continue
        same = [sum(1 for u in host.adj[v] if values[u - 1] == values[v - 1]) for v in range(1, host.n + 1)]
        load = contract.load(col)
        if any(x > g.delta for x in same) or any(same[x] + load[x] > g.delta for x in range(e)):
            continue
        found = any(
            all(extra[x] <= load[x] for x in range(e))
            for hp, extra in best.items()
            if hp == values
        )
        if not found:
            problems.append(f"host colors {values}: no extension within load {load}")
    return problems


# ---------------------------------------------------------------------------
# Splicing and forward colorings


@dataclass(frozen=True)
class Splice:
    gadget: Gadget
    mapping: dict[str, int]
    internal: dict[Label, int]


class GadgetBuilder(GraphBuilder):
    """Graph builder that records spliced gadgets so colorings can be extended later."""

    def __init__(self) -> None:
        super().__init__()
        self.splices: list[Splice] = []

    def splice(self, g: Gadget, mapping: Mapping[str, int], tag: Label) -> Splice:
        if set(mapping) != set(g.endpoints):
            raise ValueError(f"endpoint mapping must cover {g.endpoints}")
        ids: dict[Label, int] = dict(mapping)
        internal = {}
        for lab in g.internal:
            internal[lab] = ids[lab] = self.add((tag, lab))
        for a, b in g.edges:
            self.edge(ids[a], ids[b])
        sp = Splice(g, dict(mapping), internal)
        self.splices.append(sp)
        return sp


@lru_cache(maxsize=4096)
def _internal_coloring(g: Gadget, col: Colors) -> tuple[tuple[Label, int], ...]:
    """Internal colors extending endpoint colors `col` with the least load, via DP traceback."""
    graph, ntd, tables = _profile_tables(g)
    params = DcParams(g.chi, g.delta)
    contract = contract_of(g)
    load = contract.load(col)
    candidates = []
    for state in tables[-1]:
        pairs = [params.decode(x) for x in state]
        if tuple(c for c, _ in pairs) == col:
            d = tuple(x for _, x in pairs)
            if all(d[x] <= load[x] for x in range(len(col))):
                candidates.append((d, state))
    if not candidates:
        raise ValueError(f"{g.key}: endpoint colors {col} admit no neutral extension")
    _, state = min(candidates)
    coloring = traceback(graph, ntd, tables, params, state)
    _, ids = g.local_graph()
    return tuple((lab, coloring[ids[lab]]) for lab in g.internal)


def extend_coloring(builder: GadgetBuilder, coloring: dict[int, int]) -> dict[int, int]:
    """Color every spliced gadget's internals given colors of all endpoints."""
    out = dict(coloring)
    for sp in builder.splices:
        col = tuple(out[sp.mapping[name]] for name in sp.gadget.endpoints)
        for lab, c in _internal_coloring(sp.gadget, col):
            out[sp.internal[lab]] = c
    return out
