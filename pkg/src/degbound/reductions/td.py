"""Generators from multicolored clique to BDVD and defective coloring with elimination-forest witnesses.

The input graph has k parts of n vertices each: part i holds vertices
(i-1)n+1 .. in, every vertex carries a self-loop and k is a power of 2. Both
generators build the adjacency gadget A(1, k, 1, k) recursively: a level over
interval pairs of length L holds 2L original choice instances, four sub-levels
on the halves, and copy gadgets linking each sub-level's originals to its own.
A base level A(i, i, i', i') adds one edge gadget per edge between parts i and
i' together with four selector vertices.

Vertex ids follow a depth-first creation order, so output is a pure function
of the input graph.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from math import comb

from ..decomp import EliminationForest
from ..gadgets import GadgetBuilder, equality_gadget, extend_coloring
from ..graph import Coloring, Graph
from .bundle import ReductionBundle


def depth_bound(k: int) -> int:
    return 16 * k + 8


# ---------------------------------------------------------------------------
# Multicolored clique inputs


@dataclass(frozen=True)
class MccInstance:
    graph: Graph
    k: int

    @property
    def n(self) -> int:
        return self.graph.n // self.k

    def part(self, v: int) -> int:
        return (v - 1) // self.n + 1

    def index(self, v: int) -> int:
        return (v - 1) % self.n + 1

    def vertex(self, part: int, index: int) -> int:
        return (part - 1) * self.n + index

    def cross_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in self.graph.sorted_edges() if u != v]

    def is_clique(self, clique: Sequence[int]) -> bool:
        if sorted(self.part(v) for v in clique) != list(range(1, self.k + 1)):
            return False
        return all((min(u, v), max(u, v)) in self.graph.edges for u in clique for v in clique)


def _is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def check_mcc(g: Graph, k: int) -> MccInstance:
    if not _is_power_of_two(k):
        raise ValueError(f"k = {k} is not a power of 2")
    if g.n == 0 or g.n % k:
        raise ValueError(f"{g.n} vertices do not split into {k} equal parts")
    inst = MccInstance(g, k)
    for v in g.vertices():
        if (v, v) not in g.edges:
            raise ValueError(f"vertex {v} lacks a self-loop")
    for u, v in inst.cross_edges():
        if inst.part(u) == inst.part(v):
            raise ValueError(f"edge ({u}, {v}) joins two vertices of part {inst.part(u)}")
    return inst


def random_mcc(k: int, n: int, p: float, seed: int, plant: bool = True) -> tuple[Graph, list[int] | None]:
    """Random k-partite graph with loops; with `plant`, a random multicolored clique is added."""
    rng = random.Random(seed)
    edges = {(v, v) for v in range(1, k * n + 1)}
    for i in range(k):
        for j in range(i + 1, k):
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    if rng.random() < p:
                        edges.add((i * n + a, j * n + b))
    clique = None
    if plant:
        clique = [i * n + rng.randint(1, n) for i in range(k)]
        for x in range(k):
            for y in range(x + 1, k):
                edges.add((clique[x], clique[y]))
    return Graph.from_edges(k * n, edges), clique


def pad_mcc(g: Graph, k: int) -> tuple[Graph, int, list[int]]:
    """Add dummy parts until k is a power of 2.

    Each dummy vertex gets a loop and an edge to every vertex outside its own
    part, so any multicolored clique extends by one dummy vertex per dummy part.
    Returns the padded graph, the new k and the dummy vertices.
    """
    if k < 1 or g.n % k:
        raise ValueError(f"{g.n} vertices do not split into {k} equal parts")
    n = g.n // k
    target = 1
    while target < k:
        target *= 2
    total = target * n
    dummies = list(range(g.n + 1, total + 1))
    edges = set(g.edges)
    for v in dummies:
        edges.add((v, v))
        part = (v - 1) // n
        for u in range(1, total + 1):
            if (u - 1) // n != part:
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(total, edges), target, dummies


def extend_clique(clique: Sequence[int], n: int, k_old: int, k_new: int) -> list[int]:
    """Clique of the padded graph: one (the first) dummy vertex per dummy part."""
    return list(clique) + [i * n + 1 for i in range(k_old, k_new)]


# ---------------------------------------------------------------------------
# Recursive skeleton


@dataclass
class _Choice:
    part: int
    h: list[int]
    l: list[int]
    core: list[int]  # q vertices, or (f_A, f_B)


@dataclass
class _EdgeGadget:
    left: int  # MCC vertex on the i side
    right: int  # MCC vertex on the i' side
    hub: int  # r, or c_e
    mids: list[int]  # the c vertices (deletion variant only)
    s_left: list[int]
    s_right: list[int]


@dataclass
class _Level:
    span: tuple[int, int, int, int]
    left: dict[int, _Choice] = field(default_factory=dict)
    right: dict[int, _Choice] = field(default_factory=dict)
    chain: list[int] = field(default_factory=list)
    children: list[_Level] = field(default_factory=list)
    selectors: list[int] = field(default_factory=list)
    edges: list[_EdgeGadget] = field(default_factory=list)


class _Style:
    """Construction hooks; the deletion and coloring variants differ only here."""

    def __init__(self, b: GadgetBuilder, inst: MccInstance, delta: int) -> None:
        self.b, self.inst, self.delta = b, inst, delta
        self.leaf_of: dict[int, list[int]] = {}

    def leaves(self, v: int, count: int, tag: object) -> list[int]:
        out = self.b.leaves(v, count, tag)
        self.leaf_of[v] = out
        return out

    def choice(self, part: int, tag: object) -> _Choice:
        raise NotImplementedError

    def copy(self, c1: _Choice, c2: _Choice, tag: object) -> list[int]:
        raise NotImplementedError

    def edge(self, left: int, right: int, tag: object) -> _EdgeGadget:
        raise NotImplementedError

    def selector(self, tag: object, choice_nbrs: list[int], s_nbrs: list[int]) -> int:
        raise NotImplementedError


def _build_level(style: _Style, span: tuple[int, int, int, int], stats: dict) -> _Level:
    i1, i2, j1, j2 = span
    lev = _Level(span)
    for i in range(i1, i2 + 1):
        lev.left[i] = style.choice(i, ("C", span, "L", i))
    for i in range(j1, j2 + 1):
        lev.right[i] = style.choice(i, ("C", span, "R", i))
    stats["choice_instances"] += i2 - i1 + 1 + j2 - j1 + 1
    if i1 == i2:
        _build_base(style, lev, stats)
        return lev
    mid, mid2 = (i1 + i2) // 2, (j1 + j2) // 2
    halves = [(i1, mid), (mid + 1, i2)]
    halves2 = [(j1, mid2), (mid2 + 1, j2)]
    for a, b in halves:
        for c, d in halves2:
            child = _build_level(style, (a, b, c, d), stats)
            lev.children.append(child)
            for i, inst in child.left.items():
                lev.chain.extend(style.copy(inst, lev.left[i], ("copy", child.span, "L", i)))
            for i, inst in child.right.items():
                lev.chain.extend(style.copy(inst, lev.right[i], ("copy", child.span, "R", i)))
            stats["copy_gadgets"] += len(child.left) + len(child.right)
    return lev


def _build_base(style: _Style, lev: _Level, stats: dict) -> None:
    inst = style.inst
    i, _, i2, _ = lev.span
    pairs: list[tuple[int, int]] = []
    if i == i2:
        pairs = [(inst.vertex(i, j), inst.vertex(i, j)) for j in range(1, inst.n + 1)]
    else:
        for u, v in inst.cross_edges():
            if inst.part(u) == i and inst.part(v) == i2:
                pairs.append((u, v))
            elif inst.part(v) == i and inst.part(u) == i2:
                pairs.append((v, u))
    for u, v in pairs:
        lev.edges.append(style.edge(u, v, ("edge", lev.span, u, v)))
        key = (min(u, v), max(u, v))
        stats["edge_multiplicity"][key] = stats["edge_multiplicity"].get(key, 0) + 1
    lo_l: list[int] = []
    hi_l: list[int] = []
    lo_r: list[int] = []
    hi_r: list[int] = []
    for eg in lev.edges:
        j1, j2 = inst.index(eg.left), inst.index(eg.right)
        lo_l += eg.s_left[:j1]
        hi_l += eg.s_left[j1:]
        lo_r += eg.s_right[:j2]
        hi_r += eg.s_right[j2:]
    cl, cr = lev.left[i], lev.right[i2]
    lev.selectors = [
        style.selector(("sel", lev.span, "l", "low"), cl.l, lo_l),
        style.selector(("sel", lev.span, "l", "high"), cl.h, hi_l),
        style.selector(("sel", lev.span, "r", "low"), cr.l, lo_r),
        style.selector(("sel", lev.span, "r", "high"), cr.h, hi_r),
    ]


def _levels(lev: _Level) -> list[_Level]:
    out = [lev]
    for c in lev.children:
        out.extend(_levels(c))
    return out


def _choices(root: _Level) -> list[_Choice]:
    return [c for lev in _levels(root) for c in (*lev.left.values(), *lev.right.values())]


def _select(ch: _Choice, s: int) -> tuple[list[int], list[int]]:
    """(selected, unselected) choice vertices for index s: h_j with j <= s and l_j with j > s are selected."""
    sel = ch.h[:s] + ch.l[s:]
    rest = ch.l[:s] + ch.h[s:]
    return sel, rest


def _new_stats() -> dict:
    return {"choice_instances": 0, "copy_gadgets": 0, "edge_multiplicity": {}}


def _skeleton_forest(
    root: _Level,
    top: list[int],
    hang_choice: Callable[[_Choice, int], None],
    hang_edge: Callable[[_EdgeGadget, int], None],
    parent: dict[int, int | None],
) -> None:
    """Chain `top`, then per level chain the copy-gadget vertices and hang originals and sub-levels below."""
    prev: int | None = None
    for v in top:
        parent[v] = prev
        prev = v

    def visit(lev: _Level, attach: int | None) -> None:
        cur = attach
        for v in [*lev.chain, *lev.selectors]:
            parent[v] = cur
            cur = v
        for ch in (*lev.left.values(), *lev.right.values()):
            hang_choice(ch, cur)  # type: ignore[arg-type]
        for eg in lev.edges:
            hang_edge(eg, cur)  # type: ignore[arg-type]
        for child in lev.children:
            visit(child, cur)

    visit(root, prev)


def _hang_leaves(style: _Style, parent: dict[int, int | None]) -> None:
    for owner, leaves in style.leaf_of.items():
        for leaf in leaves:
            parent[leaf] = owner


def _forest_with_splices(b: GadgetBuilder, parent: dict[int, int | None]) -> EliminationForest:
    """Hang each splice's internal components, as chains, below its deepest endpoint."""
    f = EliminationForest(dict(parent))
    depth = f.depths()
    for sp in b.splices:
        ends = list(sp.mapping.values())
        anchor = max(ends, key=lambda v: depth[v])
        internal = set(sp.internal)
        adj: dict[object, list[object]] = {lab: [] for lab in internal}
        for x, y in sp.gadget.edges:
            if x in internal and y in internal:
                adj[x].append(y)
                adj[y].append(x)
        seen: set[object] = set()
        for lab in sp.gadget.internal:
            if lab in seen:
                continue
            comp, stack = [], [lab]
            seen.add(lab)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            order = sorted(comp, key=sp.gadget.internal.index)
            prev = anchor
            for x in order:
                vid = sp.internal[x]
                parent[vid] = prev
                depth[vid] = depth[prev] + 1
                prev = vid
    return EliminationForest(parent)


def td_structure(root: _Level) -> dict:
    return {"levels": len(_levels(root)), "base_levels": sum(1 for lev in _levels(root) if not lev.children)}


# ---------------------------------------------------------------------------
# Bounded-degree deletion


class _BdvdStyle(_Style):
    def choice(self, part: int, tag: object) -> _Choice:
        b, n = self.b, self.inst.n
        h, lo, q = [], [], []
        for j in range(1, n + 1):
            hv = b.add((*tag, "h", j))  # type: ignore[misc]
            lv = b.add((*tag, "l", j))  # type: ignore[misc]
            qv = b.add((*tag, "q", j))  # type: ignore[misc]
            b.edge(hv, qv)
            b.edge(lv, qv)
            self.leaves(qv, self.delta - 1, (*tag, "q", j))  # type: ignore[misc]
            h.append(hv)
            lo.append(lv)
            q.append(qv)
        return _Choice(part, h, lo, q)

    def copy(self, c1: _Choice, c2: _Choice, tag: object) -> list[int]:
        b, n = self.b, self.inst.n
        g1 = b.add((*tag, "g1"))  # type: ignore[misc]
        g2 = b.add((*tag, "g2"))  # type: ignore[misc]
        for v in c1.l + c2.h:
            b.edge(g1, v)
        for v in c2.l + c1.h:
            b.edge(g2, v)
        self.leaves(g1, self.delta - n, (*tag, "g1"))  # type: ignore[misc]
        self.leaves(g2, self.delta - n, (*tag, "g2"))  # type: ignore[misc]
        return [g1, g2]

    def edge(self, left: int, right: int, tag: object) -> _EdgeGadget:
        b, n = self.b, self.inst.n
        r = b.add((*tag, "r"))  # type: ignore[misc]
        mids, sides = [], []
        for side in ("L", "R"):
            ss = []
            for kk in range(1, n + 1):
                c = b.add((*tag, "c", side, kk))  # type: ignore[misc]
                s = b.add((*tag, "s", side, kk))  # type: ignore[misc]
                b.edge(r, c)
                b.edge(c, s)
                self.leaves(c, self.delta, (*tag, "c", side, kk))  # type: ignore[misc]
                mids.append(c)
                ss.append(s)
            sides.append(ss)
        return _EdgeGadget(left, right, r, mids, sides[0], sides[1])

    def selector(self, tag: object, choice_nbrs: list[int], s_nbrs: list[int]) -> int:
        x = self.b.add(tag)
        for v in choice_nbrs + s_nbrs:
            self.b.edge(x, v)
        self.leaves(x, self.delta - len(s_nbrs), tag)
        return x


def bdvd_td_budget(k: int, n: int, edges: int) -> int:
    """Deletion budget for an MCC graph with `edges` edges counting the kn loops."""
    beta = 2 * k * (2 * k - 1)
    return 2 * (edges - k * n) * 2 * n + k * n * 2 * n + 2 * comb(k, 2) + k + n * beta


def bdvd_td(g_mcc: Graph, k: int) -> ReductionBundle:
    """Delta = n^3; budget from the gadget counts; the witness is the recursion's elimination forest."""
    inst = check_mcc(g_mcc, k)
    n = inst.n
    if n < 2:
        raise ValueError("bdvd-td needs parts of at least 2 vertices")
    delta = n**3
    b = GadgetBuilder()
    style = _BdvdStyle(b, inst, delta)
    stats = _new_stats()
    root = _build_level(style, (1, k, 1, k), stats)
    g = b.build()
    budget = bdvd_td_budget(k, n, g_mcc.m)

    parent: dict[int, int | None] = {}

    def hang_choice(ch: _Choice, at: int) -> None:
        for hv, lv, qv in zip(ch.h, ch.l, ch.core):
            parent[qv] = at
            parent[hv] = parent[lv] = qv

    def hang_edge(eg: _EdgeGadget, at: int) -> None:
        parent[eg.hub] = at
        for c, s in zip(eg.mids, eg.s_left + eg.s_right):
            parent[c] = eg.hub
            parent[s] = c

    _skeleton_forest(root, [], hang_choice, hang_edge, parent)
    _hang_leaves(style, parent)
    forest = EliminationForest(parent)

    def forward(clique: Sequence[int]) -> list[int]:
        if not inst.is_clique(clique):
            raise ValueError("not a multicolored clique")
        pick = {inst.part(v): inst.index(v) for v in clique}
        chosen = set(clique)
        out: list[int] = []
        for ch in _choices(root):
            s = pick[ch.part]
            out += ch.h[:s] + ch.l[s:]
        for lev in _levels(root):
            for eg in lev.edges:
                if eg.left in chosen and eg.right in chosen:
                    out += [eg.hub, *eg.s_left, *eg.s_right]
                else:
                    out += eg.mids
        return sorted(out)

    params: dict[str, int | str] = {"problem": "bdvd", "delta": delta, "k": budget}
    meta = {"mcc_k": k, "mcc_n": n, "mcc_edges": g_mcc.m, **_stats_meta(stats), **td_structure(root)}
    return ReductionBundle("bdvd-td", g, params, forest, depth_bound(k), forward, list(b.labels), meta)


def _stats_meta(stats: dict) -> dict:
    mult = stats["edge_multiplicity"]
    return {
        "choice_instances": stats["choice_instances"],
        "copy_gadgets": stats["copy_gadgets"],
        "edge_gadgets": sum(mult.values()),
        "edge_multiplicity": {f"{u}-{v}": c for (u, v), c in sorted(mult.items())},
    }


# ---------------------------------------------------------------------------
# Defective coloring


class _DcStyle(_Style):
    def __init__(self, b: GadgetBuilder, inst: MccInstance, delta: int) -> None:
        super().__init__(b, inst, delta)
        self.q_gadget = equality_gadget(2, delta)
        self.link: dict[int, int] = {}
        self.pA = b.add(("palette", "A"))
        self.pB = b.add(("palette", "B"))
        b.edge(self.pA, self.pB)
        for p, name in ((self.pA, "A"), (self.pB, "B")):
            self.linked_leaves(p, p, delta, ("palette", name))
        self.u = b.add(("u",))
        self.q(self.pA, self.u, ("u",))

    def q(self, x: int, y: int, tag: object) -> None:
        self.b.splice(self.q_gadget, {"u1": x, "u2": y}, ("Q", tag))

    def linked_leaves(self, v: int, p: int, count: int, tag: object) -> list[int]:
        out = self.leaves(v, count, tag)
        for i, leaf in enumerate(out):
            self.q(p, leaf, (tag, "leaf", i))
            self.link[leaf] = p
        return out

    def choice(self, part: int, tag: object) -> _Choice:
        b, n = self.b, self.inst.n
        h, lo = [], []
        for j in range(1, n + 1):
            h.append(b.add((*tag, "h", j)))  # type: ignore[misc]
            lo.append(b.add((*tag, "l", j)))  # type: ignore[misc]
        fa = b.add((*tag, "fA"))  # type: ignore[misc]
        fb = b.add((*tag, "fB"))  # type: ignore[misc]
        for v in h + lo:
            b.edge(fa, v)
            b.edge(fb, v)
        self.q(self.pA, fa, (*tag, "fA"))  # type: ignore[misc]
        self.q(self.pB, fb, (*tag, "fB"))  # type: ignore[misc]
        self.linked_leaves(fa, self.pA, self.delta - n, (*tag, "fA"))  # type: ignore[misc]
        self.linked_leaves(fb, self.pB, self.delta - n, (*tag, "fB"))  # type: ignore[misc]
        return _Choice(part, h, lo, [fa, fb])

    def copy(self, c1: _Choice, c2: _Choice, tag: object) -> list[int]:
        b, n = self.b, self.inst.n
        g1 = b.add((*tag, "g1"))  # type: ignore[misc]
        g2 = b.add((*tag, "g2"))  # type: ignore[misc]
        for v in c1.l + c2.h:
            b.edge(g1, v)
        for v in c2.l + c1.h:
            b.edge(g2, v)
        for gv, name in ((g1, "g1"), (g2, "g2")):
            self.q(self.pA, gv, (*tag, name))  # type: ignore[misc]
            self.linked_leaves(gv, self.pA, self.delta - n, (*tag, name))  # type: ignore[misc]
        return [g1, g2]

    def edge(self, left: int, right: int, tag: object) -> _EdgeGadget:
        b, n = self.b, self.inst.n
        c = b.add((*tag, "c"))  # type: ignore[misc]
        b.edge(self.u, c)  # type: ignore[misc]
        sides = []
        for side in ("L", "R"):
            ss = []
            for kk in range(1, n + 1):
                s = b.add((*tag, "s", side, kk))  # type: ignore[misc]
                b.edge(c, s)  # type: ignore[misc]
                ss.append(s)
            sides.append(ss)
        self.linked_leaves(c, self.pB, self.delta, (*tag, "c"))  # type: ignore[misc]
        return _EdgeGadget(left, right, c, [], sides[0], sides[1])

    def selector(self, tag: object, choice_nbrs: list[int], s_nbrs: list[int]) -> int:
        x = self.b.add(tag)
        for v in choice_nbrs + s_nbrs:
            self.b.edge(x, v)
        self.q(self.pA, x, tag)
        self.linked_leaves(x, self.pA, self.delta - self.inst.n, tag)
        return x


def dc_td_delta(k: int, n: int, edges: int) -> int:
    """Defect bound for an MCC graph with `edges` edges counting the kn loops."""
    return 2 * (edges - k * n) + k * n - (2 * comb(k, 2) + k)


def dc_td(g_mcc: Graph, k: int) -> ReductionBundle:
    """Two colors; palette pair p_A, p_B and hub u.

    The witness is the recursion's forest with gadget internals hung below their
    deepest endpoint. Only chi = 2 is built: the two-color equality gadget has
    independent internals, so it adds one level of depth regardless of Delta.
    """
    inst = check_mcc(g_mcc, k)
    n = inst.n
    delta = dc_td_delta(k, n, g_mcc.m)
    if delta < max(n, 4):
        raise ValueError(f"dc-td needs Delta >= max(n, 4); this graph gives Delta = {delta}")
    b = GadgetBuilder()
    style = _DcStyle(b, inst, delta)
    stats = _new_stats()
    root = _build_level(style, (1, k, 1, k), stats)
    g = b.build()

    parent: dict[int, int | None] = {}

    def hang_choice(ch: _Choice, at: int) -> None:
        fa, fb = ch.core
        parent[fa] = at
        parent[fb] = fa
        for v in ch.h + ch.l:
            parent[v] = fb

    def hang_edge(eg: _EdgeGadget, at: int) -> None:
        parent[eg.hub] = at
        for s in eg.s_left + eg.s_right:
            parent[s] = eg.hub

    _skeleton_forest(root, [style.pA, style.pB, style.u], hang_choice, hang_edge, parent)
    _hang_leaves(style, parent)
    forest = _forest_with_splices(b, parent)

    def forward(clique: Sequence[int]) -> Coloring:
        if not inst.is_clique(clique):
            raise ValueError("not a multicolored clique")
        pick = {inst.part(v): inst.index(v) for v in clique}
        chosen = set(clique)
        col: Coloring = {style.pA: 1, style.pB: 2, style.u: 1}
        for v in (style.pA, style.pB):
            for leaf in style.leaf_of[v]:
                col[leaf] = col[v]
        for ch in _choices(root):
            sel, rest = _select(ch, pick[ch.part])
            col.update(dict.fromkeys(sel, 1))
            col.update(dict.fromkeys(rest, 2))
            col[ch.core[0]], col[ch.core[1]] = 1, 2
        for lev in _levels(root):
            col.update(dict.fromkeys(lev.chain + lev.selectors, 1))
            for eg in lev.edges:
                hit = eg.left in chosen and eg.right in chosen
                col[eg.hub] = 2 if hit else 1
                col.update(dict.fromkeys(eg.s_left + eg.s_right, 1 if hit else 2))
        for leaf, p in style.link.items():
            col[leaf] = col[p]
        return extend_coloring(b, col)

    params: dict[str, int | str] = {"problem": "dc", "delta": delta, "chi": 2}
    meta = {"mcc_k": k, "mcc_n": n, "mcc_edges": g_mcc.m, "u": style.u, **_stats_meta(stats), **td_structure(root)}
    return ReductionBundle("dc-td", g, params, forest, depth_bound(k), forward, list(b.labels), meta)

