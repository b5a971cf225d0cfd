"""Generators from q-CSP-B to BDVD and defective coloring with pathwidth witnesses.

Vertex numbering follows creation order, and the witness is the vertex
separation decomposition of that order. Each generator creates one column
(one constraint, in every copy) at a time, so a bag holds the per-variable
frontier, the current column's gadgets and, for coloring, the palette.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

from ..csp import Assignment, Constraint, CspInstance
from ..decomp import path_decomposition_from_order
from ..gadgets import (
    GadgetBuilder,
    difference_gadget,
    equality_gadget,
    exclusion_gadget,
    extend_coloring,
    implication_gadget,
    palette_gadget,
)
from ..graph import Coloring
from .bundle import ReductionBundle


def width_bound(phi: CspInstance, extra: int = 3) -> int:
    return phi.n + 2 * phi.B**phi.q + extra


def _check_assignment(phi: CspInstance, f: Assignment) -> None:
    for x in range(1, phi.n + 1):
        if not 1 <= f.get(x, 0) <= phi.B:
            raise ValueError(f"assignment lacks a value in 1..{phi.B} for variable {x}")
    if not phi.satisfied_by(f):
        raise ValueError("assignment does not satisfy the instance")


def match_index(c: Constraint, f: Assignment) -> int:
    """Position of the first satisfying tuple consistent with f."""
    key = tuple(f[v] for v in c.scope)
    return c.sat.index(key)


def _columns(phi: CspInstance, copies: int) -> list[tuple[int, int, Constraint]]:
    """(copy, constraint index, constraint) in layout order."""
    return [(a, j, c) for a in range(copies) for j, c in enumerate(phi.constraints)]


def _finish(
    construction: str,
    builder: GadgetBuilder,
    params: dict[str, int | str],
    bound: int,
    forward: Callable[[Assignment], list[int] | Coloring],
    meta: dict,
) -> ReductionBundle:
    g = builder.build()
    return ReductionBundle(
        construction=construction,
        graph=g,
        params=params,
        witness=path_decomposition_from_order(g),
        witness_bound=bound,
        forward_builder=forward,
        labels=list(builder.labels),
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Bounded-degree deletion


def bdvd_pw_delta1(phi: CspInstance) -> ReductionBundle:
    """Delta = 1 from domain size 3: 3-vertex block paths, constraint cliques with one leaf per vertex."""
    if phi.B != 3:
        raise ValueError(f"bdvd-pw-d1 needs B = 3, got B = {phi.B}")
    n = phi.n
    kappa = 2 * n + 1
    k_copy = phi.m * n + sum(len(c.sat) - 1 for c in phi.constraints)
    b = GadgetBuilder()
    last: dict[int, int] = {}
    for a, j, c in _columns(phi, kappa):
        clique = []
        for ell in range(len(c.sat)):
            v = b.add(("clique", a, j, ell))
            b.leaves(v, 1, ("clique", a, j, ell))
            clique.append(v)
        for x in range(len(clique)):
            for y in range(x + 1, len(clique)):
                b.edge(clique[x], clique[y])
        for i in range(1, n + 1):
            path = [b.add(("block", a, j, i, y)) for y in (1, 2, 3)]
            b.edge(path[0], path[1])
            b.edge(path[1], path[2])
            if i in last:
                b.edge(last[i], path[0])
            last[i] = path[2]
        for ell, t in enumerate(c.sat):
            for x, y in zip(c.scope, t):
                b.edge(clique[ell], b[("block", a, j, x, y)])

    def forward(f: Assignment) -> list[int]:
        _check_assignment(phi, f)
        out = []
        for a, j, c in _columns(phi, kappa):
            for i in range(1, n + 1):
                out.append(b[("block", a, j, i, f[i])])
            keep = match_index(c, f)
            out.extend(b[("clique", a, j, ell)] for ell in range(len(c.sat)) if ell != keep)
        return sorted(out)

    params: dict[str, int | str] = {"problem": "bdvd", "delta": 1, "k": kappa * k_copy}
    meta = {"copies": kappa, "k_per_copy": k_copy}
    return _finish("bdvd-pw-d1", b, params, width_bound(phi, 1), forward, meta)


def bdvd_pw_general(phi: CspInstance) -> ReductionBundle:
    """Delta = B - 2 >= 2. CSP value v corresponds to block value p = v - 1 in 0..Delta+1."""
    if phi.B < 4:
        raise ValueError(f"bdvd-pw needs B >= 4, got B = {phi.B}")
    n, delta = phi.n, phi.B - 2
    kappa = (n + 1) * ((2 * delta + 1) * n + 1)
    k_copy = phi.m * n * (delta + 1) + sum(len(c.sat) - 1 for c in phi.constraints)
    b = GadgetBuilder()
    for i in range(1, n + 1):
        b.add(("a", i, 0))
    for col, (a, j, c) in enumerate(_columns(phi, kappa)):
        clique = []
        for ell in range(len(c.sat)):
            v = b.add(("clique", a, j, ell))
            b.leaves(v, delta, ("clique", a, j, ell))
            clique.append(v)
        for x in range(len(clique)):
            for y in range(x + 1, len(clique)):
                b.edge(clique[x], clique[y])
        for i in range(1, n + 1):
            left = b[("a", i, col)]
            tag = ("block", a, j, i)
            bv = b.add((*tag, "b"))
            right = b.add(("a", i, col + 1))
            b.edge(left, bv)
            b.edge(right, bv)
            b.leaves(bv, delta, (*tag, "b"))
            for t in range(1, delta + 1):
                chi_t = b.add((*tag, "chi", t))
                q_t = b.add((*tag, "q", t))
                b.leaves(q_t, delta - 1, (*tag, "q", t))
                y_t = b.add((*tag, "y", t))
                b.edge(left, chi_t)
                b.edge(chi_t, q_t)
                b.edge(q_t, y_t)
                b.edge(y_t, right)
        for ell, t in enumerate(c.sat):
            for x, val in zip(c.scope, t):
                p = val - 1
                tag = ("block", a, j, x)
                if p == delta + 1:
                    b.edge(clique[ell], b[("a", x, col)])
                    continue
                b.edge(clique[ell], b[(*tag, "b")])
                for w in range(1, p + 1):
                    b.edge(clique[ell], b[(*tag, "chi", w)])
                for w in range(p + 1, delta + 1):
                    b.edge(clique[ell], b[(*tag, "y", w)])
    columns = _columns(phi, kappa)

    def forward(f: Assignment) -> list[int]:
        _check_assignment(phi, f)
        out: set[int] = set()
        for col, (a, j, c) in enumerate(columns):
            for i in range(1, n + 1):
                p = f[i] - 1
                tag = ("block", a, j, i)
                if p == delta + 1:
                    out.update((b[("a", i, col)], b[("a", i, col + 1)]))
                    out.update(b[(*tag, "q", t)] for t in range(1, delta + 1))
                else:
                    out.add(b[(*tag, "b")])
                    out.update(b[(*tag, "chi", w)] for w in range(1, p + 1))
                    out.update(b[(*tag, "y", w)] for w in range(p + 1, delta + 1))
            keep = match_index(c, f)
            out.update(b[("clique", a, j, ell)] for ell in range(len(c.sat)) if ell != keep)
        return sorted(out)

    params: dict[str, int | str] = {"problem": "bdvd", "delta": delta, "k": n + kappa * k_copy}
    meta = {"copies": kappa, "k_per_copy": k_copy, "value_map": "p = v - 1"}
    return _finish("bdvd-pw", b, params, width_bound(phi), forward, meta)


# ---------------------------------------------------------------------------
# Defective coloring


class _DcLayout:
    """Gadget splicing against a global palette p^1..p^chi."""

    def __init__(self, chi: int, delta: int) -> None:
        if chi < 2 or delta < 1:
            raise ValueError("coloring generators need chi >= 2 and delta >= 1")
        self.chi, self.delta = chi, delta
        self.b = GadgetBuilder()
        self.palette = [self.b.add(("palette", i)) for i in range(1, chi + 1)]
        for x in range(chi):
            for y in range(x + 1, chi):
                self.b.edge(self.palette[x], self.palette[y])
        for i, p in enumerate(self.palette, 1):
            for leaf in self.b.leaves(p, delta, ("palette", i)):
                self.q(p, leaf, ("palette", i, "q", leaf))

    def p(self, i: int) -> int:
        return self.palette[i - 1]

    def q(self, u: int, v: int, tag: object) -> None:
        self.b.splice(equality_gadget(self.chi, self.delta), {"u1": u, "u2": v}, ("Q", tag))

    def d(self, u: int, v: int, k: int, tag: object) -> None:
        self.b.splice(difference_gadget(self.chi, self.delta, k), {"u1": u, "u2": v}, ("D", tag))

    def pal(self, u: int, v: int, w: int, tag: object) -> None:
        if self.chi >= 3:
            self.b.splice(palette_gadget(self.chi, self.delta), {"u1": u, "u2": v, "u3": w}, ("P", tag))

    def _with_palette(self, u: int, v: int) -> dict[str, int]:
        m = {"u1": u, "u2": v}
        m.update({f"c{i}": p for i, p in enumerate(self.palette, 1)})
        return m

    def implies(self, u: int, v: int, i: int, j: int, tag: object) -> None:
        self.b.splice(implication_gadget(self.chi, self.delta, i, j), self._with_palette(u, v), ("I", tag))

    def excludes(self, u: int, v: int, i: int, j: int, tag: object) -> None:
        self.b.splice(exclusion_gadget(self.chi, self.delta, i, j), self._with_palette(u, v), ("E", tag))

    def constraint(self, tag: object, s: int, wire: Callable[[int, int], None]) -> None:
        """Chain r_i, k_i, v_i for i in 1..s; wire(ell, v) splices the wiring of v_ell."""
        b, p1, p2 = self.b, self.p(1), self.p(2)
        r = b.add((*tag, "r", 1))
        self.q(p2, r, (*tag, "r", 1))
        for ell in range(1, s + 1):
            v = b.add((*tag, "v", ell))
            self.pal(p1, p2, v, (*tag, "v", ell))
            wire(ell, v)
            k = b.add((*tag, "k", ell))
            if ell < s:
                self.pal(p1, p2, k, (*tag, "k", ell))
            else:
                self.q(p2, k, (*tag, "k", ell))
            if self.delta >= 2:
                self.d(p2, k, self.delta - 1, (*tag, "k", ell))
            b.edge(k, r)
            b.edge(k, v)
            if ell < s:
                r = b.add((*tag, "r", ell + 1))
                self.pal(p1, p2, r, (*tag, "r", ell + 1))
                self.d(k, r, self.delta + 1, (*tag, "kr", ell))

    def color_constraint(self, col: Coloring, tag: object, s: int, ell: int) -> None:
        """Selected vertex v_ell gets color 1; the chain flips at position ell."""
        for z in range(1, s + 1):
            col[self.b[(*tag, "v", z)]] = 1 if z == ell else 2
            col[self.b[(*tag, "k", z)]] = 1 if z < ell else 2
            col[self.b[(*tag, "r", z)]] = 2 if z <= ell else 1

    def base_coloring(self) -> Coloring:
        col: Coloring = {}
        for i, p in enumerate(self.palette, 1):
            col[p] = i
            for leaf in range(self.delta):
                col[self.b[(("palette", i), "leaf", leaf)]] = i
        return col


def _other(c: int) -> int:
    return 2 if c == 1 else 1


def dc_pw_delta1(phi: CspInstance, chi: int) -> ReductionBundle:
    """Delta = 1 from domain size 2*chi. Value s <= chi colors a and x with s; value chi+k colors a and y with k."""
    if chi < 2:
        raise ValueError("dc-pw-d1 needs chi >= 2")
    if phi.B != 2 * chi:
        raise ValueError(f"dc-pw-d1 needs B = 2*chi = {2 * chi}, got B = {phi.B}")
    n = phi.n
    kappa = n + 1
    lay = _DcLayout(chi, 1)
    b = lay.b
    for i in range(1, n + 1):
        b.add(("a", i, 0))
    columns = _columns(phi, kappa)
    for col, (a, j, c) in enumerate(columns):
        for i in range(1, n + 1):
            tag = ("block", a, j, i)
            left = b[("a", i, col)]
            x = b.add((*tag, "x"))
            y = b.add((*tag, "y"))
            bv = b.add((*tag, "b"))
            right = b.add(("a", i, col + 1))
            for u, v in ((left, x), (x, y), (y, right), (bv, x), (bv, y)):
                b.edge(u, v)
            lay.d(left, bv, 2, (*tag, "ab"))
            lay.q(left, right, (*tag, "aa"))
            lay.pal(left, bv, x, (*tag, "abx"))
            lay.pal(right, bv, y, (*tag, "aby"))
        ctag = ("constraint", a, j)

        def wire(ell: int, v: int, c: Constraint = c, a: int = a, j: int = j, col: int = col) -> None:
            for x, s in zip(c.scope, c.sat[ell - 1]):
                tag = ("block", a, j, x)
                wtag = ("wire", a, j, ell, x)
                if s <= chi:
                    lay.implies(v, b[("a", x, col)], 1, s, (*wtag, "a"))
                    lay.implies(v, b[(*tag, "x")], 1, s, (*wtag, "x"))
                else:
                    lay.implies(v, b[("a", x, col)], 1, s - chi, (*wtag, "a"))
                    lay.excludes(v, b[(*tag, "x")], 1, s - chi, (*wtag, "x"))

        lay.constraint(ctag, len(c.sat), wire)

    def forward(f: Assignment) -> Coloring:
        _check_assignment(phi, f)
        out = lay.base_coloring()
        for col, (a, j, c) in enumerate(columns):
            for i in range(1, n + 1):
                tag = ("block", a, j, i)
                k = f[i] if f[i] <= chi else f[i] - chi
                out[b[("a", i, col)]] = out[b[("a", i, col + 1)]] = k
                out[b[(*tag, "b")]] = _other(k)
                same, diff = ("x", "y") if f[i] <= chi else ("y", "x")
                out[b[(*tag, same)]] = k
                out[b[(*tag, diff)]] = _other(k)
            lay.color_constraint(out, ("constraint", a, j), len(c.sat), match_index(c, f) + 1)
        return extend_coloring(b, out)

    params: dict[str, int | str] = {"problem": "dc", "delta": 1, "chi": chi}
    meta = {"copies": kappa}
    return _finish("dc-pw-d1", b, params, width_bound(phi), forward, meta)


def dc_value_split(v: int, delta: int) -> tuple[int, int]:
    """CSP value v in 1..chi*(Delta+1) as (k, d) with v - 1 = (Delta+1)(k-1) + d."""
    return (v - 1) // (delta + 1) + 1, (v - 1) % (delta + 1)


def dc_pw_general(phi: CspInstance, chi: int, delta: int) -> ReductionBundle:
    """Delta >= 2 from domain size chi*(Delta+1); value (k, d) colors a, chi_1..chi_d and y_{d+1..Delta} with k."""
    if chi < 2 or delta < 2:
        raise ValueError("dc-pw needs chi >= 2 and delta >= 2")
    if phi.B != chi * (delta + 1):
        raise ValueError(f"dc-pw needs B = chi*(delta+1) = {chi * (delta + 1)}, got B = {phi.B}")
    n = phi.n
    kappa = n * delta + 1
    lay = _DcLayout(chi, delta)
    b = lay.b
    for i in range(1, n + 1):
        b.add(("a", i, 0))
    columns = _columns(phi, kappa)
    for col, (a, j, c) in enumerate(columns):
        for i in range(1, n + 1):
            tag = ("block", a, j, i)
            left = b[("a", i, col)]
            b1 = b.add((*tag, "b1"))
            b2 = b.add((*tag, "b2"))
            right = b.add(("a", i, col + 1))
            lay.q(left, b2, (*tag, "ab2"))
            lay.q(b2, right, (*tag, "b2a"))
            lay.d(b1, b2, delta + 1, (*tag, "b1b2"))
            for t in range(1, delta + 1):
                chi_t = b.add((*tag, "chi", t))
                y_t = b.add((*tag, "y", t))
                b.edge(left, chi_t)
                b.edge(right, y_t)
                for w in (chi_t, y_t):
                    b.edge(b1, w)
                    b.edge(b2, w)
                lay.pal(b1, b2, chi_t, (*tag, "chi", t))
                lay.pal(b1, b2, y_t, (*tag, "y", t))

        def wire(ell: int, v: int, c: Constraint = c, a: int = a, j: int = j, col: int = col) -> None:
            for x, s in zip(c.scope, c.sat[ell - 1]):
                k, dd = dc_value_split(s, delta)
                tag = ("block", a, j, x)
                wtag = ("wire", a, j, ell, x)
                lay.implies(v, b[("a", x, col)], 1, k, (*wtag, "a"))
                for w in range(1, delta + 1):
                    if w <= dd:
                        lay.implies(v, b[(*tag, "chi", w)], 1, k, (*wtag, w))
                    else:
                        lay.excludes(v, b[(*tag, "chi", w)], 1, k, (*wtag, w))

        lay.constraint(("constraint", a, j), len(c.sat), wire)

    def forward(f: Assignment) -> Coloring:
        _check_assignment(phi, f)
        out = lay.base_coloring()
        for col, (a, j, c) in enumerate(columns):
            for i in range(1, n + 1):
                k, dd = dc_value_split(f[i], delta)
                other = _other(k)
                tag = ("block", a, j, i)
                out[b[("a", i, col)]] = out[b[("a", i, col + 1)]] = k
                out[b[(*tag, "b2")]] = k
                out[b[(*tag, "b1")]] = other
                for t in range(1, delta + 1):
                    out[b[(*tag, "chi", t)]] = k if t <= dd else other
                    out[b[(*tag, "y", t)]] = other if t <= dd else k
            lay.color_constraint(out, ("constraint", a, j), len(c.sat), match_index(c, f) + 1)
        return extend_coloring(b, out)

    params: dict[str, int | str] = {"problem": "dc", "delta": delta, "chi": chi}
    meta = {"copies": kappa, "value_map": "v - 1 = (delta+1)(k-1) + d"}
    return _finish("dc-pw", b, params, width_bound(phi), forward, meta)


def vertex_count_block_bdvd(delta: int) -> int:
    """Vertices of one Delta >= 2 block, counting both shared ends."""
    return 2 + 1 + delta + 3 * delta + delta * (delta - 1)


__all__: Sequence[str] = (
    "bdvd_pw_delta1",
    "bdvd_pw_general",
    "dc_pw_delta1",
    "dc_pw_general",
    "dc_value_split",
    "match_index",
    "vertex_count_block_bdvd",
    "width_bound",
)
