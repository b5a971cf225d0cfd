"""Generators from (3,4)-XSAT to BDVD and defective coloring on graphs with small vertex cover.

Variable group V_p gets a choice set of `width` vertices; vertex q (1-based)
encodes the assignment whose bit t (t = 0, 1, ...) is the value of the t-th
variable of V_p, taken from (q - 1) mod 2^|V_p|. Since 2^|V_p| divides the
width, every literal is made true by exactly half of the choice vertices.

Vertex ids: palette (coloring only), then per group kappa, lambda and the
choice vertices, then per family set c and c', then leaves, then secondary
palette sets.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from ..decomp import EliminationForest
from ..graph import Coloring, Graph, GraphBuilder
from .bundle import ReductionBundle
from .xsat import (
    DetectingFamily,
    VarClausePartition,
    XsatFormula,
    build_detecting_family,
    check_detecting_family,
    pad_variables,
    partition_problems,
    partition_variables_clauses,
    xsat_satisfied,
)


def padded_size(n: int, base: int) -> int:
    """Least power of `base` that is at least max(n, base)."""
    size = base
    while size < n:
        size *= base
    return size


@dataclass
class _Prepared:
    phi: XsatFormula
    part: VarClausePartition
    families: list[DetectingFamily]
    sets: list[tuple[int, tuple[int, ...]]]  # (clause group, clause indices)
    original_n: int


def _prepare(
    phi: XsatFormula,
    base: int,
    b: int | None,
    part: VarClausePartition | None,
    families: Sequence[DetectingFamily] | None,
) -> _Prepared:
    n = padded_size(phi.n, base)
    padded = pad_variables(phi, n)
    if b is None:
        b = int(math.log2(n)) if base == 4 else int(math.log2(n)) // 4
    if part is None:
        part = partition_variables_clauses(padded, b)
    else:
        problems = partition_problems(padded, part)
        if problems:
            raise ValueError("partition rejected: " + "; ".join(problems[:3]))
    if families is None:
        families = [build_detecting_family(len(grp), 4) for grp in part.clause_groups]
    if len(families) != len(part.clause_groups):
        raise ValueError("need one detecting family per clause group")
    sets = []
    for i, (grp, fam) in enumerate(zip(part.clause_groups, families)):
        if fam.universe != len(grp) or fam.d < 4:
            raise ValueError(f"family {i} must be 4-detecting on {len(grp)} clauses")
        check_detecting_family(fam)
        sets += [(i, tuple(grp[x - 1] for x in s)) for s in fam.sets]
    return _Prepared(padded, part, list(families), sets, phi.n)


def _satisfiers(prep: _Prepared, width: int) -> tuple[dict[int, list[tuple[int, int]]], list[int]]:
    """For each family set: the (group, choice index) pairs whose assignment satisfies a member clause."""
    group = prep.part.group_of()
    out: dict[int, list[tuple[int, int]]] = {}
    for s_idx, (_, clauses) in enumerate(prep.sets):
        hits = []
        for c in clauses:
            for lit in prep.phi.clauses[c]:
                p = group[abs(lit)]
                pos = prep.part.var_groups[p].index(abs(lit))
                for q in range(1, width + 1):
                    if (((q - 1) >> pos) & 1) == (lit > 0):
                        hits.append((p, q))
        out[s_idx] = hits
    return out, [len(s) for _, s in prep.sets]


def _choice_index(prep: _Prepared, p: int, assignment: Sequence[bool]) -> int:
    code = sum(1 << t for t, v in enumerate(prep.part.var_groups[p]) if assignment[v])
    return code + 1


def _forward_assignment(prep: _Prepared, assignment: Sequence[bool]) -> list[bool]:
    full = list(assignment[: prep.original_n + 1]) + [False] * (prep.phi.n - prep.original_n)
    if len(full) != prep.phi.n + 1 or not xsat_satisfied(prep.phi, full):
        raise ValueError("assignment is not an exactly-one assignment of the formula")
    return full


def _cover_forest(cover: list[int], n: int) -> EliminationForest:
    """Chain the cover; every other vertex hangs below its last vertex."""
    parent: dict[int, int | None] = {}
    prev: int | None = None
    for v in cover:
        parent[v] = prev
        prev = v
    in_cover = set(cover)
    for v in range(1, n + 1):
        if v not in in_cover:
            parent[v] = prev
    return EliminationForest(parent)


def is_vertex_cover(g: Graph, cover: Sequence[int]) -> bool:
    s = set(cover)
    return all(u in s or v in s for u, v in g.edges)


def _meta(prep: _Prepared, cover: list[int]) -> dict:
    return {
        "n_original": prep.original_n,
        "n_padded": prep.phi.n,
        "dummy_variables": list(range(prep.original_n + 1, prep.phi.n + 1)),
        "b": prep.part.b,
        "n_V": len(prep.part.var_groups),
        "n_C": len(prep.part.clause_groups),
        "family_sizes": [len(f.sets) for f in prep.families],
        "var_groups": [list(g) for g in prep.part.var_groups],
        "clause_groups": [list(g) for g in prep.part.clause_groups],
        "cover": cover,
    }


def bdvd_vc(
    phi: XsatFormula,
    part: VarClausePartition | None = None,
    families: Sequence[DetectingFamily] | None = None,
) -> ReductionBundle:
    """Delta = n^3 and k = n_V after padding n to a power of 4; groups have at most log2(n) variables."""
    prep = _prepare(phi, 4, None if part is None else part.b, part, families)
    n = prep.phi.n
    if any(1 << len(grp) > n for grp in prep.part.var_groups):
        raise ValueError("a variable group has more assignments than choice vertices")
    delta, k = n**3, len(prep.part.var_groups)
    gb = GraphBuilder()
    kappa, lam, choice = [], [], []
    for p in range(len(prep.part.var_groups)):
        kp, lp = gb.add(("kappa", p)), gb.add(("lambda", p))
        vs = [gb.add(("v", p, q)) for q in range(1, n + 1)]
        for v in vs:
            gb.edge(kp, v)
            gb.edge(lp, v)
        kappa.append(kp)
        lam.append(lp)
        choice.append(vs)
    hits, sizes = _satisfiers(prep, n)
    cs, cps = [], []
    for s_idx in range(len(prep.sets)):
        c, cp = gb.add(("c", s_idx)), gb.add(("c'", s_idx))
        nbrs = {choice[p][q - 1] for p, q in hits[s_idx]}
        if len(nbrs) != sizes[s_idx] * 3 * n // 2:
            raise ValueError(f"family set {s_idx} sees {len(nbrs)} choice vertices, expected {sizes[s_idx] * 3 * n // 2}")
        for vs in choice:
            for v in vs:
                gb.edge(c if v in nbrs else cp, v)
        cs.append((c, len(nbrs), sizes[s_idx]))
        cps.append((cp, n * len(choice) - len(nbrs), sizes[s_idx]))
    for p in range(len(choice)):
        gb.leaves(kappa[p], delta + 1 - n, ("kappa", p))
        gb.leaves(lam[p], delta + 1 - n, ("lambda", p))
    for s_idx, ((c, deg, size), (cp, deg2, _)) in enumerate(zip(cs, cps)):
        if deg > delta + size or deg2 > delta + k - size:
            raise ValueError("clause vertex degree exceeds its target; formula too large for Delta = n^3")
        gb.leaves(c, delta + size - deg, ("c", s_idx))
        gb.leaves(cp, delta + k - size - deg2, ("c'", s_idx))
    g = gb.build()
    cover = kappa + lam + [c for c, _, _ in cs] + [cp for cp, _, _ in cps]

    def forward(assignment: Sequence[bool]) -> list[int]:
        full = _forward_assignment(prep, assignment)
        return [choice[p][_choice_index(prep, p, full) - 1] for p in range(len(choice))]

    params: dict[str, int | str] = {"problem": "bdvd", "delta": delta, "k": k}
    meta = _meta(prep, cover)
    return ReductionBundle("bdvd-vc", g, params, _cover_forest(cover, g.n), len(cover) + 1, forward, list(gb.labels), meta)


def bdvd_vc_cover_bound(n_v: int, family_sizes: Sequence[int]) -> int:
    return 2 * n_v + 2 * sum(family_sizes)


def dc_vc(
    phi: XsatFormula,
    chi: int = 2,
    part: VarClausePartition | None = None,
    families: Sequence[DetectingFamily] | None = None,
) -> ReductionBundle:
    """Delta = n_V + n_C * n_F after padding n to a power of 16; choice sets have n^(1/4) vertices."""
    if chi < 2:
        raise ValueError("dc-vc needs chi >= 2")
    prep = _prepare(phi, 16, None if part is None else part.b, part, families)
    n = prep.phi.n
    width = math.isqrt(math.isqrt(n))
    if any(1 << len(grp) > width for grp in prep.part.var_groups):
        raise ValueError("a variable group has more assignments than choice vertices")
    n_v, n_c = len(prep.part.var_groups), len(prep.part.clause_groups)
    n_f = max((len(f.sets) for f in prep.families), default=0)
    delta = n_v + n_c * n_f
    gb = GraphBuilder()
    blue = [gb.add(("b", i)) for i in range(1, delta + 2)]
    red = [gb.add(("r", j)) for j in range(1, 2 * delta + 2)]
    for x in blue:
        for y in red:
            gb.edge(x, y)
    kappa, lam, choice = [], [], []
    for p in range(n_v):
        kp, lp = gb.add(("kappa", p)), gb.add(("lambda", p))
        vs = [gb.add(("v", p, q)) for q in range(1, width + 1)]
        for v in vs:
            gb.edge(kp, v)
            gb.edge(lp, v)
        for y in red[: delta + 1]:
            gb.edge(kp, y)
        for x in blue[: delta - 1]:
            gb.edge(kp, x)
        for x in blue:
            gb.edge(lp, x)
        if delta - (width - 1) < 0:
            raise ValueError("Delta too small for the choice sets")
        for y in red[: delta - (width - 1)]:
            gb.edge(lp, y)
        kappa.append(kp)
        lam.append(lp)
        choice.append(vs)
    hits, sizes = _satisfiers(prep, width)
    cs, cps = [], []
    for s_idx in range(len(prep.sets)):
        c, cp = gb.add(("c", s_idx)), gb.add(("c'", s_idx))
        nbrs = sorted({choice[p][q - 1] for p, q in hits[s_idx]})
        size = sizes[s_idx]
        if len(nbrs) != size * 3 * width // 2:
            raise ValueError(f"family set {s_idx} sees {len(nbrs)} choice vertices, expected {size * 3 * width // 2}")
        red_extra = delta - (len(nbrs) - size)
        if red_extra < 0 or size > delta:
            raise ValueError("Delta too small for the clause gadgets")
        for v in nbrs:
            gb.edge(c, v)
            gb.edge(cp, v)
        for y in red[: delta + 1]:
            gb.edge(c, y)
        for x in blue[: delta - size]:
            gb.edge(c, x)
        for x in blue:
            gb.edge(cp, x)
        for y in red[:red_extra]:
            gb.edge(cp, y)
        cs.append(c)
        cps.append(cp)
    earlier = gb.n
    secondary: list[list[int]] = []
    for i in range(3, chi + 1):
        pi = [gb.add(("P", i, j)) for j in range(1, i * delta + 2)]
        for x in pi:
            for v in range(1, earlier + 1):
                gb.edge(x, v)
            for prev in secondary:
                for y in prev:
                    gb.edge(x, y)
        secondary.append(pi)
    g = gb.build()
    cover = blue + red + kappa + lam + cs + cps + [x for pi in secondary for x in pi]

    def forward(assignment: Sequence[bool]) -> Coloring:
        full = _forward_assignment(prep, assignment)
        col: Coloring = dict.fromkeys(range(1, g.n + 1), 2)
        col.update(dict.fromkeys(blue + kappa + cs, 1))
        for p in range(n_v):
            col[choice[p][_choice_index(prep, p, full) - 1]] = 1
        for i, pi in zip(range(3, chi + 1), secondary):
            col.update(dict.fromkeys(pi, i))
        return col

    params: dict[str, int | str] = {"problem": "dc", "delta": delta, "chi": chi}
    meta = _meta(prep, cover)
    meta["n_F"] = n_f
    meta["choice_width"] = width
    return ReductionBundle("dc-vc", g, params, _cover_forest(cover, g.n), len(cover) + 1, forward, list(gb.labels), meta)


def dc_vc_cover_bound(chi: int, delta: int, n_v: int, family_sizes: Sequence[int]) -> int:
    """Main palette (Delta+1 plus 2*Delta+1), secondary sets i*Delta+1 for i >= 3, and the gadget hubs."""
    return sum(i * delta + 1 for i in range(1, chi + 1)) + 2 * n_v + 2 * sum(family_sizes)


__all__ = [
    "bdvd_vc",
    "bdvd_vc_cover_bound",
    "dc_vc",
    "dc_vc_cover_bound",
    "is_vertex_cover",
    "padded_size",
]
