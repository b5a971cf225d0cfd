"""(3,4)-SAT and (3,4)-XSAT formulas, the SAT-to-XSAT transform, the variable/clause partition and detecting families.

Literals follow DIMACS: variable x is the integer x, its negation is -x.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from ..oracle import verify_detecting_family

Clause = tuple[int, int, int]


@dataclass(frozen=True)
class XsatFormula:
    """Clauses of 3 literals over 3 distinct variables; each variable occurs in at most 4 clauses.

    The same type carries (3,4)-SAT inputs; only the semantics of satisfaction differ.
    """

    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("variable count must be nonnegative")
        occ = [0] * (self.n + 1)
        for idx, cl in enumerate(self.clauses):
            if len(cl) != 3:
                raise ValueError(f"clause {idx + 1} has {len(cl)} literals, expected 3")
            vs = [abs(lit) for lit in cl]
            if any(lit == 0 or abs(lit) > self.n for lit in cl):
                raise ValueError(f"clause {idx + 1} has a literal outside 1..{self.n}")
            if len(set(vs)) != 3:
                raise ValueError(f"clause {idx + 1} repeats a variable")
            for v in vs:
                occ[v] += 1
                if occ[v] > 4:
                    raise ValueError(f"variable {v} occurs in more than 4 clauses")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self, v: int) -> list[int]:
        """Indices of the clauses containing variable v."""
        return [i for i, cl in enumerate(self.clauses) if v in (abs(x) for x in cl)]


def make_formula(n: int, clauses: Iterable[Sequence[int]]) -> XsatFormula:
    return XsatFormula(n, tuple(tuple(c) for c in clauses))  # type: ignore[misc]


def literal_true(lit: int, assignment: Sequence[bool]) -> bool:
    """`assignment` is indexed from 1; index 0 is ignored."""
    return assignment[abs(lit)] == (lit > 0)


def xsat_satisfied(phi: XsatFormula, assignment: Sequence[bool]) -> bool:
    return all(sum(literal_true(x, assignment) for x in cl) == 1 for cl in phi.clauses)


def sat_satisfied(phi: XsatFormula, assignment: Sequence[bool]) -> bool:
    return all(any(literal_true(x, assignment) for x in cl) for cl in phi.clauses)


@functools.lru_cache(maxsize=32)
def _columns(n: int) -> tuple[np.ndarray, ...]:
    """Packed truth columns: bit r of column v is variable v under assignment r (bit v-1 of r)."""
    words = max(1, (1 << n) // 64)
    w = np.arange(words, dtype=np.uint64)
    cols = [np.full(words, _WORD_MASKS[0] if n >= 6 else np.uint64((1 << (1 << n)) - 1))]
    for v in range(1, n + 1):
        if v <= 6:
            cols.append(np.full(words, _WORD_MASKS[v]) & cols[0])
        else:
            cols.append(np.uint64(0) - ((w >> np.uint64(v - 7)) & np.uint64(1)))
    for c in cols:
        c.flags.writeable = False
    return tuple(cols)


_WORD_MASKS = [np.uint64((1 << 64) - 1)] + [
    np.uint64(sum(1 << r for r in range(64) if (r >> (v - 1)) & 1)) for v in range(1, 7)
]


def _first_model(phi: XsatFormula, exact: bool) -> list[bool] | None:
    """Scan all 2^n assignments bit-parallel; return the first in index order satisfying every clause."""
    cols = _columns(phi.n)
    ok = cols[0].copy()
    for cl in phi.clauses:
        one = np.zeros_like(ok)
        many = np.zeros_like(ok)
        for lit in cl:
            col = cols[abs(lit)] if lit > 0 else cols[abs(lit)] ^ cols[0]
            if exact:
                many |= one & col
                one ^= col
            else:
                one |= col
        ok &= one & ~many
    hits = np.flatnonzero(ok)
    if not hits.size:
        return None
    word = int(ok[hits[0]])
    row = int(hits[0]) * 64 + (word & -word).bit_length() - 1
    return _assignment(phi, row)


def _assignment(phi: XsatFormula, row: int) -> list[bool]:
    return [False] + [bool((row >> (v - 1)) & 1) for v in range(1, phi.n + 1)]


def sat_bruteforce(phi: XsatFormula) -> list[bool] | None:
    """First satisfying assignment in index order, by full enumeration."""
    return _first_model(phi, exact=False)


def xsat_bruteforce(phi: XsatFormula) -> list[bool] | None:
    """First exactly-one-true assignment in index order, by full enumeration."""
    return _first_model(phi, exact=True)


def parse_cnf(text: str) -> XsatFormula:
    """DIMACS CNF: a `p cnf n m` header, then clauses terminated by 0."""
    n = m = None
    lits: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad header: {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise ValueError("clause before header")
        lits.extend(int(t) for t in line.split())
    if n is None or m is None:
        raise ValueError("missing header")
    clauses: list[list[int]] = [[]]
    for lit in lits:
        if lit == 0:
            clauses.append([])
        else:
            clauses[-1].append(lit)
    if clauses[-1]:
        raise ValueError("last clause is not terminated by 0")
    clauses.pop()
    if len(clauses) != m:
        raise ValueError(f"header declares {m} clauses, found {len(clauses)}")
    return make_formula(n, clauses)


def emit_cnf(phi: XsatFormula) -> str:
    lines = [f"p cnf {phi.n} {phi.m}"]
    lines += [" ".join(map(str, cl)) + " 0" for cl in phi.clauses]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SAT to XSAT


def xsat_aux(n: int, i: int) -> tuple[int, int, int, int]:
    """Variables alpha, beta, gamma, delta of source clause i (0-based) in the transformed formula."""
    base = n + 4 * i
    return base + 1, base + 2, base + 3, base + 4


def sat34_to_xsat34(phi: XsatFormula) -> XsatFormula:
    """Clause x | y | z becomes (-x | a | b), (y | b | c), (-z | c | d) with fresh a, b, c, d."""
    out: list[Clause] = []
    for i, (x, y, z) in enumerate(phi.clauses):
        a, b, c, d = xsat_aux(phi.n, i)
        out += [(-x, a, b), (y, b, c), (-z, c, d)]
    return XsatFormula(phi.n + 4 * phi.m, tuple(out))


def xsat_forward(phi: XsatFormula, assignment: Sequence[bool]) -> list[bool]:
    """Extend a satisfying assignment of the (3,4)-SAT formula to an exactly-one assignment of its transform."""
    if not sat_satisfied(phi, assignment):
        raise ValueError("assignment does not satisfy the formula")
    out = list(assignment[: phi.n + 1]) + [False] * (4 * phi.m)
    for i, (x, y, z) in enumerate(phi.clauses):
        fx, fy, fz = (literal_true(t, assignment) for t in (x, y, z))
        if fy:
            vals = (fx, False, False, fz)
        elif fx and fz:
            vals = (True, False, True, False)
        elif fx:
            vals = (False, True, False, False)
        else:
            vals = (False, False, True, False)
        for var, val in zip(xsat_aux(phi.n, i), vals):
            out[var] = val
    return out


def all_sat34_formulas(n_vars: int, max_clauses: int) -> Iterable[XsatFormula]:
    """Every (3,4)-SAT formula over variables 1..n_vars with at most `max_clauses` distinct clauses."""
    clauses = [
        tuple(s * v for s, v in zip(signs, vs))
        for vs in itertools.combinations(range(1, n_vars + 1), 3)
        for signs in itertools.product((1, -1), repeat=3)
    ]
    for m in range(max_clauses + 1):
        for combo in itertools.combinations(clauses, m):
            occ = [0] * (n_vars + 1)
            for cl in combo:
                for lit in cl:
                    occ[abs(lit)] += 1
            if max(occ) <= 4:
                yield XsatFormula(n_vars, combo)  # type: ignore[arg-type]


def random_xsat(n: int, m: int, seed: int) -> XsatFormula:
    """Random (3,4)-XSAT formula with up to m clauses; clauses that would break the occurrence cap are skipped."""
    rng = np.random.default_rng(seed)
    occ = [0] * (n + 1)
    out: list[Clause] = []
    for _ in range(4 * m):
        if len(out) == m:
            break
        free = [v for v in range(1, n + 1) if occ[v] < 4]
        if len(free) < 3:
            break
        vs = rng.choice(free, size=3, replace=False)
        cl = tuple(int(v) if rng.random() < 0.5 else -int(v) for v in vs)
        for v in vs:
            occ[int(v)] += 1
        out.append(cl)  # type: ignore[arg-type]
    return XsatFormula(n, tuple(out))


def random_satisfiable_xsat(n: int, m: int, seed: int) -> tuple[XsatFormula, list[bool]]:
    """Random (3,4)-XSAT formula with a planted exactly-one assignment."""
    rng = np.random.default_rng(seed)
    planted = [False] + [bool(rng.random() < 0.5) for _ in range(n)]
    occ = [0] * (n + 1)
    out: list[Clause] = []
    for _ in range(4 * m):
        if len(out) == m:
            break
        free = [v for v in range(1, n + 1) if occ[v] < 4]
        if len(free) < 3:
            break
        vs = [int(v) for v in rng.choice(free, size=3, replace=False)]
        hit = int(rng.integers(3))
        cl = tuple(v if (i == hit) == planted[v] else -v for i, v in enumerate(vs))
        for v in vs:
            occ[v] += 1
        out.append(cl)  # type: ignore[arg-type]
    phi = XsatFormula(n, tuple(out))
    assert xsat_satisfied(phi, planted)
    return phi, planted


def pad_variables(phi: XsatFormula, n: int) -> XsatFormula:
    """Add unused dummy variables up to n."""
    if n < phi.n:
        raise ValueError(f"cannot pad {phi.n} variables down to {n}")
    return XsatFormula(n, phi.clauses)


# ---------------------------------------------------------------------------
# Variable/clause partition


@dataclass(frozen=True)
class VarClausePartition:
    """Variable groups of size at most b and clause groups of size at most sqrt(n)."""

    b: int
    var_groups: tuple[tuple[int, ...], ...]
    clause_groups: tuple[tuple[int, ...], ...]

    def group_of(self) -> dict[int, int]:
        return {v: i for i, grp in enumerate(self.var_groups) for v in grp}


def partition_problems(phi: XsatFormula, part: VarClausePartition) -> list[str]:
    """Violations of the partition guarantees: exact cover, sizes, group counts and cross-group separation."""
    n, b = phi.n, part.b
    out: list[str] = []
    vars_seen = sorted(v for grp in part.var_groups for v in grp)
    if vars_seen != list(range(1, n + 1)):
        out.append("variable groups do not partition 1..n")
    clauses_seen = sorted(c for grp in part.clause_groups for c in grp)
    if clauses_seen != list(range(phi.m)):
        out.append("clause groups do not partition the clauses")
    if any(len(grp) > b for grp in part.var_groups):
        out.append(f"a variable group exceeds {b}")
    cap = math.isqrt(n)
    if any(len(grp) > cap for grp in part.clause_groups):
        out.append(f"a clause group exceeds {cap}")
    if n and len(part.var_groups) > 9 + n / b:
        out.append(f"n_V = {len(part.var_groups)} exceeds 9 + n/b = {9 + n / b}")
    if n and len(part.clause_groups) > 12 * b + 1 + phi.m / math.sqrt(n):
        out.append(f"n_C = {len(part.clause_groups)} exceeds 12b + 1 + |C|/sqrt(n)")
    if out:
        return out
    group = part.group_of()
    for ci, grp in enumerate(part.clause_groups):
        seen: dict[int, int] = {}
        for c in grp:
            for lit in phi.clauses[c]:
                gv = group[abs(lit)]
                if gv in seen:
                    out.append(f"clause group {ci}: variables {seen[gv]} and {abs(lit)} share variable group {gv}")
                seen[gv] = abs(lit)
    return out


def _chunks(items: list[int], size: int) -> list[tuple[int, ...]]:
    return [tuple(items[i : i + size]) for i in range(0, len(items), size)]


def _color_classes(g: nx.Graph) -> list[list[int]]:
    """Greedy coloring in largest-first order, which uses at most max degree + 1 colors."""
    coloring = nx.greedy_color(g, strategy="largest_first")
    classes: dict[int, list[int]] = {}
    for v in sorted(g.nodes):
        classes.setdefault(coloring[v], []).append(v)
    return [classes[c] for c in sorted(classes)]


def partition_variables_clauses(phi: XsatFormula, b: int) -> VarClausePartition:
    """Color the primal graph (9 colors) and split classes into chunks of b; then color the clause
    conflict graph (12b+1 colors) and split classes into chunks of floor(sqrt(n))."""
    n = phi.n
    if b < 1 or b > math.sqrt(n):
        raise ValueError(f"need 1 <= b <= sqrt(n) = {math.sqrt(n):.3f}, got b = {b}")
    primal = nx.Graph()
    primal.add_nodes_from(range(1, n + 1))
    for cl in phi.clauses:
        for x, y in itertools.combinations(cl, 2):
            primal.add_edge(abs(x), abs(y))
    var_groups = [grp for cls in _color_classes(primal) for grp in _chunks(cls, b)]
    group = {v: i for i, grp in enumerate(var_groups) for v in grp}
    conflict = nx.Graph()
    conflict.add_nodes_from(range(phi.m))
    by_group: dict[int, list[int]] = {}
    for c, cl in enumerate(phi.clauses):
        for lit in cl:
            by_group.setdefault(group[abs(lit)], []).append(c)
    for cs in by_group.values():
        for c1, c2 in itertools.combinations(sorted(set(cs)), 2):
            conflict.add_edge(c1, c2)
    cap = math.isqrt(n)
    clause_groups = [grp for cls in _color_classes(conflict) for grp in _chunks(cls, cap)]
    part = VarClausePartition(b, tuple(var_groups), tuple(clause_groups))
    problems = partition_problems(phi, part)
    if problems:
        raise ValueError("partition check failed: " + "; ".join(problems[:3]))
    return part


# ---------------------------------------------------------------------------
# Detecting families


@dataclass(frozen=True)
class DetectingFamily:
    """Subsets of {1..universe} (1-based positions) that separate all functions into {0..d-1}."""

    universe: int
    d: int
    sets: tuple[tuple[int, ...], ...]


def build_detecting_family(universe: int, d: int, provider: str = "singleton") -> DetectingFamily:
    """Only the singleton provider is implemented; the family is checked before it is returned."""
    if universe < 1:
        raise ValueError("universe must be nonempty")
    if provider == "lindstrom":
        raise ValueError("the lindstrom provider is not available; use 'singleton'")
    if provider != "singleton":
        raise ValueError(f"unknown detecting-family provider {provider!r}")
    fam = DetectingFamily(universe, d, tuple((i,) for i in range(1, universe + 1)))
    check_detecting_family(fam)
    return fam


def check_detecting_family(fam: DetectingFamily) -> None:
    if not verify_detecting_family(fam.universe, fam.d, [list(s) for s in fam.sets]):
        raise ValueError(f"family is not {fam.d}-detecting on a universe of {fam.universe}")
