"""Undirected graphs with optional self-loops, the `.gr` format and certificate checks.

Vertices are the integers 1..n. A self-loop contributes 1 to the degree of its
vertex, and a looped vertex counts itself as a same-colored neighbor.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

Edge = tuple[int, int]
Coloring = dict[int, int]


class ParseError(ValueError):
    """Base class for malformed input files."""


class HeaderError(ParseError):
    """Missing or malformed `p` header line."""


class VertexRangeError(ParseError):
    """An edge endpoint lies outside 1..n."""


class DuplicateEdgeError(ParseError):
    """The same undirected edge is listed twice."""


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable graph on vertices 1..n.

    `adj[v]` is the sorted tuple of neighbors of v (index 0 is unused). A looped
    vertex appears once in its own adjacency tuple.
    """

    n: int
    edges: frozenset[Edge]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        es: set[Edge] = set()
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) outside 1..{n}")
            es.add(_norm(u, v))
        nbrs: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in es:
            nbrs[u].append(v)
            if u != v:
                nbrs[v].append(u)
        adj = tuple(tuple(sorted(a)) for a in nbrs)
        return Graph(n, frozenset(es), adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def without_loops(self) -> Graph:
        return Graph.from_edges(self.n, ((u, v) for u, v in self.edges if u != v))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


def max_degree(g: Graph) -> int:
    """Largest vertex degree, 0 for the empty graph."""
    return max((len(g.adj[v]) for v in g.vertices()), default=0)


def parse_gr(text: str) -> Graph:
    """Parse the PACE `.gr` format (`p tw n m` header, one edge per line)."""
    n = m = -1
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n >= 0:
                raise HeaderError(f"line {lineno}: second header")
            if len(parts) != 4 or parts[1] != "tw":
                raise HeaderError(f"line {lineno}: expected 'p tw n m'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError as exc:
                raise HeaderError(f"line {lineno}: non-integer header field") from exc
            if n < 0 or m < 0:
                raise HeaderError(f"line {lineno}: negative header field")
            continue
        if n < 0:
            raise HeaderError(f"line {lineno}: edge before header")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected two endpoints")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer endpoint") from exc
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexRangeError(f"line {lineno}: vertex out of range 1..{n}")
        e = _norm(u, v)
        if e in seen:
            raise DuplicateEdgeError(f"line {lineno}: duplicate edge {e[0]} {e[1]}")
        seen.add(e)
        edges.append(e)
    if n < 0:
        raise HeaderError("missing 'p tw n m' header")
    if len(edges) != m:
        raise HeaderError(f"header declares {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def emit_gr(g: Graph) -> str:
    """Serialize to `.gr` with edges sorted; no trailing newline."""
    lines = [f"p tw {g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines)


def _check_vertices(g: Graph, vs: Iterable[int]) -> None:
    for v in vs:
        if not 1 <= v <= g.n:
            raise ValueError(f"vertex {v} outside 1..{g.n}")


def verify_deletion_set(g: Graph, delta: int, s: Iterable[int]) -> bool:
    """True iff every vertex of g - s has degree at most delta."""
    deleted = set(s)
    _check_vertices(g, deleted)
    for v in g.vertices():
        if v in deleted:
            continue
        if sum(1 for u in g.adj[v] if u not in deleted) > delta:
            return False
    return True


def same_color_counts(g: Graph, c: Mapping[int, int]) -> list[int]:
    """Number of same-colored neighbors per vertex (index 0 unused)."""
    out = [0] * (g.n + 1)
    for v in g.vertices():
        cv = c[v]
        out[v] = sum(1 for u in g.adj[v] if c[u] == cv)
    return out


def verify_coloring(g: Graph, delta: int, c: Mapping[int, int], chi: int) -> bool:
    """True iff c is a total map into 1..chi whose classes induce max degree <= delta."""
    for v in g.vertices():
        if v not in c:
            raise ValueError(f"vertex {v} is uncolored")
        if not 1 <= c[v] <= chi:
            raise ValueError(f"vertex {v} has color {c[v]} outside 1..{chi}")
    counts = same_color_counts(g, c)
    return all(counts[v] <= delta for v in g.vertices())


class GraphBuilder:
    """Incremental graph construction with hashable vertex labels.

    Vertex ids follow creation order, which the generators use as a layout
    order for their path-decomposition witnesses.
    """

    def __init__(self) -> None:
        self.labels: list[object] = [None]
        self.ids: dict[object, int] = {}
        self.edge_set: set[Edge] = set()

    @property
    def n(self) -> int:
        return len(self.labels) - 1

    def add(self, label: object) -> int:
        if label in self.ids:
            raise ValueError(f"duplicate vertex label {label!r}")
        vid = len(self.labels)
        self.labels.append(label)
        self.ids[label] = vid
        return vid

    def alias(self, label: object, vid: int) -> None:
        """Make `label` refer to an existing vertex (vertex identification)."""
        if label in self.ids:
            raise ValueError(f"duplicate vertex label {label!r}")
        self.ids[label] = vid

    def __getitem__(self, label: object) -> int:
        return self.ids[label]

    def __contains__(self, label: object) -> bool:
        return label in self.ids

    def edge(self, u: int, v: int) -> None:
        self.edge_set.add(_norm(u, v))

    def leaves(self, v: int, count: int, tag: object) -> list[int]:
        """Attach `count` pendant vertices to v."""
        out = []
        for i in range(count):
            leaf = self.add((tag, "leaf", i))
            self.edge(v, leaf)
            out.append(leaf)
        return out

    def build(self) -> Graph:
        return Graph.from_edges(self.n, self.edge_set)
