"""Tree and path decompositions, nice form, elimination forests and their file formats."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import networkx as nx

from .graph import Graph, ParseError


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags keyed by node id, tree edges between node ids."""

    bags: dict[int, frozenset[int]]
    tree: tuple[tuple[int, int], ...]
    is_path: bool = False

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=1) - 1


def validate(td: TreeDecomposition, g: Graph) -> int | list[str]:
    """Width of `td` if it is a valid decomposition of g, else the list of violations."""
    errors: list[str] = []
    nodes = list(td.bags)
    node_set = set(nodes)
    parent = {t: t for t in nodes}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    deg = dict.fromkeys(nodes, 0)
    for a, b in td.tree:
        if a not in node_set or b not in node_set:
            errors.append(f"tree edge ({a}, {b}) references an unknown node")
            continue
        deg[a] += 1
        deg[b] += 1
        ra, rb = find(a), find(b)
        if ra == rb:
            errors.append(f"tree edge ({a}, {b}) closes a cycle")
        else:
            parent[ra] = rb
    if len({find(t) for t in nodes}) > 1:
        errors.append("tree is disconnected")
    if td.is_path and any(d > 2 for d in deg.values()):
        errors.append("is_path set but the tree is not a path")

    occurrences: dict[int, list[int]] = {v: [] for v in g.vertices()}
    for t in nodes:
        for v in td.bags[t]:
            if v not in occurrences:
                errors.append(f"node {t} holds vertex {v} outside 1..{g.n}")
            else:
                occurrences[v].append(t)
    for v, occ in occurrences.items():
        if not occ:
            errors.append(f"vertex {v} appears in no bag")
    for u, v in g.sorted_edges():
        if u == v:
            continue
        small, other = (u, v) if len(occurrences[u]) <= len(occurrences[v]) else (v, u)
        if not any(other in td.bags[t] for t in occurrences[small]):
            errors.append(f"edge ({u}, {v}) is not covered by any bag")
    induced = dict.fromkeys(g.vertices(), 0)
    for a, b in td.tree:
        if a in node_set and b in node_set:
            for v in td.bags[a] & td.bags[b]:
                if v in induced:
                    induced[v] += 1
    for v, occ in occurrences.items():
        if occ and induced[v] != len(occ) - 1:
            errors.append(f"nodes containing vertex {v} are not connected")
    return errors if errors else td.width


# ---------------------------------------------------------------------------
# Nice decompositions


@dataclass(frozen=True, slots=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: tuple[int, ...]  # sorted
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass
class NiceTreeDecomposition:
    """Nodes listed children-first; the last node is the root."""

    nodes: list[NiceNode] = field(default_factory=list)

    @property
    def root(self) -> int | None:
        return len(self.nodes) - 1 if self.nodes else None

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=1) - 1

    def parents(self) -> list[int]:
        par = [-1] * len(self.nodes)
        for i, nd in enumerate(self.nodes):
            for c in nd.children:
                par[c] = i
        return par

    def to_tree_decomposition(self) -> TreeDecomposition:
        bags = {i: frozenset(nd.bag) for i, nd in enumerate(self.nodes)}
        tree = tuple((c, i) for i, nd in enumerate(self.nodes) for c in nd.children)
        return TreeDecomposition(bags, tree)


def _insert(bag: tuple[int, ...], v: int) -> tuple[int, ...]:
    return tuple(sorted(bag + (v,)))


def _remove(bag: tuple[int, ...], v: int) -> tuple[int, ...]:
    return tuple(x for x in bag if x != v)


class _NiceBuilder:
    def __init__(self) -> None:
        self.nodes: list[NiceNode] = []

    def push(self, node: NiceNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def from_scratch(self, bag: Iterable[int]) -> int | None:
        top = None
        for v in sorted(bag):
            if top is None:
                top = self.push(NiceNode("leaf", (v,), v))
            else:
                top = self.push(NiceNode("introduce", _insert(self.nodes[top].bag, v), v, (top,)))
        return top

    def transition(self, top: int, target: frozenset[int]) -> int:
        cur = self.nodes[top].bag
        for v in sorted(set(cur) - target):
            cur = _remove(cur, v)
            top = self.push(NiceNode("forget", cur, v, (top,)))
        for v in sorted(target - set(cur)):
            cur = _insert(cur, v)
            top = self.push(NiceNode("introduce", cur, v, (top,)))
        return top


def to_nice(
    td: TreeDecomposition,
    g: Graph,
    root: int | None = None,
    keep: Iterable[int] = (),
) -> NiceTreeDecomposition:
    """Convert to nice form rooted at `root` (default: the last node holding `keep`, so a
    path is processed in layout order); the root bag is emptied except for `keep`."""
    res = validate(td, g)
    if isinstance(res, list):
        raise ValueError("invalid decomposition: " + "; ".join(res[:5]))
    keep_set = frozenset(keep)
    if not td.bags:
        if g.n or keep_set:
            raise ValueError("empty decomposition for a nonempty graph")
        return NiceTreeDecomposition()
    if root is None:
        candidates = [t for t in sorted(td.bags) if keep_set <= td.bags[t]]
        if not candidates:
            raise ValueError("no bag contains the kept vertices")
        root = candidates[-1]
    if not keep_set <= td.bags[root]:
        raise ValueError("root bag does not contain the kept vertices")
    nbrs: dict[int, list[int]] = {t: [] for t in td.bags}
    for a, b in td.tree:
        nbrs[a].append(b)
        nbrs[b].append(a)
    order: list[int] = []
    parent = {root: None}
    stack = [root]
    while stack:
        t = stack.pop()
        order.append(t)
        for c in sorted(nbrs[t], reverse=True):
            if c not in parent:
                parent[c] = t
                stack.append(c)
    children: dict[int, list[int]] = {t: [] for t in td.bags}
    for t in order[1:]:
        children[parent[t]].append(t)  # type: ignore[index]

    nb = _NiceBuilder()
    top: dict[int, int | None] = {}
    for t in reversed(order):
        bag = td.bags[t]
        tops = [nb.transition(top.pop(c), bag) for c in children[t] if top.get(c) is not None]
        for c in children[t]:
            top.pop(c, None)
        if not tops:
            top[t] = nb.from_scratch(bag)
            continue
        cur = tops[0]
        for other in tops[1:]:
            cur = nb.push(NiceNode("join", nb.nodes[cur].bag, None, (cur, other)))
        top[t] = cur
    final = top[root]
    if final is None:
        final = nb.from_scratch(keep_set)
    else:
        final = nb.transition(final, keep_set)
    if final is None:
        return NiceTreeDecomposition()
    assert final == len(nb.nodes) - 1
    return NiceTreeDecomposition(nb.nodes)


def validate_nice(ntd: NiceTreeDecomposition, g: Graph, keep: Iterable[int] = ()) -> int | list[str]:
    """Structural checks of the nice form plus the decomposition invariants."""
    errors: list[str] = []
    seen_parent: set[int] = set()
    for i, nd in enumerate(ntd.nodes):
        if list(nd.bag) != sorted(set(nd.bag)):
            errors.append(f"node {i}: bag not sorted or has repeats")
        if any(c >= i for c in nd.children):
            errors.append(f"node {i}: child listed after parent")
            continue
        for c in nd.children:
            if c in seen_parent:
                errors.append(f"node {c} has two parents")
            seen_parent.add(c)
        kids = [ntd.nodes[c].bag for c in nd.children]
        if nd.kind == "leaf":
            ok = not kids and nd.bag == (nd.vertex,)
        elif nd.kind == "introduce":
            ok = len(kids) == 1 and nd.vertex not in kids[0] and nd.bag == _insert(kids[0], nd.vertex)  # type: ignore[arg-type]
        elif nd.kind == "forget":
            ok = len(kids) == 1 and nd.vertex in kids[0] and nd.bag == _remove(kids[0], nd.vertex)  # type: ignore[arg-type]
        elif nd.kind == "join":
            ok = len(kids) == 2 and kids[0] == kids[1] == nd.bag
        else:
            ok = False
        if not ok:
            errors.append(f"node {i}: malformed {nd.kind} node")
    if ntd.nodes:
        if len(seen_parent) != len(ntd.nodes) - 1 or ntd.root in seen_parent:
            errors.append("nodes do not form a single tree rooted at the last node")
        if set(ntd.nodes[-1].bag) != set(keep):
            errors.append("root bag is not the kept set")
        res = validate(ntd.to_tree_decomposition(), g)
        if isinstance(res, list):
            errors.extend(res)
    elif g.n:
        errors.append("empty nice decomposition for a nonempty graph")
    return errors if errors else ntd.width


# ---------------------------------------------------------------------------
# Construction helpers


def path_decomposition_from_bags(bags: Sequence[Iterable[int]]) -> TreeDecomposition:
    return TreeDecomposition(
        {i + 1: frozenset(b) for i, b in enumerate(bags)},
        tuple((i, i + 1) for i in range(1, len(bags))),
        is_path=True,
    )


def path_decomposition_from_order(g: Graph, order: Sequence[int] | None = None) -> TreeDecomposition:
    """Vertex-separation path decomposition of a linear layout.

    Bag i holds the i-th vertex plus every earlier vertex with a neighbor at
    position >= i. Bags contained in a neighbor bag are dropped.
    """
    if order is None:
        order = list(g.vertices())
    if sorted(order) != list(g.vertices()):
        raise ValueError("order must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    last = [0] * (g.n + 1)
    for v in g.vertices():
        last[v] = max([pos[v]] + [pos[u] for u in g.adj[v]])
    expire: dict[int, list[int]] = {}
    for v in g.vertices():
        expire.setdefault(last[v], []).append(v)
    bags: list[frozenset[int]] = []
    active: set[int] = set()
    for i, v in enumerate(order):
        active.add(v)
        bags.append(frozenset(active))
        for u in expire.get(i, ()):
            active.discard(u)
    kept: list[frozenset[int]] = []
    for b in bags:
        if kept and kept[-1] <= b:
            kept[-1] = b
        elif not (kept and b <= kept[-1]):
            kept.append(b)
    return path_decomposition_from_bags(kept)


def heuristic_decomposition(g: Graph, strategy: str = "min-fill") -> TreeDecomposition:
    """Elimination-ordering heuristic decomposition via networkx; loops are ignored."""
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices())
    nxg.add_edges_from((u, v) for u, v in g.sorted_edges() if u != v)
    if strategy == "min-degree":
        from networkx.algorithms.approximation import treewidth_min_degree as heuristic
    elif strategy == "min-fill":
        from networkx.algorithms.approximation import treewidth_min_fill_in as heuristic
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if g.n == 0:
        return TreeDecomposition({}, ())
    _, dec = heuristic(nxg)
    ids = {bag: i + 1 for i, bag in enumerate(dec.nodes)}
    bags = {i: frozenset(bag) for bag, i in ids.items()}
    tree = tuple(sorted((min(ids[a], ids[b]), max(ids[a], ids[b])) for a, b in dec.edges))
    return TreeDecomposition(bags, tree)


# ---------------------------------------------------------------------------
# Elimination forests


@dataclass(frozen=True)
class EliminationForest:
    """parent[v] is v's parent, or None for a root."""

    parent: dict[int, int | None]

    def depths(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for v in self.parent:
            path = []
            x: int | None = v
            while x is not None and x not in out:
                path.append(x)
                if len(path) > len(self.parent):
                    raise ValueError("parent pointers contain a cycle")
                x = self.parent.get(x)
            base = out[x] if x is not None else 0
            for y in reversed(path):
                base += 1
                out[y] = base
        return out

    @property
    def depth(self) -> int:
        return max(self.depths().values(), default=0)

    def ancestors(self, v: int) -> list[int]:
        """Root-to-v path, inclusive."""
        path = []
        x: int | None = v
        while x is not None:
            path.append(x)
            x = self.parent[x]
        return path[::-1]


def validate_forest(f: EliminationForest, g: Graph) -> int | list[str]:
    """Depth of f if every edge joins an ancestor-descendant pair, else violations."""
    errors: list[str] = []
    for v in g.vertices():
        if v not in f.parent:
            errors.append(f"vertex {v} missing from the forest")
    for v, p in f.parent.items():
        if not 1 <= v <= g.n:
            errors.append(f"forest vertex {v} outside 1..{g.n}")
        if p is not None and p not in f.parent:
            errors.append(f"parent {p} of vertex {v} is not a forest vertex")
    if errors:
        return errors
    try:
        depth = f.depths()
    except ValueError as exc:
        return [str(exc)]
    for u, v in g.sorted_edges():
        if u == v:
            continue
        lo, hi = (u, v) if depth[u] >= depth[v] else (v, u)
        x: int | None = lo
        while x is not None and depth[x] > depth[hi]:
            x = f.parent[x]
        if x != hi:
            errors.append(f"edge ({u}, {v}) joins incomparable vertices")
    return errors if errors else max(depth.values(), default=0)


def forest_to_decomposition(f: EliminationForest, g: Graph) -> TreeDecomposition:
    """Bag of each vertex is its root path; roots are chained so the tree is connected."""
    res = validate_forest(f, g)
    if isinstance(res, list):
        raise ValueError("invalid elimination forest: " + "; ".join(res[:5]))
    bags = {v: frozenset(f.ancestors(v)) for v in sorted(f.parent)}
    tree = [(v, p) for v, p in sorted(f.parent.items()) if p is not None]
    roots = [v for v, p in sorted(f.parent.items()) if p is None]
    tree.extend(zip(roots, roots[1:]))
    return TreeDecomposition(bags, tuple(tree))


# ---------------------------------------------------------------------------
# File formats


def emit_td(td: TreeDecomposition, n: int) -> str:
    """PACE `.td` text; node ids are renumbered 1..N in sorted order."""
    ids = {t: i + 1 for i, t in enumerate(sorted(td.bags))}
    lines = [f"s td {len(ids)} {td.width + 1 if td.bags else 0} {n}"]
    for t, i in ids.items():
        lines.append(" ".join(["b", str(i)] + [str(v) for v in sorted(td.bags[t])]))
    lines.extend(f"{ids[a]} {ids[b]}" for a, b in td.tree)
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> tuple[TreeDecomposition, int]:
    """Parse `.td`; returns the decomposition and the declared vertex count."""
    header: tuple[int, int, int] | None = None
    bags: dict[int, frozenset[int]] = {}
    tree: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td" or header is not None:
                    raise ParseError(f"line {lineno}: expected a single 's td N w n' header")
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            elif header is None:
                raise ParseError(f"line {lineno}: content before header")
            elif parts[0] == "b":
                i = int(parts[1])
                if not 1 <= i <= header[0] or i in bags:
                    raise ParseError(f"line {lineno}: bad or repeated bag id {i}")
                vs = [int(x) for x in parts[2:]]
                if len(vs) > header[1]:
                    raise ParseError(f"line {lineno}: bag larger than declared width")
                bags[i] = frozenset(vs)
            else:
                if len(parts) != 2:
                    raise ParseError(f"line {lineno}: expected a tree edge")
                tree.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: non-integer field") from exc
    if header is None:
        raise ParseError("missing 's td' header")
    if len(bags) != header[0]:
        raise ParseError(f"header declares {header[0]} bags, found {len(bags)}")
    td = TreeDecomposition(bags, tuple(tree))
    deg: dict[int, int] = dict.fromkeys(bags, 0)
    for a, b in tree:
        if a in deg and b in deg:
            deg[a] += 1
            deg[b] += 1
    if all(d <= 2 for d in deg.values()):
        td = TreeDecomposition(bags, tuple(tree), is_path=True)
    return td, header[2]


def emit_forest(f: EliminationForest) -> str:
    return "".join(f"{v} {f.parent[v] or 0}\n" for v in sorted(f.parent))


def parse_forest(text: str) -> EliminationForest:
    parent: dict[int, int | None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected '<vertex> <parent|0>'")
        try:
            v, p = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: non-integer field") from exc
        if v in parent:
            raise ParseError(f"line {lineno}: vertex {v} listed twice")
        parent[v] = p or None
    return EliminationForest(parent)
