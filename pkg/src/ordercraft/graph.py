"""Simple undirected graphs, bipartite graphs and the combinators built on them.

Vertices are dense integers ``0..n-1``.  Every constructor documents its id
layout so that orderings defined by formula (for example "the cycle first,
then the independent set") are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormatError, InvalidGraphError

Edge = tuple[int, int]
EdgeSet = frozenset  # frozenset[Edge] of canonical (min, max) pairs


def canonical(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def edge_set(pairs: Iterable[Sequence[int]]) -> frozenset[Edge]:
    """Canonicalize and deduplicate vertex pairs; self-pairs are rejected."""
    out = set()
    for u, v in pairs:
        if u == v:
            raise InvalidGraphError(f"self-pair ({u}, {v}) in edge set")
        out.add(canonical(u, v))
    return frozenset(out)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the sorted tuple of neighbors of ``v``.  Construction is
    strict: out-of-range endpoints, self-loops and duplicate edges raise
    :class:`InvalidGraphError` instead of being repaired.
    """

    __slots__ = ("n", "m", "adj", "_sets", "_masks", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InvalidGraphError(f"vertex count must be non-negative, got {n}")
        sets: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for e in edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if u == v:
                raise InvalidGraphError(f"self-loop at vertex {u}")
            if v in sets[u]:
                raise InvalidGraphError(f"duplicate edge {canonical(u, v)}")
            sets[u].add(v)
            sets[v].add(u)
            m += 1
        self._init(n, sets, m)

    def _init(self, n, sets, m):
        self.n = n
        self.m = m
        self._sets = tuple(frozenset(s) for s in sets)
        self.adj = tuple(tuple(sorted(s)) for s in sets)
        self._masks = None
        self._hash = None

    @classmethod
    def from_neighbor_sets(cls, sets: Sequence[Iterable[int]]) -> "Graph":
        """Trusted constructor from symmetric neighbor sets (no validation)."""
        g = cls.__new__(cls)
        sets = [set(s) for s in sets]
        g._init(len(sets), sets, sum(len(s) for s in sets) // 2)
        return g

    @classmethod
    def from_edge_set(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        """Build from pairs that may repeat; duplicates collapse silently."""
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InvalidGraphError(f"invalid pair ({u}, {v}) for n={n}")
            sets[u].add(v)
            sets[v].add(u)
        return cls.from_neighbor_sets(sets)

    # -- queries ---------------------------------------------------------

    def neighbors(self, v: int) -> frozenset[int]:
        return self._sets[v]

    def closed_neighbors(self, v: int) -> frozenset[int]:
        return self._sets[v] | {v}

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._sets[u]

    def edges(self) -> list[Edge]:
        """All edges as canonical pairs in sorted order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges())

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    @property
    def masks(self) -> tuple[int, ...]:
        """Neighborhoods as integer bitmasks (bit ``u`` set iff ``u`` adjacent)."""
        if self._masks is None:
            self._masks = tuple(sum(1 << u for u in a) for a in self.adj)
        return self._masks

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(vs[j] in self._sets[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def add_edges(self, extra: Iterable[Edge]) -> "Graph":
        """Return the supergraph with ``extra`` added (pairs already present are ignored)."""
        sets = [set(s) for s in self._sets]
        for u, v in extra:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidGraphError(f"invalid pair ({u}, {v}) for n={self.n}")
            sets[u].add(v)
            sets[v].add(u)
        return Graph.from_neighbor_sets(sets)

    def remove_edges(self, gone: Iterable[Edge]) -> "Graph":
        sets = [set(s) for s in self._sets]
        for u, v in gone:
            sets[u].discard(v)
            sets[v].discard(u)
        return Graph.from_neighbor_sets(sets)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(n, edges)


# -- named graphs -----------------------------------------------------------

def clique(s: int) -> Graph:
    if s < 0:
        raise InvalidGraphError("clique size must be non-negative")
    return Graph(s, itertools.combinations(range(s), 2))


def independent(t: int) -> Graph:
    if t < 0:
        raise InvalidGraphError("independent set size must be non-negative")
    return Graph(t)


def cycle(l: int) -> Graph:
    """Cycle ``0-1-...-(l-1)-0``."""
    if l < 3:
        raise InvalidGraphError(f"a cycle needs at least 3 vertices, got {l}")
    return Graph(l, [(i, (i + 1) % l) for i in range(l)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    """Center ``0`` joined to leaves ``1..leaves``."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# -- combinators ------------------------------------------------------------

def graph_sum(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union; ``g2``'s ids are shifted by ``g1.n``."""
    off = g1.n
    return Graph(g1.n + g2.n, g1.edges() + [(u + off, v + off) for u, v in g2.edges()])


def join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union plus every edge between the two vertex sets (``g1`` ids first)."""
    off = g1.n
    cross = [(u, off + v) for u in range(g1.n) for v in range(g2.n)]
    return Graph(g1.n + g2.n, g1.edges() + [(u + off, v + off) for u, v in g2.edges()] + cross)


def complement(g: Graph) -> Graph:
    return Graph(g.n, [(u, v) for u, v in itertools.combinations(range(g.n), 2) if not g.has_edge(u, v)])


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by ``vertices``, relabeled densely in increasing id order.

    Returns the subgraph and the map from old ids to new ids.
    """
    ws = sorted(set(vertices))
    for w in ws:
        if not 0 <= w < g.n:
            raise InvalidGraphError(f"vertex {w} outside 0..{g.n - 1}")
    relabel = {w: i for i, w in enumerate(ws)}
    edges = [(relabel[u], relabel[v]) for u, v in g.edges() if u in relabel and v in relabel]
    return Graph(len(ws), edges), relabel


# -- isomorphism ------------------------------------------------------------

def _refined_colors(g1: Graph, g2: Graph) -> tuple[list[int], list[int]]:
    """Color refinement run on both graphs with a shared palette."""
    graphs = (g1, g2)
    colors = [[g.degree(v) for v in range(g.n)] for g in graphs]
    n_classes = -1
    while True:
        sigs = [
            [(col[v], tuple(sorted(col[u] for u in g.adj[v]))) for v in range(g.n)]
            for g, col in zip(graphs, colors)
        ]
        palette = {s: i for i, s in enumerate(sorted(set(sigs[0]) | set(sigs[1])))}
        colors = [[palette[s] for s in sig] for sig in sigs]
        if len(palette) == n_classes:
            return colors[0], colors[1]
        n_classes = len(palette)


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test by backtracking over refined color classes.

    Intended for small graphs (up to roughly 20 vertices); highly regular
    non-isomorphic pairs can take exponential time.
    """
    if g1.n != g2.n or g1.m != g2.m or sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    c1, c2 = _refined_colors(g1, g2)
    if sorted(c1) != sorted(c2):
        return False
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(c2):
        by_color.setdefault(c, []).append(v)
    # Smallest color classes first; then prefer vertices adjacent to already-placed ones.
    order = sorted(range(g1.n), key=lambda v: (len(by_color[c1[v]]), -g1.degree(v), v))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in by_color[c1[v]]:
            if w in used:
                continue
            if all(g1.has_edge(v, x) == g2.has_edge(w, y) for x, y in mapping.items()):
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend(0)


# -- bipartite graphs -------------------------------------------------------

@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph ``(P, Q, E)`` with P ids ``0..p-1`` and Q ids ``0..q-1``.

    ``edges`` holds ``(x, y)`` pairs with ``x`` in P and ``y`` in Q.
    ``designated`` names the side whose degrees a chain-completion cost sums
    over; it is ``"P"`` unless a reduction says otherwise.
    """

    p: int
    q: int
    edges: frozenset[Edge] = field(default_factory=frozenset)
    designated: str = "P"

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise InvalidGraphError("partition sizes must be non-negative")
        if self.designated not in ("P", "Q"):
            raise InvalidGraphError(f"designated side must be 'P' or 'Q', got {self.designated!r}")
        for x, y in self.edges:
            if not (0 <= x < self.p and 0 <= y < self.q):
                raise InvalidGraphError(f"edge ({x}, {y}) outside P x Q = {self.p} x {self.q}")
        object.__setattr__(self, "edges", frozenset(self.edges))

    @classmethod
    def from_pairs(cls, p: int, q: int, pairs: Iterable[Sequence[int]], designated: str = "P") -> "BipartiteGraph":
        seen = set()
        for x, y in pairs:
            if (x, y) in seen:
                raise InvalidGraphError(f"duplicate edge ({x}, {y})")
            seen.add((x, y))
        return cls(p, q, frozenset(seen), designated)

    def p_neighbors(self, x: int) -> frozenset[int]:
        return frozenset(y for a, y in self.edges if a == x)

    def q_neighbors(self, y: int) -> frozenset[int]:
        return frozenset(x for x, b in self.edges if b == y)

    def neighborhoods(self) -> tuple[list[set[int]], list[set[int]]]:
        np_ = [set() for _ in range(self.p)]
        nq = [set() for _ in range(self.q)]
        for x, y in self.edges:
            np_[x].add(y)
            nq[y].add(x)
        return np_, nq

    def with_edges(self, extra: Iterable[Edge]) -> "BipartiteGraph":
        return BipartiteGraph(self.p, self.q, self.edges | frozenset(extra), self.designated)

    def to_graph(self) -> Graph:
        """Plain graph with P at ids ``0..p-1`` and Q at ``p..p+q-1``."""
        return Graph(self.p + self.q, [(x, self.p + y) for x, y in sorted(self.edges)])


# -- edge-list text format --------------------------------------------------

def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def parse_edge_list(text: str, path=None) -> Graph:
    """Parse ``n m`` then ``m`` lines ``u v`` (1-based ids); ``#`` starts a comment."""
    lines = list(_data_lines(text))
    if not lines:
        raise FormatError("empty edge-list file", path=path)
    lineno, header = lines[0]
    if len(header) != 2:
        raise FormatError("header must be 'n m'", lineno, path)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise FormatError("header must hold two integers", lineno, path) from None
    if len(lines) - 1 != m:
        raise FormatError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", lineno, path)
    edges = []
    seen = set()
    for lineno, fields in lines[1:]:
        if len(fields) != 2:
            raise FormatError("edge line must be 'u v'", lineno, path)
        try:
            u, v = int(fields[0]) - 1, int(fields[1]) - 1
        except ValueError:
            raise FormatError("edge endpoints must be integers", lineno, path) from None
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"endpoint out of range 1..{n}", lineno, path)
        if u == v:
            raise FormatError("self-loop", lineno, path)
        if canonical(u, v) in seen:
            raise FormatError("duplicate edge", lineno, path)
        seen.add(canonical(u, v))
        edges.append((u, v))
    return Graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(), path=str(path))


def write_edge_list(g: Graph, path) -> None:
    Path(path).write_text(format_edge_list(g))


def parse_bipartite(text: str, path=None) -> BipartiteGraph:
    """Parse ``p q m`` then ``m`` lines ``x y`` with 1-based ``x`` in P and ``y`` in Q."""
    lines = list(_data_lines(text))
    if not lines:
        raise FormatError("empty bipartite file", path=path)
    lineno, header = lines[0]
    try:
        p, q, m = (int(x) for x in header)
    except ValueError:
        raise FormatError("header must be 'p q m'", lineno, path) from None
    if len(lines) - 1 != m:
        raise FormatError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", lineno, path)
    pairs = set()
    for lineno, fields in lines[1:]:
        try:
            x, y = int(fields[0]) - 1, int(fields[1]) - 1
        except (ValueError, IndexError):
            raise FormatError("edge line must be 'x y'", lineno, path) from None
        if len(fields) != 2 or not (0 <= x < p and 0 <= y < q):
            raise FormatError("edge out of range", lineno, path)
        if (x, y) in pairs:
            raise FormatError("duplicate edge", lineno, path)
        pairs.add((x, y))
    return BipartiteGraph(p, q, frozenset(pairs))


def format_bipartite(b: BipartiteGraph) -> str:
    lines = [f"{b.p} {b.q} {len(b.edges)}"]
    lines += [f"{x + 1} {y + 1}" for x, y in sorted(b.edges)]
    return "\n".join(lines) + "\n"
