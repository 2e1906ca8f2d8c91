"""Bipartite chain graphs, chain completion costs and the two triangulation gadgets.

* ``C(G)``: from a bipartite ``G = (P, Q, E)`` build a graph whose minimal
  triangulations are exactly the chain completions ``F`` of ``G`` plus the
  wedge ``G(ordering)`` of the chain ordering.  Its FLOP count equals the
  quadratic chain completion cost plus a constant.
* ``G'``: from a graph ``G`` build a bipartite graph whose minimal chain
  completions are indexed by vertex orderings of ``G``.  Its quadratic chain
  completion cost equals the quadratic arrangement cost plus a constant.

Id layout of ``C(G)``: P at ``0..p-1``, Q at ``p..p+q-1``, and ``u_x`` (the
partner of ``x`` in P) at ``p+q+x``.

Id layout of ``G'``: P is ``V(G)``; Q holds ``w^e_1, w^e_2`` for the edges in
canonical order (ids ``2i``, ``2i+1``) followed by the sets ``R(v)`` for
``v = 0..n-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .arrangement import REDUCTION_POLY
from .elimination import Ordering, Triangulation, eliminate, is_minimal_triangulation, is_peo, find_peo
from .errors import InvalidOrderingError, NotChordalError, PreconditionError, SizeLimitError
from .graph import BipartiteGraph, Edge, Graph, canonical, induced_subgraph


# -- chain graphs -------------------------------------------------------------

@dataclass(frozen=True)
class ChainCheck:
    is_chain: bool
    order: Ordering | None = None
    obstruction: tuple[Edge, Edge] | None = None  # ((a, x), (b, y)) inducing 2K2

    def __bool__(self):
        return self.is_chain


def is_chain_graph(b: BipartiteGraph) -> ChainCheck:
    """Chain ordering of P (largest neighborhood first) or an induced ``2K2``."""
    nbr, _ = b.neighborhoods()
    order = sorted(range(b.p), key=lambda x: (-len(nbr[x]), x))
    for a, c in zip(order, order[1:]):
        if not nbr[c] <= nbr[a]:
            x = min(nbr[a] - nbr[c])
            y = min(nbr[c] - nbr[a])
            return ChainCheck(False, obstruction=((a, x), (c, y)))
    return ChainCheck(True, order=Ordering(tuple(order)))


def admits_chain_order(b: BipartiteGraph, ordering: Ordering) -> bool:
    """Whether neighborhoods are nested along ``ordering`` (first vertex has the largest)."""
    nbr, _ = b.neighborhoods()
    seq = ordering.sequence
    return all(nbr[seq[i]] >= nbr[seq[i + 1]] for i in range(len(seq) - 1))


def has_induced_2k2(b: BipartiteGraph) -> tuple[Edge, Edge] | None:
    """Brute-force search over edge pairs for an induced ``2K2``."""
    edges = sorted(b.edges)
    for (a, x), (c, y) in itertools.combinations(edges, 2):
        if a != c and x != y and (a, y) not in b.edges and (c, x) not in b.edges:
            return (a, x), (c, y)
    return None


def designated_degrees(b: BipartiteGraph) -> list[int]:
    nbr_p, nbr_q = b.neighborhoods()
    side = nbr_p if b.designated == "P" else nbr_q
    return [len(s) for s in side]


def bcc_cost(b: BipartiteGraph, fill: Iterable[Edge] = ()) -> int:
    """Linear chain completion cost: the degree sum over P, i.e. ``|E| + |F|``."""
    done = b.with_edges(fill)
    if not is_chain_graph(done):
        raise PreconditionError("completion is not a chain graph")
    return len(done.edges)


def qcc_cost(b: BipartiteGraph, fill: Iterable[Edge] = ()) -> int:
    """``sum d**2 + 2(s+1) sum d`` over the designated side (size ``s``) of the completed graph."""
    done = b.with_edges(fill)
    if not is_chain_graph(done):
        raise PreconditionError("completion is not a chain graph")
    degs = designated_degrees(done)
    size = len(degs)
    return sum(d * d for d in degs) + 2 * (size + 1) * sum(degs)


def fixed_order_completion(b: BipartiteGraph, ordering: Ordering) -> frozenset[Edge]:
    """The unique minimal chain completion with P-order ``ordering``.

    ``ordering``'s i-th vertex receives the union of the neighborhoods of the
    vertices from position i on.
    """
    if ordering.n != b.p:
        raise InvalidOrderingError(f"ordering covers {ordering.n} vertices, P has {b.p}")
    nbr, _ = b.neighborhoods()
    acc: set[int] = set()
    fill = set()
    for x in reversed(ordering.sequence):
        acc |= nbr[x]
        fill.update((x, y) for y in acc - nbr[x])
    return frozenset(fill)


@dataclass(frozen=True)
class ChainCompletion:
    base: BipartiteGraph
    fill: frozenset[Edge]
    order: Ordering
    value: int


def min_chain_completion_exact(b: BipartiteGraph, cost: str = "quadratic", max_p: int = 9) -> ChainCompletion:
    """Cheapest chain completion over all ``p!`` P-orders (first order wins ties)."""
    if cost not in ("quadratic", "linear"):
        raise ValueError("cost must be 'quadratic' or 'linear'")
    if b.p > max_p:
        raise SizeLimitError(f"exact chain completion refused: p={b.p} exceeds the limit of {max_p}")
    fn = qcc_cost if cost == "quadratic" else bcc_cost
    best = None
    for perm in itertools.permutations(range(b.p)):
        ordering = Ordering(perm)
        fill = fixed_order_completion(b, ordering)
        val = fn(b, fill)
        if best is None or val < best.value:
            best = ChainCompletion(b, fill, ordering, val)
    return best


# -- C(G) ---------------------------------------------------------------------

@dataclass(frozen=True)
class CGadget:
    graph: Graph
    p: int
    q: int

    @property
    def p_ids(self) -> range:
        return range(self.p)

    @property
    def q_ids(self) -> range:
        return range(self.p, self.p + self.q)

    @property
    def u_ids(self) -> range:
        return range(self.p + self.q, 2 * self.p + self.q)

    def u(self, x: int) -> int:
        return self.p + self.q + x

    def lift(self, pairs: Iterable[Edge]) -> frozenset[Edge]:
        """Bipartite ``(x, y)`` pairs as canonical edges of ``C(G)``."""
        return frozenset(canonical(x, self.p + y) for x, y in pairs)

    def id_map(self) -> dict:
        return {
            "P": [self.p_ids.start, self.p_ids.stop],
            "Q": [self.q_ids.start, self.q_ids.stop],
            "U": [self.u_ids.start, self.u_ids.stop],
        }


def build_c_of_g(b: BipartiteGraph) -> CGadget:
    p, q = b.p, b.q
    edges = set(canonical(x, p + y) for x, y in b.edges)
    edges.update(itertools.combinations(range(p), 2))
    edges.update(itertools.combinations(range(p, 2 * p + q), 2))
    edges.update((x, p + q + x) for x in range(p))
    return CGadget(Graph(2 * p + q, sorted(edges)), p, q)


def wedge_edges(ordering: Ordering, p: int, q: int) -> frozenset[Edge]:
    """Wedge edges: each P vertex joined to the partner ``u`` of every P vertex placed after it."""
    if ordering.n != p:
        raise InvalidOrderingError(f"ordering covers {ordering.n} vertices, P has {p}")
    seq = ordering.sequence
    return frozenset((seq[i], p + q + seq[j]) for i in range(p) for j in range(i + 1, p))


def chain_to_triangulation(b: BipartiteGraph, fill: Iterable[Edge], ordering: Ordering) -> Triangulation:
    """Lift a chain completion plus its wedge into a triangulation of ``C(G)``.

    The witness PEO is the reversed ``ordering`` followed by Q and the partners.
    """
    fill = frozenset(fill)
    if fill & b.edges:
        raise PreconditionError("chain fill overlaps existing edges")
    if not admits_chain_order(b.with_edges(fill), ordering):
        raise PreconditionError("ordering is not a chain ordering of the completed graph")
    gad = build_c_of_g(b)
    f_prime = gad.lift(fill) | wedge_edges(ordering, b.p, b.q)
    witness = Ordering(ordering.sequence[::-1] + tuple(range(b.p, 2 * b.p + b.q)))
    filled = gad.graph.add_edges(f_prime)
    if not is_peo(filled, witness):
        raise NotChordalError("reversed chain ordering does not start a PEO of C(G)+")
    return Triangulation(gad.graph, f_prime, witness)


def triangulation_to_chain(b: BipartiteGraph, fill: Iterable[Edge]) -> tuple[frozenset[Edge], Ordering]:
    """Split a minimal triangulation of ``C(G)`` into a chain completion and its ordering.

    Returns the P-Q part of the fill as bipartite pairs and the chain ordering
    ``ordering`` with ``fill & (P x U) == G(ordering)``.
    """
    gad = build_c_of_g(b)
    p, q = b.p, b.q
    fill = frozenset(canonical(*e) for e in fill)
    stray = [e for e in fill if not (e[0] < p <= e[1])]
    if stray:
        raise PreconditionError(f"fill edges outside P x (Q + U): {sorted(stray)[:5]}")
    if not is_minimal_triangulation(gad.graph, fill):
        raise PreconditionError("fill is not an inclusion-minimal triangulation of C(G)")
    f_u = {e for e in fill if e[1] >= p + q}
    f_q = frozenset((x, y - p) for x, y in fill if y < p + q)
    count = [0] * p
    for x, _ in f_u:
        count[x] += 1
    ordering = Ordering(tuple(sorted(range(p), key=lambda x: (-count[x], x))))
    if f_u != wedge_edges(ordering, p, q):
        raise AssertionError("P x U fill is not of the form G(ordering)")
    if not admits_chain_order(b.with_edges(f_q), ordering):
        raise AssertionError("recovered ordering is not a chain ordering of the completion")
    return f_q, ordering


def chordal_patch_check(g: Graph, a: Iterable[int], b: Iterable[int], c: Iterable[int]) -> bool:
    """Sufficient condition for chordality from a clique separator.

    True when no edge joins ``a`` and ``b``, ``c`` is a clique, and both
    ``G[a + c]`` and ``G[b + c]`` are chordal.  Raises if the parts do not
    partition the vertex set.
    """
    a, b, c = set(a), set(b), set(c)
    if a & b or a & c or b & c or (a | b | c) != set(range(g.n)):
        raise ValueError("a, b, c must partition the vertex set")
    if any(g.has_edge(x, y) for x in a for y in b):
        return False
    if not g.is_clique(c):
        return False
    for side in (a | c, b | c):
        sub, _ = induced_subgraph(g, side)
        if find_peo(sub) is None:
            return False
    assert find_peo(g) is not None, "patching conditions hold but the graph is not chordal"
    return True


def qcc_flops_offset(p: int, q: int) -> int:
    return p * (p + 1) ** 2 + sum(i * i for i in range(1, p + q + 1))


@dataclass(frozen=True)
class FlopsInstance:
    gadget: CGadget
    k: int
    offset: int


def qcc_to_flops_instance(b: BipartiteGraph, k: int) -> FlopsInstance:
    """Quadratic chain completion threshold ``k`` becomes FLOP threshold ``k + offset`` on ``C(G)``."""
    if b.designated != "P":
        raise PreconditionError("the C(G) reduction needs P as the designated side")
    offset = qcc_flops_offset(b.p, b.q)
    return FlopsInstance(build_c_of_g(b), k + offset, offset)


# -- G' -----------------------------------------------------------------------

@dataclass(frozen=True)
class GPrimeGadget:
    bipartite: BipartiteGraph
    edge_ids: dict[Edge, tuple[int, int]]
    r_ids: tuple[range, ...]

    def id_map(self) -> dict:
        return {
            "P": [0, self.bipartite.p],
            "edge_vertices": {f"{u + 1}-{v + 1}": [a, b] for (u, v), (a, b) in self.edge_ids.items()},
            "R": [[r.start, r.stop] for r in self.r_ids],
        }


def build_g_prime(g: Graph) -> GPrimeGadget:
    n = g.n
    edges = g.edges()
    pairs = set()
    edge_ids = {}
    for i, (u, v) in enumerate(edges):
        ids = (2 * i, 2 * i + 1)
        edge_ids[(u, v)] = ids
        for w in ids:
            pairs.add((u, w))
            pairs.add((v, w))
    nxt = 2 * len(edges)
    r_ids = []
    for v in range(n):
        size = n - g.degree(v)
        r_ids.append(range(nxt, nxt + size))
        pairs.update((v, w) for w in range(nxt, nxt + size))
        nxt += size
    assert nxt == n * n, (nxt, n)
    return GPrimeGadget(BipartiteGraph(n, nxt, frozenset(pairs), designated="Q"), edge_ids, tuple(r_ids))


def chain_completion_h(g_prime: BipartiteGraph, ordering: Ordering) -> frozenset[Edge]:
    """Chain completion of ``g_prime`` induced by a P ordering.

    Each Q vertex ``w`` gains every P vertex placed before its last neighbor.
    A Q vertex without neighbors gains nothing.
    """
    if ordering.n != g_prime.p:
        raise InvalidOrderingError(f"ordering covers {ordering.n} vertices, P has {g_prime.p}")
    _, nbr_q = g_prime.neighborhoods()
    pos = ordering.positions
    h = set()
    for w in range(g_prime.q):
        last = max((pos[x] for x in nbr_q[w]), default=0)
        for j in range(1, last):
            x = ordering.vertex_at(j)
            if (x, w) not in g_prime.edges:
                h.add((x, w))
    h = frozenset(h)
    if not admits_chain_order(g_prime.with_edges(h), ordering):
        raise AssertionError("H(ordering) does not yield a chain graph with P-order ordering")
    return h


def oqa_offset(n: int) -> int:
    """Constant separating the QCC cost of ``G'`` from the quadratic arrangement cost of ``G``."""
    cn = REDUCTION_POLY(n)
    return n * n * (n + 1) * (2 * n + 3 * cn + 1) // 6


@dataclass(frozen=True)
class QccInstance:
    gadget: GPrimeGadget
    k: int
    offset: int


def oqa_to_qcc_instance(g: Graph, k: int) -> QccInstance:
    """OQA(2(X^2+1)) threshold ``k`` becomes a QCC threshold on ``G'`` with Q designated."""
    offset = oqa_offset(g.n)
    return QccInstance(build_g_prime(g), k + offset, offset)


def flops_of_completion(b: BipartiteGraph, fill: Iterable[Edge], ordering: Ordering) -> int:
    """FLOP count of the lifted triangulation of ``C(G)``, by replaying the elimination."""
    tri = chain_to_triangulation(b, fill, ordering)
    degs = eliminate(tri.filled, tri.witness)[1]
    return sum((d + 1) ** 2 for d in degs)


def qcc_minima_both_sides(b: BipartiteGraph, max_p: int = 9) -> dict[str, int]:
    """Minimum quadratic chain completion cost with P designated and with Q designated.

    Chain completions are the same for both sides; only the summed degrees
    differ, so one sweep over P-orders suffices.
    """
    if b.p > max_p:
        raise SizeLimitError(f"exact chain completion refused: p={b.p} exceeds the limit of {max_p}")
    best = {"P": None, "Q": None}
    for perm in itertools.permutations(range(b.p)):
        fill = fixed_order_completion(b, Ordering(perm))
        for side in ("P", "Q"):
            val = qcc_cost(BipartiteGraph(b.p, b.q, b.edges, side), fill)
            if best[side] is None or val < best[side]:
                best[side] = val
    return best
