"""The elimination game and the metrics it induces.

Eliminating vertex ``v`` turns its current neighborhood into a clique and
removes ``v``; the edges added along the way are the fill.  For an ordering
``ordering`` the elimination degrees ``d_i`` determine

* ``nnz   = sum(d_i + 1)``     nonzeros of the Cholesky factor,
* ``flops = sum((d_i + 1)**2)`` arithmetic operations of the factorization,
* ``omega = max(d_i + 1)``     clique number of the filled graph.

Python integers are unbounded, so the metrics never overflow.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormatError, InvalidOrderingError, NotChordalError
from .graph import Edge, Graph, canonical


@dataclass(frozen=True)
class Ordering:
    """Bijection from vertices ``0..n-1`` to positions ``base..base+n-1``.

    ``sequence[i]`` is the vertex at position ``base + i``, i.e. the inverse
    map.  ``base`` is 1 for ordinary orderings and ``1 + r`` after a
    translation by ``r``.
    """

    sequence: tuple[int, ...]
    base: int = 1

    def __post_init__(self):
        seq = tuple(self.sequence)
        object.__setattr__(self, "sequence", seq)
        if sorted(seq) != list(range(len(seq))):
            raise InvalidOrderingError(f"not a permutation of 0..{len(seq) - 1}: {list(seq)}")
        pos = [0] * len(seq)
        for i, v in enumerate(seq):
            pos[v] = self.base + i
        object.__setattr__(self, "_pos", tuple(pos))

    @classmethod
    def identity(cls, n: int) -> "Ordering":
        return cls(tuple(range(n)))

    @classmethod
    def from_positions(cls, positions: Sequence[int] | dict[int, int], base: int = 1) -> "Ordering":
        """Build from ``positions[v]`` (a list or dict over all vertices)."""
        items = positions.items() if isinstance(positions, dict) else enumerate(positions)
        seq = [None] * len(positions)
        for v, p in items:
            i = p - base
            if not 0 <= i < len(seq) or seq[i] is not None:
                raise InvalidOrderingError(f"position {p} invalid or repeated")
            seq[i] = v
        return cls(tuple(seq), base)

    @property
    def n(self) -> int:
        return len(self.sequence)

    @property
    def positions(self) -> tuple[int, ...]:
        return self._pos

    def position(self, v: int) -> int:
        return self._pos[v]

    def vertex_at(self, position: int) -> int:
        return self.sequence[position - self.base]

    def translate(self, r: int) -> "Ordering":
        if r < 0:
            raise ValueError("translation must be non-negative")
        return Ordering(self.sequence, self.base + r)

    def reverse(self) -> "Ordering":
        return Ordering(self.sequence[::-1], self.base)

    def __len__(self):
        return len(self.sequence)

    def __iter__(self):
        return iter(self.sequence)


def check_ordering(g: Graph, ordering: Ordering) -> None:
    if ordering.n != g.n:
        raise InvalidOrderingError(f"ordering covers {ordering.n} vertices, graph has {g.n}")


@dataclass(frozen=True)
class MetricsReport:
    nnz: int
    flops: int
    omega: int

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "MetricsReport":
        nnz = flops = omega = 0
        for d in degrees:
            k = d + 1
            nnz += k
            flops += k * k
            omega = max(omega, k)
        return cls(nnz, flops, omega)

    def check(self, n: int) -> None:
        """Assert the Cauchy-Schwarz style relations between the metrics."""
        assert self.nnz <= self.flops, self
        assert self.nnz * self.nnz <= n * self.flops, self
        assert self.omega * self.omega <= self.flops, self

    def as_dict(self) -> dict[str, str]:
        return {"nnz": str(self.nnz), "flops": str(self.flops), "omega": str(self.omega)}


def metrics(degrees: Iterable[int]) -> MetricsReport:
    return MetricsReport.from_degrees(degrees)


@dataclass(frozen=True)
class Triangulation:
    """Fill edges over a base graph together with a PEO of the filled graph."""

    base: Graph
    fill: frozenset[Edge]
    witness: Ordering

    @property
    def filled(self) -> Graph:
        return self.base.add_edges(self.fill)

    def degrees(self) -> list[int]:
        return eliminate(self.filled, self.witness)[1]

    def metrics(self) -> MetricsReport:
        return MetricsReport.from_degrees(self.degrees())


def eliminate(g: Graph, ordering: Ordering) -> tuple[Triangulation, list[int]]:
    """Play the elimination game on ``g`` along ``ordering``.

    Returns the triangulation (fill plus ``ordering`` as witness PEO) and the
    elimination degrees in elimination order.
    """
    check_ordering(g, ordering)
    nbrs = [set(a) for a in g.adj]
    fill = set()
    degs = []
    for v in ordering.sequence:
        nv = nbrs[v]
        degs.append(len(nv))
        vs = sorted(nv)
        for i, a in enumerate(vs):
            na = nbrs[a]
            na.discard(v)
            for b in vs[i + 1:]:
                if b not in na:
                    na.add(b)
                    nbrs[b].add(a)
                    fill.add((a, b))
        nv.clear()
    return Triangulation(g, frozenset(fill), ordering), degs


def elimination_degrees(g: Graph, ordering: Ordering) -> list[int]:
    return eliminate(g, ordering)[1]


def ordering_metrics(g: Graph, ordering: Ordering) -> MetricsReport:
    return MetricsReport.from_degrees(eliminate(g, ordering)[1])


def is_peo(g: Graph, ordering: Ordering) -> bool:
    """True iff eliminating along ``ordering`` creates no fill.

    Uses the parent test: the later neighbors of ``v`` minus the earliest one
    must all be adjacent to that earliest one.
    """
    check_ordering(g, ordering)
    pos = ordering.positions
    for v in range(g.n):
        later = [u for u in g.adj[v] if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        parent = min(later, key=pos.__getitem__)
        pn = g.neighbors(parent)
        if any(u != parent and u not in pn for u in later):
            return False
    return True


def mcs_order(g: Graph, rng: random.Random | None = None) -> list[int]:
    """Maximum-cardinality search visit order.

    Ties go to the lowest id, or are drawn from ``rng`` when given.
    """
    n = g.n
    weight = [0] * n
    done = [False] * n
    buckets: list[set[int]] = [set(range(n))]
    top = 0
    visit = []
    for _ in range(n):
        while top > 0 and not buckets[top]:
            top -= 1
        cand = buckets[top]
        v = rng.choice(sorted(cand)) if rng is not None else min(cand)
        cand.discard(v)
        done[v] = True
        visit.append(v)
        for u in g.adj[v]:
            if not done[u]:
                buckets[weight[u]].discard(u)
                weight[u] += 1
                if weight[u] == len(buckets):
                    buckets.append(set())
                buckets[weight[u]].add(u)
                top = max(top, weight[u])
    return visit


def find_peo(g: Graph, rng: random.Random | None = None) -> Ordering | None:
    """A perfect elimination ordering of ``g``, or ``None`` if ``g`` is not chordal."""
    ordering = Ordering(tuple(reversed(mcs_order(g, rng))))
    return ordering if is_peo(g, ordering) else None


def is_chordal(g: Graph) -> bool:
    return find_peo(g) is not None


def triangulation_from_fill(g: Graph, fill: Iterable[Edge]) -> Triangulation:
    """Wrap a fill set as a :class:`Triangulation`, finding a witness PEO."""
    fill = frozenset(canonical(u, v) for u, v in fill)
    overlap = [e for e in fill if g.has_edge(*e)]
    if overlap:
        raise ValueError(f"fill overlaps the base edges: {sorted(overlap)[:5]}")
    peo = find_peo(g.add_edges(fill))
    if peo is None:
        raise NotChordalError("graph plus fill is not chordal")
    return Triangulation(g, fill, peo)


def minimalize(g: Graph, tri: Triangulation) -> Triangulation:
    """Drop fill edges until the triangulation is inclusion-minimal.

    Candidates are tried in canonical order; an edge is dropped when the graph
    stays chordal without it.  Passes repeat until nothing changes.
    """
    if tri.base != g:
        raise ValueError("triangulation belongs to a different base graph")
    current = triangulation_from_fill(g, tri.fill)
    fill = set(current.fill)
    changed = True
    while changed:
        changed = False
        for e in sorted(fill):
            trial = fill - {e}
            if is_chordal(g.add_edges(trial)):
                fill = trial
                changed = True
    return triangulation_from_fill(g, fill)


def is_minimal_triangulation(g: Graph, fill: Iterable[Edge]) -> bool:
    fill = set(fill)
    if not is_chordal(g.add_edges(fill)):
        return False
    return all(not is_chordal(g.add_edges(fill - {e})) for e in fill)


# -- ordering text format ---------------------------------------------------

def parse_ordering(text: str, n: int | None = None, path=None) -> Ordering:
    """One 1-based vertex id per line; line ``i`` holds the vertex eliminated ``i``-th."""
    seq = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = int(line) - 1
        except ValueError:
            raise FormatError(f"expected a vertex id, got {line!r}", lineno, path) from None
        if v < 0 or (n is not None and v >= n):
            raise FormatError(f"vertex id {v + 1} out of range", lineno, path)
        if v in seen:
            raise FormatError(f"vertex {v + 1} repeated", lineno, path)
        seen.add(v)
        seq.append(v)
    if n is not None and len(seq) != n:
        raise FormatError(f"ordering lists {len(seq)} vertices, expected {n}", path=path)
    if sorted(seq) != list(range(len(seq))):
        raise FormatError("ordering is not a bijection onto 1..n", path=path)
    return Ordering(tuple(seq))


def format_ordering(ordering: Ordering) -> str:
    return "".join(f"{v + 1}\n" for v in ordering.sequence)


def read_ordering(path, n: int | None = None) -> Ordering:
    path = Path(path)
    return parse_ordering(path.read_text(), n, path=str(path))


def write_ordering(ordering: Ordering, path) -> None:
    Path(path).write_text(format_ordering(ordering))
