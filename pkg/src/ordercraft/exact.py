"""Exact minimum fill, minimum FLOPs and treewidth for small graphs.

The elimination degree of ``v`` after the set ``S`` has been eliminated is
the number of vertices outside ``S + v`` reachable from ``v`` through paths
whose interior lies in ``S``.  It does not depend on the order inside ``S``,
so the optimum over all ``n!`` orderings is a shortest path over the ``2**n``
subsets.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .elimination import MetricsReport, Ordering, Triangulation, eliminate, minimalize, triangulation_from_fill
from .errors import SizeLimitError
from .graph import Graph, is_isomorphic

DEFAULT_MAX_VERTICES = 22
METRICS = ("fill", "flops", "treewidth")


@dataclass(frozen=True)
class ExactResult:
    metric: str
    value: int
    witness: Ordering

    def replay(self, g: Graph) -> MetricsReport:
        return MetricsReport.from_degrees(eliminate(g, self.witness)[1])


def reach_degree(masks, eliminated: int, v: int) -> int:
    """Elimination degree of ``v`` once the vertex set ``eliminated`` (bitmask) is gone."""
    seen = 1 << v
    out = 0
    stack = [v]
    while stack:
        x = stack.pop()
        nb = masks[x] & ~seen
        seen |= nb
        out |= nb & ~eliminated
        inner = nb & eliminated
        while inner:
            low = inner & -inner
            stack.append(low.bit_length() - 1)
            inner ^= low
    return out.bit_count()


def _component_frontiers(masks, s: int) -> list[tuple[int, int]]:
    """Connected components of ``G[s]`` as ``(component, outside neighborhood)`` bitmasks."""
    comps = []
    rest = s
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        nbr = 0
        while frontier:
            b = frontier & -frontier
            frontier ^= b
            nb = masks[b.bit_length() - 1]
            nbr |= nb
            new = nb & s & ~comp
            comp |= new
            frontier |= new
        rest &= ~comp
        comps.append((comp, nbr & ~s))
    return comps


def _solve(g: Graph, metric: str, max_vertices: int) -> ExactResult:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    n = g.n
    if n > max_vertices:
        raise SizeLimitError(f"exact search refused: {n} vertices exceeds the limit of {max_vertices}")
    if n == 0:
        return ExactResult(metric, 0, Ordering(()))
    masks = g.masks
    full = (1 << n) - 1
    inf = float("inf")
    best = [inf] * (1 << n)
    choice = [-1] * (1 << n)
    best[0] = 0
    for s in range(full):
        base = best[s]
        if base == inf:
            continue
        comps = _component_frontiers(masks, s)
        free = full & ~s
        while free:
            bit = free & -free
            free ^= bit
            v = bit.bit_length() - 1
            reach = masks[v] & ~s
            for comp, nbr in comps:
                if masks[v] & comp:
                    reach |= nbr
            k = (reach & ~bit).bit_count() + 1
            if metric == "fill":
                val = base + k
            elif metric == "flops":
                val = base + k * k
            else:
                val = base if base > k else k
            t = s | bit
            if val < best[t]:
                best[t] = val
                choice[t] = v
    seq = []
    s = full
    while s:
        v = choice[s]
        seq.append(v)
        s &= ~(1 << v)
    return ExactResult(metric, int(best[full]), Ordering(tuple(reversed(seq))))


def min_fill_exact(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExactResult:
    """Minimum ``nnz`` over all orderings (the fill count plus ``n + m``)."""
    return _solve(g, "fill", max_vertices)


def min_flops_exact(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExactResult:
    return _solve(g, "flops", max_vertices)


def treewidth_exact(g: Graph, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExactResult:
    """Minimum clique number over all triangulations, i.e. treewidth plus one."""
    return _solve(g, "treewidth", max_vertices)


def solve(g: Graph, metric: str, max_vertices: int = DEFAULT_MAX_VERTICES) -> ExactResult:
    return _solve(g, metric, max_vertices)


def enumerate_minimal_triangulations(g: Graph, samples: int, seed=0) -> list[Triangulation]:
    """Minimal triangulations reached from random orderings, one per isomorphism class.

    Each sampled ordering is eliminated and its fill minimalized; the filled
    graphs are then deduplicated up to isomorphism.  Classes are returned in
    order of first discovery.
    """
    rng = random.Random(seed)
    memo: dict[frozenset, frozenset] = {}
    seen_fills: set[frozenset] = set()
    classes: list[Triangulation] = []
    filled_graphs: list[Graph] = []
    verts = list(range(g.n))
    for _ in range(samples):
        rng.shuffle(verts)
        tri, _ = eliminate(g, Ordering(tuple(verts)))
        if tri.fill not in memo:
            memo[tri.fill] = minimalize(g, tri).fill
        fill = memo[tri.fill]
        if fill in seen_fills:
            continue
        seen_fills.add(fill)
        h = g.add_edges(fill)
        if any(is_isomorphic(h, other) for other in filled_graphs):
            continue
        filled_graphs.append(h)
        classes.append(triangulation_from_fill(g, fill))
    return classes
