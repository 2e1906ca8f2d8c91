"""Linear and quadratic vertex arrangements and the MaxCut reduction machinery.

Vertices placed at positions ``x`` sit at coordinate ``f(x) = x**2 + c(n)*x``
where ``c`` is a non-negative integer polynomial of degree at most two.  The
quadratic cost of an arrangement is ``sum |f(pos u) - f(pos v)|`` over the
edges; the linear cost uses the positions themselves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .elimination import Ordering
from .errors import InvalidOrderingError, PreconditionError, SizeLimitError
from .graph import Edge, Graph, complement


@dataclass(frozen=True)
class CostPolynomial:
    """``c = c2*X**2 + c1*X + c0`` with non-negative integer coefficients."""

    c2: int = 0
    c1: int = 0
    c0: int = 0

    def __post_init__(self):
        if min(self.c2, self.c1, self.c0) < 0:
            raise ValueError("cost polynomial coefficients must be non-negative")

    def __call__(self, n: int) -> int:
        return self.c2 * n * n + self.c1 * n + self.c0

    @classmethod
    def parse(cls, text: str) -> "CostPolynomial":
        """Parse ``"c2,c1,c0"``."""
        parts = [int(x) for x in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'c2,c1,c0', got {text!r}")
        return cls(*parts)

    def __str__(self):
        return f"{self.c2}*X^2 + {self.c1}*X + {self.c0}"


ZERO = CostPolynomial()
# The polynomial matched to the 2(p+1) factor of the quadratic chain completion cost.
REDUCTION_POLY = CostPolynomial(2, 0, 2)


def c_value(c: CostPolynomial | int, n: int) -> int:
    return c(n) if isinstance(c, CostPolynomial) else int(c)


def position_value(x: int, cv: int) -> int:
    return x * x + cv * x


def edge_costs(g: Graph, ordering: Ordering, c: CostPolynomial | int = ZERO) -> dict[Edge, int]:
    """Quadratic cost of every edge under ``ordering``."""
    cv = c_value(c, g.n)
    pos = ordering.positions
    return {(u, v): abs(position_value(pos[u], cv) - position_value(pos[v], cv)) for u, v in g.edges()}


def linear_cost(g: Graph, ordering: Ordering) -> int:
    pos = ordering.positions
    return sum(abs(pos[u] - pos[v]) for u, v in g.edges())


def quadratic_cost(g: Graph, ordering: Ordering, c: CostPolynomial | int = ZERO) -> int:
    """``sum |f(ordering(u)) - f(ordering(v))|`` with ``f(x) = x**2 + c(n)*x`` and ``n = |V(g)|``.

    ``c`` may also be given as an already evaluated integer.
    """
    if ordering.n != g.n:
        raise InvalidOrderingError(f"ordering covers {ordering.n} vertices, graph has {g.n}")
    cv = c_value(c, g.n)
    pos = ordering.positions
    total = 0
    for u, v in g.edges():
        a, b = pos[u], pos[v]
        total += abs((a - b) * (a + b + cv))
    return total


@dataclass(frozen=True)
class ArrangementCost:
    linear: int
    quadratic: int


def arrangement_cost(g: Graph, ordering: Ordering, c: CostPolynomial | int = ZERO) -> ArrangementCost:
    return ArrangementCost(linear_cost(g, ordering), quadratic_cost(g, ordering, c))


def translate(ordering: Ordering, r: int) -> Ordering:
    return ordering.translate(r)


def clique_linear_cost(s: int) -> int:
    return s * (s * s - 1) // 6


def clique_cost(s: int, r: int, cv: int) -> int:
    """Quadratic cost of ``K_s`` at positions ``1+r..s+r`` (any order)."""
    if s < 1:
        raise ValueError("clique size must be at least 1")
    return s * (s * s - 1) * (2 * r + cv + s + 1) // 6


def duality_complement(g: Graph, k: int, c: CostPolynomial | int = ZERO) -> tuple[Graph, int, CostPolynomial | int]:
    """Map a maximization instance ``(g, k)`` to the minimization instance on the complement.

    ``q_g(ordering) >= k`` iff ``q_complement(ordering) <= k'`` for every ``ordering``.
    """
    n = g.n
    k_prime = clique_cost(n, 0, c_value(c, n)) - k if n else -k
    return complement(g), k_prime, c


# -- cuts -------------------------------------------------------------------

@dataclass(frozen=True)
class CutProfile:
    """``sizes[j-1] = |delta(X_j)|`` where ``X_j`` is the set of the first ``j`` vertices."""

    sizes: tuple[int, ...]

    def cut(self, j: int) -> int:
        return 0 if j == 0 else self.sizes[j - 1]

    def rightmost_max(self, after: int = 0) -> int:
        """Largest ``i > after`` maximizing ``|delta(X_i)|``."""
        best, arg = -1, None
        for i in range(after + 1, len(self.sizes) + 1):
            if self.sizes[i - 1] >= best:
                best, arg = self.sizes[i - 1], i
        return arg


def _require_base_one(ordering: Ordering):
    if ordering.base != 1:
        raise InvalidOrderingError("cut-based operations need an ordering onto 1..n")


def cut_profile(g: Graph, ordering: Ordering) -> CutProfile:
    _require_base_one(ordering)
    n = g.n
    diff = [0] * (n + 2)
    pos = ordering.positions
    for u, v in g.edges():
        a, b = sorted((pos[u], pos[v]))
        diff[a] += 1
        diff[b] -= 1
    sizes = []
    run = 0
    for j in range(1, n + 1):
        run += diff[j]
        sizes.append(run)
    return CutProfile(tuple(sizes))


def cut_size(g: Graph, side: Iterable[int]) -> int:
    side = set(side)
    return sum(1 for u, v in g.edges() if (u in side) != (v in side))


# -- rearrangements -----------------------------------------------------------

def move_vertex(ordering: Ordering, w: int, j: int) -> Ordering:
    """Unchecked: put ``w`` at position ``j`` and shift the vertices in between by one."""
    seq = list(ordering.sequence)
    seq.pop(ordering.position(w) - ordering.base)
    seq.insert(j - ordering.base, w)
    return Ordering(tuple(seq), ordering.base)


def move_iso_right(g: Graph, ordering: Ordering, w: int, j: int) -> Ordering:
    """Move the isolated vertex ``w`` right to position ``j`` without lowering the quadratic cost.

    Requires ``|delta(X_k)| <= |delta(X_j)|`` for ``ordering(w) <= k <= j``.
    ``j == ordering(w)`` is a no-op.
    """
    _require_base_one(ordering)
    if g.degree(w) != 0:
        raise PreconditionError(f"vertex {w} is not isolated")
    a = ordering.position(w)
    if not a <= j <= g.n:
        raise PreconditionError(f"target position {j} must lie in {a}..{g.n}")
    if a == j:
        return ordering
    prof = cut_profile(g, ordering)
    top = prof.cut(j)
    for k in range(a, j + 1):
        if prof.cut(k) > top:
            raise PreconditionError(f"cut at {k} ({prof.cut(k)}) exceeds the cut at target {j} ({top})")
    return move_vertex(ordering, w, j)


def move_block_left(g: Graph, ordering: Ordering, j: int, s: int, f: int, c: CostPolynomial | int = ZERO) -> Ordering:
    """Swap the ``s`` vertices after position ``j`` with the ``f`` isolated vertices that follow them.

    Requires ``|delta(X_j)| > |delta(X_{j+k})|`` for ``1 <= k <= s+f`` and
    ``j + 1 + (c+f)/2 >= |delta(X_{j+s+f})| * (s-1)``; ``f == 0`` is a no-op.
    """
    _require_base_one(ordering)
    n = g.n
    if f == 0:
        return ordering
    if not (1 <= j and s >= 1 and f >= 1 and j + s + f <= n):
        raise PreconditionError(f"need 1 <= j < j+s < j+s+f <= n, got j={j}, s={s}, f={f}, n={n}")
    seq = ordering.sequence
    block = seq[j + s:j + s + f]
    busy = [v for v in block if g.degree(v) != 0]
    if busy:
        raise PreconditionError(f"block holds non-isolated vertices {busy}")
    prof = cut_profile(g, ordering)
    for k in range(1, s + f + 1):
        if prof.cut(j) <= prof.cut(j + k):
            raise PreconditionError(f"cut at {j} does not strictly exceed the cut at {j + k}")
    cv = c_value(c, n)
    if 2 * (j + 1) + cv + f < 2 * prof.cut(j + s + f) * (s - 1):
        raise PreconditionError("block too small for the cut it has to cross")
    new = seq[:j] + block + seq[j:j + s] + seq[j + s + f:]
    return Ordering(new, ordering.base)


# -- MaxCut reduction ---------------------------------------------------------

@dataclass(frozen=True)
class MaxCutReduction:
    """A MaxCut instance padded with isolated vertices.

    Original vertices keep ids ``0..n_original-1``; padding takes the rest.
    """

    graph: Graph
    k: int
    c: CostPolynomial
    n_original: int
    padding: int

    @property
    def padding_ids(self) -> range:
        return range(self.n_original, self.n_original + self.padding)

    @property
    def canonical(self) -> bool:
        return self.padding == self.n_original ** 5


def maxcut_to_oqa(g: Graph, k_prime: int, padding: int | None = None, c: CostPolynomial = ZERO) -> MaxCutReduction:
    """Pad ``g`` with isolated vertices (``n**5`` by default) and scale ``k'`` by ``padding**2``.

    With the default padding the threshold is ``n**10 * k'``.
    """
    n = g.n
    pad = n ** 5 if padding is None else padding
    if pad < 0:
        raise ValueError("padding must be non-negative")
    padded = Graph(n + pad, g.edges())
    return MaxCutReduction(padded, pad * pad * k_prime, c, n, pad)


def cut_to_arrangement(red: MaxCutReduction, side: Iterable[int]) -> Ordering:
    """Side first, then the padding, then the remaining original vertices."""
    side = sorted(set(side))
    if any(not 0 <= v < red.n_original for v in side):
        raise ValueError("cut side must consist of original vertices")
    rest = [v for v in range(red.n_original) if v not in set(side)]
    return Ordering(tuple(side) + tuple(red.padding_ids) + tuple(rest))


def crossing_edge_bound(padding: int, cv: int) -> int:
    """Smallest quadratic cost of an edge that straddles the padding block."""
    return position_value(padding + 2, cv) - position_value(1, cv)


@dataclass(frozen=True)
class BlockStructure:
    """Blocks of original vertices followed by padding vertices.

    ``boundaries`` are the positions ``b_0 = 0 < b_1 < ... < b_h``; block ``k``
    spans ``b_{k-1}+1..b_k`` and holds ``n_counts[k-1]`` original vertices then
    ``f_counts[k-1]`` padding vertices.  ``cuts[k-1]`` is the cut at ``b_k``.
    """

    boundaries: tuple[int, ...]
    n_counts: tuple[int, ...]
    f_counts: tuple[int, ...]
    cuts: tuple[int, ...]

    def check(self, n_original: int, padding: int) -> None:
        h = len(self.n_counts)
        assert self.boundaries[0] == 0 and len(self.boundaries) == h + 1
        for k in range(h):
            assert self.n_counts[k] + self.f_counts[k] == self.boundaries[k + 1] - self.boundaries[k]
            assert self.n_counts[k] > 0
        assert sum(self.n_counts) == n_original and sum(self.f_counts) == padding
        assert all(a > b for a, b in zip(self.cuts, self.cuts[1:])), self.cuts
        assert not self.cuts or self.cuts[-1] == 0


@dataclass
class NormalizationResult:
    ordering: Ordering
    blocks: BlockStructure
    trace: list[dict] = field(default_factory=list)

    def extracted_side(self, n_original: int) -> list[int]:
        """Original vertices in the first block."""
        first = self.blocks.boundaries[1]
        return sorted(v for v in self.ordering.sequence[:first] if v < n_original)


def _blocks_from_lists(g: Graph, blocks: list[tuple[list[int], list[int]]]) -> BlockStructure:
    bounds = [0]
    cuts = []
    seen: set[int] = set()
    for vs, ws in blocks:
        bounds.append(bounds[-1] + len(vs) + len(ws))
        seen.update(vs)
        cuts.append(cut_size(g, seen))
    return BlockStructure(
        tuple(bounds),
        tuple(len(vs) for vs, _ in blocks),
        tuple(len(ws) for _, ws in blocks),
        tuple(cuts),
    )


def _flatten(blocks) -> Ordering:
    return Ordering(tuple(v for vs, ws in blocks for v in vs + ws))


def normalize_arrangement(red: MaxCutReduction, ordering: Ordering) -> NormalizationResult:
    """Gather all padding vertices into one block after the largest cut, never lowering the cost.

    Stage one moves padding vertices right, block by block, to just before the
    rightmost largest cut of the remaining suffix.  Stage two moves whole
    padding blocks left: first the largest one down to the first block, then
    every later one.  Each step checks the preconditions of its move and
    raises :class:`PreconditionError` if they fail.
    """
    g = red.graph
    cv = c_value(red.c, g.n)
    is_pad = [v >= red.n_original for v in range(g.n)]
    trace: list[dict] = []
    cost = quadratic_cost(g, ordering, cv)

    def record(stage, move, new_ordering, **args):
        nonlocal cost
        after = quadratic_cost(g, new_ordering, cv)
        if after < cost:
            raise AssertionError(f"{move} lowered the cost from {cost} to {after}")
        trace.append({"stage": stage, "move": move, **args, "cost_before": cost, "cost_after": after})
        cost = after

    # Stage one.
    blocks: list[tuple[list[int], list[int]]] = []
    b_prev = 0
    while b_prev < g.n:
        b = cut_profile(g, ordering).rightmost_max(b_prev)
        while True:
            seq = ordering.sequence
            tail = b
            while tail > b_prev and is_pad[seq[tail - 1]]:
                tail -= 1
            stray = [p for p in range(b_prev + 1, tail + 1) if is_pad[seq[p - 1]]]
            if not stray:
                break
            w = seq[stray[-1] - 1]
            new = move_iso_right(g, ordering, w, b)
            record(1, "move_iso_right", new, w=w, j=b)
            ordering = new
        seq = ordering.sequence[b_prev:b]
        blocks.append(([v for v in seq if not is_pad[v]], [v for v in seq if is_pad[v]]))
        b_prev = b

    # Stage two.
    def end_of(k):
        return sum(len(vs) + len(ws) for vs, ws in blocks[:k + 1])

    fs = [len(ws) for _, ws in blocks]
    if len(blocks) > 1 and any(fs):
        nu = max(range(len(blocks)), key=lambda k: (fs[k], -k))
        for k in range(nu, 0, -1):
            f = len(blocks[k][1])
            if f == 0:
                continue
            j, s = end_of(k - 1), len(blocks[k][0])
            new = move_block_left(g, ordering, j, s, f, cv)
            record(2, "move_block_left", new, j=j, s=s, f=f)
            ordering = new
            blocks[k - 1][1].extend(blocks[k][1])
            blocks[k] = (blocks[k][0], [])
        for k in range(nu + 1, len(blocks)):
            f = len(blocks[k][1])
            if f == 0:
                continue
            j = end_of(0)
            s = sum(len(vs) for vs, _ in blocks[1:k + 1])
            new = move_block_left(g, ordering, j, s, f, cv)
            record(2, "move_block_left", new, j=j, s=s, f=f)
            ordering = new
            blocks[0][1].extend(blocks[k][1])
            blocks[k] = (blocks[k][0], [])
    assert _flatten(blocks) == ordering
    return NormalizationResult(ordering, _blocks_from_lists(g, blocks), trace)


def stage_one_blocks(red: MaxCutReduction, ordering: Ordering) -> BlockStructure:
    """Block structure of an arrangement whose padding already sits before each rightmost largest cut."""
    g = red.graph
    prof = cut_profile(g, ordering)
    bounds = [0]
    while bounds[-1] < g.n:
        bounds.append(prof.rightmost_max(bounds[-1]))
    seq = ordering.sequence
    n_counts, f_counts = [], []
    for a, b in zip(bounds, bounds[1:]):
        part = seq[a:b]
        n_counts.append(sum(1 for v in part if v < red.n_original))
        f_counts.append(b - a - n_counts[-1])
    return BlockStructure(tuple(bounds), tuple(n_counts), tuple(f_counts), tuple(prof.cut(b) for b in bounds[1:]))


# -- exact oracles ------------------------------------------------------------

DEFAULT_ARRANGEMENT_LIMIT = 20


def _subset_cuts(g: Graph) -> list[int]:
    n = g.n
    masks = g.masks
    deg = g.degrees()
    cuts = [0] * (1 << n)
    for s in range(1, 1 << n):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        cuts[s] = cuts[rest] + deg[v] - 2 * (masks[v] & rest).bit_count()
    return cuts


def arrangement_exact(
    g: Graph,
    c: CostPolynomial | int = ZERO,
    direction: str = "min",
    kind: str = "quadratic",
    max_vertices: int = DEFAULT_ARRANGEMENT_LIMIT,
) -> tuple[int, Ordering]:
    """Optimal arrangement cost over all ``n!`` orderings.

    Uses the prefix-cut decomposition ``cost = sum_j |delta(X_j)| * (f(j+1) - f(j))``,
    so the search runs over vertex subsets rather than permutations.
    """
    if direction not in ("min", "max"):
        raise ValueError("direction must be 'min' or 'max'")
    if kind not in ("quadratic", "linear"):
        raise ValueError("kind must be 'quadratic' or 'linear'")
    n = g.n
    if n > max_vertices:
        raise SizeLimitError(f"exact arrangement refused: {n} vertices exceeds the limit of {max_vertices}")
    if n == 0:
        return 0, Ordering(())
    cv = c_value(c, n)
    step = [0] + [(2 * j + 1 + cv) if kind == "quadratic" else 1 for j in range(1, n + 1)]
    cuts = _subset_cuts(g)
    better = (lambda a, b: a < b) if direction == "min" else (lambda a, b: a > b)
    size = 1 << n
    best: list = [None] * size
    choice = [-1] * size
    best[0] = 0
    for s in range(size - 1):
        if best[s] is None:
            continue
        k = s.bit_count()
        free = (size - 1) & ~s
        while free:
            bit = free & -free
            free ^= bit
            t = s | bit
            val = best[s] + cuts[t] * step[k + 1]
            if best[t] is None or better(val, best[t]):
                best[t] = val
                choice[t] = bit.bit_length() - 1
    seq = []
    s = size - 1
    while s:
        v = choice[s]
        seq.append(v)
        s &= ~(1 << v)
    return best[size - 1], Ordering(tuple(reversed(seq)))


def oqa_exact(g: Graph, c: CostPolynomial | int = ZERO, direction: str = "min",
              max_vertices: int = DEFAULT_ARRANGEMENT_LIMIT) -> tuple[int, Ordering]:
    return arrangement_exact(g, c, direction, "quadratic", max_vertices)


def ola_exact(g: Graph, direction: str = "min", max_vertices: int = DEFAULT_ARRANGEMENT_LIMIT) -> tuple[int, Ordering]:
    return arrangement_exact(g, 0, direction, "linear", max_vertices)


def max_cut_exact(g: Graph, max_vertices: int = 20) -> tuple[int, frozenset[int]]:
    """Maximum cut by enumerating the ``2**(n-1)`` sides that exclude the last vertex."""
    n = g.n
    if n > max_vertices:
        raise SizeLimitError(f"exact max cut refused: {n} vertices exceeds the limit of {max_vertices}")
    if n == 0:
        return 0, frozenset()
    masks = g.masks
    deg = g.degrees()
    best, best_side = 0, 0
    side, cut = 0, 0
    # Gray code walk: one vertex flips per step.
    for i in range(1, 1 << (n - 1)):
        v = (i & -i).bit_length() - 1
        inside = (masks[v] & side).bit_count()
        if side >> v & 1:
            cut += 2 * inside - deg[v]
        else:
            cut += deg[v] - 2 * inside
        side ^= 1 << v
        if cut > best:
            best, best_side = cut, side
    return best, frozenset(v for v in range(n) if best_side >> v & 1)


# -- the two-antennas family ----------------------------------------------------

def two_antennas(n: int) -> Graph:
    """``K_n`` on ``0..n-1`` plus pendant vertices ``x = n`` at ``u = 0`` and ``y = n+1`` at ``v = 1``."""
    if n < 2:
        raise ValueError("need at least two clique vertices")
    edges = list(itertools.combinations(range(n), 2)) + [(n, 0), (n + 1, 1)]
    return Graph(n + 2, edges)


def two_antennas_orderings(n: int) -> dict[str, Ordering]:
    """Representatives of the three cost classes of candidate optima.

    ``a1``: ``x, u, ..., v, y``; ``a23``: ``x, y, u, v, ...``;
    ``a45``: ``..., v, u, x, y``.
    """
    x, y = n, n + 1
    middle = tuple(range(2, n))
    return {
        "a1": Ordering((x, 0) + middle + (1, y)),
        "a23": Ordering((x, y, 0, 1) + middle),
        "a45": Ordering(middle + (1, 0, x, y)),
    }


def two_antennas_closed_forms(n: int, cv: int) -> dict[str, tuple[int, int]]:
    """``(linear, quadratic)`` costs of the three classes, for a fixed value ``cv`` of ``c``."""
    base = n * (n * n - 1) // 6
    return {
        "a1": (base + 2, base * (cv + n + 3) + 2 * n + 2 * cv + 6),
        "a23": (base + 4, base * (cv + n + 5) + 4 * cv + 20),
        "a45": (base + 4, base * (cv + n + 1) + 8 * n + 4 * cv + 4),
    }
