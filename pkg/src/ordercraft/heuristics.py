"""Greedy ordering heuristics, Matrix Market ingestion and fill-vs-FLOPs reports.

Two local criteria drive the greedy orderings: the current elimination
degree (minimum degree) and the current deficiency, the number of missing
edges among a vertex's neighbors (minimum deficiency).  Both break ties by
the lowest vertex id, so orderings are deterministic.
"""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import scipy.io
import scipy.sparse

from .elimination import MetricsReport, Ordering, eliminate, read_ordering
from .errors import FormatError, InvalidOrderingError
from .graph import Graph


# -- greedy orderings ---------------------------------------------------------

def _deficiency(nbrs: list[set[int]], v: int) -> int:
    nv = nbrs[v]
    missing = 0
    for a in nv:
        missing += len(nv) - 1 - len(nbrs[a] & nv)
    return missing // 2


def _greedy(g: Graph, score: Callable[[list[set[int]], int], int], far_reaching: bool) -> Ordering:
    """Eliminate a vertex of minimum ``score`` until none remain.

    Scores live in a heap with lazy invalidation.  After eliminating ``v``
    the neighbors of ``v`` are rescored, and with ``far_reaching`` also their
    neighbors (deficiency changes when fill lands inside a neighborhood).
    """
    nbrs = [set(a) for a in g.adj]
    current = [score(nbrs, v) for v in range(g.n)]
    heap = [(s, v) for v, s in enumerate(current)]
    heapq.heapify(heap)
    gone = [False] * g.n
    seq = []
    while heap:
        s, v = heapq.heappop(heap)
        if gone[v] or s != current[v]:
            continue
        gone[v] = True
        seq.append(v)
        nv = nbrs[v]
        for a in nv:
            nbrs[a].discard(v)
            nbrs[a] |= nv - {a}
        touched = set(nv)
        if far_reaching:
            for a in nv:
                touched |= nbrs[a]
        nv.clear()
        for u in touched:
            if not gone[u]:
                new = score(nbrs, u)
                if new != current[u]:
                    current[u] = new
                    heapq.heappush(heap, (new, u))
    return Ordering(tuple(seq))


def min_degree_order(g: Graph) -> Ordering:
    return _greedy(g, lambda nbrs, v: len(nbrs[v]), far_reaching=False)


def min_deficiency_order(g: Graph) -> Ordering:
    return _greedy(g, _deficiency, far_reaching=True)


HEURISTICS: dict[str, Callable[[Graph], Ordering]] = {
    "md": min_degree_order,
    "deficiency": min_deficiency_order,
}


# -- input --------------------------------------------------------------------

def load_matrix_market(path) -> Graph:
    """Pattern graph of ``A + A^T`` for a coordinate Matrix Market file.

    Values are ignored and diagonal entries dropped; ``general`` storage is
    symmetrized.  Only square coordinate matrices are accepted.
    """
    path = Path(path)
    try:
        rows, cols, _, fmt, _, _ = scipy.io.mminfo(str(path))
        if fmt != "coordinate":
            raise FormatError(f"expected a coordinate matrix, got {fmt!r}", 1, str(path))
        if rows != cols:
            raise FormatError(f"matrix is {rows}x{cols}, not square", path=str(path))
        mat = scipy.io.mmread(str(path))
    except FormatError:
        raise
    except (ValueError, IndexError, OSError) as exc:
        raise FormatError(f"cannot read Matrix Market data: {exc}", path=str(path)) from None
    coo = scipy.sparse.coo_matrix(mat)
    edges = set()
    for i, j in zip(coo.row.tolist(), coo.col.tolist()):
        if i != j:
            edges.add((i, j) if i < j else (j, i))
    return Graph.from_edge_set(rows, edges)


def write_matrix_market(g: Graph, path, comment: str = "") -> None:
    """Lower-triangle symmetric pattern file for ``g``."""
    lines = ["%%MatrixMarket matrix coordinate pattern symmetric"]
    lines += [f"% {c}" for c in comment.splitlines() if c]
    lines.append(f"{g.n} {g.n} {g.m}")
    lines += [f"{v + 1} {u + 1}" for u, v in g.edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def load_permutation(path, n: int | None = None) -> Ordering:
    """External ordering file, e.g. an AMD or METIS permutation exported one id per line."""
    return read_ordering(path, n)


# -- comparison reports ---------------------------------------------------------

def _pct(new: int, old: int) -> str:
    """Relative change in percent as a decimal string with four places."""
    if old == 0:
        return "0.0000" if new == 0 else "inf"
    q = Fraction(100 * (new - old), old)
    sign = "-" if q < 0 else ""
    q = abs(q)
    scaled = round(q * 10000)
    return f"{sign}{scaled // 10000}.{scaled % 10000:04d}"


@dataclass(frozen=True)
class OrderingResult:
    name: str
    source: str
    metrics: MetricsReport
    fill: int

    def as_dict(self) -> dict:
        return {"name": self.name, "source": self.source, **self.metrics.as_dict(), "fill": str(self.fill)}


@dataclass
class HeuristicReport:
    matrix: str
    n: int
    m: int
    results: list[OrderingResult] = field(default_factory=list)

    def deltas(self) -> list[dict]:
        """Every ordered pair ``(a, b)`` with ``a`` listed first: change of ``b`` relative to ``a``."""
        out = []
        for i, a in enumerate(self.results):
            for b in self.results[i + 1:]:
                out.append({
                    "from": a.name, "to": b.name,
                    "nnz_pct": _pct(b.metrics.nnz, a.metrics.nnz),
                    "fill_pct": _pct(b.fill, a.fill),
                    "flops_pct": _pct(b.metrics.flops, a.metrics.flops),
                })
        return out

    def inversions(self) -> list[list[str]]:
        """Pairs where one ordering has strictly less fill but strictly more FLOPs."""
        out = []
        for i, a in enumerate(self.results):
            for b in self.results[i + 1:]:
                da = a.metrics.nnz - b.metrics.nnz
                df = a.metrics.flops - b.metrics.flops
                if da * df < 0:
                    out.append([a.name, b.name])
        return out

    def check(self) -> None:
        for r in self.results:
            r.metrics.check(self.n)

    def as_dict(self) -> dict:
        return {
            "matrix": self.matrix,
            "n": str(self.n),
            "m": str(self.m),
            "orderings": [r.as_dict() for r in self.results],
            "deltas": self.deltas(),
            "inversions": self.inversions(),
        }


CSV_FIELDS = ("matrix", "name", "source", "nnz", "flops", "omega", "fill")


def reports_to_csv(reports: Sequence[HeuristicReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        for r in rep.results:
            w.writerow({"matrix": rep.matrix, **r.as_dict()})
    return buf.getvalue()


def compare(g: Graph, orderings: Sequence[tuple[str, Ordering]], matrix: str = "", sources: Sequence[str] | None = None) -> HeuristicReport:
    """Metrics for each named ordering, in the given order."""
    rep = HeuristicReport(matrix, g.n, g.m)
    for i, (name, ordering) in enumerate(orderings):
        if ordering.n != g.n:
            raise InvalidOrderingError(f"ordering {name!r} covers {ordering.n} vertices, graph has {g.n}")
        tri, degs = eliminate(g, ordering)
        src = sources[i] if sources else "heuristic"
        rep.results.append(OrderingResult(name, src, MetricsReport.from_degrees(degs), len(tri.fill)))
    rep.check()
    return rep


def compare_heuristics(g: Graph, matrix: str = "", names: Sequence[str] = ("md", "deficiency")) -> HeuristicReport:
    return compare(g, [(name, HEURISTICS[name](g)) for name in names], matrix)


# -- bundled corpus -------------------------------------------------------------

DATA_DIR = Path(__file__).parent / "data"


def corpus_paths() -> list[Path]:
    return sorted(DATA_DIR.glob("*.mtx"))
