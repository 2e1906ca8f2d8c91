"""A graph family where minimum fill and minimum FLOPs pick different triangulations.

Each graph joins a cycle to the disjoint union of an independent set and a
clique.  Vertex layout: cycle ``0..l-1``, independent set ``l..l+t-1``, clique
``l+t..l+t+c-1``.  Every minimal triangulation is one of two kinds:

* ``T1`` completes the cycle to a clique and leaves the rest alone.
* ``T2`` fans the cycle from vertex 0 and completes the independent set
  together with the clique.
"""
from __future__ import annotations

from dataclasses import dataclass

from .elimination import MetricsReport, Ordering, eliminate
from .errors import InvalidGraphError
from .graph import Graph, clique, cycle, graph_sum, independent, join

VARIANTS = ("separation", "kloks")


@dataclass(frozen=True)
class FamilyParams:
    l: int
    t: int
    c: int

    def __post_init__(self):
        if min(self.l, self.t, self.c) < 4:
            raise InvalidGraphError(f"family parameters must all be >= 4, got l={self.l}, t={self.t}, c={self.c}")

    @property
    def n(self) -> int:
        return self.l + self.t + self.c

    def cycle_ids(self) -> range:
        return range(self.l)

    def independent_ids(self) -> range:
        return range(self.l, self.l + self.t)

    def clique_ids(self) -> range:
        return range(self.l + self.t, self.n)

    @classmethod
    def scaled(cls, n: int, variant: str = "separation") -> "FamilyParams":
        """``(8n, 5n, 4n)`` for the fill/FLOPs separation, ``(2n+3, n, 2n)`` for Kloks' example."""
        if variant == "separation":
            return cls(8 * n, 5 * n, 4 * n)
        if variant == "kloks":
            return cls(2 * n + 3, n, 2 * n)
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def build_family(p: FamilyParams) -> Graph:
    return join(cycle(p.l), graph_sum(independent(p.t), clique(p.c)))


def ordering_t1(p: FamilyParams) -> Ordering:
    """Independent set first, then cycle and clique vertices in id order."""
    rest = [v for v in range(p.n) if v not in p.independent_ids()]
    return Ordering(tuple(p.independent_ids()) + tuple(rest))


def ordering_t2(p: FamilyParams) -> Ordering:
    """Cycle vertices ``1..l-2`` first (fan around vertex 0), then everything else."""
    head = list(range(1, p.l - 1))
    rest = [v for v in range(p.n) if v not in head]
    return Ordering(tuple(head + rest))


def template_t1(p: FamilyParams) -> Graph:
    return join(clique(p.l), graph_sum(independent(p.t), clique(p.c)))


def template_t2(p: FamilyParams) -> Graph:
    fan = cycle(p.l).add_edges((0, k) for k in range(2, p.l - 1))
    return join(fan, clique(p.t + p.c))


def _sum_to(k: int) -> int:
    return k * (k + 1) // 2


def _sum_sq_to(k: int) -> int:
    return k * (k + 1) * (2 * k + 1) // 6


def closed_form(p: FamilyParams, which: str) -> MetricsReport:
    l, t, c = p.l, p.t, p.c
    if which == "T1":
        return MetricsReport(
            nnz=t * (l + 1) + _sum_to(l + c),
            flops=t * (l + 1) ** 2 + _sum_sq_to(l + c),
            omega=l + c,
        )
    if which == "T2":
        return MetricsReport(
            nnz=(l - 2) * (t + c + 3) + _sum_to(t + c + 2),
            flops=(l - 2) * (t + c + 3) ** 2 + _sum_sq_to(t + c + 2),
            omega=t + c + 3,
        )
    raise ValueError(f"which must be 'T1' or 'T2', got {which!r}")


def replay(p: FamilyParams, which: str) -> MetricsReport:
    """Metrics obtained by actually playing the elimination game."""
    ordering = ordering_t1(p) if which == "T1" else ordering_t2(p)
    return MetricsReport.from_degrees(eliminate(build_family(p), ordering)[1])


@dataclass(frozen=True)
class FamilyReport:
    params: FamilyParams
    t1: MetricsReport
    t2: MetricsReport

    def winners(self) -> dict[str, str]:
        """Which triangulation is strictly better per metric (``"tie"`` otherwise)."""
        out = {}
        for name in ("nnz", "flops", "omega"):
            a, b = getattr(self.t1, name), getattr(self.t2, name)
            out[name] = "T1" if a < b else "T2" if b < a else "tie"
        return out

    def as_dict(self) -> dict:
        return {
            "params": {"l": self.params.l, "t": self.params.t, "c": self.params.c},
            "T1": self.t1.as_dict(),
            "T2": self.t2.as_dict(),
            "winners": self.winners(),
        }


def family_report(p: FamilyParams, verify: bool = False) -> FamilyReport:
    rep = FamilyReport(p, closed_form(p, "T1"), closed_form(p, "T2"))
    if verify:
        for which, cf in (("T1", rep.t1), ("T2", rep.t2)):
            got = replay(p, which)
            if got != cf:
                raise AssertionError(f"{which} replay {got} disagrees with closed form {cf}")
    return rep


# Strict orderings the separation results promise, as (metric, better triangulation).
EXPECTED_WINNERS = {
    "separation": {"nnz": "T1", "flops": "T2", "omega": "T2"},
    "kloks": {"nnz": "T1", "flops": "T1", "omega": "T2"},
}
_THRESHOLDS = {"separation": 64, "kloks": 3}


def divergence_table(n: int, variant: str = "separation") -> dict:
    """Exact metrics at scale ``n`` and whether the promised strict orders hold."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if n <= _THRESHOLDS[variant]:
        raise ValueError(f"variant {variant!r} needs n > {_THRESHOLDS[variant]}, got {n}")
    rep = family_report(FamilyParams.scaled(n, variant))
    winners = rep.winners()
    expected = EXPECTED_WINNERS[variant]
    return {
        "variant": variant,
        "n": n,
        **rep.as_dict(),
        "expected": expected,
        "holds": winners == expected,
    }
