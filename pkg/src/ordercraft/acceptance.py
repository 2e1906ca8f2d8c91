"""The acceptance suite: sixteen end-to-end checks with runtime budgets.

Each check returns ``(passed, detail)``; :func:`run` times it and fails it
when the budget is exceeded.  Seeds are fixed so every run sees the same
instances.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import arrangement as arr
from . import chain
from .elimination import Ordering, eliminate, find_peo
from .exact import enumerate_minimal_triangulations, min_fill_exact, min_flops_exact, treewidth_exact
from .family import FamilyParams, build_family, closed_form, replay, template_t1, template_t2
from .graph import BipartiteGraph, Graph, clique, complement, is_isomorphic
from .heuristics import compare_heuristics, corpus_paths, load_matrix_market

ORACLE_LIMIT = 16


@dataclass(frozen=True)
class Outcome:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] criterion {self.ident:2d} {self.name} ({self.seconds:.2f}s / {self.budget:g}s): {self.detail}"


def all_graphs(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


def random_graph(n: int, prob: float, rng: random.Random) -> Graph:
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < prob])


def all_bipartite(p: int, q: int):
    pairs = [(x, y) for x in range(p) for y in range(q)]
    for mask in range(1 << len(pairs)):
        yield BipartiteGraph.from_pairs(p, q, [e for i, e in enumerate(pairs) if mask >> i & 1])


def random_ordering(n: int, rng: random.Random) -> Ordering:
    seq = list(range(n))
    rng.shuffle(seq)
    return Ordering(tuple(seq))


# -- the checks -----------------------------------------------------------------

def check_family_closed_forms():
    count = 0
    for l, t, c in itertools.product(range(4, 9), repeat=3):
        p = FamilyParams(l, t, c)
        for which in ("T1", "T2"):
            if replay(p, which) != closed_form(p, which):
                return False, f"mismatch at {(l, t, c)} {which}"
            count += 1
    return True, f"{count} replays equal their closed forms"


def _leading(fn, degree: int, start: int) -> int:
    """Leading coefficient of an integer polynomial in ``n`` via finite differences, times ``degree!``."""
    vals = [fn(start + i) for i in range(degree + 1)]
    for _ in range(degree):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals[0]


def check_divergence_separation():
    n = 65
    p = FamilyParams.scaled(n, "separation")
    t1, t2 = closed_form(p, "T1"), closed_form(p, "T2")
    strict = t1.nnz < t2.nnz and t2.flops < t1.flops and t2.omega < t1.omega

    def metric(which, name, degree):
        return lambda k: getattr(closed_form(FamilyParams.scaled(k, "separation"), which), name)

    # Leading terms times degree!: 112n^2, 225/2 n^2, 896n^3, 891n^3, 12n, 9n.
    lead = (
        _leading(metric("T1", "nnz", 2), 2, n), _leading(metric("T2", "nnz", 2), 2, n),
        _leading(metric("T1", "flops", 3), 3, n), _leading(metric("T2", "flops", 3), 3, n),
        _leading(metric("T1", "omega", 1), 1, n), _leading(metric("T2", "omega", 1), 1, n),
    )
    expect = (224, 225, 896 * 6, 891 * 6, 12, 9)
    offset_ok = closed_form(p, "T2").omega == 9 * n + 3
    ok = strict and lead == expect and offset_ok
    return ok, (f"nnz {t1.nnz} < {t2.nnz}, flops {t2.flops} < {t1.flops}, omega {t2.omega} < {t1.omega}; "
                f"leading terms {'match' if lead == expect else lead}")


def check_divergence_kloks():
    bad = []
    for n in range(4, 11):
        p = FamilyParams.scaled(n, "kloks")
        t1, t2 = closed_form(p, "T1"), closed_form(p, "T2")
        if not (t1.nnz < t2.nnz and t1.flops < t2.flops and t2.omega < t1.omega):
            bad.append(f"n={n}: nnz {t1.nnz}/{t2.nnz}, flops {t1.flops}/{t2.flops}, omega {t1.omega}/{t2.omega}")
    if bad:
        return False, "violated at " + "; ".join(bad)
    return True, "strict orders hold for n=4..10"


def check_oracle_family():
    p = FamilyParams(4, 4, 4)
    g = build_family(p)
    t1, t2 = closed_form(p, "T1"), closed_form(p, "T2")
    got = (min_fill_exact(g).value, min_flops_exact(g).value, treewidth_exact(g).value)
    want = (min(t1.nnz, t2.nnz), min(t1.flops, t2.flops), min(t1.omega, t2.omega))
    return got == want, f"exact (nnz, flops, omega) = {got}, closed-form minima = {want}"


def check_census():
    p = FamilyParams(4, 4, 4)
    g = build_family(p)
    classes = enumerate_minimal_triangulations(g, 2000, seed=0)
    templates = [template_t1(p), template_t2(p)]
    matched = set()
    for tri in classes:
        hits = [i for i, tpl in enumerate(templates) if is_isomorphic(tri.filled, tpl)]
        if len(hits) != 1:
            return False, f"class with fill size {len(tri.fill)} matches templates {hits}"
        matched.add(hits[0])
    ok = len(classes) == 2 and matched == {0, 1}
    return ok, f"{len(classes)} classes, fill sizes {sorted(len(t.fill) for t in classes)}"


def check_rose_invariance():
    rng = random.Random(6)
    for _ in range(100):
        n = rng.randint(1, 12)
        base = random_graph(n, rng.random(), rng)
        g = eliminate(base, random_ordering(n, rng))[0].filled
        spectra = set()
        for _ in range(5):
            peo = find_peo(g, rng)
            if peo is None:
                return False, "filled graph is not chordal"
            spectra.add(tuple(sorted(eliminate(g, peo)[1])))
        if len(spectra) != 1:
            return False, f"degree multisets differ on {g!r}"
    return True, "100 chordal graphs, 5 PEOs each, identical degree multisets"


def check_translation():
    rng = random.Random(7)
    for _ in range(500):
        n = rng.randint(1, 10)
        g = random_graph(n, rng.random(), rng)
        ordering = random_ordering(n, rng)
        r = rng.randint(0, 50)
        cv = rng.randint(0, 30)
        lhs = arr.quadratic_cost(g, ordering.translate(r), cv)
        rhs = arr.quadratic_cost(g, ordering, cv) + 2 * r * arr.linear_cost(g, ordering)
        if lhs != rhs:
            return False, f"{lhs} != {rhs}"
    return True, "500 instances"


def check_clique_cost():
    count = 0
    for s in range(1, 13):
        g = clique(s)
        ordering = Ordering.identity(s)
        for r in range(6):
            for cv in (0, 1, 7):
                direct = arr.quadratic_cost(g, ordering.translate(r), cv)
                if direct != arr.clique_cost(s, r, cv):
                    return False, f"s={s} r={r} c={cv}: {direct} != {arr.clique_cost(s, r, cv)}"
                count += 1
    return True, f"{count} (s, r, c) triples"


def _duality_holds(g: Graph, ordering: Ordering, cv: int) -> bool:
    total = arr.quadratic_cost(g, ordering, cv) + arr.quadratic_cost(complement(g), ordering, cv)
    n = g.n
    return 6 * total == n * (n * n - 1) * (cv + n + 1)


def check_duality():
    rng = random.Random(9)
    count = 0
    for n in range(1, 5):
        for g in all_graphs(n):
            for perm in itertools.permutations(range(n)):
                for cv in (0, 1, 7):
                    if not _duality_holds(g, Ordering(perm), cv):
                        return False, f"fails on {g!r}"
                    count += 1
    for _ in range(200):
        g = random_graph(5, rng.random(), rng)
        for perm in itertools.permutations(range(5)):
            if not _duality_holds(g, Ordering(perm), rng.choice((0, 1, 7))):
                return False, f"fails on {g!r}"
            count += 1
    return True, f"{count} (graph, ordering, c) instances"


def _random_iso_move(rng):
    n0 = rng.randint(1, 6)
    pad = rng.randint(1, 4)
    g = Graph(n0 + pad, random_graph(n0, rng.random(), rng).edges())
    ordering = random_ordering(g.n, rng)
    w = rng.choice(range(n0, g.n))
    a = ordering.position(w)
    prof = arr.cut_profile(g, ordering)
    targets, top = [], -1
    for j in range(a, g.n + 1):
        top = max(top, prof.cut(j))
        if j > a and prof.cut(j) == top:
            targets.append(j)
    if not targets:
        return None
    return g, ordering, w, rng.choice(targets)


def _random_block_move(rng):
    n0 = rng.randint(2, 6)
    pad = rng.randint(1, 6)
    g = Graph(n0 + pad, random_graph(n0, 0.3 + 0.7 * rng.random(), rng).edges())
    seq = list(range(n0))
    rng.shuffle(seq)
    # Put padding at random spots so isolated runs occur.
    for w in range(n0, g.n):
        seq.insert(rng.randint(0, len(seq)), w)
    ordering = Ordering(tuple(seq))
    cv = rng.choice((0, 1, 7, 40))
    options = []
    for j in range(1, g.n):
        for s in range(1, g.n - j):
            for f in range(1, g.n - j - s + 1):
                try:
                    arr.move_block_left(g, ordering, j, s, f, cv)
                except arr.PreconditionError:
                    continue
                options.append((j, s, f))
    if not options:
        return None
    return (g, ordering, *rng.choice(options), cv)


def check_rearrangement_moves():
    rng = random.Random(10)
    iso = block = 0
    while iso < 500:
        inst = _random_iso_move(rng)
        if inst is None:
            continue
        g, ordering, w, j = inst
        cv = rng.choice((0, 1, 7))
        new = arr.move_iso_right(g, ordering, w, j)
        if arr.quadratic_cost(g, new, cv) < arr.quadratic_cost(g, ordering, cv):
            return False, f"move_iso_right lowered the cost on {g!r}"
        iso += 1
    while block < 500:
        inst = _random_block_move(rng)
        if inst is None:
            continue
        g, ordering, j, s, f, cv = inst
        new = arr.move_block_left(g, ordering, j, s, f, cv)
        if arr.quadratic_cost(g, new, cv) < arr.quadratic_cost(g, ordering, cv):
            return False, f"move_block_left lowered the cost on {g!r}"
        block += 1
    g, ordering, w, j = LEFT_MOVE_COUNTEREXAMPLE
    before = arr.quadratic_cost(g, ordering)
    after = arr.quadratic_cost(g, arr.move_vertex(ordering, w, j))
    if not after < before:
        return False, f"stored counterexample no longer lowers the cost ({before} -> {after})"
    return True, f"{iso} + {block} checked moves; unchecked left move lowers {before} -> {after}"


# Moving an isolated vertex to just after the rightmost largest cut (position 2)
# lowers the cost: 102 -> 101 with c = 0.
LEFT_MOVE_COUNTEREXAMPLE = (
    Graph(8, [(0, 5), (1, 3), (3, 4), (3, 5)]),
    Ordering((3, 1, 4, 6, 2, 0, 7, 5)),
    7,
    2,
)


def check_maxcut_forward():
    count = 0
    for n in range(1, 5):
        for g in all_graphs(n):
            for c in (arr.ZERO, arr.REDUCTION_POLY):
                red = arr.maxcut_to_oqa(g, 1, c=c)
                cv = arr.c_value(c, red.graph.n)
                for mask in range(1 << n):
                    side = [v for v in range(n) if mask >> v & 1]
                    ordering = arr.cut_to_arrangement(red, side)
                    if arr.quadratic_cost(red.graph, ordering, cv) < n ** 10 * arr.cut_size(g, side):
                        return False, f"bound fails on {g!r}, side {side}"
                    count += 1
    return True, f"{count} (graph, cut, c) instances"


def check_normalization():
    rng = random.Random(12)
    graphs = 0
    for n in range(1, 4):
        for g in all_graphs(n):
            red = arr.maxcut_to_oqa(g, 0)
            best, _ = arr.max_cut_exact(g)
            extracted = []
            for _ in range(50):
                res = arr.normalize_arrangement(red, random_ordering(red.graph.n, rng))
                if any(t["cost_after"] < t["cost_before"] for t in res.trace):
                    return False, f"trace not monotone on {g!r}"
                res.blocks.check(n, red.padding)
                if any(res.blocks.f_counts[1:]):
                    return False, f"padding not contiguous on {g!r}: {res.blocks.f_counts}"
                extracted.append(arr.cut_size(g, res.extracted_side(n)))
            if max(extracted) != best or any(x > best for x in extracted):
                return False, f"extracted cuts {sorted(set(extracted))} vs max cut {best} on {g!r}"
            graphs += 1
    return True, f"{graphs} graphs x 50 starts, padding contiguous, best extracted cut = max cut"


def check_qcc_flops():
    count = 0
    dp = 0
    for p in range(1, 4):
        for q in range(1, 4):
            offset = chain.qcc_flops_offset(p, q)
            for b in all_bipartite(p, q):
                best = None
                for perm in itertools.permutations(range(p)):
                    ordering = Ordering(perm)
                    fill = chain.fixed_order_completion(b, ordering)
                    qcc = chain.qcc_cost(b, fill)
                    if chain.flops_of_completion(b, fill, ordering) != qcc + offset:
                        return False, f"identity fails for p={p} q={q} edges={sorted(b.edges)}"
                    best = qcc if best is None else min(best, qcc)
                    count += 1
                if min_flops_exact(chain.build_c_of_g(b).graph).value != best + offset:
                    return False, f"subset DP disagrees for p={p} q={q} edges={sorted(b.edges)}"
                dp += 1
    return True, f"{count} (B, ordering) identities, {dp} subset-DP minima"


def check_oqa_qcc():
    count = 0
    for n in range(1, 5):
        offset = chain.oqa_offset(n)
        for g in all_graphs(n):
            gp = chain.build_g_prime(g).bipartite
            for perm in itertools.permutations(range(n)):
                ordering = Ordering(perm)
                h = chain.chain_completion_h(gp, ordering)
                if chain.qcc_cost(gp, h) != arr.quadratic_cost(g, ordering, arr.REDUCTION_POLY) + offset:
                    return False, f"identity fails on {g!r} at {perm}"
                count += 1
    return True, f"{count} (graph, ordering) identities"


def _random_bipartite(rng):
    p = rng.randint(1, 10)
    q = rng.randint(1, 12 - p) if p < 12 else 1
    if rng.random() < 0.5:
        # Start from a chain graph and perturb a few pairs.
        thresholds = sorted((rng.randint(0, q) for _ in range(p)), reverse=True)
        pairs = {(x, y) for x in range(p) for y in range(thresholds[x])}
        for _ in range(rng.randint(0, 2)):
            pairs ^= {(rng.randrange(p), rng.randrange(q))}
    else:
        prob = rng.random()
        pairs = {(x, y) for x in range(p) for y in range(q) if rng.random() < prob}
    return BipartiteGraph.from_pairs(p, q, sorted(pairs))


def check_chain_recognition():
    rng = random.Random(15)
    chains = 0
    for _ in range(500):
        b = _random_bipartite(rng)
        res = chain.is_chain_graph(b)
        brute = chain.has_induced_2k2(b)
        if bool(res) != (brute is None):
            return False, f"disagreement on {sorted(b.edges)}"
        if res:
            chains += 1
        else:
            (a, x), (c, y) = res.obstruction
            if not ((a, x) in b.edges and (c, y) in b.edges and (a, y) not in b.edges and (c, x) not in b.edges):
                return False, f"bad obstruction {res.obstruction}"
    return True, f"500 graphs, {chains} chain, {500 - chains} with a 2K2"


def check_heuristics_pipeline():
    paths = corpus_paths()
    if len(paths) < 10:
        return False, f"corpus has only {len(paths)} matrices"
    inversions = oracle = 0
    for path in paths:
        g = load_matrix_market(path)
        rep = compare_heuristics(g, path.stem)
        data = rep.as_dict()
        if set(data) < {"matrix", "orderings", "inversions"} or len(data["orderings"]) != 2:
            return False, f"malformed report for {path.name}"
        for r in rep.results:
            r.metrics.check(g.n)
        inversions += len(rep.inversions())
        if g.n <= ORACLE_LIMIT:
            fill = min_fill_exact(g).value
            flops = min_flops_exact(g).value
            for r in rep.results:
                if r.metrics.nnz < fill or r.metrics.flops < flops:
                    return False, f"{r.name} beats the exact optimum on {path.name}"
            oracle += 1
    return True, f"{len(paths)} matrices, {oracle} checked against exact search, {inversions} inversion(s)"


CHECKS: list[tuple[int, str, Callable, float]] = [
    (1, "family closed forms", check_family_closed_forms, 10),
    (2, "fill/FLOPs divergence (8n, 5n, 4n)", check_divergence_separation, 1),
    (3, "Kloks parameterization n=4..10", check_divergence_kloks, 1),
    (4, "exact search on G(4,4,4)", check_oracle_family, 60),
    (5, "minimal triangulation census", check_census, 120),
    (6, "PEO degree invariance", check_rose_invariance, 30),
    (7, "translation identity", check_translation, 5),
    (8, "clique cost formula", check_clique_cost, 5),
    (9, "complement duality", check_duality, 30),
    (10, "rearrangement moves", check_rearrangement_moves, 30),
    (11, "MaxCut forward bound", check_maxcut_forward, 60),
    (12, "normalization pipeline", check_normalization, 120),
    (13, "QCC to FLOPs identity", check_qcc_flops, 120),
    (14, "OQA to QCC identity", check_oqa_qcc, 60),
    (15, "chain graph recognition", check_chain_recognition, 30),
    (16, "heuristic comparison pipeline", check_heuristics_pipeline, 120),
]


def run(ident: int) -> Outcome:
    for i, name, fn, budget in CHECKS:
        if i == ident:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # report, do not crash the suite
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - start
            if passed and seconds > budget:
                passed, detail = False, f"over budget; {detail}"
            return Outcome(i, name, passed, detail, seconds, budget)
    raise KeyError(ident)


def run_all(only=None) -> list[Outcome]:
    return [run(i) for i, *_ in CHECKS if only is None or i in only]
