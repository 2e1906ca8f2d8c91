import itertools

import pytest
from hypothesis import given, settings

from ordercraft.elimination import Ordering, eliminate, is_minimal_triangulation, ordering_metrics
from ordercraft.errors import SizeLimitError
from ordercraft.exact import (
    enumerate_minimal_triangulations, min_fill_exact, min_flops_exact, reach_degree, solve, treewidth_exact,
)
from ordercraft.family import FamilyParams, build_family, template_t1, template_t2
from ordercraft.graph import Graph, clique, cycle, graph_sum, is_isomorphic, star

from conftest import graph_and_ordering, graphs


def brute_force(g):
    best = {"nnz": None, "flops": None, "omega": None}
    for perm in itertools.permutations(range(g.n)):
        rep = ordering_metrics(g, Ordering(perm))
        for key in best:
            val = getattr(rep, key)
            best[key] = val if best[key] is None else min(best[key], val)
    return best


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=6))
def test_subset_dp_matches_permutation_brute_force(g):
    want = brute_force(g)
    assert min_fill_exact(g).value == want["nnz"]
    assert min_flops_exact(g).value == want["flops"]
    assert treewidth_exact(g).value == want["omega"]


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=9))
def test_witness_replays_to_the_optimum(g):
    for metric, key in (("fill", "nnz"), ("flops", "flops"), ("treewidth", "omega")):
        res = solve(g, metric)
        assert getattr(res.replay(g), key) == res.value


@given(graph_and_ordering(min_n=1, max_n=9))
def test_reach_degree_is_the_elimination_degree(case):
    g, ordering = case
    degs = eliminate(g, ordering)[1]
    done = 0
    for v, d in zip(ordering.sequence, degs):
        assert reach_degree(g.masks, done, v) == d
        done |= 1 << v


def test_known_values():
    assert min_fill_exact(cycle(4)).value == 9
    assert min_flops_exact(cycle(4)).value == 23
    assert treewidth_exact(cycle(5)).value == 3
    assert min_fill_exact(clique(5)).value == 15
    assert min_flops_exact(star(4)).value == 17
    assert min_fill_exact(Graph(0)).value == 0


def test_family_optima():
    g = build_family(FamilyParams(4, 4, 4))
    assert (min_fill_exact(g).value, min_flops_exact(g).value, treewidth_exact(g).value) == (56, 304, 8)


def test_size_refusal():
    with pytest.raises(SizeLimitError, match="23 vertices"):
        min_fill_exact(Graph(23))
    with pytest.raises(SizeLimitError):
        solve(Graph(6), "flops", max_vertices=5)
    with pytest.raises(ValueError):
        solve(Graph(3), "width")


def test_census_on_the_family():
    p = FamilyParams(4, 4, 4)
    classes = enumerate_minimal_triangulations(build_family(p), 500, seed=1)
    assert len(classes) == 2
    assert any(is_isomorphic(c.filled, template_t1(p)) for c in classes)
    assert any(is_isomorphic(c.filled, template_t2(p)) for c in classes)


def test_census_classes_are_minimal_and_distinct():
    g = graph_sum(cycle(5), cycle(4))
    classes = enumerate_minimal_triangulations(g, 200, seed=0)
    for c in classes:
        assert is_minimal_triangulation(g, c.fill)
    for a, b in itertools.combinations(classes, 2):
        assert not is_isomorphic(a.filled, b.filled)
    # A pentagon has one triangulation up to isomorphism, a square too.
    assert len(classes) == 1
