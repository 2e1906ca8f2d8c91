import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from ordercraft.elimination import (
    MetricsReport, Ordering, eliminate, elimination_degrees, find_peo, format_ordering, is_chordal,
    is_minimal_triangulation, is_peo, mcs_order, minimalize, ordering_metrics, parse_ordering,
    read_ordering, triangulation_from_fill, write_ordering,
)
from ordercraft.errors import FormatError, InvalidOrderingError, NotChordalError
from ordercraft.graph import Graph, clique, cycle, path, star

from conftest import graph_and_ordering, graphs


def test_ordering_basics():
    a = Ordering((2, 0, 1))
    assert a.positions == (2, 3, 1)
    assert a.vertex_at(1) == 2
    assert a.reverse().sequence == (1, 0, 2)
    t = a.translate(4)
    assert t.base == 5 and t.position(2) == 5
    assert Ordering.from_positions([2, 3, 1]) == a
    assert Ordering.from_positions({0: 2, 1: 3, 2: 1}) == a
    with pytest.raises(InvalidOrderingError):
        Ordering((0, 0, 1))
    with pytest.raises(InvalidOrderingError):
        Ordering.from_positions([1, 1])
    with pytest.raises(ValueError):
        a.translate(-1)


def test_cycle_four_natural_order():
    rep = ordering_metrics(cycle(4), Ordering.identity(4))
    assert rep == MetricsReport(nnz=9, flops=23, omega=3)
    tri, degs = eliminate(cycle(4), Ordering.identity(4))
    assert degs == [2, 2, 1, 0]
    assert tri.fill == frozenset({(1, 3)})


def test_clique_and_star():
    assert ordering_metrics(clique(3), Ordering.identity(3)).nnz == 6
    # Center first fills the star into a clique, leaves first adds nothing.
    assert len(eliminate(star(4), Ordering.identity(5))[0].fill) == 6
    leaves_first = Ordering((1, 2, 3, 4, 0))
    assert eliminate(star(4), leaves_first)[0].fill == frozenset()


def test_ordering_size_mismatch():
    with pytest.raises(InvalidOrderingError):
        eliminate(path(3), Ordering.identity(2))


@given(graph_and_ordering(max_n=9))
def test_metric_inequalities(case):
    g, ordering = case
    rep = ordering_metrics(g, ordering)
    rep.check(g.n)
    assert rep.nnz == g.n + g.m + len(eliminate(g, ordering)[0].fill)


@given(graph_and_ordering(max_n=9))
def test_elimination_yields_chordal_graph_with_witness(case):
    g, ordering = case
    tri, _ = eliminate(g, ordering)
    assert is_peo(tri.filled, ordering)
    assert nx.is_chordal(nx.Graph(list(tri.filled.edges()))) if tri.filled.m else True
    assert tri.degrees() == elimination_degrees(g, ordering)


@given(graph_and_ordering(max_n=8))
def test_peo_iff_no_fill(case):
    g, ordering = case
    assert is_peo(g, ordering) == (not eliminate(g, ordering)[0].fill)


@settings(max_examples=150)
@given(graphs(max_n=9))
def test_chordality_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    assert is_chordal(g) == nx.is_chordal(h)


def test_mcs_ties_and_seeded_variation():
    assert mcs_order(path(3)) == [0, 1, 2]
    k = clique(6)
    orders = {tuple(mcs_order(k, random.Random(s))) for s in range(10)}
    assert len(orders) > 1
    assert find_peo(cycle(4)) is None


def test_triangulation_from_fill_validates():
    g = cycle(4)
    tri = triangulation_from_fill(g, [(3, 1)])
    assert tri.fill == frozenset({(1, 3)})
    with pytest.raises(NotChordalError):
        triangulation_from_fill(cycle(5), [(0, 2)])
    with pytest.raises(ValueError):
        triangulation_from_fill(g, [(0, 1)])


@settings(max_examples=60)
@given(graph_and_ordering(max_n=8))
def test_minimalize_reaches_a_minimal_subset(case):
    g, ordering = case
    tri, _ = eliminate(g, ordering)
    small = minimalize(g, tri)
    assert small.fill <= tri.fill
    assert is_minimal_triangulation(g, small.fill)
    assert is_peo(small.filled, small.witness)


def test_minimalize_drops_needless_fill():
    # The middle of a path eliminated first joins its ends although the path is chordal.
    g = path(3)
    tri, _ = eliminate(g, Ordering((1, 0, 2)))
    assert tri.fill == frozenset({(0, 2)})
    assert not is_minimal_triangulation(g, tri.fill)
    assert minimalize(g, tri).fill == frozenset()


def test_minimalize_rejects_foreign_triangulation():
    tri, _ = eliminate(cycle(4), Ordering.identity(4))
    with pytest.raises(ValueError):
        minimalize(cycle(5), tri)


def test_ordering_file_round_trip(tmp_path):
    a = Ordering((2, 0, 1))
    assert format_ordering(a) == "3\n1\n2\n"
    write_ordering(a, tmp_path / "o.txt")
    assert read_ordering(tmp_path / "o.txt", 3) == a
    assert parse_ordering("# header\n1\n\n2 # comment\n") == Ordering.identity(2)


@pytest.mark.parametrize("text,n", [
    ("1\n1\n", None),
    ("1\n3\n", None),
    ("0\n", None),
    ("a\n", None),
    ("1\n2\n", 3),
    ("1\n4\n", 3),
])
def test_ordering_file_errors(text, n):
    with pytest.raises(FormatError):
        parse_ordering(text, n)
