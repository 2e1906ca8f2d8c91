import json

import pytest
from hypothesis import given, settings

from ordercraft.elimination import Ordering, eliminate, ordering_metrics
from ordercraft.errors import FormatError, InvalidOrderingError
from ordercraft.exact import min_fill_exact, min_flops_exact
from ordercraft.family import FamilyParams, build_family
from ordercraft.graph import Graph, clique, cycle, path, star
from ordercraft.heuristics import (
    compare, compare_heuristics, corpus_paths, load_matrix_market, load_permutation, min_deficiency_order,
    min_degree_order, reports_to_csv, write_matrix_market,
)

from conftest import graphs


def fill(g, ordering):
    return len(eliminate(g, ordering)[0].fill)


def test_min_degree_examples():
    assert fill(star(5), min_degree_order(star(5))) == 0
    assert min_degree_order(star(5)).sequence[-2:] in {(0, 5), (5, 0)}
    assert fill(cycle(4), min_degree_order(cycle(4))) == 1
    assert min_degree_order(cycle(4)).sequence[0] == 0


def test_min_deficiency_examples():
    assert fill(cycle(4), min_deficiency_order(cycle(4))) == 1
    g = cycle(6)
    ordering = min_deficiency_order(g)
    assert ordering_metrics(g, ordering).nnz >= min_fill_exact(g).value
    assert fill(g, ordering) == 3


@settings(max_examples=60)
@given(graphs(max_n=9))
def test_deficiency_is_fill_free_on_chordal_graphs(g):
    filled = eliminate(g, Ordering.identity(g.n))[0].filled
    assert fill(filled, min_deficiency_order(filled)) == 0


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_heuristics_dominate_the_exact_optimum(g):
    best_fill, best_flops = min_fill_exact(g).value, min_flops_exact(g).value
    for order in (min_degree_order(g), min_deficiency_order(g)):
        rep = ordering_metrics(g, order)
        rep.check(g.n)
        assert rep.nnz >= best_fill and rep.flops >= best_flops


def test_orderings_are_deterministic():
    g = build_family(FamilyParams(5, 4, 6))
    assert min_degree_order(g) == min_degree_order(g)
    assert min_deficiency_order(g) == min_deficiency_order(g)


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_tridiagonal_general(tmp_path):
    text = "%%MatrixMarket matrix coordinate real general\n3 3 7\n1 1 2\n1 2 -1\n2 1 -1\n2 2 2\n2 3 -1\n3 2 -1\n3 3 2\n"
    assert load_matrix_market(_write(tmp_path, "t.mtx", text)) == path(3)


def test_load_symmetric_lower_triangle(tmp_path):
    text = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 3\n2 1\n3 1\n3 2\n"
    assert load_matrix_market(_write(tmp_path, "k3.mtx", text)) == clique(3)


def test_general_storage_is_symmetrized(tmp_path):
    text = "%%MatrixMarket matrix coordinate integer general\n3 3 1\n3 1 5\n"
    assert load_matrix_market(_write(tmp_path, "g.mtx", text)).edges() == [(0, 2)]


def test_diagonal_entries_are_dropped(tmp_path):
    with_diag = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 5\n1 1\n2 2\n3 3\n2 1\n3 2\n"
    without = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n"
    assert load_matrix_market(_write(tmp_path, "a.mtx", with_diag)) == load_matrix_market(_write(tmp_path, "b.mtx", without))


@pytest.mark.parametrize("text", [
    "3 3 1\n1 2\n",
    "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n4 1\n",
    "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n",
    "%%MatrixMarket matrix coordinate pattern general\n2 3 1\n1 2\n",
])
def test_bad_matrix_market_files(tmp_path, text):
    with pytest.raises(FormatError):
        load_matrix_market(_write(tmp_path, "bad.mtx", text))


def test_matrix_market_round_trip(tmp_path):
    g = build_family(FamilyParams(4, 4, 4))
    write_matrix_market(g, tmp_path / "f.mtx", comment="family")
    assert load_matrix_market(tmp_path / "f.mtx") == g


def test_load_permutation(tmp_path):
    assert load_permutation(_write(tmp_path, "id", "1\n2\n3\n")) == Ordering.identity(3)
    assert load_permutation(_write(tmp_path, "rev", "3\n2\n1\n")) == Ordering.identity(3).reverse()
    with pytest.raises(FormatError):
        load_permutation(_write(tmp_path, "bad", "1\n1\n3\n"))


def test_compare_single_and_identical():
    g = cycle(5)
    rep = compare(g, [("md", min_degree_order(g))])
    assert rep.deltas() == [] and rep.inversions() == []
    same = compare(g, [("a", Ordering.identity(5)), ("b", Ordering.identity(5))])
    d = same.deltas()[0]
    assert d["nnz_pct"] == d["flops_pct"] == d["fill_pct"] == "0.0000"
    with pytest.raises(InvalidOrderingError):
        compare(g, [("short", Ordering.identity(4))])


def test_inversion_on_the_kloks_family():
    g = build_family(FamilyParams.scaled(4, "kloks"))
    rep = compare_heuristics(g, "kloks4")
    md, dfc = rep.results
    assert (md.metrics.nnz, md.metrics.flops) == (238, 3046)
    assert (dfc.metrics.nnz, dfc.metrics.flops) == (240, 3040)
    assert rep.inversions() == [["md", "deficiency"]]
    delta = rep.deltas()[0]
    assert delta["nnz_pct"] == "0.8403" and delta["flops_pct"] == "-0.1970"


def test_report_schema_and_csv():
    g = path(4)
    rep = compare_heuristics(g, "p4")
    data = json.loads(json.dumps(rep.as_dict()))
    assert set(data) >= {"matrix", "orderings", "inversions"}
    assert set(data["orderings"][0]) >= {"name", "nnz", "flops", "omega"}
    assert all(isinstance(v, str) for v in data["orderings"][0].values())
    lines = reports_to_csv([rep]).splitlines()
    assert lines[0] == "matrix,name,source,nnz,flops,omega,fill"
    assert len(lines) == 3


def test_bundled_corpus():
    paths = corpus_paths()
    assert len(paths) >= 10
    first = [compare_heuristics(load_matrix_market(p), p.stem).as_dict() for p in paths]
    again = [compare_heuristics(load_matrix_market(p), p.stem).as_dict() for p in paths]
    assert first == again
