import json
import os

import pytest

from ordercraft.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "c4.edges").write_text("4 4\n1 2\n2 3\n3 4\n4 1\n")
    (tmp_path / "c5.edges").write_text("5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n")
    (tmp_path / "k3.edges").write_text("3 3\n1 2\n2 3\n1 3\n")
    (tmp_path / "id4.ord").write_text("1\n2\n3\n4\n")
    (tmp_path / "b22.bip").write_text("2 2 2\n1 1\n2 2\n")
    (tmp_path / "k2.edges").write_text("2 1\n1 2\n")
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_with_ordering(workdir, capsys):
    code, out, _ = run(capsys, "analyze", "c4.edges", "--ordering", "id4.ord")
    assert code == 0
    data = json.loads(out)
    assert (data["nnz"], data["flops"], data["omega"], data["fill"]) == ("9", "23", "3", "1")


def test_analyze_default_ordering(workdir, capsys):
    code, out, _ = run(capsys, "analyze", "k3.edges", "--format", "csv")
    assert code == 0
    assert "nnz,6" in out and "ordering,md" in out


def test_analyze_bad_file(workdir, capsys):
    (workdir / "bad.edges").write_text("3 2\n1 2\n")
    code, _, err = run(capsys, "analyze", "bad.edges")
    assert code == 2
    assert "bad.edges:1:" in err


def test_usage_errors(workdir, capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze"])
    assert info.value.code == 1
    code, _, err = run(capsys, "family")
    assert code == 1


def test_threads_env(workdir, capsys, monkeypatch):
    monkeypatch.setenv("ORDERCRAFT_THREADS", "0")
    code, _, _ = run(capsys, "analyze", "k3.edges")
    assert code == 1
    monkeypatch.setenv("ORDERCRAFT_THREADS", "3")
    code, _, _ = run(capsys, "analyze", "k3.edges")
    assert code == 0
    assert json.loads((workdir / "ordercraft-manifest.json").read_text())["threads"] == "3"


def test_family_commands(workdir, capsys):
    code, out, _ = run(capsys, "family", "--params", "4", "4", "4", "--verify")
    data = json.loads(out)
    assert code == 0 and data["T1"]["nnz"] == "56" and data["T2"]["nnz"] == "77"
    code, out, _ = run(capsys, "family", "--scale", "65")
    assert json.loads(out)["holds"] is True
    code, _, _ = run(capsys, "family", "--params", "3", "4", "4")
    assert code == 2


def test_search(workdir, capsys):
    code, out, _ = run(capsys, "search", "c5.edges", "--metric", "treewidth", "--out", "w.ord")
    data = json.loads(out)
    assert code == 0 and data["value"] == "3" and data["treewidth"] == "2"
    assert (workdir / "w.ord").exists()
    (workdir / "k5.edges").write_text("5 10\n" + "".join(f"{a} {b}\n" for a in range(1, 6) for b in range(a + 1, 6)))
    code, out, _ = run(capsys, "search", "k5.edges")
    assert json.loads(out)["value"] == "15"
    (workdir / "big.edges").write_text("24 0\n")
    code, _, err = run(capsys, "search", "big.edges")
    assert code == 3 and "24 vertices" in err


def test_arrange_commands(workdir, capsys):
    code, out, _ = run(capsys, "arrange", "cost", "c4.edges", "id4.ord", "--c", "0,0,1")
    assert code == 0 and json.loads(out)["quadratic"] == "36"
    code, out, _ = run(capsys, "arrange", "exact", "c4.edges", "--kind", "linear")
    assert json.loads(out)["value"] == "6"
    code, out, _ = run(capsys, "arrange", "normalize", "k3.edges", "--seed", "4", "--trace")
    data = json.loads(out)
    assert code == 0 and int(data["cost_end"]) >= int(data["cost_start"])
    assert data["padding"] == "243" and int(data["extracted_cut"]) <= 2
    code, _, _ = run(capsys, "arrange", "cost", "c4.edges", "id4.ord", "--c", "1,2")
    assert code == 1


def test_reduce_maxcut(workdir, capsys):
    code, out, _ = run(capsys, "arrange", "reduce-maxcut", "k3.edges", "--k", "2", "--out-dir", "g")
    data = json.loads(out)
    assert data["n"] == "246" and data["k"] == str(3 ** 10 * 2)
    assert (workdir / "g" / "gadget.edges").read_text().startswith("246 3\n")
    code, out, _ = run(capsys, "reduce", "maxcut-to-oqa", "k3.edges", "--k", "1")
    assert json.loads(out)["k"] == str(3 ** 10)


def test_reduce_chain_gadgets(workdir, capsys):
    code, out, _ = run(capsys, "reduce", "qcc-to-flops", "b22.bip", "--k", "5", "--out-dir", "q")
    data = json.loads(out)
    assert code == 0 and data["offset"] == "48" and data["k_prime"] == "53"
    assert (workdir / "q" / "gadget.edges").exists()
    code, out, _ = run(capsys, "reduce", "oqa-to-qcc", "k2.edges", "--k", "0", "--out-dir", "o")
    data = json.loads(out)
    assert data["offset"] == "70" and data["designated"] == "Q" and data["q"] == "4"
    manifest = json.loads((workdir / "ordercraft-manifest.json").read_text())
    assert manifest["command"] == "reduce oqa-to-qcc"
    assert "k2.edges" in manifest["inputs"]
    assert any(k.endswith("gadget.bip") for k in manifest["outputs"])


def test_compare(workdir, capsys):
    (workdir / "rev.ord").write_text("4\n3\n2\n1\n")
    code, out, _ = run(capsys, "compare", "c4.edges", "--permutation", "rev=rev.ord")
    data = json.loads(out)
    assert code == 0 and len(data["reports"][0]["orderings"]) == 3
    code, out, _ = run(capsys, "compare", "--corpus", "--format", "csv")
    assert out.startswith("matrix,name,source,nnz")
    code, _, _ = run(capsys, "compare")
    assert code == 1
    code, _, _ = run(capsys, "compare", "c4.edges", "--heuristics", "amd")
    assert code == 1


def test_manifest_reproducibility(workdir, capsys):
    run(capsys, "analyze", "c4.edges", "--manifest", "m1.json")
    run(capsys, "analyze", "c4.edges", "--manifest", "m2.json")
    m1 = json.loads((workdir / "m1.json").read_text())
    m2 = json.loads((workdir / "m2.json").read_text())
    assert m1["outputs"] == m2["outputs"] and m1["inputs"] == m2["inputs"]
    assert m1["version"] and m1["exit_code"] == 0


def test_no_manifest_and_output_file(workdir, capsys):
    code, out, _ = run(capsys, "analyze", "c4.edges", "--no-manifest", "--output", "r.json", "--format", "pretty")
    assert code == 0 and out == ""
    assert "nnz" in (workdir / "r.json").read_text()
    assert not (workdir / "ordercraft-manifest.json").exists()


def test_selftest_subset(workdir, capsys):
    code, out, err = run(capsys, "selftest", "--only", "1", "2")
    assert code == 0 and json.loads(out)["passed"] == "2"
    assert "[PASS] criterion  1" in err
    code, _, _ = run(capsys, "selftest", "--only", "3")
    assert code == 4
