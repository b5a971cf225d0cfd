import json

import pytest

from degbound.cli import main
from degbound.decomp import EliminationForest, emit_forest, emit_td, heuristic_decomposition
from degbound.graph import Graph, emit_gr, verify_deletion_set
from degbound.reductions.bundle import read_bundle, verify_bundle
from degbound.reductions.xsat import emit_cnf, make_formula

K3 = Graph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
P3 = Graph.from_edges(3, [(1, 2), (2, 3)])


@pytest.fixture
def files(tmp_path):
    (tmp_path / "k3.gr").write_text(emit_gr(K3))
    (tmp_path / "p3.gr").write_text(emit_gr(P3))
    (tmp_path / "tiny.csp").write_text("csp 1 1 1 3\nscope 1\nsat 1\n")
    return tmp_path


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_solve_dc_count(files, capsys):
    code, out = run(capsys, "solve", "dc", "--chi", "2", "--delta", "1", str(files / "k3.gr"))
    assert code == 0 and "count: 6" in out
    code, out = run(capsys, "solve", "dc", "--chi", "2", "--delta", "1", "--json", str(files / "k3.gr"))
    report = json.loads(out)
    assert report["count"] == "6" and report["schema"] == 1


def test_solve_bdvd_budget(files, capsys):
    code, out = run(capsys, "solve", "bdvd", "--delta", "1", "--budget", "1", "--json", str(files / "p3.gr"))
    report = json.loads(out)
    assert code == 0 and report["answer"] == "yes"
    assert verify_deletion_set(P3, 1, report["deletion_set"]) and len(report["deletion_set"]) == 1
    code, _ = run(capsys, "solve", "bdvd", "--delta", "0", "--budget", "0", str(files / "p3.gr"))
    assert code == 1


def test_solve_with_given_decomposition_and_forest(files, capsys):
    (files / "k3.td").write_text(emit_td(heuristic_decomposition(K3), 3))
    (files / "k3.forest").write_text(emit_forest(EliminationForest({1: None, 2: 1, 3: 2})))
    for td in ("k3.td", "k3.forest"):
        code, out = run(capsys, "solve", "dc", "--chi", "3", "--delta", "0", str(files / "k3.gr"), str(files / td))
        assert code == 0 and "count: 6" in out


def test_solve_decide(files, capsys):
    code, out = run(capsys, "solve", "dc", "--chi", "2", "--delta", "0", "--decide", str(files / "k3.gr"))
    assert code == 1 and "answer: no" in out


def test_missing_file_exits_2(files, capsys):
    assert main(["solve", "dc", "--chi", "2", "--delta", "1", str(files / "nope.gr")]) == 2


def test_generate_tiny_bundle(files, capsys):
    out_dir = files / "out"
    code, out = run(capsys, "generate", "bdvd-pw-d1", str(files / "tiny.csp"), str(out_dir), "--certify")
    assert code == 0 and "15 vertices" in out and "k = 3" in out
    loaded = read_bundle(out_dir)
    assert loaded.graph.n == 15 and loaded.params["k"] == 3
    assert verify_bundle(out_dir) == []
    code, out = run(capsys, "verify", "bundle", str(out_dir))
    assert code == 0


def test_generate_invalid_domain(files, capsys):
    assert main(["generate", "bdvd-pw", str(files / "tiny.csp"), str(files / "x")]) == 2


def test_generate_xsat(files, capsys):
    (files / "f.cnf").write_text(emit_cnf(make_formula(4, [(1, 2, 3), (-1, 2, 4)])))
    code, out = run(capsys, "generate", "xsat", str(files / "f.cnf"), str(files / "xs"))
    assert code == 0 and "6 clauses" in out


def test_generate_vc_with_certificate(files, capsys):
    (files / "f.cnf").write_text(emit_cnf(make_formula(4, [(1, 2, 3)])))
    code, _ = run(capsys, "generate", "dc-vc", str(files / "f.cnf"), str(files / "vc"), "--certify")
    assert code == 0 and (files / "vc" / "certificate.json").exists()
    assert verify_bundle(files / "vc") == []


def test_generate_and_verify_family(files, capsys):
    code, _ = run(capsys, "generate", "detecting-family", str(files / "fam"), "--universe", "4", "--d", "4")
    assert code == 0
    code, out = run(capsys, "verify", "detecting", str(files / "fam" / "family.json"))
    assert code == 0


def test_verify_td(files, capsys):
    (files / "good.td").write_text(emit_td(heuristic_decomposition(K3), 3))
    assert main(["verify", "td", str(files / "k3.gr"), str(files / "good.td")]) == 0
    (files / "bad.td").write_text("s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    code, out = run(capsys, "verify", "td", str(files / "k3.gr"), str(files / "bad.td"))
    assert code == 1 and out.strip()


def test_verify_certificates(files, capsys):
    (files / "s.json").write_text(json.dumps({"deletion_set": [2]}))
    assert main(["verify", "deletion-set", str(files / "p3.gr"), str(files / "s.json"), "--delta", "1"]) == 0
    (files / "c.json").write_text(json.dumps({"coloring": {"1": 1, "2": 1, "3": 1}}))
    assert main(["verify", "coloring", str(files / "k3.gr"), str(files / "c.json"), "--delta", "1", "--chi", "2"]) == 1


def test_bench(capsys):
    code, out = run(capsys, "bench", "join", "--sizes", "0-2", "--repetitions", "1", "--entries", "50")
    assert code == 0 and out.splitlines()[0].startswith("bag,")
    assert main(["bench", "join", "--repetitions", "0"]) == 2


def test_threads_validation(files, capsys):
    assert main(["solve", "dc", "--chi", "2", "--delta", "1", "--threads", "0", str(files / "k3.gr")]) == 2
