from __future__ import annotations

import json

import pytest

from oberforge import GroupSpec, make_group, op_signature, verify_factorization, verify_starter
from oberforge.cli import main
from oberforge.serialize import factor_from_json, factorization_from_json, lifted_from_json

Z12_STARTER = {"group": {"family": "cyclic", "n": 12}, "cycles": [["inf", 0, 3, 9, 6], [1, 5, 4, 2, 7, 11, 10, 8]]}


@pytest.fixture
def z12_starter_file(tmp_path):
    path = tmp_path / "z12.json"
    path.write_text(json.dumps(Z12_STARTER))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_pretty(capsys, z12_starter_file):
    code, out, _ = run(capsys, "verify", "--starter", z12_starter_file, "--k", "2", "--pretty")
    assert code == 0
    assert out.strip() == "2-starter certified, stabilizer {0,6}"


def test_verify_json(capsys, z12_starter_file):
    code, out, _ = run(capsys, "verify", "--starter", z12_starter_file, "--k", "2")
    payload = json.loads(out)
    assert code == 0 and payload["accepted"] and payload["stabilizer"] == [0, 6]


def test_verify_rejects_with_witnesses(capsys, z12_starter_file):
    code, out, _ = run(capsys, "verify", "--starter", z12_starter_file, "--k", "4")
    payload = json.loads(out)
    assert code == 1
    assert {f["condition"] for f in payload["failures"]} == {"k_factor", "stabilizer_order"}
    assert all(f["witnesses"] for f in payload["failures"])


def test_inline_json_accepted(capsys):
    code, _, _ = run(capsys, "verify", "--starter", json.dumps(Z12_STARTER), "--k", "2")
    assert code == 0


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": {"family": "cyclic", "n": 12},\n "cycles": [1, 2,]}')
    code, _, err = run(capsys, "verify", "--starter", str(bad), "--k", "2")
    assert code == 2
    assert "line 2" in err and "column" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--starter", "/nonexistent/file.json", "--k", "2"],
        ["verify", "--k", "2"],
        ["bogus-command"],
        ["solve-op", "--starter", "x.json"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_bad_k_is_usage_error(capsys, z12_starter_file):
    code, _, err = run(capsys, "verify", "--starter", z12_starter_file, "--k", "5")
    assert code == 2 and "divide" in err


def test_develop_round_trip(capsys, z12_starter_file, tmp_path):
    out = tmp_path / "fz.json"
    code, _, _ = run(capsys, "develop", "--starter", z12_starter_file, "--k", "2", "--out", str(out))
    assert code == 0
    fz = factorization_from_json(json.loads(out.read_text()))
    assert len(fz) == 6 and verify_factorization(fz.group, fz).ok
    code, out_text, _ = run(capsys, "verify", "--factorization", str(out), "--pretty")
    assert code == 0 and "6 2-factors" in out_text


def test_solve_op_round_trip(capsys, z12_starter_file, tmp_path):
    out = tmp_path / "sol.json"
    code, text, _ = run(capsys, "solve-op", "--starter", z12_starter_file, "--p", "3", "--out", str(out), "--pretty")
    assert code == 0
    assert "OP(13, ³8) solved on 37 vertices, 18 two-factors" in text
    fz = factorization_from_json(json.loads(out.read_text()))
    assert verify_factorization(fz.group, fz).ok
    assert {str(op_signature(F)) for F in fz.factors} == {"OP(13, ^3 8)"}


def test_solve_op_p2_odd_cycles_rejected(capsys, tmp_path):
    doc = {"group": {"family": "cyclic", "n": 8}, "cycles": [["inf", 2, 6], [0, 1, 3], [4, 5, 7]]}
    path = tmp_path / "z8.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "solve-op", "--starter", str(path), "--p", "2")
    assert code == 1
    assert "even length" in json.loads(out)["message"]


def test_lift_and_split(capsys, z12_starter_file, tmp_path):
    lifted = tmp_path / "lifted.json"
    assert run(capsys, "lift", "--starter", z12_starter_file, "--n", "3", "--out", str(lifted))[0] == 0
    L = lifted_from_json(json.loads(lifted.read_text()))
    assert L.starter.k == 6
    parts_dir = tmp_path / "parts"
    code, out, _ = run(capsys, "split", "--lifted", str(lifted), "--out-dir", str(parts_dir))
    assert code == 0 and json.loads(out)["signature"] == "OP(13, ^3 8)"
    for j in range(3):
        F = factor_from_json(json.loads((parts_dir / f"H_{j}.json").read_text()))
        assert str(op_signature(F)) == "OP(13, ^3 8)"


def test_tampered_lift_rejected(capsys, z12_starter_file, tmp_path):
    lifted = tmp_path / "lifted.json"
    run(capsys, "lift", "--starter", z12_starter_file, "--n", "3", "--out", str(lifted))
    doc = json.loads(lifted.read_text())
    doc["n"] = 2
    lifted.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "split", "--lifted", str(lifted))
    assert code == 2


def test_search_and_double(capsys, tmp_path):
    starter = tmp_path / "d6.json"
    code, text, _ = run(
        capsys, "search", "--group", '{"family": "dihedral", "order": 6}', "--k", "2",
        "--signature", "OP(3, 4)", "--stabilizer", "3", "--out", str(starter), "--pretty",
    )
    assert code == 0 and "found 2-starter" in text
    doubled = tmp_path / "d12.json"
    code, text, _ = run(capsys, "double-dihedral", "--starter", str(starter), "--out", str(doubled), "--pretty")
    assert code == 0
    F = factor_from_json(json.loads(doubled.read_text()))
    report = verify_starter(make_group(GroupSpec.dihedral(12)), F, 4)
    assert report.accepted and report.stabilizer == {0, 3, 6, 9}


def test_search_exhausted_exit_code(capsys):
    code, out, _ = run(capsys, "search", "--group", '{"family": "dihedral", "order": 8}', "--k", "4")
    assert code == 1 and json.loads(out)["status"] == "exhausted"


def test_search_budget_from_env(capsys, monkeypatch):
    monkeypatch.setenv("OBERFORGE_BUDGET", "3")
    code, out, _ = run(capsys, "search", "--group", '{"family": "cyclic", "n": 12}', "--k", "2")
    assert code == 1 and json.loads(out)["status"] == "budget_exceeded"
    monkeypatch.setenv("OBERFORGE_BUDGET", "lots")
    code, _, _ = run(capsys, "search", "--group", '{"family": "cyclic", "n": 12}', "--k", "2")
    assert code == 2


def test_search_enumerate(capsys):
    code, out, _ = run(capsys, "search", "--group", '{"family": "cyclic", "n": 6}', "--k", "2", "--limit", "100")
    payload = json.loads(out)
    assert code == 0 and payload["count"] == 15
    assert all(s["certificate"]["k"] == 2 for s in payload["starters"])


def test_search_spec_file(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"group": {"family": "cyclic", "n": 4}, "k": 4}))
    code, out, _ = run(capsys, "search", "--spec", str(spec))
    assert code == 0 and json.loads(out)["artifact"]["certificate"]["stabilizer"] == [0, 1, 2, 3]


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "--group", '{"family": "dihedral", "order": 16}', "--k", "4", "--pretty")
    assert code == 1 and "central_product_ok: false" in out
    code, out, _ = run(capsys, "analyze", "--group", '{"family": "dihedral", "order": 12}', "--k", "4")
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_signature_command(capsys, z12_starter_file, tmp_path):
    code, out, _ = run(capsys, "signature", "--factor", z12_starter_file, "--pretty")
    assert code == 0 and out.strip() == "OP(5, 8)"
    path = tmp_path / "path.json"
    path.write_text(json.dumps({"group": {"family": "cyclic", "n": 3}, "edges": [[0, 1], [1, 2]]}))
    code, out, _ = run(capsys, "signature", "--factor", str(path))
    assert code == 1 and json.loads(out)["witnesses"]
