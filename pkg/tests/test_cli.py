import json

import pytest

from fermionic_tn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.startswith("{")]


def test_verify_ok(capsys):
    code, recs = run(capsys, "verify", "ftc+")
    assert code == 0 and recs[0]["pass"] and recs[0]["schema_version"] == 1


def test_verify_bosonic(capsys):
    assert run(capsys, "verify", "z2-bosonic-tc")[0] == 0


def test_verify_corrupted_s(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"table": [[0, 1], [1, 0]], "s": [[0, 1], [0, 0]]}))
    code, recs = run(capsys, "verify", str(p))
    assert code == 2 and recs[0]["cocycle2_violation"] is not None


def test_verify_pentagon_failure(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"table": [[0, 1], [1, 0]], "s": [[0, 0], [0, 1]]}))
    code, recs = run(capsys, "verify", str(p))
    assert code == 1 and recs[0]["pentagon_violation"] == [1, 1, 1, 1]


def test_unreadable_input(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "verify", str(p))[0] == 2
    assert run(capsys, "verify", "no-such-model")[0] == 2
    assert main(["frobnicate"]) == 2


def test_axioms(capsys):
    code, recs = run(capsys, "axioms", "ftc-", "--summary-only")
    assert code == 0 and recs[0]["pass"] and recs[0]["checks"] == 28


def test_axioms_mutation(capsys):
    code, recs = run(capsys, "axioms", "ftc+", "--flip-y")
    assert code == 1
    failed = [r for r in recs if r.get("kind") == "concatenation" and not r["pass"]]
    assert failed


def test_degeneracy(capsys):
    code, recs = run(capsys, "degeneracy", "ftc+", "--quiet")
    assert code == 0 and recs[0]["degeneracy"] == recs[0]["degeneracy_by_rank"] == 4
    assert sum(r.get("kind") == "class" for r in recs) == 4
    assert run(capsys, "degeneracy", "trivial", "--quiet")[1][0]["degeneracy"] == 1


@pytest.mark.parametrize("s, roots, n", [("ftc", 4, 2), ("zero", 2, 2), ("ftc", 2, 0)])
def test_solve_pentagon(capsys, s, roots, n):
    code, recs = run(capsys, "solve-pentagon", "z2", s, "--roots", str(roots))
    assert code == 0 and recs[0]["solutions"] == n


def test_solver_bound(capsys):
    assert run(capsys, "solve-pentagon", "z4", "zero", "--roots", "8")[0] == 2


@pytest.mark.parametrize("alpha", ["+i", "-i"])
def test_ftc_check(capsys, alpha):
    code, recs = run(capsys, "ftc-check", "--alpha", alpha)
    r = recs[0]
    assert code == 0 and r["degeneracy"] == 4 and all(r["plaquette_ok"]) and len(r["plaquette_ok"]) == 64


def test_ftc_check_mismatch(capsys):
    code, recs = run(capsys, "ftc-check", "--alpha=+i", "--model", "ftc+")
    assert code == 1 and recs[0]["axioms_ok"] and not recs[0]["plaquette_pass"]


def test_flags_and_json_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, recs = run(capsys, "axioms", "ftc+", "--summary-only", "--arith", "float", "--proj-norm", "off",
                     "--berezin-sign", "-", "--json", str(out))
    assert code == 0
    assert recs[0]["settings"] == {"arith": "float", "tol": 1e-9, "proj_norm": False, "berezin_sign": "-"}
    assert json.loads(out.read_text().splitlines()[0]) == recs[0]


def test_deterministic(capsys):
    a = run(capsys, "degeneracy", "s3-untwisted", "--quiet")
    b = run(capsys, "degeneracy", "s3-untwisted", "--quiet")
    assert a == b
