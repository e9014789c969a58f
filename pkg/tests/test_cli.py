import json
import subprocess
import sys

import pytest

from difformal.cli import NO_Y_NOTE, RunConfig, emit, main, run

from helpers import MIXED_P, THREE_FAMILY_P, X_COEFF_P

EX2_FAMILIES = {"y = c", "y = c1 + c2*x", "y = c1*e^x - 2*x + c2"}


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == 0 else None)


def test_three_family_all_k(capsys):
    code, doc = run_json(capsys, ["solve", "--expr", THREE_FAMILY_P, "--verify"])
    assert code == 0
    assert [r["k"] for r in doc["results"]] == [0, 1, 2, 3]
    assert set(doc["families"]) == EX2_FAMILIES
    sols = [s for r in doc["results"] for s in r["solutions"]]
    assert all(s["verified"] and s["worst_residual"] < 1e-8 for s in sols)
    assert list(doc) == ["input", "order", "mode", "results", "families"]


def test_three_family_k2_rule_json(capsys):
    _, doc = run_json(capsys, ["solve", "--expr", THREE_FAMILY_P, "--k", "all"])
    k2 = doc["results"][2]
    assert k2["k"] == 2
    assert k2["S_k"] == [{"W[0,2]": "-2", "W[1,2]": "0", "W[2,2]": "-1"},
                         {"W[0,2]": "0", "W[1,2]": "0", "W[2,2]": "0"}]
    assert k2["factors"] == ["y'' - y' - 2", "y''"]
    assert doc["results"][3]["S_k"] == []


def test_x_coeff_single_k(capsys):
    code, doc = run_json(capsys, ["solve", "--expr", X_COEFF_P, "--k", "1", "--free-poly-degree", "2", "--verify"])
    assert code == 0
    (r,) = doc["results"]
    assert {"V[0]": "free", "V[1]": "3", "V[2]": "1", "W[1,1]": "-1"} in r["S_k"]
    assert {"V[0]": "-5", "V[1]": "-2", "V[2]": "0", "W[1,1]": "0"} in r["S_k"]
    assert "y = c1*e^x + x^2 + 5*x + c2" in doc["families"]


def test_constant_input_notes_no_y(capsys):
    code, doc = run_json(capsys, ["solve", "--expr", "5"])
    assert code == 0
    assert doc["results"] == [] and doc["order"] is None
    assert doc["note"] == NO_Y_NOTE


def test_emit_is_deterministic():
    cfg = RunConfig(expr=THREE_FAMILY_P, verify=True, seed=3)
    assert emit(run(cfg)) == emit(run(cfg))


def test_general_mode_reports_no_solutions(capsys):
    code, doc = run_json(capsys, ["solve", "--expr", MIXED_P, "--k", "2", "--mode", "general"])
    assert code == 0
    (r,) = doc["results"]
    assert r["solutions"] == []
    assert r["unresolved"]


@pytest.mark.parametrize("argv,code", [
    (["solve", "--expr", "2y"], 2),
    (["solve", "--expr", "sin(x)"], 2),
    (["solve", "--expr", "y'", "--k", "5"], 2),
    (["solve", "--expr", "y", "--free-poly-degree", "-1"], 2),
    (["solve", "--input", "/nonexistent/p.txt"], 2),
    (["solve", "--expr", MIXED_P, "--k", "2", "--mode", "general", "--max-pairs", "1"], 3),
    (["solve", "--expr", MIXED_P, "--k", "2", "--mode", "general", "--max-degree", "1"], 3),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().out == ""


def test_seed_env_override(capsys, monkeypatch):
    main(["solve", "--expr", THREE_FAMILY_P, "--verify", "--seed", "1"])
    seeded = capsys.readouterr().out
    main(["solve", "--expr", THREE_FAMILY_P, "--verify", "--seed", "2"])
    other = capsys.readouterr().out
    monkeypatch.setenv("DIFFORMAL_SEED", "1")
    main(["solve", "--expr", THREE_FAMILY_P, "--verify", "--seed", "2"])
    assert capsys.readouterr().out == seeded
    assert seeded != other


def test_input_file_and_text_format(tmp_path, capsys):
    src = tmp_path / "p.txt"
    src.write_text(THREE_FAMILY_P + "\n")
    assert main(["solve", "--input", str(src), "--k", "2", "--format", "text", "--verify"]) == 0
    out = capsys.readouterr().out
    assert "k = 2" in out
    assert "solution: y = c1*e^x - 2*x + c2" in out
    assert "rule: {W[0,2]=-2, W[1,2]=0, W[2,2]=-1}" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "difformal", "solve", "--expr", "y''", "--k", "2"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["families"] == ["y = c1 + c2*x"]
