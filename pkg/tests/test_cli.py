import dataclasses
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from lpfd import analysis
from lpfd.cli import run

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("LPFD_REGEN_GOLDEN") == "1"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def golden(name, text):
    path = GOLDEN / name
    if REGEN:
        path.write_text(text)
    assert path.exists(), f"missing {path}; rerun with LPFD_REGEN_GOLDEN=1"
    assert text == path.read_text(), f"output differs from {path}"


@pytest.mark.parametrize("name,argv", [
    ("solve_rockjazz_nash.json", ["solve", "rockjazz", "--concept", "nash", "--group", "{E,A}", "--format", "json"]),
    ("solve_pd1_weak_pareto.json", ["solve", "pd1", "--concept", "weakPareto", "--format", "json"]),
    ("check_pd2_ca.json", ["check", "pd2", "--formula", "ca({1,2,3})", "--format", "json"]),
    ("prove_cover.json", ["prove", "cover_theorem", "--format", "json"]),
    ("solve_rockjazz_nash.txt", ["solve", "rockjazz", "--concept", "nash", "--group", "{E,A}"]),
    ("check_pd2_ca.txt", ["check", "pd2", "--at", "conf,conf,observe", "--formula", "ca({1,2,3})"]),
])
def test_golden_outputs(name, argv):
    code, out, err = call(*argv)
    assert code == 0, err
    if name.endswith(".json"):
        json.loads(out)
    golden(name, out)


def test_solve_json_content():
    code, out, _ = call("solve", "rockjazz", "--concept", "nash", "--group", "{E,A}", "--format", "json")
    data = json.loads(out)
    assert sorted(data["solutions"]) == ["JJ", "RR"]


def test_check_at_profile_reports_cover():
    code, out, _ = call("check", "pd2", "--at", "conf,conf,observe", "--formula", "ca({1,2,3})")
    assert code == 0
    assert "true" in out and "cover {1,3} {2,3}" in out


def test_native_and_expanded_ca_agree():
    _, a, _ = call("check", "pd2", "--formula", "ca({1,2,3})", "--format", "json")
    _, b, _ = call("check", "pd2", "--formula", "ca({1,2,3})", "--native", "--format", "json")
    va = [r["value"] for r in json.loads(a)["results"]]
    vb = [r["value"] for r in json.loads(b)["results"]]
    assert va == vb == [False, False, False, True]


def test_check_formula_file(tmp_path):
    f = tmp_path / "f.lpfd"
    f.write_text("na({E,A}) -> pa({E,A})\n")
    code, out, _ = call("check", "rockjazz", "--formula-file", str(f), "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["valid"] is False
    assert [r["value"] for r in data["results"]] == [False, True, True, True]


def test_prove_rejection_is_a_verdict(tmp_path):
    script = tmp_path / "bad.lpfdproof"
    script.write_text("players: 1\n1. [={};<={};<{}] true -> true BY TAUT\n2. true BY MP 1,3\n")
    code, out, _ = call("prove", str(script), "--format", "json")
    assert code == 0
    v = json.loads(out)
    assert (v["accepted"], v["line"], v["code"]) == (False, 2, "bad_reference")


@pytest.mark.parametrize("argv,reason", [
    (["solve", "rockjazz", "--concept", "nash", "--group", "{E,Z}"], "vocabulary_error"),
    (["check", "rockjazz", "--formula", "pa({E}"], "parse_error"),
    (["check", "nosuchmodel", "--formula", "true"], "format_error"),
    (["solve", "rockjazz", "--concept", "paY"], "usage_error"),
    (["solve", "rockjazz", "--concept", "bogus"], "usage_error"),
    (["fuzz", "--models", "0"], "usage_error"),
    (["axioms", "rockjazz", "--schema", "II.zz"], "usage_error"),
    (["prove", "no_such_proof"], "format_error"),
    (["check", "rockjazz", "--at", "XX", "--formula", "true"], "domain_error"),
])
def test_usage_errors_exit_1(argv, reason):
    code, out, err = call(*argv, "--format", "json")
    assert code == 1
    assert f"[{reason}]" in err
    assert json.loads(out)["reason"] == reason


def test_parse_error_position_in_json():
    code, out, _ = call("check", "rockjazz", "--formula", "pa({E}", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data["line"] == 1 and data["column"] >= 1


def test_internal_errors_exit_2(monkeypatch):
    def broken(*a, **k):
        raise RuntimeError("boom")
    monkeypatch.setattr(analysis, "solve", broken)
    code, out, err = call("solve", "rockjazz", "--concept", "nash", "--format", "json")
    assert code == 2
    assert "internal_error" in err
    assert json.loads(out)["reason"] == "internal_error"


def test_route_disagreement_exits_2(monkeypatch):
    real = analysis.nash

    def skewed(m, group, method="direct"):
        rep = real(m, group, method)
        return dataclasses.replace(rep, solutions=())
    monkeypatch.setattr(analysis, "nash", skewed)
    code, _, err = call("check", "rockjazz", "--formula", "na({E,A})")
    assert code == 2
    assert "internal_invariant" in err


def test_figures_written(tmp_path):
    fig = tmp_path / "solve.png"
    code, out, _ = call("solve", "pd2", "--concept", "ca", "--figure", str(fig))
    assert code == 0 and fig.stat().st_size > 1000
    fig2 = tmp_path / "fuzz.png"
    code, out, _ = call("fuzz", "--models", "3", "--samples", "2", "--no-oracles", "--figure", str(fig2))
    assert code == 0 and fig2.stat().st_size > 1000


def test_axioms_command_small():
    code, out, _ = call("axioms", "rockjazz", "--depth", "0", "--limit", "50", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert "II.e" in data["schemata"]
    assert all(data["schemata"][n]["violations"] == 0 for n in data["schemata"] if n != "II.c1")


def test_axioms_mutant_reported():
    code, out, _ = call("axioms", "rockjazz", "--schema", "II.e-reversed", "--depth", "0")
    assert code == 0
    assert "counterexample II.e-reversed" in out


def test_fuzz_command_small():
    code, out, _ = call("fuzz", "--models", "5", "--samples", "3", "--theorems", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["oracles"]["mismatches"] == 0
    assert data["theorems"]["violations"] == 0


def test_fuzz_with_config(tmp_path):
    cfg = tmp_path / "gen.yaml"
    cfg.write_text("generator:\n  players: [2, 2]\n  actions: [2, 2]\n  mode: utility\n")
    code, out, _ = call("fuzz", "--models", "2", "--samples", "2", "--no-oracles", "--config", str(cfg),
                        "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["players"] == [2, 2]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lpfd.cli", "prove", "necessitation"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("accepted")


def test_help_exits_zero():
    assert call("--help")[0] == 0
