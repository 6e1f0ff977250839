"""CLI contract: exit codes, determinism, golden outputs."""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
EXAMPLES = ROOT / "docs" / "examples"


def run_cli(*args: str, env=None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "tancat.cli", *args],
        cwd=ROOT, text=True, capture_output=True, check=False, env=env)


def test_wone_eval():
    proc = run_cli("wone", "eval", "c . l")
    assert proc.returncode == 0
    assert "x -> xy" in proc.stdout


def test_wone_equal_pass_and_exit_zero():
    proc = run_cli("wone", "equal", "c . l", "l")
    assert proc.returncode == 0
    assert "[PASS]" in proc.stdout


def test_wone_equal_failure_exits_one():
    proc = run_cli("wone", "equal", "(p * id{W}) . l", "id{W}")
    assert proc.returncode == 1
    assert "[FAIL]" in proc.stdout


def test_boundary_mismatch_exits_two():
    proc = run_cli("wone", "equal", "p", "0")
    assert proc.returncode == 2
    assert "boundary" in proc.stderr


def test_bad_spec_file_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "algebroid", "base_dim": 1}')
    proc = run_cli("algebroid", "check", str(bad))
    assert proc.returncode == 2
    assert "missing" in proc.stderr


def test_algebroid_check_so3():
    proc = run_cli("algebroid", "check", str(EXAMPLES / "so3.json"))
    assert proc.returncode == 0
    for name in ("alternating", "Leibniz", "Bianchi"):
        assert f"[PASS] {name}" in proc.stdout


def test_algebroid_bracket():
    proc = run_cli("algebroid", "bracket", str(EXAMPLES / "tangent1.json"),
                   str(EXAMPLES / "section_x.json"), str(EXAMPLES / "section_y.json"))
    assert proc.returncode == 0
    assert "(-1)" in proc.stdout


def test_cdc_check_file_and_random():
    proc = run_cli("cdc", "check", str(EXAMPLES / "map.json"),
                   "--random", "3", "--seed", "5")
    assert proc.returncode == 0


def test_tangent_check():
    proc = run_cli("tangent", "check", "-n", "2")
    assert proc.returncode == 0


def test_nerve_object_json():
    proc = run_cli("--json", "nerve", "object", str(EXAMPLES / "action.json"),
                   "-V", "W*W")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["dimension"] == 4
    assert [b["label"] for b in payload["blocks"]] == ["1", "x", "y", "xy"]


def test_nerve_functoriality():
    proc = run_cli("nerve", "functoriality", str(EXAMPLES / "action.json"),
                   "--pairs", "5", "--seed", "3")
    assert proc.returncode == 0


def test_lie_tangent_writes_derived_algebroid(tmp_path):
    out = tmp_path / "derived.json"
    proc = run_cli("lie-tangent", str(EXAMPLES / "tangent1.json"),
                   "--out", str(out))
    assert proc.returncode == 0
    payload = json.loads(out.read_text())
    assert payload["kind"] == "algebroid"
    assert payload["base_dim"] == 2 and payload["rank"] == 2
    # L'(TM on Q^1) is the tangent algebroid on Q^2.
    assert payload["anchor"] == [["1", "0"], ["0", "1"]]


def test_selftest_json_deterministic():
    args = ("--json", "selftest", "--seed", "11", "--cases", "20")
    first = run_cli(*args)
    second = run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout  # byte-identical reports


def test_selftest_mutation_harness():
    proc = run_cli("selftest", "--mutate", "bianchi")
    assert proc.returncode == 0
    assert "fail together" in proc.stdout
