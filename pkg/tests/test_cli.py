"""Command-line behaviour: exit codes, formats, determinism, data dir."""

import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from tubecat.cli import main

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "tubecat" / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_verify_passes_on_clean_category(capsys):
    code, out = run(capsys, "verify", "--category", "builtin:fibonacci")
    assert code == 0
    assert "result: PASS" in out


def test_verify_trivial_all_residuals_zero(capsys):
    code, out = run(capsys, "verify", "--category", "builtin:trivial", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert report["passed"]
    assert all(c["max_residual"] == 0.0 for c in report["checks"])


def test_verify_exit_one_on_failed_check(capsys):
    code, out = run(capsys, "verify", "--category", "builtin:z3")
    assert code == 1
    assert "result: FAIL" in out
    assert "handle_slide" in out


def test_verify_exit_two_on_corrupt_file(capsys, tmp_path):
    bad = tmp_path / "corrupt.json"
    bad.write_text('{"labels": ["1"]}')
    code, out = run(capsys, "verify", "--category", str(bad))
    assert code == 2
    assert "missing key" in out


def test_verify_check_selection(capsys):
    code, out = run(
        capsys, "verify", "--category", "builtin:z3", "--checks", "pentagon,hexagon"
    )
    assert code == 0
    assert "handle_slide" not in out


def test_modular_data_semion_values(capsys):
    code, out = run(capsys, "modular-data", "--category", "builtin:semion")
    assert code == 0
    assert "labels: 1, s" in out
    assert "+1.000000+0.000000i" in out
    assert "-1.000000" in out
    assert "d(C) = 2.0" in out


def test_modular_data_json_round_trips(capsys):
    code, out = run(
        capsys, "modular-data", "--category", "builtin:ising", "--format", "json"
    )
    assert code == 0
    report = json.loads(out)
    assert json.loads(json.dumps(report)) == report
    row = [complex(re, im) for re, im in report["s_matrix"][0]]
    assert np.allclose(row, [1.0, np.sqrt(2), 1.0])


def test_enumerate_fibonacci_identity_only(capsys):
    code, out = run(
        capsys, "enumerate", "--category", "builtin:fibonacci", "--entry-bound", "2"
    )
    assert code == 0
    assert "count: 1" in out


def test_enumerate_exit_three_on_budget(capsys, tmp_path):
    payload = {
        "S": [
            [[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(5)] for i in range(5)
        ],
        "T": [
            [[1.0, 0.0] if i == j else [0.0, 0.0] for j in range(5)] for i in range(5)
        ],
    }
    f = tmp_path / "flat.json"
    f.write_text(json.dumps(payload))
    code, out = run(capsys, "enumerate", "--category", str(f))
    assert code == 3
    assert "PartialSearchError" in out


def test_check_rep_identity(capsys):
    code, out = run(capsys, "check-rep", "--category", "builtin:semion", "--z", "identity")
    assert code == 0
    assert "invariant: yes" in out


def test_check_rep_non_invariant_is_exit_zero(capsys):
    code, out = run(
        capsys, "check-rep", "--category", "builtin:semion", "--z", "[[1,1],[0,1]]"
    )
    assert code == 0
    assert "invariant: no" in out
    assert "consistent: yes" in out


def test_check_rep_z_from_file(capsys, tmp_path):
    zf = tmp_path / "z.json"
    zf.write_text("[[1,0,0],[0,0,1],[0,1,0]]")
    code, out = run(capsys, "check-rep", "--category", "builtin:z3", "--z", f"@{zf}")
    assert code == 0
    assert "invariant: yes" in out


def test_check_rep_z_from_enumerator(capsys):
    code, out = run(
        capsys, "check-rep", "--category", "builtin:double_z2", "--z", "enum:0"
    )
    assert code == 0
    assert "invariant: yes" in out


def test_check_rep_random_z_uses_seed(capsys):
    code1, out1 = run(
        capsys, "check-rep", "--category", "builtin:ising", "--z", "random", "--seed", "9"
    )
    code2, out2 = run(
        capsys, "check-rep", "--category", "builtin:ising", "--z", "random", "--seed", "9"
    )
    assert code1 == code2 == 0
    assert out1 == out2
    _, out3 = run(
        capsys, "check-rep", "--category", "builtin:ising", "--z", "random", "--seed", "10"
    )
    assert out3 != out1


def test_check_rep_invalid_z_exit_two(capsys):
    code, out = run(
        capsys, "check-rep", "--category", "builtin:semion", "--z", "[[1,-1],[0,1]]"
    )
    assert code == 2


def test_reports_are_byte_identical(capsys):
    args = ["enumerate", "--category", "builtin:double_z2", "--format", "json"]
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2


def test_json_report_round_trip(capsys):
    code, out = run(
        capsys,
        "check-rep",
        "--category",
        "builtin:z3",
        "--z",
        "[[1,0,0],[0,0,1],[0,1,0]]",
        "--format",
        "json",
    )
    assert code == 0
    report = json.loads(out)
    assert json.dumps(json.loads(json.dumps(report, sort_keys=True)), sort_keys=True) == json.dumps(
        report, sort_keys=True
    )
    assert report["invariant"] is True
    assert report["z"] == [[1, 0, 0], [0, 0, 1], [0, 1, 0]]


def test_data_dir_override(capsys, tmp_path, monkeypatch):
    override = tmp_path / "data"
    override.mkdir()
    shutil.copy(DATA_DIR / "semion.json", override / "semion.json")
    monkeypatch.setenv("TUBEALG_DATA_DIR", str(override))
    code, out = run(capsys, "modular-data", "--category", "builtin:semion")
    assert code == 0
    assert "labels: 1, s" in out
    # a builtin that is absent from the override directory fails to load
    code, out = run(capsys, "modular-data", "--category", "builtin:ising")
    assert code == 2


def test_bare_bundled_name_is_accepted(capsys):
    code, out = run(capsys, "modular-data", "--category", "trivial")
    assert code == 0
    assert "category: builtin:trivial" in out
