import json
import subprocess
import sys
from pathlib import Path

import pytest

from ptsc.cli import main
from ptsc.report import Certificate

REGRESSION = sorted((Path(__file__).resolve().parent.parent / "instances" / "regression").glob("*.json"))


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_exit_codes(f1_path, f2_path, capsys):
    code, out, _ = run(["verify", f1_path], capsys)
    assert code == 0 and json.loads(out)["verdict"]["ptsc"] is True
    code, out, _ = run(["verify", f2_path], capsys)
    cert = json.loads(out)
    assert code == 1 and cert["verdict"]["pssc"] is True
    failing = [e["edge"] for e in cert["verdict"]["edges"] if not e["passed"]]
    assert [4, 5] in failing


def test_verify_not_controllable(tmp_path, capsys):
    p = tmp_path / "nc.json"
    p.write_text('{"n": 2, "A_stars": [], "b_stars": [1], "F_stars": [[1, 1]]}')
    code, out, _ = run(["verify", p], capsys)
    assert code == 2 and json.loads(out)["verdict"]["structurally_controllable"] is False


def test_verify_text_and_out(f2_path, tmp_path, capsys):
    out = tmp_path / "cert.txt"
    code, stdout, _ = run(["verify", f2_path, "--text", "--out", out], capsys)
    assert code == 1 and stdout == ""
    assert out.read_text().startswith("PSSC")


def test_parse_error_exit(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 4, "A_stars": [[2, 1]')
    code, _, err = run(["verify", p], capsys)
    assert code >= 64 and "line 1" in err


def test_missing_file_exit(tmp_path, capsys):
    code, _, _ = run(["verify", tmp_path / "nope.json"], capsys)
    assert code >= 64


def test_usage_errors(f1_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["oracle", str(f1_path), "--trials", "0"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64
    code, _, err = run(["dm", f1_path, "--edge", "2,2"], capsys)
    assert code == 64 and "not a perturbed entry" in err


def test_certificate_round_trip_byte_identical(f2_path, capsys):
    _, out, _ = run(["verify", f2_path], capsys)
    again = Certificate.loads(out).dumps()
    assert again == out
    assert Certificate.loads(again).dumps() == again


def test_certificate_deterministic_without_timing(f1_path, capsys):
    _, a, _ = run(["verify", f1_path, "--no-timing"], capsys)
    _, b, _ = run(["verify", f1_path, "--no-timing"], capsys)
    assert a == b and json.loads(a)["timing_seconds"] is None


def test_certificate_schema_checked():
    with pytest.raises(ValueError):
        Certificate.loads('{"schema": "other"}')


def test_dm_dump_F2(f2_path, capsys):
    code, out, _ = run(["dm", f2_path, "--edge", "4,5"], capsys)
    assert code == 0
    assert "components: d = 4, sizes = [1, 1, 1, 1]" in out
    assert "i* = 2\n" in out and "Omega_j = {1, 2}\n" in out
    assert "*-L" in out


def test_dm_dump_F1(f1_path, capsys):
    _, out, _ = run(["dm", f1_path, "--edge", "1,4"], capsys)
    assert "sizes = [1, 1, 2]" in out
    assert "i* = 1\n" in out and "Omega_j = {}\n" in out
    assert "I*_j = {2, 3, 4} -> ok" in out


def test_dm_golden_layout(f2_path, capsys):
    _, out, _ = run(["dm", f2_path, "--edge", "4,5"], capsys)
    matrix = out.split("\n\n")[1]
    assert matrix.splitlines() == [
        "         v3   v4   v2   v1 ||   v5",
        "x3      *-L|   .|   *|   . ||    .",
        "      -------------------- ||",
        "x4        .| *-L|   *|   * ||    P",
        "      -------------------- ||",
        "x2        .|   .|  -L|   * ||    .",
        "      -------------------- ||",
        "x1        .|   .|   .|  -L ||    *",
    ]


def test_oracle_reports(f1_path, f2_path, capsys):
    code, out, _ = run(["oracle", f2_path, "--trials", "3", "--json"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["witnesses"]
    assert [4, 5] in [w["edge"] for w in rep["witnesses"]]
    code, out, _ = run(["oracle", f1_path, "--trials", "3"], capsys)
    assert code == 0 and out.startswith("PTSC-consistent")


def test_gen_deterministic_and_valid(capsys):
    _, a, _ = run(["gen", "--n", "4", "--density-a", "0.3", "--seed", "7"], capsys)
    _, b, _ = run(["gen", "--n", "4", "--density-a", "0.3", "--seed", "7"], capsys)
    assert a == b
    _, c, _ = run(["gen", "--n", "5", "--density-a", "0.4", "--density-f", "0.1", "--require-struct-ctrl", "--seed", "1"], capsys)
    from ptsc.instances import parse_instance
    from ptsc.structural import is_structurally_controllable

    s = parse_instance(c)
    assert is_structurally_controllable(s.a_bar, s.b_bar)


def test_gen_cap_error(capsys):
    code, _, err = run(["gen", "--n", "2", "--density-a", "0", "--require-struct-ctrl"], capsys)
    assert code >= 64 and "density" in err


@pytest.mark.parametrize("path", REGRESSION, ids=lambda p: p.stem)
def test_regression_verify_matches_oracle(path, capsys):
    v, _, _ = run(["verify", path, "--no-timing"], capsys)
    o, _, _ = run(["oracle", path, "--trials", "3"], capsys)
    assert v == o


def test_module_entry_point(f1_path):
    proc = subprocess.run([sys.executable, "-m", "ptsc", "verify", str(f1_path), "--text"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PTSC")
