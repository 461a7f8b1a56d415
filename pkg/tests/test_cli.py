import json
import subprocess
import sys

import pytest

from cli_cases import CASES, EXAMPLE_MATRIX
from logrank.cli import main


def run_cli(*args, stdin=None):
    return subprocess.run([sys.executable, "-m", "logrank", *args], capture_output=True,
                          text=True, input=stdin)


def argv(cmd):
    data, flags = CASES[cmd]
    return [cmd, data if isinstance(data, str) else json.dumps(data), *flags]


def emit(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr()


def test_structural_rank_example_matrix(capsys):
    code, out = emit(capsys, "structural-rank", json.dumps(EXAMPLE_MATRIX))
    assert code == 0
    assert json.loads(out.out)["result"]["structural_rank"] == 2


@pytest.mark.parametrize("cmd", sorted(CASES))
def test_every_command_succeeds_and_verifies(cmd, capsys, tmp_path):
    code, out = emit(capsys, *argv(cmd))
    assert code == 0, out.err
    cert = json.loads(out.out)
    assert cert["schema_version"] == 1 and cert["command"] == cmd
    path = tmp_path / "cert.json"
    path.write_text(out.out)
    code, out = emit(capsys, "verify", str(path))
    assert code == 0 and json.loads(out.out)["verified"] is True


def test_siegel_precondition_exit_2(capsys):
    code, out = emit(capsys, "siegel", json.dumps({"a": [[1, 2], [3, 4]]}))
    assert code == 2 and "/a" in out.err and out.out == ""


def test_malformed_inputs_name_the_field(capsys):
    bad = {"symbols": ["x"], "entries": [[{"x": "one"}]]}
    code, out = emit(capsys, "structural-rank", json.dumps(bad))
    assert code == 2 and "/entries/0/0/x" in out.err
    code, out = emit(capsys, "theta", '{"r": 2}')
    assert code == 2 and "/d" in out.err
    code, out = emit(capsys, "padic-log", "6")
    assert code == 2 and "/options/prime" in out.err
    code, out = emit(capsys, "mult-rel", "[1, 0]")
    assert code == 2 and "/values/1" in out.err
    code, out = emit(capsys, "theta", "{not json")
    assert code == 2


def test_unknown_subcommand():
    r = run_cli("frobnicate", "{}")
    assert r.returncode == 2


def test_not_found_is_exit_1(capsys):
    generic = {"symbols": [f"a{i}" for i in range(4)],
               "entries": [[{"a0": 1}, {"a1": 1}], [{"a2": 1}, {"a3": 1}]]}
    code, out = emit(capsys, "wm-decompose", json.dumps(generic))
    assert code == 1 and json.loads(out.out)["status"] == "not_found"


def test_tampered_certificates_fail(capsys, tmp_path):
    tampers = {
        "structural-rank": lambda c: c["result"].__setitem__("structural_rank", 3),
        "siegel": lambda c: c["result"]["b"].__setitem__(0, c["result"]["b"][0] + 1),
        "mult-rel": lambda c: c["result"]["basis"].pop(),
        "hensel": lambda c: c["result"]["root"].__setitem__("unit", str(int(c["result"]["root"]["unit"]) + 7)),
        "theta": lambda c: c["result"].__setitem__("theta", c["result"]["theta"] - 1),
    }
    for cmd, tamper in tampers.items():
        code, out = emit(capsys, *argv(cmd))
        cert = json.loads(out.out)
        tamper(cert)
        path = tmp_path / f"{cmd}.json"
        path.write_text(json.dumps(cert))
        code, out = emit(capsys, "verify", str(path))
        assert code == 1, cmd
        assert json.loads(out.out)["verified"] is False


def test_older_version_same_schema_verifies(capsys, tmp_path):
    code, out = emit(capsys, *argv("mult-rel"))
    cert = json.loads(out.out)
    cert["version"] = "0.0.1"
    path = tmp_path / "old.json"
    path.write_text(json.dumps(cert))
    assert emit(capsys, "verify", str(path))[0] == 0
    cert["schema_version"] = 99
    path.write_text(json.dumps(cert))
    assert emit(capsys, "verify", str(path))[0] == 2


def test_determinism_and_separate_process_verify(tmp_path):
    for cmd in ("structural-rank", "wm-decompose", "siegel", "log-matrix"):
        first, second = run_cli(*argv(cmd)), run_cli(*argv(cmd))
        assert first.returncode == 0 and first.stdout == second.stdout
        path = tmp_path / f"{cmd}.json"
        path.write_text(first.stdout)
        r = run_cli("verify", str(path))
        assert r.returncode == 0, r.stdout + r.stderr


def test_stdin_and_global_flags_after_command():
    r = run_cli("theta", "-", "--seed", "3", stdin='{"r": 1, "d": 5}')
    assert r.returncode == 0
    cert = json.loads(r.stdout)
    assert cert["result"]["theta"] == 10 and cert["options"]["seed"] == 3


def test_help_lists_defaults():
    r = run_cli("--help")
    assert r.returncode == 0 and "--max-points" in r.stdout and "default" in r.stdout
