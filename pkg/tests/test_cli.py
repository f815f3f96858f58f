import json
import subprocess
import sys

import pytest

from bfree.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eta_range(capsys):
    code, out, _ = run(capsys, "eta", "--range", "-20..20", "examples/b1.toml")
    assert code == 0 and len(out.strip()) == 41


def test_eta_json_direct(capsys):
    code, out, _ = run(capsys, "eta", "gh", "--range", "0..7", "--levels", "1", "--format", "json")
    data = json.loads(out)
    assert code == 3 and data["unresolved"] == [3, 7]


def test_analyze_b1(capsys):
    code, out, _ = run(capsys, "analyze", "examples/b1.toml", "--oracle")
    data = json.loads(out)
    assert [r["tau_tilde"] for r in data["levels"]] == [6, 60, 840]
    assert data["centralizer"]["conclusion"].startswith("trivial")
    assert all(v is True for v in data["oracle_audit"].values())
    assert code == 2  # condition (*) is violated for B_1


def test_analyze_exit_zero_on_holding_conditions(capsys):
    code, _, _ = run(capsys, "analyze", "b1", "--conditions", "Sh,Seh',TI")
    assert code == 0


def test_analyze_b2_csv(capsys):
    code, out, _ = run(capsys, "analyze", "b2", "--format", "csv", "--conditions", "Sh")
    assert code == 2
    assert out.splitlines()[0].startswith("n,p,holes")
    assert "Sh,violated" in out


def test_analyze_gh_text(capsys):
    code, out, _ = run(capsys, "analyze", "gh", "--format", "text")
    assert "tau~ = 8" in out and "(*) violated" in out


def test_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "b1n")
    _, b, _ = run(capsys, "analyze", "b1n")
    assert a == b


def test_complexity_csv(capsys):
    code, out, _ = run(capsys, "complexity", "--n", "1..6", "--L", "1000", "b2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "n,rho,log_exponent" and len(lines) == 7


def test_complexity_crt(capsys):
    code, out, _ = run(capsys, "complexity", "b2-small", "--n", "2..3", "--L", "100",
                       "--crt", "first", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["crt"]["ok"] and data["crt"]["n"] == 802


def test_automorphism_verbs(capsys):
    code, out, _ = run(capsys, "automorphism", "verify-window-shift", "--ell", "1", "--n", "7",
                       "--t", "3", "examples/b1n.toml")
    assert code == 0 and json.loads(out)["details"]["z"] == 1680
    assert run(capsys, "automorphism", "verify-order", "b1n", "--order", "3")[0] == 0
    assert run(capsys, "automorphism", "verify-order", "b1n", "--order", "2")[0] == 2
    assert run(capsys, "automorphism", "verify-commutation", "b1n", "--k-range", "-5..5")[0] == 0
    assert run(capsys, "automorphism", "verify-rotation", "b1n")[0] == 0


def test_input_errors(capsys):
    assert run(capsys, "analyze", "no-such-spec")[0] == 4
    assert run(capsys, "automorphism", "verify-order", "b1n")[0] == 4
    assert run(capsys, "automorphism", "verify-order", "b1", "--order", "3")[0] == 4
    assert run(capsys, "eta", "b1", "--range", "5..1")[0] == 4
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "b1", "--bogus"])
    assert exc.value.code == 4


def test_level_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("BFREE_LEVEL_CAP", "2")
    assert run(capsys, "analyze", "b1")[0] == 4


def test_examples_run(capsys):
    code, out, _ = run(capsys, "examples", "run", "b1n")
    assert code == 0 and out.startswith("PASS b1n")
    assert run(capsys, "examples", "run", "nonexistent")[0] == 4


def test_parse_range():
    assert parse_range("-3..4") == (-3, 4)
    assert parse_range("7") == (7, 7)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bfree", "eta", "b1", "--range", "0..7"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "01111101"
