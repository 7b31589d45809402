from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qmacro.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def result(capsys, *args):
    code, out, _ = run(capsys, *args, "--json")
    assert code == 0
    return json.loads(out)


def test_size_ghz(capsys):
    d = result(capsys, "size", "--state", "ghz", "--modes", "5", "--delta", "0")
    assert d["result"]["size"]["c_delta"] == 5
    assert d["result"]["size"]["convention"] == "orthogonal"
    assert len(d["config_hash"]) == 16


def test_size_ecs(capsys):
    d = result(capsys, "size", "--state", "ecs", "--alpha", "1", "--modes", "4", "--delta", "0.1")
    s = d["result"]["size"]
    assert s["c_tilde"] == pytest.approx(16.0)
    assert s["n_eff"] == 1 and not s["in_window"]


def test_nrf_fock_ghz(capsys):
    d = result(capsys, "nrf", "--state", "fockghz", "--n", "4", "--modes", "2", "--algebra", "h4")
    assert d["result"]["nrf"]["nrf"] == pytest.approx(4.2, rel=1e-9)


def test_times_qubit(capsys):
    d = result(capsys, "times", "--state", "plus", "--hamiltonian", "sigmaz", "--delta", "0.1")
    text = json.dumps(d)
    assert "0.927295218" in text


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--state", "ghz", "--measure", "nrf", "--algebra", "qubit",
                       "--grid", "modes=2,3,4", "--csv")
    assert code == 0
    rows = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert rows[0].startswith("modes,")
    assert [r.split(",")[2] for r in rows[1:]] == ["2", "3", "4"]


def test_plotdata_csv(capsys):
    code, out, _ = run(capsys, "plotdata", "--alpha", "0.5", "--xi", "0.3", "--csv")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0].startswith("label,cx,cp,semi_u,semi_v")
    assert len(lines) == 9


@pytest.mark.parametrize("args,code", [
    (("size", "--state", "ghz", "--modes", "3", "--delta", "0.1"), 2),
    (("size", "--state", "bogus"), 2),
    (("size", "--state", "custom", "--phi", "plus", "--unitary", "hadamard", "--modes", "40",
      "--delta", "0.2", "--oracle"), 4),
])
def test_exit_codes(capsys, args, code):
    c, _, err = run(capsys, *args)
    assert c == code
    assert err.startswith("qmacro: error:")


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"state": "ghz", "modes": 4, "delta": 0}))
    d = result(capsys, "size", "--config", str(cfg))
    assert d["result"]["size"]["c_delta"] == 4
    # explicit flags take precedence
    d2 = result(capsys, "size", "--config", str(cfg), "--modes", "6")
    assert d2["result"]["size"]["c_delta"] == 6
    cfg.write_text(json.dumps({"state": "ghz", "bogus": 1}))
    c, _, _ = run(capsys, "size", "--config", str(cfg))
    assert c == 2


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "size", "--state", "ghz", "--modes", "2", "--delta", "0",
                          "--json", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["result"]["size"]["c_delta"] == 2


@pytest.mark.slow
def test_verify_is_deterministic():
    cmd = [sys.executable, "-m", "qmacro", "verify", "--seed", "7", "--json"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.stdout == b.stdout
    assert a.returncode == b.returncode
    assert json.loads(a.stdout)
