import json
import subprocess
import sys

import pytest

from balancing_proof.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sequence(capsys):
    code, out, _ = run(capsys, "sequence", "--kind", "B", "--from", "0", "--to", "5")
    assert code == 0 and out.split() == ["0", "1", "6", "35", "204", "1189"]
    _, out, _ = run(capsys, "sequence", "--kind", "C", "--to", "3")
    assert out.split() == ["2", "6", "34", "198"]


def test_reduce_single(capsys):
    code, out, _ = run(capsys, "reduce", "--n", "2")
    assert code == 0
    assert "q=302517854025929183" in out and "k_bound=25" in out


def test_reduce_budget_too_small(capsys):
    code, out, _ = run(capsys, "reduce", "--n", "37", "--cf-budget", "20")
    assert code == 1 and "error=" in out


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--n-lo", "2", "--n-hi", "4", "--x-lo", "2", "--x-hi", "5")
    assert code == 0
    assert "m=5 n=2 x=2" in out and "cells=12 hits=3" in out


def test_legendre(capsys):
    code, out, _ = run(capsys, "legendre")
    assert code == 0 and "k_star=52" in out and "a_max=234" in out


def test_final_grid(capsys):
    code, out, _ = run(capsys, "final-grid", "--x-hi", "60")
    assert code == 0
    assert "argmin x=60 t=58 variant=minus" in out
    assert "all_cells_above_tenth=False" in out


def test_prove_and_verify(capsys, tmp_path):
    cert_path = tmp_path / "cert.json"
    code, _, err = run(capsys, "prove", "--out", str(cert_path))
    assert code == 0 and "overall          pass" in err
    cert = json.loads(cert_path.read_text())
    assert cert["verdict"] == "pass"
    code, out, _ = run(capsys, "verify", str(cert_path))
    assert code == 0 and "FAILED" not in out


def test_prove_with_failing_config(capsys, tmp_path):
    cfg = tmp_path / "low.cfg"
    cfg.write_text("initial_digits = 50\nmax_digits = 60\n")
    out_path = tmp_path / "cert.json"
    with pytest.warns(RuntimeWarning):
        code, _, err = run(capsys, "prove", "--config", str(cfg), "--out", str(out_path))
    assert code == 1 and "reduction_table  fail" in err
    assert json.loads(out_path.read_text())["verdict"] == "fail"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "balancing_proof", "sequence", "--to", "2"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.split() == ["0", "1", "6"]


def test_requires_subcommand():
    with pytest.raises(SystemExit):
        main([])
