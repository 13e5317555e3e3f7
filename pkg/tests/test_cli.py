import json
import subprocess
import sys

import pytest

from twistblocks.cli import main


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_dc_table(capsys):
    code, out, err = run_cli(["dc", "A", "1", "--tau", "id", "--m", "1",
                              "--c", "2"], capsys)
    assert code == 0
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert rows == ["0", "1", "2"]
    # A2 flip at odd level: contains omega_n, excludes 0
    code, out, _ = run_cli(["dc", "A", "2", "--tau", "flip", "--m", "2",
                            "--c", "1"], capsys)
    rows = [l for l in out.splitlines() if not l.startswith("#")]
    assert "1" in rows and "0" not in rows


def test_dc_validation_exit_code(capsys):
    code, out, err = run_cli(["dc", "A", "1", "--h", "9", "--m", "2",
                              "--c", "1"], capsys)
    assert code == 2
    assert "theta_0(h)" in err


def test_virasoro_report(capsys):
    code, out, _ = run_cli(["virasoro", "A", "1", "--m", "1", "--c", "1",
                            "--d-max", "4", "--n", "2", "--k", "-2"], capsys)
    assert code == 0
    assert "# expected scalar 1/2" in out
    data = [l for l in out.splitlines() if not l.startswith("#")]
    assert all(l.endswith("ok") for l in data)
    code, out, _ = run_cli(["virasoro", "A", "1", "--m", "1", "--c", "1",
                            "--d-max", "3", "--n", "1", "--k", "-1"], capsys)
    assert code == 0
    assert "# expected scalar 0" in out


def test_virasoro_window_exit(capsys):
    # raising modes that leave the window have no safe layer at all
    code, out, err = run_cli(["virasoro", "A", "1", "--m", "1", "--c", "1",
                              "--d-max", "1", "--n", "-2", "--k", "-2"],
                             capsys)
    assert code == 3 and "window" in err.lower()


def test_gluing_check(capsys):
    code, out, _ = run_cli(["gluing-check", "A", "1", "--m", "1", "--c", "1",
                            "--n-max", "1", "--d-top", "1"], capsys)
    assert code == 0
    assert "0 failures" in out


def test_dim_and_factorize(tmp_path, capsys):
    curve = {
        "algebra": {"series": "A", "rank": 1}, "group": {"order": 1},
        "phi": {"tau": "id", "m": 1}, "level": 1,
        "components": [{"genus": 0, "markings": [
            {"stab_order": 1, "char_exponent": 0, "weight": "1"},
            {"stab_order": 1, "char_exponent": 0, "weight": "1"},
            {"stab_order": 1, "char_exponent": 0, "weight": "0"}]}],
        "nodes": []}
    path = tmp_path / "curve.json"
    path.write_text(json.dumps(curve))
    code, out, _ = run_cli(["factorize", str(path)], capsys)
    assert code == 0 and "leaf" in out
    # missing fusion data without --oracle: exit 4 listing signatures
    code, out, err = run_cli(["dim", str(path)], capsys)
    assert code == 4 and "missing" in err
    code, out, _ = run_cli(["dim", str(path), "--oracle"], capsys)
    assert code == 0
    assert out.splitlines()[-1] == "dimension 1"


def test_oracle_subcommand(tmp_path, capsys):
    curve = {
        "algebra": {"series": "A", "rank": 1}, "group": {"order": 1},
        "phi": {"tau": "id", "m": 1}, "level": 1,
        "components": [{"genus": 0, "markings": [
            {"stab_order": 1, "char_exponent": 0, "weight": "0"}]}],
        "nodes": []}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(curve))
    code, out, _ = run_cli(["oracle", str(path), "--d-max", "2"], capsys)
    assert code == 0 and "value 1" in out
    code, out, _ = run_cli(["oracle", str(path), "--verlinde"], capsys)
    assert code == 0 and out.splitlines()[-1] == "verlinde 1"


def test_deterministic_output(tmp_path):
    """Byte-identical output across repeated runs."""
    cmd = [sys.executable, "-m", "twistblocks.cli", "dc", "A", "2",
           "--tau", "flip", "--m", "2", "--c", "4"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    assert a == b and a
