import json
import subprocess
import sys

import pytest

from dispersive.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_json(capsys):
    code, out, _ = run(["classify", "--a", "0", "--b", "0", "--c", "0", "--d", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["alpha"] == -4 and doc["ell"] == 0.0 and doc["branch_row"] == 5


def test_classify_excluded_tuple_is_an_error(capsys):
    code, out, err = run(["classify", "--a", "-1", "--b", "1", "--c", "-1", "--d", "1"], capsys)
    assert code == 1 and out == ""
    assert err.startswith("dispersive: error:")


def test_decay_dyadic_block(capsys, tmp_path):
    csv_path = tmp_path / "d.csv"
    code, out, _ = run(["decay", "--model", "power", "--alpha", "1", "--n", "1",
                        "--band", "dyadic:0", "--s", "0", "--out-csv", str(csv_path),
                        "--svg", str(tmp_path / "d.svg")], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "pass"
    assert doc["predicted"]["sigma"] == pytest.approx(0.5)
    assert doc["fitted"]["slope"] == pytest.approx(-0.5, abs=0.05)
    header = csv_path.read_text().splitlines()[0].split(",")
    assert header[:3] == ["t", "sup", "argmax_x"]
    assert (tmp_path / "d.svg").read_text().startswith("<svg")


def test_decay_verdict_failure_exit_code(capsys):
    code, out, _ = run(["decay", "--model", "power", "--alpha", "1", "--band", "dyadic:0",
                        "--tolerance", "0.001"], capsys)
    assert code == 2 and json.loads(out)["verdict"] == "fail"


def test_bad_band_is_located(capsys):
    code, _, err = run(["decay", "--model", "power", "--band", "dyadic:x"], capsys)
    assert code == 1 and "[band] spec" in err


def test_config_kind_must_match_subcommand(capsys, tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("[experiment]\nkind = classify\n[classify]\nd = 1\n")
    code, _, err = run(["decay", "--config", str(p)], capsys)
    assert code == 1 and "c.ini:2" in err and "classify" in err
    code, out, _ = run(["classify", "--config", str(p)], capsys)
    assert code == 0 and json.loads(out)["branch_row"] == 5
    code, out, _ = run(["run", str(p)], capsys)
    assert code == 0


def test_unwritable_output_is_an_error(capsys, tmp_path):
    code, _, err = run(["classify", "--d", "1", "--out-json", str(tmp_path / "no" / "x.json")],
                       capsys)
    assert code == 1 and err.startswith("dispersive: error:")


def test_propagate_round_trip(capsys, tmp_path):
    out_grid = tmp_path / "u.grid"
    code, out, _ = run(["propagate", "--model", "power", "--alpha", "0", "--t", "1",
                        "--N", "512", "--L", "32", "--output", str(out_grid)], capsys)
    assert code == 0 and out_grid.exists()
    code, out, _ = run(["propagate", "--model", "power", "--alpha", "0", "--t", "1",
                        "--sign", "-1", "--input", str(out_grid)], capsys)
    assert code == 0


def test_selftest_is_deterministic(capsys):
    code1, out1, _ = run(["selftest"], capsys)
    code2, out2, _ = run(["selftest"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["passed"] is True


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "dispersive.cli", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("dispersive ")
