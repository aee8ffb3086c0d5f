import csv
import io
import json
import math
import subprocess
import sys
from importlib import resources

import pytest
import yaml

from mitsui_lab.cli import main


def _shipped(name):
    return str(resources.files("mitsui_lab.configs").joinpath(name))


def _write(tmp_path, data, name="c.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(data))
    return str(p)


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_sieve_primes_tool(capsys):
    assert main(["sieve-primes", "--config", _shipped("sieve_gaussian.yaml")]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["norm", "over", "residue_degree", "ramification", "hnf", "generator"]
    assert [int(r[0]) for r in rows[1:]] == [2, 5, 5, 9, 13, 13, 17, 17]


def test_enumerate_tool_disk_class(capsys):
    assert main(["enumerate-prime-elements", "--config", _shipped("enumerate_disk.yaml")]) == 0
    rows = _rows(capsys.readouterr().out)
    assert rows[0] == ["norm", "c0", "c1", "residue_class", "log_weight"]
    got = {(int(r[1]), int(r[2])) for r in rows[1:]}
    assert got == {(1, 2), (1, -2), (-1, 2), (-1, -2), (3, 0), (-3, 0),
                   (3, 2), (3, -2), (-3, 2), (-3, -2)}


def test_field_info_json(tmp_path):
    out = tmp_path / "info.json"
    assert main(["field-info", "--config", _shipped("field_info.yaml"), "--format", "json",
                 "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    info = {k: v for k, v in d["rows"]}
    assert info["discriminant"] == 8 and info["r1"] == 2
    assert info["regulator"] == pytest.approx(0.881373587020)


def test_characters_tool(capsys):
    assert main(["characters", "--config", _shipped("characters_gaussian_mod5.yaml")]) == 0
    rows = _rows(capsys.readouterr().out)
    kinds = [r[1] for r in rows[1:]]
    assert kinds.count("finite") == 4


def test_sectors_tool(capsys):
    assert main(["sectors", "--config", _shipped("sectors_sqrt2.yaml"), "--check"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 1 + 4 * 10 * 10


def test_fourier_tool(tmp_path):
    out = tmp_path / "f.json"
    assert main(["fourier-approx", "--config", _shipped("fourier_square.yaml"), "--check",
                 "--format", "json", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert abs(d["metadata"]["c0"] - 0.04) <= 0.05


def test_bounded_basis_tool(tmp_path, capsys):
    assert main(["bounded-basis", "--config", _shipped("bounded_basis_random.yaml"), "--check"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 21 and all(r[5] == "true" for r in rows[1:])
    bad = _write(tmp_path, {"matrix": [[1, 2], [2, 4]]})
    assert main(["bounded-basis", "--config", bad]) == 2


def test_experiment_check_passes(capsys):
    assert main(["siegel-walfisz-q", "--config", _shipped("siegel_walfisz_q.yaml"), "--check"]) == 0
    assert main(["pit", "--config", _shipped("pit_gaussian_mod3.yaml"), "--check"]) == 0


def test_check_failure_exit_code(tmp_path):
    cfg = _write(tmp_path, {"kind": "pit", "field": "Q", "schedule": [100],
                            "check": {"max_abs_rel_error": 0.01}})
    assert main(["pit", "--config", cfg, "--check"]) == 3
    assert main(["pit", "--config", cfg]) == 0


@pytest.mark.parametrize("data", [
    {"kind": "pit", "field": "Q(sqrt7000)"},
    {"kind": "siegel-walfisz-q", "field": "Q", "modulus": 4, "alpha": 2},
    {"kind": "mitsui", "field": "Q", "schedule": "many"},
    {"kind": "mitsui", "field": "Q"},
])
def test_config_error_exit_code(tmp_path, data, capsys):
    cmd = data["kind"]
    if data == {"kind": "mitsui", "field": "Q"}:
        # kind/subcommand mismatch
        cmd = "pit"
    assert main([cmd, "--config", _write(tmp_path, data)]) == 2
    assert "config error" in capsys.readouterr().err


def test_missing_and_malformed_files(tmp_path):
    assert main(["pit", "--config", str(tmp_path / "missing.yaml")]) == 2
    p = tmp_path / "bad.yaml"
    p.write_text("kind: [unclosed")
    assert main(["pit", "--config", str(p)]) == 2
    assert main(["field-info", "--config", str(p)]) == 2


def test_output_path_from_config(tmp_path):
    out = tmp_path / "pit.csv"
    cfg = _write(tmp_path, {"kind": "pit", "field": "Q", "schedule": [10],
                            "output": {"path": str(out), "format": "csv"}})
    assert main(["pit", "--config", cfg]) == 0
    N, emp = _rows(out.read_text())[1][:2]
    assert N == "10"
    # values are written with 12 significant digits
    assert float(emp) == pytest.approx(math.log(2 * 3 * 5 * 7), rel=1e-11)


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "mitsui_lab.cli", "field-info", "--config",
                          _shipped("field_info.yaml")], capture_output=True, text=True)
    assert res.returncode == 0 and "regulator" in res.stdout
