import csv
import io
import json
import math
import subprocess
import sys

import pytest

from isoresist import graph as g
from isoresist.cli import run
from isoresist.report import from_json_number


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def body(text):
    data = json.loads(text)
    data.pop("wall_time", None)
    return data


def test_resistance_command(capsys):
    code, out, _ = call(capsys, "resistance", "--family", "path:5", "--pair", "0,4")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1 and data["command"] == "resistance"
    assert data["results"]["resistance"] == pytest.approx(4.0, abs=1e-9)


def test_lbound_command(capsys):
    code, out, _ = call(capsys, "lbound", "--family", "path:4", "--vertex", "0", "--mode", "exact")
    assert code == 0
    assert json.loads(out)["results"]["total"] == 5.0


def test_infinite_values_serialise(capsys):
    code, out, _ = call(capsys, "resistance", "--family", "complete:3+complete:3", "--pair", "0,4")
    assert code == 0
    assert from_json_number(json.loads(out)["results"]["resistance"]) == math.inf


def test_generate_and_read_back(capsys, tmp_path):
    code, out, _ = call(capsys, "generate", "--family", "layered_example:2")
    assert code == 0
    path = tmp_path / "g.txt"
    path.write_text(out)
    assert g.read_graph(out) == g.layered_example(2)
    code, out, _ = call(capsys, "resistance", "--input", str(path), "--pair", "0,9")
    assert code == 0
    assert json.loads(out)["results"]["resistance"] == pytest.approx(2 / 2 + 2 / 8)


@pytest.mark.parametrize(
    "argv",
    [
        ["resistance", "--pair", "0,1"],
        ["resistance", "--family", "path:3", "--input", "x.txt", "--pair", "0,1"],
        ["resistance", "--family", "path:3", "--pair", "0"],
        ["resistance", "--family", "nosuch:3", "--pair", "0,1"],
        ["resistance", "--family", "path:3", "--pair", "0,9"],
        ["percolation", "--n", "16"],
        ["simulate", "--family", "path:3", "--pair", "0,2"],
        ["lbound", "--family", "path:4", "--vertex", "0", "--mode", "fast"],
        ["nosuch"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert err


def test_unreadable_input_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1 1\n0 1 1\n")
    code, _, err = call(capsys, "resistance", "--input", str(bad), "--pair", "0,1")
    assert code == 2 and "line 3" in err


def test_gate_violation_exit_1(capsys):
    code, out, _ = call(capsys, "lbound", "--family", "cycle:30", "--vertex", "0")
    assert code == 1
    err = json.loads(out)["error"]
    assert err["type"] == "GateError"


def test_gate_override(capsys):
    code, out, _ = call(capsys, "lbound", "--family", "cycle:20", "--vertex", "0", "--override-gate")
    assert code == 0 and json.loads(out)["results"]["total"] > 0


def test_percolation_determinism(capsys):
    argv = ["percolation", "--n", "16", "--p", "0.7", "--trials", "4", "--seed", "7"]
    a = body(call(capsys, *argv)[1])
    b = body(call(capsys, *argv)[1])
    assert a == b
    c = body(call(capsys, "percolation", "--n", "16", "--p", "0.7", "--trials", "4", "--seed", "8")[1])
    assert c != a


def test_csv_matches_json(capsys):
    argv = ["percolation", "--n", "12,16", "--trials", "3", "--seed", "2"]
    data = json.loads(call(capsys, *argv)[1])
    text = call(capsys, *argv, "--format", "csv")[1]
    rows = list(csv.DictReader(io.StringIO(text)))
    trials = [r for r in rows if r["record"] == "trial"]
    summary = [r for r in rows if r["record"] == "summary"]
    assert len(trials) == len(data["trials"]) and len(summary) == 1
    for row, rec in zip(trials, data["trials"]):
        assert float(row["R_hat"]) == rec["R_hat"]
    flat = {}

    def walk(prefix, val):
        if isinstance(val, dict):
            for k, v in val.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif not isinstance(val, list):
            flat[prefix] = val

    walk("", data["results"])
    for key, val in flat.items():
        if isinstance(val, (int, float)) and not isinstance(val, bool):
            assert float(summary[0][key]) == pytest.approx(val, rel=0, abs=0)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = call(capsys, "cheeger", "--family", "cycle:8", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"]["cheeger"] == 0.5


@pytest.mark.parametrize(
    "argv",
    [
        ["voltages", "--family", "cycle:6", "--pair", "0,3"],
        ["rn", "--family", "cycle:8", "--vertex", "0"],
        ["balls", "--family", "hypercube:3", "--vertex", "0"],
        ["commute", "--family", "path:3", "--pair", "0,2"],
        ["tau-star", "--family", "multi_edge_cycle:8"],
        ["simulate", "--family", "path:3", "--pair", "0,2", "--trials", "2000", "--seed", "1"],
        ["verify-theorem", "--family", "path:4", "--pair", "0,3"],
        ["falsify-band", "--ms", "4"],
        ["layered-scaling", "--n-list", "1,2,3"],
        ["multiedge-scaling", "--n-list", "8,16"],
        ["perc-boundary", "--n", "16", "--seed", "0"],
        ["conj1", "--family", "cycle:16"],
        ["conj2", "--family", "cycle:64"],
    ],
)
def test_every_command_runs(capsys, argv):
    code, out, _ = call(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    assert set(data) >= {"schema", "command", "config", "results"}


def test_seed_honoured_by_deterministic_commands(capsys):
    a = body(call(capsys, "tau-star", "--family", "cycle:10", "--seed", "1")[1])
    assert a["results"]["tau_star"] == pytest.approx(25.0)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "isoresist", "resistance", "--family", "complete:4", "--pair", "0,1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["resistance"] == pytest.approx(0.5)
