import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from surfcol.catalog import load_catalog
from surfcol.cli import main
from surfcol.tribracket import Tribracket, cyclic_group, dehn_tribracket

DATA = Path(__file__).resolve().parents[1] / "src" / "surfcol" / "data"
X3 = str(DATA / "tribrackets" / "X3.json")
X3_DISPLAY = str(DATA / "tribrackets" / "X3_display.json")
X4 = str(DATA / "tribrackets" / "X4.json")


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def systems(tmp_path):
    out = {}
    for e in load_catalog():
        p = tmp_path / f"{e.name}.json"
        p.write_text(json.dumps(e.system.to_json()))
        out[e.name] = p
    return out


@pytest.fixture
def dehn3(tmp_path):
    p = tmp_path / "dehn3.json"
    p.write_text(json.dumps(dehn_tribracket(cyclic_group(3)).to_json()))
    return p


def test_validate(capsys):
    code, doc = run_json(capsys, "validate", "--tribracket", X4)
    assert code == 0 and doc["status"] == "valid"
    code, doc = run_json(capsys, "validate", "--tribracket", X3_DISPLAY)
    assert code == 1 and doc["axiom1_failures"]


def test_validate_missing_file(capsys):
    code, doc = run_json(capsys, "validate", "--tribracket", "/nonexistent.json")
    assert code == 2 and doc["status"] == "error"


def test_validate_bad_json(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run_json(capsys, "validate", "--tribracket", p)[0] == 2


def test_count(capsys, systems):
    code, doc = run_json(capsys, "count", "--tribracket", X3, "--system", systems["9_1"])
    assert code == 0 and doc["count"] == 25
    code, doc = run_json(capsys, "count", "--tribracket", X3, "--system", systems["9_1"], "--reverse")
    assert doc["count"] == 21
    code, doc = run_json(capsys, "count", "--tribracket", X3, "--system", systems["0_1"], "--oracle")
    assert code == 0 and (doc["count"], doc["oracle"]) == (9, 9)


def test_count_oracle_budget(capsys, systems):
    code, doc = run_json(capsys, "--max-assignments", "100", "count", "--tribracket", X3, "--system", systems["10_2"], "--oracle")
    assert code == 3 and doc["status"] == "budget exceeded"


def test_table(capsys, dehn3):
    code, doc = run_json(capsys, "table", "--tribracket", X3)
    assert code == 0 and doc["mismatches"] == []
    assert [r["count"] for r in doc["rows"][:11]] == [9, 15, 15, 25, 21, 13, 13, 37, 37, 14, 10]
    code, doc = run_json(capsys, "table", "--tribracket", dehn3)
    assert code == 0


def test_table_corrupted(capsys, tmp_path):
    t = Tribracket.load(X4)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({**Tribracket(np.roll(t.tensor, 1, axis=0)).to_json(), "name": "X3"}))
    code, doc = run_json(capsys, "table", "--tribracket", p)
    assert code == 1 and doc["mismatches"]


def test_table_pretty(capsys):
    code, out = run(capsys, "--pretty", "table", "--tribracket", X3)
    assert code == 0 and out.startswith("tribracket X3")


def test_spin(capsys, tmp_path, dehn3):
    plat = DATA / "plats" / "trefoil.json"
    out = tmp_path / "tp.json"
    code, doc = run_json(capsys, "spin", "--plat", plat, "--emit-triplane", out, "--count", "--tribracket", dehn3)
    assert code == 0 and doc["equal"] and doc["knot"] == 9
    assert doc["bridges"] == 4 and doc["patch_numbers"] == [2, 2, 2]
    assert json.loads(out.read_text())["bridges"] == 4


def test_spin_unknot(capsys):
    code, doc = run_json(capsys, "spin", "--plat", DATA / "plats" / "unknot.json", "--count", "--tribracket", X3)
    assert code == 0 and (doc["knot"], doc["spun"]) == (9, 9)


def test_spin_needs_tribracket(capsys):
    assert run_json(capsys, "spin", "--plat", DATA / "plats" / "unknot.json", "--count")[0] == 2


def test_spin_link_rejected(capsys, tmp_path):
    p = tmp_path / "hopf.json"
    p.write_text(json.dumps({"bridges": 2, "braid": [2, 2]}))
    assert run_json(capsys, "spin", "--plat", p)[0] == 2


def test_enumerate(capsys):
    code, doc = run_json(capsys, "enumerate", "-n", "1")
    assert code == 0 and doc["count"] == 1
    code, doc = run_json(capsys, "enumerate", "-n", "2")
    assert doc["count"] == 2
    code, doc = run_json(capsys, "enumerate", "-n", "3", "--limit", "1")
    assert doc["count"] == 1 and Tribracket(np.array(doc["tensors"][0])).is_valid
    assert run_json(capsys, "enumerate", "-n", "5")[0] == 2


def test_enumerate_budget(capsys):
    code, doc = run_json(capsys, "enumerate", "-n", "3", "--budget", "20")
    assert code == 3 and doc["nodes"] > 20


def test_bounds(capsys, tmp_path):
    sphere = tmp_path / "s.json"
    sphere.write_text(json.dumps({"bridges": 1, "signs": [1, -1], "tangles": [{"braid": []}] * 3}))
    code, doc = run_json(capsys, "bounds", "--triplane", sphere, "--tribracket", X4)
    assert code == 0 and doc["slack_i"] == 0 and doc["slack_ii"] == 0
    code, doc = run_json(capsys, "bounds", "--triplane", DATA / "triplanes" / "spun_trefoil.json", "--tribracket", X4)
    assert code == 0 and doc["satisfied"]
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"bridges": 1, "signs": [1, 1], "tangles": [{"braid": []}] * 3}))
    assert run_json(capsys, "bounds", "--triplane", bad, "--tribracket", X4)[0] == 2


def test_faces(capsys):
    code, doc = run_json(capsys, "faces", "--pd", DATA / "diagrams" / "trefoil.json", "--emit-system", "--tribracket", X3)
    assert code == 0 and doc["regions"] == 5 and doc["count"] == 15
    assert len(doc["system"]["equations"]) == 3
    code, doc = run_json(capsys, "faces", "--pd", DATA / "diagrams" / "figure_eight.json")
    assert doc["regions"] == 6


def test_faces_inconsistent(capsys, tmp_path):
    p = tmp_path / "pd.json"
    p.write_text(json.dumps({"crossings": [{"sign": 1, "slots": [1, 2, 3, 4]}, {"sign": 1, "slots": [2, 4, 1, 3]}]}))
    assert run_json(capsys, "faces", "--pd", p)[0] == 2


def test_deterministic_output(capsys, systems):
    a = run(capsys, "count", "--tribracket", X4, "--system", systems["10_3"])
    b = run(capsys, "count", "--tribracket", X4, "--system", systems["10_3"])
    assert a == b


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "surfcol.cli", "validate", "--tribracket", X4], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["status"] == "valid"
