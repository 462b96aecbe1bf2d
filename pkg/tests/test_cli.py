from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from polyinv.cli import main
from polyinv.serialize import dumps, invariant_to_dict, system_to_dict
from polyinv.execution import build_witness, run
from polyinv.polyhedra import VPolytope
from polyinv.reductions import gadget_reduce
from systems import src_l, src_t, toy, vec


@pytest.fixture
def files(tmp_path: Path):
    g, _ = gadget_reduce(src_t())
    w = build_witness(g, run(g, 20))
    bad = dict(w)
    bad["s0"] = VPolytope(3, w["s0"].points + (vec(2, 2, "5/2"),))
    out = {}
    for name, doc in {
        "src-t": system_to_dict(src_t()),
        "src-l": system_to_dict(src_l()),
        "gad-t": system_to_dict(g),
        "toy": system_to_dict(toy()),
        "toy-reachable": system_to_dict(toy(5)),
        "witness": invariant_to_dict(w, g.vars),
        "bad-witness": invariant_to_dict(bad, g.vars),
    }.items():
        path = tmp_path / f"{name}.json"
        path.write_text(dumps(doc))
        out[name] = str(path)
    out["dir"] = tmp_path
    return out


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_witness(files, capsys):
    code, out, err = call(capsys, "check", files["gad-t"], files["witness"])
    assert code == 0 and json.loads(out)["verdict"] == "separating-inductive"
    assert "separating-inductive" in err


def test_check_bad_witness(files, capsys):
    code, out, err = call(capsys, "check", files["gad-t"], files["bad-witness"])
    report = json.loads(out)
    assert code == 1 and report["verdict"] == "not-inductive"
    (fail,) = [t for t in report["transitions"] if t["status"] == "fail"]
    assert fail["to"] == "bad" and fail["witness"] == {"x": "2", "t": "2", "y": "5/2"}
    assert "s0->bad" in err


def test_reduce_states(files, capsys, tmp_path):
    layout = tmp_path / "layout.json"
    code, out, _ = call(capsys, "reduce", "states", files["gad-t"], "--layout", layout)
    doc = json.loads(out)
    assert code == 0 and len(doc["states"]) == 2 and len(doc["vars"]) == 5
    assert json.loads(layout.read_text())["kind"] == "simplex"


def test_reduce_gadget_le(files, capsys):
    code, out, _ = call(capsys, "reduce", "gadget", files["src-t"], "--le-guard")
    doc = json.loads(out)
    assert code == 0 and doc["vars"] == ["x", "t", "y"]
    assert {t["guard"]["poly"][0]["rel"] for t in doc["transitions"] if t["to"] != "bad"} == {"<="}


def test_pipeline_lift_project(files, capsys, tmp_path):
    sys_path, layout = tmp_path / "enc.json", tmp_path / "layout.json"
    assert call(capsys, "reduce", "states", files["gad-t"], "-o", sys_path, "--layout", layout)[0] == 0
    lifted = tmp_path / "lifted.json"
    assert call(capsys, "lift-inv", files["witness"], layout, "-o", lifted)[0] == 0
    assert call(capsys, "check", sys_path, lifted)[0] == 0
    code, out, _ = call(capsys, "project-inv", lifted, layout)
    assert code == 0 and json.loads(out)["labels"]["h"] == {"vrep": [["3", "4", "10"]]}


def test_simulate_and_witness(files, capsys):
    code, out, _ = call(capsys, "simulate", files["gad-t"], "--steps", 10)
    assert code == 0 and json.loads(out)["status"] == "halted"
    code, out, _ = call(capsys, "witness", files["gad-t"], "--steps", 10)
    assert code == 0 and json.loads(out)["labels"]["bad"] == "empty"
    g = files["dir"] / "gad-l.json"
    g.write_text(dumps(system_to_dict(gadget_reduce(src_l())[0])))
    code, out, err = call(capsys, "witness", g, "--steps", 10)
    assert code == 1 and json.loads(out)["status"] == "step-budget-exhausted"


def test_search_and_emit(files, capsys):
    code, out, _ = call(capsys, "search", files["toy"], "-k", 1, "-B", 1)
    assert code == 0
    assert json.loads(out)["labels"]["s0"] == {"hrep": [{"coeffs": {"x": "-1"}, "rel": "<=", "rhs": "0"}]}
    code, out, err = call(capsys, "search", files["toy-reachable"], "-k", 1, "-B", 1)
    assert code == 1 and json.loads(out)["found"] is False and "not a proof" in err
    code, out, _ = call(capsys, "emit-smt", files["toy"], "-k", 1)
    assert code == 0 and out.startswith(";") and "(check-sat)" in out


def test_oracle(files, capsys):
    code, out, _ = call(capsys, "oracle", files["src-t"], "--steps", 10)
    doc = json.loads(out)
    assert code == 0 and len(doc["configs"]) == 5 and not doc["bad_reachable"]
    assert call(capsys, "oracle", files["toy-reachable"], "--steps", 1)[0] == 1


def test_input_errors_exit_2(files, capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"vars": ["x"],\n "states": [}')
    code, _, err = call(capsys, "check", broken, files["witness"])
    assert code == 2 and "broken.json:2:" in err
    doc = json.loads(Path(files["src-t"]).read_text())
    doc["transitions"][1]["guard"]["lin"][0]["rel"] = "=>"
    broken.write_text(json.dumps(doc))
    code, _, err = call(capsys, "simulate", broken, "--steps", 3)
    assert code == 2 and "transitions[1].guard.lin[0].rel" in err
    assert call(capsys, "check", files["src-t"], files["witness"])[0] == 2
    assert call(capsys, "search", files["toy"], "-k", 1)[0] == 2
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "simulate", files["toy"], "--steps", -1)[0] == 2


def test_emitted_files_reparse(files, capsys, tmp_path):
    out = tmp_path / "g.json"
    call(capsys, "reduce", "gadget", files["src-t"], "-o", out)
    again = tmp_path / "g2.json"
    call(capsys, "reduce", "states", out, "-o", again)
    first = json.loads(out.read_text())
    from polyinv.serialize import system_from_dict
    assert dumps(system_to_dict(system_from_dict(first))) == out.read_text()


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "polyinv", "check", files["gad-t"], files["witness"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "separating-inductive" in proc.stdout
