import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from ftor import cli
from ftor import serialize as ser

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def circle(tmp_path):
    doc = {"schema": "ftor.complex/1", "group": {"rank": 1}, "ring": "group", "grading": "Z",
           "ranks": [1, 1], "boundaries": [[[[["-1", [0]], ["1", [1]]]]]]}
    p = tmp_path / "circle.json"
    p.write_text(json.dumps(doc))
    return p


def test_torsion_text_and_json(capsys, circle):
    code, doc, _ = run_json(capsys, "torsion", "--input", str(circle))
    assert code == 0
    assert doc["schema"] == "ftor.report/1" and doc["command"] == "torsion"
    assert doc["result"]["text"] == "(1 - t)^-1"
    code, out, _ = run(capsys, "torsion", "--input", str(circle), "--format", "text")
    assert code == 0 and "(1 - t)^-1" in out


def test_torsion_json_round_trip(capsys, circle):
    _, doc, _ = run_json(capsys, "torsion", "--input", str(circle))
    tv = ser.torsion_from_json(doc["result"])
    assert tv.render() == "(1 - t)^-1"
    assert ser.torsion_to_json(tv)["text"] == doc["result"]["text"]


def test_input_errors_exit_2(capsys, tmp_path, circle):
    assert run(capsys, "torsion", "--input", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "torsion", "--input", str(bad))[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"schema": "ftor.orbits/1"}))
    assert run(capsys, "torsion", "--input", str(wrong))[0] == 2
    dsq = tmp_path / "dsq.json"
    dsq.write_text(json.dumps({"schema": "ftor.complex/1", "group": {"rank": 1}, "ring": "group",
                               "grading": "Z", "ranks": [1, 1, 1],
                               "boundaries": [[[[["1", [1]]]]], [[[["1", [0]]]]]]}))
    code, _, err = run(capsys, "torsion", "--input", str(dsq))
    assert code == 2 and "d^2" in err
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "torsion", "--input", str(circle), "--cutoff", "x/y")[0] == 2


def test_domain_errors_exit_3(capsys):
    code, _, err = run(capsys, "apps", "toral-fix", "--matrix", "[[1,0],[0,1]]")
    assert code == 3 and "degenerate" in err
    # a non-positive capacity argument is rejected as bad input
    assert run(capsys, "apps", "capacity", "0", "1")[0] == 2


def test_log_outside_nov1_exit_3(capsys, tmp_path):
    doc = json.loads((SCHEMAS / "complex.json").read_text())
    doc["boundaries"] = [[[[{"coeff": "2", "elem": {"free": [0], "tor": []}},
                           {"coeff": "-1", "elem": {"free": [1], "tor": []}}]]]]
    p = tmp_path / "c.json"
    p.write_text(json.dumps(doc))
    code, _, err = run(capsys, "invariant", "--input", str(p), "--orbits", str(SCHEMAS / "orbits.json"), "--log")
    assert code == 3 and "Nov1" in err


def test_golden_schema_files_parse():
    cx = json.loads((SCHEMAS / "complex.json").read_text())
    C = ser.complex_from_json(cx)
    assert C.ring[0] == "novikov" and C.ranks == (1, 1)
    oc = ser.orbits_from_json(json.loads((SCHEMAS / "orbits.json").read_text()), C.ring[1], C.ring[2])
    assert len(oc.counts) == 2
    st = ser.state_from_json(json.loads((SCHEMAS / "state.json").read_text()))
    assert st.ranks() == (1, 1)
    moves = ser.moves_from_json(json.loads((SCHEMAS / "moves.json").read_text()), st)
    assert [m.kind for m in moves] == ["birth", "handleslide", "type_II", "unit_rescale"]
    rep = json.loads((SCHEMAS / "report.json").read_text())
    assert rep["schema"] == ser.SCHEMAS["report"]


def test_documents_round_trip():
    for name, load, dump in (("complex.json", ser.complex_from_json, ser.complex_to_json),
                             ("state.json", ser.state_from_json, ser.state_to_json)):
        doc = json.loads((SCHEMAS / name).read_text())
        assert dump(load(doc)) == doc
    st = ser.state_from_json(json.loads((SCHEMAS / "state.json").read_text()))
    mdoc = json.loads((SCHEMAS / "moves.json").read_text())
    assert [ser.move_to_json(m) for m in ser.moves_from_json(mdoc, st)] == mdoc["moves"]


def test_golden_invariant_report(capsys):
    code, out, _ = run(capsys, "invariant", "--input", str(SCHEMAS / "complex.json"),
                       "--orbits", str(SCHEMAS / "orbits.json"), "--log")
    assert code == 0
    assert out == (SCHEMAS / "report.json").read_text()


def test_apply_moves_keeps_invariant(capsys):
    code, doc, _ = run_json(capsys, "apply-moves", "--input", str(SCHEMAS / "state.json"),
                            "--moves", str(SCHEMAS / "moves.json"))
    assert code == 0
    res = doc["result"]
    assert res["before"]["text"] == res["after"]["text"]


def test_fuzz_deterministic_and_seed_env(capsys, monkeypatch):
    args = ("fuzz", "--n", "3", "--max-len", "3", "--max-rank", "3", "--cutoff", "4")
    a = run(capsys, *args, "--seed", "11")
    b = run(capsys, *args, "--seed", "11")
    assert a[0] == 0 and a[1] == b[1]
    monkeypatch.setenv("FTOR_SEED", "11")
    c = run(capsys, *args)
    assert c[1] == a[1]
    monkeypatch.setenv("FTOR_SEED", "eleven")
    assert run(capsys, *args)[0] == 2


def test_fuzz_replay(capsys):
    code, doc, _ = run_json(capsys, "fuzz", "--seed", "2", "--replay", "1", "--max-len", "3", "--max-rank", "3")
    assert code == 0
    assert doc["result"]["moves"]["schema"] == "ftor.moves/1"


def test_apps_commands(capsys):
    code, doc, _ = run_json(capsys, "apps", "alexander", "--knot", "trefoil")
    assert code == 0 and doc["result"]["text"] == "1 - t + t^2"
    code, doc, _ = run_json(capsys, "apps", "typef", "--knot", "trefoil")
    assert code == 0 and doc["result"]["g_essential"] is True
    code, doc, _ = run_json(capsys, "apps", "typef", "--knot", "twist", "--k", "3")
    assert code == 0 and doc["result"]["in_Nov1"] is False
    code, doc, _ = run_json(capsys, "apps", "toral-fix", "--matrix", "[[2,1],[1,1]]", "--k", "2")
    assert code == 0 and doc["result"]["total"] == 5
    code, doc, _ = run_json(capsys, "apps", "zeta", "--toral", "[[2,1],[1,1]]", "--mode", "lefschetz",
                            "--cutoff", "4")
    assert code == 0
    code, doc, _ = run_json(capsys, "apps", "capacity", "1", "4")
    assert code == 0 and doc["result"]["bound"] == "1/4"


def test_module_entry_point(circle):
    proc = subprocess.run([sys.executable, "-m", "ftor", "torsion", "--input", str(circle), "--format", "text"],
                          capture_output=True, text=True, env={**os.environ, "FTOR_SEED": "0"})
    assert proc.returncode == 0
    assert "(1 - t)^-1" in proc.stdout
