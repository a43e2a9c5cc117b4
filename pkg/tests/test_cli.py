import csv
import io
import json

import pytest

from triangle_building.cli import run
from triangle_building.presentation import presentation_to_json


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_word_reduce():
    assert call("word", "reduce", "0 1") == (0, "3^-1\n")
    code, text = call("word", "reduce", "0 1^-1", "--emit", "json")
    assert json.loads(text) == {"input": "0 1^-1", "normal_form": "6^-1 4", "shape": [1, 1], "length": 2}


def test_matrices_csv():
    code, text = call("ck", "matrices", "--q", "2", "--emit", "csv")
    assert code == 0
    plus, minus = text.strip().split("\n\n")
    for block, head in ((plus, "plus"), (minus, "minus")):
        rows = list(csv.reader(io.StringIO(block)))
        assert rows[0][0] == head and len(rows) == 22 and len(rows[0]) == 22
        assert all(sum(int(v) for v in r[1:]) == 4 for r in rows[1:])


def test_other_ck_actions():
    assert call("ck", "aplus", "0^-1:1") == (0, "2^-1:4 2^-1:6 6^-1:0 6^-1:1\n")
    assert call("ck", "aminus", "0:1")[1] == "0^-1:4 1^-1:5 2^-1:4 4^-1:5\n"
    assert call("ck", "freegroup", "2", "--emit", "json") == (0, "[[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 1, 0], [1, 1, 0, 1]]\n")
    assert call("ck", "weakcomm") == (0, "42/42 equal\n")
    code, text = call("ck", "weakcomm", "0", "1", "6", "4", "--emit", "json")
    assert json.loads(text)[0]["equal"] is True
    code, text = call("ck", "decompose", "1", "--emit", "json")
    report = json.loads(text)[0]
    assert report["initial_partition_ok"] and report["counts"] == {"A": 3, "B": 3, "C": 12}
    assert call("ck", "weakcomm", "0", "1", "6", "5")[0] == 2


def test_plane_and_presentation(tmp_path):
    code, text = call("plane", "--emit", "json")
    assert json.loads(text)["lines"][0] == [0, 1, 3]
    assert call("presentation", "verify") == (0, "ok\n")
    code, text = call("presentation", "canonical", "--emit", "json")
    path = tmp_path / "p.json"
    path.write_text(text)
    assert call("presentation", "verify", "--presentation", str(path)) == (0, "ok\n")
    assert call("word", "reduce", "0 1", "--presentation", str(path)) == (0, "3^-1\n")
    assert call("presentation", "enumerate") == (0, "2 presentations\n")
    assert call("presentation", "enumerate", "--budget", "1") == (0, "1 presentations (truncated)\n")


def test_broken_presentation_file(tmp_path, pres):
    data = json.loads(presentation_to_json(pres))
    data["triples"] = data["triples"][1:]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    assert call("word", "reduce", "0", "--presentation", str(path))[0] == 2
    assert call("presentation", "verify", "--presentation", str(path))[0] == 2


def test_ball_residue_hexagons():
    code, text = call("ball", "--radius", "2", "--emit", "csv")
    assert text.splitlines()[:3] == ["n,m,count", "0,0,1", "0,1,7"]
    assert call("ball", "--radius", "3") == (0, "1 14 98 560\n")
    assert call("hexagons") == (0, "28\n")
    assert call("hexagons", "--q", "3") == (0, "234\n")
    code, text = call("residue", "--emit", "dot")
    assert text.startswith("graph residue {") and text.count("--") == 21
    assert call("ball", "--radius", "3", "--budget", "10")[0] == 2


def test_boundary():
    code, text = call("boundary", "witness", "--v", "0", "--source", "0^-1:1", "--emit", "json")
    assert code == 0 and json.loads(text)["k"] == "0 3"
    assert call("boundary", "overlap", "--s", "e", "--i", "10") == (0, "1\n")
    code, text = call("boundary", "overlap", "--s", "0", "--i", "10", "--seed", "3")
    num, den = map(int, text.split("/"))
    assert 56 * den <= 110 * num <= 110 * den
    assert call("boundary", "extensions", "--label", "0^-1:1") == (0, "8 extensions of a depth-2 diagram with base 0^-1:1\n")


def test_apartment():
    code, text = call("apartment", "grow", "--seed", "1", "--emit", "json")
    assert code == 0
    data = json.loads(text)
    assert data["case"] in ("A", "B") and all(b["contains_seed"] for b in data["boundary"])
    code, dot = call("apartment", "grow", "--seed", "1", "--emit", "dot")
    assert dot.startswith("graph chambers {")


def test_determinism():
    a = call("apartment", "grow", "--seed", "9", "--emit", "json")
    b = call("apartment", "grow", "--seed", "9", "--emit", "json")
    assert a == b
    assert call("boundary", "overlap", "--s", "1^-1", "--seed", "5") == call("boundary", "overlap", "--s", "1^-1", "--seed", "5")


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["word", "reduce", "9"],
    ["word", "reduce", "x"],
    ["ck", "aplus", "0:3"],
    ["ck", "aplus"],
    ["plane", "--q", "4"],
    ["word", "reduce", "0", "--q", "5"],
    ["hexagons", "--emit", "csv"],
    ["word", "reduce", "0", "--presentation", "/nonexistent.json"],
])
def test_usage_errors(argv, capsys):
    code, text = call(*argv)
    assert code == 2 and text == ""
    assert capsys.readouterr().err


def test_verify_all_q3():
    code, text = call("verify", "all", "--q", "3")
    assert code == 0
    lines = text.splitlines()
    assert len(lines) == 12 and all(l.startswith("PASS ") for l in lines)


def test_verify_all_q2():
    code, text = call("verify", "all", "--q", "2", "--emit", "json")
    assert code == 0
    checks = json.loads(text)
    assert [c["ok"] for c in checks] == [True] * 12
    names = {c["check"] for c in checks}
    assert {"relator products", "weak commutativity", "wall determinism", "geometric binding"} <= names
