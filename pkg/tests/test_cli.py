from __future__ import annotations

import io
import json
import shutil
import subprocess
import sys

import pytest

from titsmotive.cli import run

SPLIT3 = json.dumps({"kind": "SL", "degree": 3})
A = json.dumps({"kind": "SL", "degree": 4, "inv": {"v3": "1/4", "v5": "3/4"}})
A_OP = json.dumps({"kind": "SL", "degree": 4, "inv": {"v3": "3/4", "v5": "1/4"}})
C = json.dumps({"kind": "SL", "degree": 4, "invariants": {"v3": "1/2", "v5": "1/2"}})
SO_SIM = (json.dumps({"kind": "SO", "diag": [1, 1, 1, 1, 3]}), json.dumps({"kind": "SO", "diag": [3, 3, 3, 3, 9]}))


def call(*argv):
    buf = io.StringIO()
    status = run(list(argv), stdout=buf)
    return status, buf.getvalue()


def call_json(*argv):
    status, text = call(*argv)
    return status, json.loads(text)


def test_index_split():
    status, out = call_json("index", SPLIT3)
    assert status == 0
    assert out == {"schema": "1", "diagram": "A2", "action": [], "distinguished": [[1], [2]]}


def test_index_text_rendering():
    status, text = call("index", A, "--format", "text")
    assert status == 0
    assert text.splitlines()[0] == "A3:  1 --- 2 --- 3 "
    assert "distinguished: none" in text
    status, text = call("index", json.dumps({"kind": "SL", "degree": 4, "inv": {"v3": "1/2", "v5": "1/2"}}),
                        "--format", "text")
    assert "(2)" in text and "(1)" not in text


def test_index_text_rendering_so():
    status, text = call("index", json.dumps({"kind": "SO", "diag": [1, -1, 1, -1, 1, 1, 1, 1]}),
                        "--format", "text")
    assert status == 0
    assert "also 2 --- 4" in text
    assert "star-action: trivial" in text


def test_p_index():
    status, out = call_json("p-index", json.dumps({"kind": "SL", "degree": 6, "inv": {"v3": "1/6", "v5": "5/6"}}),
                            "-p", "2")
    assert status == 0 and out["distinguished"] == [[2], [4]] and out["prime"] == 2


def test_poincare_and_split_motive():
    assert call_json("poincare", "A2", "--theta", "1")[1]["coefficients"] == [1, 1, 1]
    assert call_json("poincare", "A2")[1]["coefficients"] == [1, 2, 2, 1]
    status, text = call("motive-split", "B2", "--theta", "1", "--format", "text")
    assert text.strip() == "Tate[0] + Tate[1] + Tate[2] + Tate[3]"


def test_equiv_examples():
    status, out = call_json("equiv", A, A_OP, "-p", "2")
    assert status == 0 and out["verdict"] == "equivalent"
    status, out = call_json("equiv", A, C, "-p", "2")
    assert out["verdict"] == "not_equivalent"
    assert out["witness"] == {"place": "v3", "vp_orders": [2, 1]}
    status, out = call_json("equiv", A, A_OP, "--all-primes")
    assert out["verdict"] == "equivalent"


def test_equiv_strict_unknown_exits_one(monkeypatch):
    from titsmotive import equiv

    monkeypatch.setattr(equiv, "SIMILARITY_SEARCH_CAP", 0)
    status, out = call_json("equiv", *SO_SIM, "-p", "2")
    assert status == 0 and out["verdict"] == "unknown"
    status, out = call_json("equiv", *SO_SIM, "-p", "2", "--strict")
    assert status == 1 and out["verdict"] == "unknown"


@pytest.mark.parametrize("argv", [
    ["equiv", SPLIT3, json.dumps({"kind": "SO", "diag": [1, 1, 1]}), "-p", "2"],
    ["index", json.dumps({"kind": "SL", "degree": 2, "inv": {"v3": "1/2"}})],
    ["index", "{not json"],
    ["index", json.dumps({"kind": "XX"})],
    ["index", json.dumps({"kind": "SL", "degree": 2, "schema": "9"})],
    ["levi", A, "--theta", "2"],
    ["poincare", "E9"],
    ["higher", A, "-p", "2", "--registry", json.dumps([{"label": "x", "completion": 3}])],
    ["index", "/nonexistent/file.json"],
])
def test_validation_failures_exit_two(argv):
    status, out = call_json(*argv)
    assert status == 2
    assert out["schema"] == "1" and set(out["error"]) == {"type", "message"}


def test_missing_prime_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["p-index", SPLIT3])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["p-index", SPLIT3, "-p", "4"])
    assert exc.value.code == 2


def test_levi():
    status, out = call_json("levi", json.dumps({"kind": "SO", "diag": [1, -1, 1, -1, 1]}), "--theta", "1")
    assert status == 0
    assert out["factors"] == [{"kind": "SL", "degree": 1, "inv": {}}, {"kind": "SO", "class": {
        "dim": 3, "disc": -1, "hasse_minus": [], "signature": [2, 1]}}]


def test_check_calcul():
    lab = {"group": "G", "theta": [], "p": 2}
    u, v, t = dict(lab, **{"class": "u"}), dict(lab, **{"class": "v"}), dict(lab, group="H", **{"class": "t"})
    doc = {
        "motive": [{"label": u, "shift": 0, "mult": 1}, {"label": v, "shift": 1, "mult": 1},
                   {"label": u, "shift": 2, "mult": 1}],
        "model": {"u": [{"label": t, "shift": 0}], "v": [{"label": t, "shift": 0}, {"label": t, "shift": 1}]},
        "y": u,
        "i": 2,
    }
    status, out = call_json("check-calcul", json.dumps(doc))
    assert status == 0 and out == {"schema": "1", "result": True, "lhs": 1, "rhs": 1}


def test_round_trip_into_abstract_equiv(tmp_path):
    """index and higher outputs are valid inputs for ``equiv --abstract``."""
    docs = {}
    for name, g in [("a", A), ("b", A_OP), ("c", C)]:
        for cmd, extra in (("index", []), ("higher", ["-p", "2", "--draws", "3"])):
            status, text = call(cmd, g, *extra)
            assert status == 0
            path = tmp_path / f"{name}-{cmd}.json"
            path.write_text(text)
            docs[(name, cmd)] = str(path)
    status, out = call_json("equiv", docs[("a", "higher")], docs[("b", "higher")], "-p", "2", "--abstract")
    assert status == 0 and out["verdict"] == "equivalent" and out["relative_to_registry"]
    status, out = call_json("equiv", docs[("a", "higher")], docs[("c", "higher")], "-p", "2", "--abstract")
    assert status == 0 and out["verdict"] == "not_equivalent"
    status, out = call_json("equiv", docs[("a", "index")], docs[("c", "index")], "-p", "2", "--abstract")
    assert status == 0 and out["verdict"] == "not_equivalent"


def test_higher_is_deterministic_per_seed(monkeypatch):
    argv = ["higher", A, "-p", "2", "--draws", "5"]
    first = call(*argv, "--seed", "11")[1]
    assert first == call(*argv, "--seed", "11")[1]
    assert first != call(*argv, "--seed", "12")[1]
    monkeypatch.setenv("TITSMOTIVE_SEED", "11")
    assert call(*argv)[1] == first
    monkeypatch.setenv("TITSMOTIVE_SEED", "eleven")
    assert call(*argv)[0] == 2


def test_higher_so_default_registry():
    status, out = call_json("higher", json.dumps({"kind": "SO", "diag": [1, 1, 1, -7]}), "-p", "2")
    assert status == 0
    assert out["entries"]["ground"] == []
    assert out["entries"]["Q_inf"] == [[1, 2]]


@pytest.mark.skipif(shutil.which("titsmotive") is None, reason="console script not installed")
def test_console_script_is_byte_identical():
    argv = ["titsmotive", "higher", A, "-p", "3", "--draws", "4", "--seed", "5"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    module = subprocess.run([sys.executable, "-m", "titsmotive.cli", *argv[1:]], capture_output=True, check=True)
    assert module.stdout == first
