import io
import json

import pytest

from kmhecke.cli import ParseError, format_element, main, parse_element
from kmhecke.root_system import preset

from conftest import elt


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), stream=buf)
    return code, buf.getvalue()


def test_parse_element():
    A1, AFF = preset("a1"), preset("a1_affine")
    assert parse_element("s1", A1) == elt(A1, word=(1,))
    assert parse_element("e", A1) == elt(A1)
    assert parse_element("t[1,0,0]*s1.s2", AFF) == elt(AFF, (1, 0, 0), (1, 2))
    assert parse_element("t[0, 0, 2]", AFF) == elt(AFF, (0, 0, 2))
    with pytest.raises(ParseError) as info:
        parse_element("t[1 2]", A1)
    assert info.value.pos == 4
    for bad in ("s", "s1.", "t[1]*", "x1", "s3", "t[1,2]"):
        with pytest.raises(ParseError):
            parse_element(bad, A1)


def test_format_round_trip():
    AFF = preset("a1_affine")
    for text in ("e", "s1.s2", "t[0,0,1]", "t[1,0,1]*s2.s1"):
        assert format_element(parse_element(text, AFF)) == text


def test_multiply_quadratic_relation():
    code, out = run("multiply", "--system", "a1", "--w", "s1", "--v", "s1")
    assert code == 0
    doc = json.loads(out)
    assert [(t["u_text"], t["poly_text"]) for t in doc["terms"]] == [("e", "Q1"), ("s1", "Q1 - 1")]
    assert doc["terms"][0]["u"] == {"lambda": [0], "word": []}
    assert doc["terms"][1]["poly"] == [{"exp": {"Q1": 1}, "c": 1}, {"exp": {}, "c": -1}]


def test_constant_outside_support():
    code, out = run("constant", "--system", "a1", "--w", "s1", "--v", "s1", "--u", "t[3]", "--format", "text")
    assert (code, out) == (0, "0\n")


def test_csv_output():
    code, out = run("multiply", "--system", "a1", "--w", "s1", "--v", "s1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["u,poly", "e,Q1", "s1,Q1 - 1"]


def test_exit_codes():
    code, out = run("multiply", "--system", "a1", "--w", "t[1 2]", "--v", "e")
    assert code == 2 and json.loads(out)["error"]["type"] == "usage"
    code, out = run("multiply", "--system", "a1_affine", "--w", "t[1,0,0]", "--v", "e")
    assert code == 1 and json.loads(out)["error"]["type"] == "NotInW"
    code, _ = run("frobnicate")
    assert code == 2
    code, _ = run("multiply", "--system", "no_such_system", "--w", "e", "--v", "e")
    assert code == 2


def test_verify_q1_small():
    code, out = run("verify", "q1", "--system", "a1_affine", "--suite", "small")
    assert code == 0 and json.loads(out)["ok"]


def test_verify_failure_exit_code(monkeypatch):
    from kmhecke import suites

    def broken(system, elements, log, suite="", **kw):
        rep = suites.Report("q1", system.name, suite)
        rep.fail("forced")
        return rep

    monkeypatch.setitem(suites.CHECKS, "q1", broken)
    code, _ = run("verify", "q1", "--system", "a1", "--suite", "small")
    assert code == 3


def test_determinism_across_threads():
    _, one = run("verify", "positivity", "--system", "a2", "--suite", "small", "--threads", "1")
    _, four = run("verify", "positivity", "--system", "a2", "--suite", "small", "--threads", "4")
    assert one == four


def test_paths_and_galleries():
    code, out = run("paths", "--system", "a1", "--shape", "1", "--from", "1")
    doc = json.loads(out)
    assert code == 0 and [p["lifting_count"] for p in doc["paths"]] == ["Qp1", "Qp1 - 1", "1"]
    code, out = run("galleries", "--system", "a1", "--at", "0", "--start=-e", "--omega=+e", "--type", "s1")
    doc = json.loads(out)
    assert code == 0 and doc["sum"] == "Q1" and doc["minimal_lifting_count"] == "Q1"
    code, out = run("paths", "--system", "a1_affine", "--shape", "0,0,1", "--from", "0,0,1", "--format", "text")
    assert code == 0 and out.count("->") == 3


def test_config_file(tmp_path):
    cfg = tmp_path / "b2.json"
    cfg.write_text(json.dumps({"n": 2, "gcm": [[2, -2], [-1, 2]], "d": 2,
                               "coroots": [[1, 0], [0, 1]], "roots": [[2, -1], [-2, 2]]}))
    code, out = run("multiply", "--system", str(cfg), "--w", "s1", "--v", "s1", "--format", "text")
    assert code == 0 and "Q1" in out
    toml = tmp_path / "a1.toml"
    toml.write_text('n = 1\nd = 1\ngcm = [[2]]\ncoroots = [[1]]\nroots = [[2]]\n')
    code, out = run("multiply", "--system", str(toml), "--w", "s1", "--v", "s1", "--format", "text")
    assert (code, out) == (0, "e\tQ1\ns1\tQ1 - 1\n")


def test_presets_listing():
    code, out = run("presets")
    names = [p["name"] for p in json.loads(out)["presets"]]
    assert code == 0 and names == ["a1", "a1_affine", "a1xa1", "a2", "a2_affine", "hyp23"]


def test_env_node_cap(monkeypatch):
    monkeypatch.setenv("KMHECKE_NODE_CAP", "2")
    from kmhecke.structure_constants import settings
    old = settings.node_cap
    try:
        code, out = run("paths", "--system", "a2", "--shape", "2,1", "--from", "3,3")
        assert code == 1 and json.loads(out)["error"]["type"] == "SearchBudgetExceeded"
    finally:
        settings.node_cap = old
