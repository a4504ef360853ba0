import json

import pytest

from rhconj.cli import config_from_args, main, run
from rhconj.errors import ParseError, ValidationError
from rhconj.groups import BUNDLED, bundled, bundled_path, load_group_spec, spec_from_dict, spec_to_dict


def call(argv):
    code, text = run(config_from_args(argv))
    return code, text


def call_json(argv):
    code, text = call(argv + ["--json"])
    return code, json.loads(text)


def test_decide_exit_codes():
    code, doc = call_json(["decide", "--group", "f2", "--u", "a.b", "--v", "b.a"])
    assert code == 0 and doc["verdict"] == "conjugate" and doc["conjugator"] == "a"
    assert doc["schema"] == 1 and doc["command"] == "decide"
    code, doc = call_json(["decide", "--group", "f2", "--u", "a", "--v", "b"])
    assert code == 1 and doc["verdict"] == "not_conjugate" and doc["conjugator"] is None
    code, doc = call_json(["decide", "--group", "f2", "--u", "a.b", "--v", "b.a", "--max-radius", "1"])
    assert code == 2 and doc["verdict"] == "undecided"
    code, doc = call_json(["decide", "--group", "f2", "--u", "a.c", "--v", "b"])
    assert code == 3 and doc["error"] == "UnknownGenerator"


def test_main_bad_arguments(capsys):
    assert main(["decide", "--group", "f2", "--u", "a"]) == 3
    assert "error" in capsys.readouterr().err
    assert main(["decide", "--group", "/nonexistent.json", "--u", "a", "--v", "a"]) == 3


def test_decide_is_deterministic():
    argv = ["decide", "--group", "f2_rel_a", "--u", "b.a^2.b^-1", "--v", "a^2"]
    docs = [call_json(argv)[1] for _ in range(2)]
    for d in docs:
        d["stats"].pop("wall_ms")
    assert docs[0] == docs[1]
    assert docs[0]["method"] == "via_parabolic_class"


def test_text_output():
    code, text = call(["decide", "--group", "f2", "--u", "a.b", "--v", "b.a"])
    assert code == 0 and text == "conjugate conjugator=a"


def test_manifold_constants():
    code, doc = call_json(["constants", "--manifold", "a=1,b=2,delta=1,lambda=1", "--p", "2"])
    assert code == 0
    assert doc["values"]["V_S"]["value"] == pytest.approx(2 + 2 + 2.772588722, abs=1e-6)
    assert doc["values"]["D"]["value"] == pytest.approx(doc["values"]["V_S"]["value"] + 1)
    code, doc = call_json(["constants", "--manifold", "a=1,delta=1"])
    assert code == 3


def test_group_constants():
    code, doc = call_json(["constants", "--group", "f2"])
    assert code == 0 and doc["command"] == "constants"


def test_relgeo_and_partition_and_oracle():
    code, doc = call_json(["relgeo", "--group", "f2_rel_a", "--word", "a^5.b"])
    assert code == 0 and doc["relative_length_halves"] == 4
    assert doc["trace"][0]["gamma_travel"] == 5
    code, doc = call_json(["partition-hd", "--group", "z2_star_z3", "--d", "1"])
    assert doc["classes"] == [[""], ["s"], ["t"], ["t^-1"]]
    code, doc = call_json(["oracle", "--group", "f2", "--u", "a.b", "--v", "b.a", "--radius", "3"])
    assert code == 0 and doc["conjugate"] is True


def test_ball_formats():
    code, text = call(["ball", "--group", "f2", "--radius", "1", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and len(doc["vertices"]) == 5 and len(doc["edges"]) == 4
    code, text = call(["ball", "--group", "f2", "--radius", "1", "--format", "dot"])
    assert text.startswith("digraph")


def test_bundled_round_trip():
    for name in BUNDLED:
        spec = bundled(name)
        assert spec_from_dict(spec_to_dict(spec)) == spec
        assert load_group_spec(bundled_path(name)) == spec


def test_load_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x",\n "generators": [}')
    with pytest.raises(ParseError, match="line 2"):
        load_group_spec(bad)
    bad.write_text(json.dumps({"name": "x", "generators": ["a", "b"], "colour": 1}))
    with pytest.raises(ParseError, match="colour"):
        load_group_spec(bad)
    bad.write_text(json.dumps({"generators": ["a"]}))
    with pytest.raises(ParseError, match="name"):
        load_group_spec(bad)
    bad.write_text(json.dumps({"name": "x", "generators": ["a", "b"],
                               "parabolics": [{"name": "C", "generators": ["c"]}]}))
    with pytest.raises(ValidationError, match="c"):
        load_group_spec(bad)
    bad.write_text(json.dumps({"name": "x", "generators": ["a"], "relators": ["a.z"]}))
    with pytest.raises(ValidationError, match="relators"):
        load_group_spec(bad)
    with pytest.raises(ValueError):
        bundled("nope")


def test_group_from_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(spec_to_dict(bundled("f2"))))
    code, doc = call_json(["decide", "--group", str(path), "--u", "a.b", "--v", "b.a"])
    assert code == 0


def test_emitted_words_reparse():
    spec = bundled("f2_rel_a")
    code, doc = call_json(["ball", "--group", "f2_rel_a", "--radius", "2"])
    for w in doc["vertices"]:
        assert spec.format(spec.parse(w)) == w
    code, doc = call_json(["relgeo", "--group", "f2_rel_a", "--word", "b.a^3.b^-1.a"])
    for w in [doc["input"], doc["representative"]] + [r["exit"] for r in doc["trace"]]:
        assert spec.format(spec.parse(w)) == w
