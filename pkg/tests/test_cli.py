import json
from pathlib import Path

import pytest

from trackalg.cli import main
from trackalg.fixtures import corpus_instance
from trackalg.instance_io import save_instance
from trackalg.linearity import with_gamma_override

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def mutated(tmp_path_factory):
    inst = corpus_instance("Tc")
    T, G = inst.T, inst.G
    h = T.hom("*", "*").c1.basis()[0]
    key, args = ("*",) * 3, ((0, 0), (0, 0), (0, 1))
    inst.G = with_gamma_override(G, key, args, T.hom("*", "*").c1.add(G(*key, *args), h))
    path = tmp_path_factory.mktemp("mut") / "mut.json"
    save_instance(inst, path)
    return path


def test_validate_tc(capsys):
    code, out, _ = run(capsys, "validate", CORPUS / "Tc.json")
    assert code == 0
    assert "7/7 linearity equations passed" in out


def test_linearity_tc(capsys):
    code, out, _ = run(capsys, "linearity", CORPUS / "Tc.json", "--n-max", 3)
    assert code == 0 and "Gamma(4) = id" in out


def test_brackets_m2(capsys):
    code, out, _ = run(capsys, "brackets", CORPUS / "M2.json", "--classes", "x,x,x")
    assert code == 0
    assert "toda bracket" in out and "witness" in out
    assert "Toda = Massey on the DG instance: PASS" in out


def test_brackets_literal_selector(capsys):
    code, _, _ = run(capsys, "brackets", CORPUS / "M2.json", "--classes", "*>*:0.1.0,x,x")
    assert code == 0


@pytest.mark.parametrize("classes", ["x,x", "x,y,x", "*>*:9,x,x", "1,x,x"])
def test_brackets_bad_classes(capsys, classes):
    code, _, err = run(capsys, "brackets", CORPUS / "M2.json", "--classes", classes)
    assert code == 1 and err.startswith("error:")


def test_strictify_q2_small(capsys, tmp_path):
    code, out, _ = run(capsys, "strictify", CORPUS / "Q2.json", "--ring", "zpp", "--word-bound", 1,
                       "--budget", 2000, "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert {"Q~", "G~"} <= set(rep["sections"]["dossier"]["verdicts"])


def test_zigzag(capsys):
    code, out, _ = run(capsys, "zigzag", CORPUS / "M2.json", "--word-bound", 2)
    assert code == 0 and "DK verdict Q~: equivalence" in out


def test_fixtures_gen_matches_corpus(capsys):
    code, out, _ = run(capsys, "fixtures", "gen", "M2")
    assert code == 0 and out == (CORPUS / "M2.json").read_text()
    code, _, err = run(capsys, "fixtures", "gen", "nope")
    assert code == 1 and "unknown fixture" in err


def test_input_errors_have_distinct_messages(capsys, tmp_path):
    (tmp_path / "schema.json").write_text('{"format": "trackalg/instance"}')
    (tmp_path / "broken.json").write_text("{")
    msgs = []
    for argv in (["frobnicate", "x"], ["validate", tmp_path / "missing.json"],
                 ["validate", tmp_path / "schema.json"], ["validate", tmp_path / "broken.json"]):
        code, _, err = run(capsys, *argv)
        assert code == 1
        msgs.append(err.split(":")[1].strip())
    assert msgs[0].startswith("unknown subcommand")
    assert msgs[1].startswith("unreadable file")
    assert msgs[2].startswith("schema violation")
    assert msgs[3].startswith("malformed instance file")


def test_malformed_differential_is_reported(capsys, tmp_path):
    d = json.loads((CORPUS / "M2.json").read_text())
    d["homs"][0]["d"] = [[1]]
    (tmp_path / "bad.json").write_text(json.dumps(d))
    code, _, err = run(capsys, "validate", tmp_path / "bad.json")
    assert code == 1 and "homs[0] (* -> *)" in err


def test_law_failure_exit_code_and_report(capsys, mutated, tmp_path):
    out_path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "validate", mutated, "--output", out_path)
    assert code == 2
    rep = json.loads(out_path.read_text())
    assert rep["schema"] == "trackalg/report" and rep["version"] == 1
    assert rep["passed"] is False and "--replay" in rep["replay"]
    failing = [r for r in rep["sections"]["linearity"]["results"] if not r["passed"]]
    assert failing and all("witness" in r for r in failing)


def test_replay_reruns_failing_witnesses_only(capsys, mutated, tmp_path):
    out_path = tmp_path / "rep.json"
    run(capsys, "validate", mutated, "--output", out_path)
    code, out, _ = run(capsys, "validate", mutated, "--replay", out_path, "--format", "json")
    assert code == 2
    rep = json.loads(out)
    results = rep["sections"]["linearity"]["results"]
    assert results and all(r["cases"] == 1 and not r["passed"] for r in results)
    assert rep["sections"]["axioms"]["results"] == []


def test_replay_needs_failures(capsys, tmp_path):
    out_path = tmp_path / "ok.json"
    run(capsys, "validate", CORPUS / "Tc.json", "--output", out_path)
    code, _, err = run(capsys, "validate", CORPUS / "Tc.json", "--replay", out_path)
    assert code == 1 and "no failing witnesses" in err


def test_json_reports_byte_identical(capsys, mutated):
    a = run(capsys, "validate", mutated, "--format", "json", "--seed", 7, "--budget", 50)[1]
    b = run(capsys, "validate", mutated, "--format", "json", "--seed", 7, "--budget", 50)[1]
    assert a == b


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TRACKALG_BUDGET", "10")
    _, out, _ = run(capsys, "validate", CORPUS / "Tc.json", "--format", "json")
    assert json.loads(out)["config"]["budget"] == 10
    monkeypatch.setenv("TRACKALG_BUDGET", "lots")
    code, _, err = run(capsys, "validate", CORPUS / "Tc.json")
    assert code == 1 and "TRACKALG_BUDGET" in err
