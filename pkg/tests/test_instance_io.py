import json
from importlib import resources
from pathlib import Path

import pytest

from trackalg.fixtures import BUILTINS, FixtureError, corpus_instance, fixture_load
from trackalg.instance_io import (FormatError, SchemaViolation, dumps, instance_doc, load_instance,
                                  parse_instance, save_instance, schema)

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ("Tc", "M2", "Q2")


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_files_are_canonical_and_packaged(name):
    text = (ROOT / "corpus" / f"{name}.json").read_text()
    assert dumps(instance_doc(corpus_instance(name))) == text
    packaged = resources.files("trackalg").joinpath("corpus", f"{name}.json").read_text()
    assert packaged == text


@pytest.mark.parametrize("name", BUILTINS)
def test_save_load_roundtrip_is_byte_identical(name, tmp_path):
    text = save_instance(corpus_instance(name), tmp_path / "a.json")
    inst = load_instance(tmp_path / "a.json")
    assert save_instance(inst, tmp_path / "b.json") == text


def test_loaded_instance_agrees_with_builtin(tmp_path):
    orig = corpus_instance("M2")
    save_instance(orig, tmp_path / "m2.json")
    inst = fixture_load(tmp_path / "m2.json")
    T, U = orig.T, inst.T
    for A, B, C in T.triples():
        for x in T.hom(B, C).c0.basis():
            for y in T.hom(A, B).c0.basis():
                assert U.mu0(A, B, C, x, y) == T.mu0(A, B, C, x, y)
    assert inst.named == orig.named


def doc(name="M2"):
    return json.loads(dumps(instance_doc(corpus_instance(name))))


def test_malformed_d_names_entry():
    d = doc()
    d["homs"][0]["d"] = [[1]]
    with pytest.raises(FormatError, match=r"homs\[0\] \(\* -> \*\)"):
        parse_instance(d)


def test_schema_violations():
    for mutate in (lambda d: d.pop("version"), lambda d: d.update(extra=1),
                   lambda d: d["composition"].update(kind="magic"),
                   lambda d: d["named"][0].update(name="a,b"), lambda d: d.pop("lift")):
        d = doc()
        mutate(d)
        with pytest.raises(SchemaViolation):
            parse_instance(d)


def test_bad_named_and_lift_values():
    d = doc()
    d["named"][0]["value"] = [1, 0]
    with pytest.raises(FormatError, match="named element"):
        parse_instance(d)
    d = doc()
    d["lift"] = []
    with pytest.raises(FormatError, match="no lift"):
        parse_instance(d)


def test_fixture_load_rejects_invalid_instance(tmp_path):
    d = doc()
    d["composition"]["mu0"][0]["table"][1][1] = [1, 0, 0]
    (tmp_path / "bad.json").write_text(json.dumps(d))
    with pytest.raises(FixtureError, match="failed validation"):
        fixture_load(tmp_path / "bad.json")


def test_format_doc_embeds_schema():
    text = (ROOT / "docs" / "format.md").read_text()
    block = text.split("## Schema")[1].split("```json")[1].split("```")[0]
    assert json.loads(block) == schema()


def test_unreadable_and_invalid_json(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_instance(tmp_path / "missing.json")
    (tmp_path / "x.json").write_text("{")
    with pytest.raises(FormatError, match="not valid JSON"):
        load_instance(tmp_path / "x.json")
