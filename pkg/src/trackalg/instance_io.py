"""Instance files: JSON load/save with schema validation.

The format is documented in ``docs/format.md``; the schema ships as
``schema.json`` next to this module.  ``dumps`` is canonical, so a file
written by :func:`save_instance` reloads and re-saves byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .algebra import Ring, TruncComplex1
from .freecat import Graph
from .linearity import LinearitySystem, identity_system, table_system
from .trackcat import InstanceError, TrackCategory, bilinear_instance, table_instance

FORMAT = "trackalg/instance"
VERSION = 1


class FormatError(ValueError):
    """Malformed or inconsistent content, naming the offending entry."""


class SchemaViolation(FormatError):
    pass


@dataclass
class Instance:
    T: TrackCategory
    G: LinearitySystem | None = None
    named: dict = field(default_factory=dict)  # name -> (A, B, value)
    graph: Graph | None = None
    lift: dict | None = None
    presentation: dict | None = None
    pipeline: dict = field(default_factory=dict)


def schema() -> dict:
    return json.loads(resources.files("trackalg").joinpath("schema.json").read_text())


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (list, dict)) or (isinstance(x, list) and _flat(x)) for x in v)
    return not isinstance(v, dict)


def _dump(v, indent: int) -> str:
    if _flat(v):
        return json.dumps(v, ensure_ascii=False, separators=(", ", ": "))
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(v, dict):
        items = [f"{inner}{json.dumps(k)}: {_dump(x, indent + 2)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    return "[\n" + ",\n".join(inner + _dump(x, indent + 2) for x in v) + "\n" + pad + "]"


def dumps(doc: dict) -> str:
    """Canonical text: two-space indentation, numeric arrays kept on one line."""
    return _dump(doc, 0) + "\n"


def _validate(doc):
    try:
        jsonschema.validate(doc, schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaViolation(f"at {where}: {e.message}") from None


# ---------------------------------------------------------------------------
# reading


def _tuple(v):
    return tuple(int(a) for a in v)


def _complexes(doc, ring) -> dict:
    homs = {}
    for i, h in enumerate(doc["homs"]):
        where = f"homs[{i}] ({h['source']} -> {h['target']})"
        c1, c0, d = h["c1"], h["c0"], h["d"]
        if len(d) != len(c0) or any(len(r) != len(c1) for r in d):
            raise FormatError(f"{where}: differential matrix must be {len(c0)} x {len(c1)}")
        try:
            homs[h["source"], h["target"]] = TruncComplex1.from_matrix(c1, c0, d, ring)
        except (ValueError, ArithmeticError) as e:
            raise FormatError(f"{where}: {e}") from None
    return homs


def _build_T(doc) -> TrackCategory:
    comp = doc["composition"]
    name = doc.get("name", "")
    if comp["kind"] == "rule":
        from .fixtures import fixture_quadratic
        if comp["rule"] != "quadratic":
            raise FormatError(f"composition: unknown rule {comp['rule']!r}")
        p = comp.get("params", {})
        T, _ = fixture_quadratic(int(p.get("p", 2)), int(p.get("max_rank", 1)), p.get("modulus"), name or None)
        return T
    if "homs" not in doc or "units" not in doc:
        raise FormatError("table-based instances need 'homs' and 'units'")
    ring = Ring.modular(doc["modulus"]) if doc["modulus"] else Ring.integers()
    objects = doc["objects"]
    homs = _complexes(doc, ring)
    for A in objects:
        for B in objects:
            if (A, B) not in homs:
                raise FormatError(f"homs: missing entry for ({A}, {B})")
    units = {u["object"]: _tuple(u["value"]) for u in doc["units"]}
    desc = {"file": True}
    try:
        if comp["kind"] == "bilinear":
            tabs = []
            for key in ("mu0", "rwhisk", "lwhisk"):
                tabs.append({tuple(e["objects"]): [[_tuple(v) for v in row] for row in e["table"]]
                             for e in comp[key]})
            return bilinear_instance(objects, homs, units, *tabs, name, desc)
        tabs = []
        for key, n in (("mu0", 2), ("rwhisk", 2), ("lwhisk", 3)):
            tabs.append({tuple(e["objects"]): {tuple(_tuple(a) for a in row[:n]): _tuple(row[n])
                                                for row in e["entries"]}
                         for e in comp[key]})
        return table_instance(objects, homs, units, *tabs, name, desc)
    except InstanceError as e:
        raise FormatError(f"composition: {e}") from None


def _build_G(doc, T) -> LinearitySystem | None:
    lin = doc.get("linearity")
    if lin is None:
        return None
    kind = lin["kind"]
    if kind == "identity":
        return identity_system(T)
    if kind == "rule":
        if lin["rule"] != "quadratic" or getattr(T, "model", None) is None:
            raise FormatError("linearity: the quadratic rule needs a quadratic composition")
        return LinearitySystem(T, T.model.gamma, "quadratic", {"rule": "quadratic"})
    if kind == "twisted":
        from .fixtures import TwistDatum, fixture_twisted

        def part(key):
            return {tuple(e["objects"]): _tuple(e["value"]) for e in lin[key]}

        datum = TwistDatum(T, part("t"), part("eps"), part("kappa"))
        _, G = fixture_twisted(datum, doc.get("name", "twisted"), check=False)
        return G
    table = {tuple(e["objects"]): {tuple(_tuple(a) for a in row[:3]): _tuple(row[3]) for row in e["entries"]}
             for e in lin["entries"]}
    return table_system(T, table, "table")


def parse_instance(doc: dict) -> Instance:
    _validate(doc)
    if doc["format"] != FORMAT or doc["version"] != VERSION:
        raise FormatError(f"unsupported format {doc['format']!r} version {doc['version']}")
    T = _build_T(doc)
    G = _build_G(doc, T)
    objs = set(T.objects)
    named = {}
    for e in doc.get("named", []):
        A, B = e["source"], e["target"]
        if A not in objs or B not in objs:
            raise FormatError(f"named element {e['name']!r}: unknown object")
        v = _tuple(e["value"])
        if not T.hom(A, B).c0.contains(v):
            raise FormatError(f"named element {e['name']!r}: {list(v)} is not a 0-cell of ({A}, {B})")
        named[e["name"]] = (A, B, v)
    T.named = named
    graph = lift = None
    if "graph" in doc:
        g = doc["graph"]
        graph = Graph(tuple(g["vertices"]), {e["name"]: (e["source"], e["target"]) for e in g["edges"]})
        lift = {e["edge"]: _tuple(e["value"]) for e in doc.get("lift", [])}
        for name, (A, B) in graph.edges.items():
            if name not in lift:
                raise FormatError(f"lift: edge {name!r} has no lift")
            if not T.hom(A, B).c0.contains(lift[name]):
                raise FormatError(f"lift: value for edge {name!r} is not a 0-cell of ({A}, {B})")
    return Instance(T, G, named, graph, lift, doc.get("algebra_presentation"), doc.get("pipeline", {}))


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FileNotFoundError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON ({e.msg} at line {e.lineno})") from None


def load_instance(path) -> Instance:
    return parse_instance(read_json(path))


# ---------------------------------------------------------------------------
# writing


def _homs_doc(T: TrackCategory) -> list:
    out = []
    for A in T.objects:
        for B in T.objects:
            C = T.hom(A, B)
            out.append({"source": A, "target": B, "c1": list(C.c1.orders), "c0": list(C.c0.orders),
                        "d": [list(r) for r in C.d.matrix]})
    return out


def instance_doc(inst: Instance) -> dict:
    T, G = inst.T, inst.G
    doc: dict = {"format": FORMAT, "version": VERSION, "name": T.name, "objects": list(T.objects)}
    model = getattr(T, "model", None)
    if model is not None:
        d = T.description or {}
        doc["modulus"] = model.n
        doc["composition"] = {"kind": "rule", "rule": "quadratic",
                              "params": {"p": d.get("p", model.n), "max_rank": model.max_rank, "modulus": model.n}}
    else:
        ring = T.hom(T.objects[0], T.objects[0]).ring
        doc["modulus"] = ring.modulus or 0
        doc["homs"] = _homs_doc(T)
        doc["units"] = [{"object": A, "value": list(T.unit(A))} for A in T.objects]
        if getattr(T, "structure", None) is not None:
            comp = {"kind": "bilinear"}
            for key in ("mu0", "rwhisk", "lwhisk"):
                comp[key] = [{"objects": list(k), "table": [[list(v) for v in row] for row in tab]}
                             for k, tab in T.structure[key].items()]
        elif getattr(T, "tables", None) is not None:
            comp = {"kind": "tables"}
            for key in ("mu0", "rwhisk", "lwhisk"):
                comp[key] = [{"objects": list(k), "entries": [[list(a) for a in args] + [list(v)]
                                                              for args, v in sorted(tab.items())]}
                             for k, tab in T.tables[key].items()]
        else:
            raise FormatError(f"{T.name}: only bilinear, table or rule instances can be saved")
        doc["composition"] = comp
    if G is not None:
        datum = getattr(G, "datum", None)
        rule = (G.description or {}).get("rule")
        if datum is not None:
            def part(d):
                return [{"objects": list(k), "value": list(v)} for k, v in d.items()]
            doc["linearity"] = {"kind": "twisted", "t": part(datum.t), "eps": part(datum.eps),
                                "kappa": part(datum.kappa)}
        elif rule == "identity":
            doc["linearity"] = {"kind": "identity"}
        elif rule == "quadratic":
            doc["linearity"] = {"kind": "rule", "rule": "quadratic"}
        else:
            from .trackcat import iter_hom0
            entries = []
            for A, B, C in T.triples():
                rows = []
                for a in iter_hom0(T, B, C):
                    for x in iter_hom0(T, A, B):
                        for y in iter_hom0(T, A, B):
                            rows.append([list(a), list(x), list(y), list(G(A, B, C, a, x, y))])
                entries.append({"objects": [A, B, C], "entries": rows})
            doc["linearity"] = {"kind": "tables", "entries": entries}
    if inst.named:
        doc["named"] = [{"name": n, "source": A, "target": B, "value": list(v)}
                        for n, (A, B, v) in inst.named.items()]
    if inst.graph is not None:
        doc["graph"] = {"vertices": list(inst.graph.vertices),
                        "edges": [{"name": e, "source": A, "target": B} for e, (A, B) in inst.graph.edges.items()]}
        doc["lift"] = [{"edge": e, "value": list(v)} for e, v in inst.lift.items()]
    if inst.presentation is not None:
        doc["algebra_presentation"] = inst.presentation
    if inst.pipeline:
        doc["pipeline"] = inst.pipeline
    return doc


def save_instance(inst: Instance, path) -> str:
    text = dumps(instance_doc(inst))
    Path(path).write_text(text)
    return text
