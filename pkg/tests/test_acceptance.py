"""The nine acceptance criteria, one test each; a summary line per criterion
is printed at the end of the run."""

import itertools
import json
import random
import time
from pathlib import Path

import pytest

from trackalg.algebra import enumerate_group
from trackalg.brackets import problem_from_elements, random_problems, toda_bracket, massey_product, transfer_check
from trackalg.cli import main
from trackalg.fixtures import builtin, corpus_instance, quadratic_generators, two_object_dg
from trackalg.groupoid import Track, automorphisms_of_zero, denormalize, moore, pi0_by_reachability
from trackalg.laws import replaying
from trackalg.linearity import (EQUATIONS, check_integer_laws, check_iterated_laws, verify_linearity,
                                with_gamma_override)
from trackalg.pseudo import build_pseudo_integral, build_pseudo_padic, check_coherence, construction_probes
from trackalg.strictify import (FiniteDG, build_B, dg_laws, dk_view, factorization_check, functor_strictness,
                                g_tilde, q_tilde, relax)
from trackalg.trackcat import Cell, pointwise_compose

from conftest import ACCEPTANCE, random_complex

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def record(request):
    n = request.node.get_closest_marker("criterion").args[0]
    notes = []
    start = time.perf_counter()
    ACCEPTANCE[n] = (False, "did not finish")
    yield notes.append
    secs = time.perf_counter() - start
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else False
    ACCEPTANCE[n] = (not failed, "; ".join(notes + [f"{secs:.1f}s"]))


@pytest.mark.criterion(1)
def test_moore_denorm_roundtrip(record):
    rng = random.Random(2024)
    start = time.perf_counter()
    for _ in range(200):
        C = random_complex(rng, 64)
        G = denormalize(C)
        D = moore(G)
        assert (D.c1.orders, D.c0.orders, D.d.matrix) == (C.c1.orders, C.c0.orders, C.d.matrix)
        H0, H1 = G.pi()
        assert pi0_by_reachability(G) == H0.order
        assert len(automorphisms_of_zero(G)) == H1.order
    secs = time.perf_counter() - start
    assert secs < 10
    record("200 complexes round-trip; pi_0, pi_1 match by enumeration")


def all_tracks(T, A, B):
    C = T.hom(A, B)
    return [Cell.tr(A, B, m, b) for m in enumerate_group(C.c1) for b in enumerate_group(C.c0)]


@pytest.mark.criterion(2)
def test_track_calculus(record):
    rng = random.Random(2024)
    for _ in range(200):
        C = random_complex(rng, 64)
        G = denormalize(C)
        tracks = list(G.tracks())[:24]
        for a, b in itertools.product(tracks, repeat=2):
            if G.target(b) == G.source(a):
                assert G.compose(a, b) == Track(C.c1.add(a.moore, b.moore), a.base)
        for a in tracks:
            assert G.invert(a) == Track(C.c1.neg(a.moore), G.source(a))
    pairs = 0
    for name in ("Tc", "M2", "Q2"):
        T, _ = builtin(name)
        for A, B in T.pairs():
            G = denormalize(T.hom(A, B))
            tracks = list(G.tracks())
            for a in tracks:
                inv = G.invert(a)
                assert G.compose(inv, a) == G.identity(G.source(a))
                assert G.compose(a, inv) == G.identity(G.target(a))
            for a, b, c in itertools.product(tracks, repeat=3):
                if G.target(c) == G.source(b) and G.target(b) == G.source(a):
                    assert G.compose(G.compose(a, b), c) == G.compose(a, G.compose(b, c))
        for A, B, C in T.triples():
            for a in all_tracks(T, B, C):
                for b in all_tracks(T, A, B):
                    pointwise_compose(T, a, b)  # raises if the two factorizations differ
                    pairs += 1
    record(f"{pairs} pointwise composites agree")


@pytest.mark.criterion(3)
def test_linearity_suite(record):
    for T, G in (builtin("Tc"), builtin("Q2")):
        rep = verify_linearity(T, G)
        assert rep.passed and all(r.exhaustive for r in rep.results), rep.summary()
    T2, G2 = builtin("Q2", max_rank=2)
    rep = verify_linearity(T2, G2, budget=10_000)
    assert rep.passed and all(r.cases >= 10_000 for r in rep.results), rep.summary()
    T, G = builtin("Q2")
    C = T.hom(1, 1)
    caught = set()
    for a, x, y in itertools.product(enumerate_group(C.c0), repeat=3):
        if caught == set(EQUATIONS):
            break
        bad = with_gamma_override(G, (1, 1, 1), (a, x, y), C.c1.add(G(1, 1, 1, a, x, y), C.c1.basis()[0]))
        for r in verify_linearity(T, bad).failures():
            if r.name in EQUATIONS and r.name not in caught:
                assert r.witness
                with replaying({r.name: r.to_dict()["witness"]}):
                    assert not verify_linearity(T, bad)[r.name].passed
                caught.add(r.name)
    assert caught == set(EQUATIONS)
    record("Tc, Q(2) rank 1 exhaustive; rank 2 sampled 10^4; 7/7 mutations caught")


@pytest.mark.criterion(4)
def test_iterated_laws(record):
    T, G = builtin("Tc")
    it = check_iterated_laws(T, G, 4)
    assert it.passed, it.summary()
    ints = check_integer_laws(T, G, 3, p=2)
    assert ints.passed, ints.summary()
    assert {"Gamma(mn)", "Gamma(-m)", "Gamma(m+n)", "Gamma(4) = id"} <= {r.name for r in ints.results}
    record("break-sum n<=4; Gamma(mn), Gamma(-m), Gamma(m+n), Gamma(4) = id")


@pytest.mark.criterion(5)
def test_pseudo_functor_tc(record):
    start = time.perf_counter()
    inst = corpus_instance("Tc")
    P = build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, 2)
    coh = check_coherence(P, 3, budget=10**7)
    assert coh.passed and all(r.exhaustive for r in coh.results), coh.summary()
    probes = construction_probes(P, 3)
    assert probes.passed, probes.summary()
    assert time.perf_counter() - start < 60
    record(f"{coh['associativity (pasting)'].cases} pasting cases, exhaustive")


@pytest.mark.criterion(6)
def test_build_B(record):
    notes = []
    for name in ("Tc", "Q2"):
        inst = corpus_instance(name)
        P = build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, 2)
        V, sv, laws = build_B(P, 2, 1)
        assert laws.passed, laws.summary()
        assert laws["right linearity alpha (y + y')"].passed
        assert sv.equivalence, sv.reasons
        for d in sv.details.values():
            assert d["H1_iso"] and d["H0_surjective"] and d["H0_injective"]
        notes.append(name)
    T, G = builtin("quadratic", p=2, modulus=4)
    E, lift = quadratic_generators(T)
    PI = build_pseudo_integral(E, lift, T, G)
    V, sv, laws = build_B(PI, 2, 1)
    assert laws.passed and sv.equivalence
    record(f"B over {', '.join(notes)} and integrally over {T.name}")


@pytest.mark.criterion(7)
def test_relaxation_two_objects(record):
    T, _ = two_object_dg()
    R, _, _ = relax(T, 3)
    q0, q1 = q_tilde(R)
    v = dk_view(R, q0, q1, T, 3, 2, "Q~")
    assert v.equivalence, v.reasons
    fac = factorization_check(R, 3, 2)
    assert fac.passed, fac.summary()
    F0, _ = g_tilde(R)
    strict = functor_strictness(R, F0, T, 3, 2, name="G~")
    assert strict.passed and strict.exhaustive
    laws = dg_laws(R, 2, 1)
    assert laws.passed, laws.summary()
    record(f"Q~ equivalence, G~ P~ = F, G~ strict on {strict.cases} pairs at word bound 3")


@pytest.mark.criterion(8)
def test_brackets(record):
    start = time.perf_counter()
    inst = corpus_instance("M2")
    T = inst.T
    p = problem_from_elements(T, ("*",) * 4, [(0, 1, 0)] * 3)
    toda = toda_bracket(T, p)
    massey = massey_product(FiniteDG(T), p)
    assert toda.elements and set(toda.elements) == set(massey.elements)
    P = build_pseudo_padic(inst.graph, inst.lift, T, inst.G, 2)
    tr = transfer_check(P, p, 2, 2)
    assert tr.identity_ok and tr.equality_ok
    rng = random.Random(8)
    checked = 0
    for name, share in (("M2", 40), ("Tc", 40), ("Q2", 20)):
        ci = corpus_instance(name)
        Pi = build_pseudo_padic(ci.graph, ci.lift, ci.T, ci.G, 2)
        for prob in random_problems(ci.T, share, rng):
            r = transfer_check(Pi, prob, 1, 2, iso=True)
            assert r.inclusion_ok and r.identity_ok, r.to_dict()
            checked += 1
    assert checked == 100
    assert time.perf_counter() - start < 120
    record(f"M2 <x,x,x> = {sorted(toda.elements)}; inclusion on {checked} random problems")


@pytest.mark.criterion(9)
def test_cli(record, capsys, tmp_path):
    c = ROOT / "corpus"
    code = main(["validate", str(c / "Tc.json")])
    out = capsys.readouterr().out
    assert code == 0 and "7/7 linearity equations passed" in out
    code = main(["brackets", str(c / "M2.json"), "--classes", "x,x,x"])
    out = capsys.readouterr().out
    assert code == 0 and "witness" in out
    rep = tmp_path / "q2.json"
    code = main(["strictify", str(c / "Q2.json"), "--ring", "zpp", "--word-bound", "2", "--output", str(rep)])
    capsys.readouterr()
    assert code == 0
    verdicts = json.loads(rep.read_text())["sections"]["dossier"]["verdicts"]
    assert verdicts["Q~"]["equivalence"] and verdicts["G~"]["equivalence"]
    assert main(["nope"]) == 1
    assert main(["validate", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()
    runs = []
    for _ in range(2):
        for cmd in (["linearity", str(c / "Q2.json")], ["brackets", str(c / "M2.json"), "--classes", "x,x,x"],
                    ["strictify", str(c / "Tc.json"), "--word-bound", "1"]):
            main(cmd + ["--seed", "11", "--budget", "300", "--format", "json"])
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1] and runs[0]
    record("identical seeds give byte-identical reports; CLI examples exit 0")
