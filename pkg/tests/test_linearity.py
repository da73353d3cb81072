import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trackalg.algebra import enumerate_group
from trackalg.laws import replaying
from trackalg.linearity import (EQUATIONS, break_sum, bracketings, canonical_gamma, canonical_system,
                                check_integer_laws, check_iterated_laws, check_torsion, gamma_int,
                                identity_system, iterated_gamma, verify_linearity, with_gamma_override)


def single_entry_mutations(T, G):
    A = T.objects[0]
    C = T.hom(A, A)
    for a in enumerate_group(C.c0):
        for x in enumerate_group(C.c0):
            for y in enumerate_group(C.c0):
                for g in C.c1.basis():
                    yield with_gamma_override(G, (A, A, A), (a, x, y), C.c1.add(G(A, A, A, a, x, y), g))


@pytest.mark.parametrize("name", ["tc", "q2", "m2"])
def test_fixture_linearity_passes(name, request):
    T, G = request.getfixturevalue(name)
    rep = verify_linearity(T, G)
    assert rep.passed, rep.summary()
    assert rep.info["equations"] == "7/7"
    assert all(r.exhaustive for r in rep.results)


def test_identity_system_depends_on_right_linearity(q2, q2_rank2):
    T, _ = q2
    assert verify_linearity(T, identity_system(T)).passed
    T2, _ = q2_rank2
    assert not verify_linearity(T2, identity_system(T2), budget=500).passed


@pytest.mark.parametrize("equation", EQUATIONS)
def test_mutation_fails_matching_equation(q2, equation):
    T, G = q2
    for G2 in single_entry_mutations(T, G):
        rep = verify_linearity(T, G2)
        bad = [r for r in rep.failures() if r.name == equation]
        if bad:
            break
    else:
        pytest.fail(f"no single-entry mutation breaks {equation}")
    assert bad[0].witness
    with replaying({equation: bad[0].to_dict()["witness"]}):
        again = verify_linearity(T, G2)
    assert not again[equation].passed and again[equation].cases == 1


def test_naturality_is_vacuous_when_all_tracks_are_loops(tc):
    T, G = tc
    C = T.hom("*", "*")
    assert all(C.d(h) == C.c0.zero() for h in C.c1.basis())
    for G2 in single_entry_mutations(T, G):
        rep = verify_linearity(T, G2)
        assert rep["Gamma naturality in x,y"].passed and rep["Gamma naturality in a"].passed


@pytest.mark.parametrize("name", ["tc", "q2", "m2"])
def test_integer_laws(name, request):
    T, G = request.getfixturevalue(name)
    rep = check_integer_laws(T, G, 3, p=2)
    assert rep.passed, rep.summary()
    assert rep["Gamma(4) = id"].passed


def test_gamma_zero_and_one(tc):
    T, G = tc
    for a in enumerate_group(T.hom("*", "*").c0):
        assert gamma_int(T, G, "*", "*", a, 0) == T.zero1("*", "*")
        assert gamma_int(T, G, "*", "*", a, 1) == T.zero1("*", "*")


def test_iterated_laws_tc(tc):
    T, G = tc
    rep = check_iterated_laws(T, G, 4)
    assert rep.passed, rep.summary()


def catalan(n):
    from math import comb
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_bracketing_count(n):
    assert len(list(bracketings(range(n)))) == catalan(n - 1)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=4), st.integers(0, 3))
def test_break_sum_independent_of_bracketing_q2(coords, ai):
    from trackalg.fixtures import builtin
    T, G = builtin("Q2")
    els = list(enumerate_group(T.hom(1, 1).c0))
    xs = [els[c] for c in coords]
    a = els[ai]
    ref = iterated_gamma(T, G, 1, 1, 1, a, xs)
    for tree in bracketings(range(len(xs))):
        assert break_sum(T, G, 1, 1, 1, a, xs, tree) == ref


def test_torsion(tc, q2):
    for T, _ in (tc, q2):
        r = check_torsion(T, 2)
        assert r.passed and r.cases > 0
    assert check_torsion(tc[0], 3).note


def test_canonical_gamma_matches_closed_form(q2_rank2):
    T, G = q2_rank2
    bp = T.model.biproduct()
    for C in (1, 2):
        for a in enumerate_group(T.hom(1, C).c0):
            assert canonical_gamma(T, bp, C, a).multiplicity == 1
    Gc = canonical_system(T, {1: bp})
    for A in (1, 2):
        for C in (1, 2):
            for a in enumerate_group(T.hom(1, C).c0):
                for x in enumerate_group(T.hom(A, 1).c0):
                    for y in list(enumerate_group(T.hom(A, 1).c0))[:4]:
                        assert Gc(A, 1, C, a, x, y) == G(A, 1, C, a, x, y)
