import pytest

from trackalg.algebra import enumerate_group
from trackalg.trackcat import (Cell, HomotopyCategory, InstanceError, axiom_check, dk_compare,
                               identity_functor, otimes, pointwise_compose, tabulate, with_lwhisk_override)


def all_tracks(T, A, B):
    C = T.hom(A, B)
    return [Cell.tr(A, B, m, b) for m in enumerate_group(C.c1) for b in enumerate_group(C.c0)]


@pytest.mark.parametrize("name", ["tc", "m2", "q2"])
def test_fixtures_satisfy_axioms(name, request):
    T, _ = request.getfixturevalue(name)
    rep = axiom_check(T)
    assert rep.passed, rep.summary()


def test_rank_two_quadratic_is_not_right_linear(q2_rank2):
    T, _ = q2_rank2
    rep = axiom_check(T, budget=1500)
    assert rep.passed
    probe = rep["right linearity"]
    assert probe.probe and not probe.passed and probe.witness


def test_pointwise_composition_factorizations_agree(tc):
    T, _ = tc
    for A, B, C in T.triples():
        for a in all_tracks(T, B, C):
            for b in all_tracks(T, A, B):
                ab = pointwise_compose(T, a, b)
                assert ab.src == A and ab.tgt == C


def test_otimes_rejects_two_tracks(tc):
    T, _ = tc
    a = all_tracks(T, "*", "*")[0]
    with pytest.raises(InstanceError):
        otimes(T, a, a)


def test_lwhisk_mutation_is_detected(tc):
    T, _ = tc
    C = T.hom("*", "*")
    h = C.c1.basis()[0]
    x, b = (0, 1), (0, 0)
    bad = with_lwhisk_override(T, ("*", "*", "*"), (x, h, b), C.c1.add(T.lwhisk("*", "*", "*", x, h, b), h))
    rep = axiom_check(bad)
    assert not rep.passed
    assert all(r.witness is not None for r in rep.failures())


def test_tabulate_is_identical(m2):
    T, _ = m2
    U = tabulate(T)
    for A, B, C in T.triples():
        for x in enumerate_group(T.hom(B, C).c0):
            for y in enumerate_group(T.hom(A, B).c0):
                assert U.mu0(A, B, C, x, y) == T.mu0(A, B, C, x, y)
    assert axiom_check(U).passed


def test_homotopy_category(tc, m2):
    for T, _ in (tc, m2):
        hc = HomotopyCategory(T)
        assert hc.is_bilinear()
        assert all(hc.isomorphic(A, A) for A in T.objects)


def test_identity_functor_is_dk_equivalence(q2):
    T, _ = q2
    v = dk_compare(identity_functor(T))
    assert v.equivalence and not v.reasons
