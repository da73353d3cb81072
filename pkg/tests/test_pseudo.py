import pytest

from trackalg.fixtures import builtin, corpus_instance, quadratic_generators
from trackalg.freecat import Graph
from trackalg.pseudo import (PreconditionError, bounded_morphisms, build_pseudo_integral, build_pseudo_padic,
                             check_coherence, conditions_report, construction_probes, uniqueness_probe,
                             with_gammac_override)


@pytest.fixture(scope="module")
def p_tc():
    inst = corpus_instance("Tc")
    return build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, 2)


@pytest.fixture(scope="module")
def p_int():
    T, G = builtin("quadratic", p=2, modulus=4)
    E, lift = quadratic_generators(T)
    return build_pseudo_integral(E, lift, T, G)


def test_coherence_tc(p_tc):
    rep = check_coherence(p_tc, 2)
    assert rep.passed, rep.summary()


def test_probes_and_conditions_tc(p_tc):
    assert construction_probes(p_tc, 2).passed
    assert conditions_report(p_tc, 2).passed


def test_s_is_locally_linear(p_tc):
    T = p_tc.T
    xs = bounded_morphisms(p_tc, "*", "*", 2, 1)
    H = T.hom("*", "*").c0
    for x in xs:
        for y in xs:
            assert p_tc.s(x + y) == H.add(p_tc.s(x), p_tc.s(y))


def test_boundary_of_gammac(p_tc):
    xs = bounded_morphisms(p_tc, "*", "*", 2, 1)
    assert all(p_tc.boundary_ok(x, y) for x in xs for y in xs)


def test_mutated_gammac_fails_coherence(p_tc):
    B0, T = p_tc.B0, p_tc.T
    x = B0.edge("x")
    y = B0.edge("x") + B0.word(["x", "x"])
    g = T.hom("*", "*").c1.basis()[0]
    bad = with_gammac_override(p_tc, x, y, T.hom("*", "*").c1.add(p_tc.gammac(x, y), g))
    rep = check_coherence(bad, 2)
    assert not rep.passed
    assert rep.failures()[0].witness


def test_uniqueness_probe(p_tc):
    assert uniqueness_probe(p_tc, p_tc, 2, 1).equal
    B0, T = p_tc.B0, p_tc.T
    x = B0.edge("x")
    g = T.hom("*", "*").c1.basis()[0]
    bad = with_gammac_override(p_tc, x, x, T.hom("*", "*").c1.add(p_tc.gammac(x, x), g))
    v = uniqueness_probe(p_tc, bad, 2, 1, require_conditions=False)
    assert not v.equal and v.divergence


def test_padic_requires_torsion():
    T, G = builtin("quadratic", p=2, modulus=4)
    E, lift = quadratic_generators(T)
    with pytest.raises(PreconditionError):
        build_pseudo_padic(E, lift, T, G, 2)


def test_lift_must_generate(tc):
    T, G = tc
    E = Graph(("*",), {"x": ("*", "*")})
    with pytest.raises(PreconditionError):
        build_pseudo_padic(E, {"x": (0, 0)}, T, G, 2)


def test_integral_variant(p_int):
    rep = check_coherence(p_int, 1)
    assert rep.passed, rep.summary()
    assert construction_probes(p_int, 1).passed
