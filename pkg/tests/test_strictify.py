import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trackalg.fixtures import builtin, corpus_instance, two_object_dg
from trackalg.pseudo import build_pseudo_padic
from trackalg.strictify import (FiniteDG, StrictifyError, build_B, dg_laws, dk_view, factorization_check,
                                functor_strictness, g_tilde, q_tilde, relax, sigma_verdict, strictify_pipeline)


@pytest.fixture(scope="module")
def relax2():
    T, _ = two_object_dg()
    R, Q, P = relax(T, 2)
    for X in T.objects:
        for Y in T.objects:
            R.morphisms(X, Y, 2, 1)  # intern every letter before anything depends on the order
    return T, R


@pytest.mark.parametrize("name", ["M2", "Tc", "two-object"])
def test_finite_dg_laws(name):
    T, _ = builtin(name)
    rep = dg_laws(FiniteDG(T), 0, 0)
    assert rep.passed, rep.summary()


def test_build_B_tc():
    inst = corpus_instance("Tc")
    P = build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, 2)
    V, sv, laws = build_B(P, 2, 1)
    assert laws.passed, laws.summary()
    assert "right linearity alpha (y + y')" in [r.name for r in laws.results]
    assert sv.equivalence, sv.reasons


def test_sigma_on_finite_view_is_identity(m2):
    T, _ = m2
    assert sigma_verdict(FiniteDG(T), 0, 0).equivalence


def test_relax_requires_bilinear(q2_rank2):
    T, _ = q2_rank2
    with pytest.raises(StrictifyError):
        relax(T, 1, budget=1000)


def test_relaxation_q_tilde_and_factorization(relax2):
    T, R = relax2
    q0, q1 = q_tilde(R)
    v = dk_view(R, q0, q1, T, 2, 1, "Q~")
    assert v.equivalence, v.reasons
    assert factorization_check(R, 2, 1).passed
    assert dg_laws(R, 1, 1, budget=3000).passed


def test_g_tilde_strict_on_bilinear(relax2):
    T, R = relax2
    F0, _ = g_tilde(R)
    assert functor_strictness(R, F0, T, 2, 1, name="G~").passed


objs = st.sampled_from([0, 1])


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_relaxation_composition_associative_and_unital(relax2, data):
    _, R = relax2
    homs = {(X, Y): R.morphisms(X, Y, 1, 1) or [R.zero0(X, Y)] for X in (0, 1) for Y in (0, 1)}
    A, B, C, D = (data.draw(objs) for _ in range(4))
    pick = lambda X, Y: data.draw(st.sampled_from(homs[X, Y]))  # noqa: E731
    x, y, z = pick(C, D), pick(B, C), pick(A, B)
    assert R.compose0(A, C, D, x, R.compose0(A, B, C, y, z)) == R.compose0(A, B, D, R.compose0(B, C, D, x, y), z)
    assert R.compose0(A, B, B, R.unit0(B), z) == z
    assert R.add0(A, B, z, R.scale0(A, B, -1, z)) == R.zero0(A, B)
    assert R.Q(A, D, R.compose0(A, B, D, R.compose0(B, C, D, x, y), z)) == R.S.compose0(
        A, B, D, R.Q(B, D, R.compose0(B, C, D, x, y)), R.Q(A, B, z))


def test_pipeline_tc_dossier():
    inst = corpus_instance("Tc")
    d = strictify_pipeline(inst.T, inst.G, inst.graph, inst.lift, "zpp", 2, 1, budget=3000)
    assert d.passed, d.summary()
    assert {"sigma", "Q~", "G~"} <= set(d.verdicts)
    a = json.dumps(d.to_dict(), sort_keys=True)
    d2 = strictify_pipeline(inst.T, inst.G, inst.graph, inst.lift, "zpp", 2, 1, budget=3000)
    assert a == json.dumps(d2.to_dict(), sort_keys=True)


def test_g_tilde_not_strict_over_non_right_linear_target(q2_rank2):
    from trackalg.fixtures import quadratic_generators
    T, G = q2_rank2
    E, lift = quadratic_generators(T)
    d = strictify_pipeline(T, G, E, lift, "zpp", 2, 1, budget=2000)
    assert d.passed
    strict = d.verdicts["G~ (strict)"]
    assert not strict.equivalence and strict.reasons
    assert d.findings
