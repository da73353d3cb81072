import itertools
import random

import pytest

from trackalg.algebra import enumerate_group
from trackalg.brackets import (BracketError, make_problem, massey_product, problem_from_elements,
                               random_problems, toda_bracket, transfer_check)
from trackalg.fixtures import corpus_instance
from trackalg.pseudo import build_pseudo_padic
from trackalg.strictify import FiniteDG

STAR4 = ("*",) * 4


def brute_toda(T, p):
    """Every representative and every null-track, found by scanning whole groups."""
    Y3, Y2, Y1, Y0 = p.objects
    fib = [[x for x in enumerate_group(T.hom(A, B).c0) if T.h0_class(A, B, x) == y]
           for (A, B), y in zip(p.homs(), p.classes)]
    H = T.homology(Y3, Y0)
    out = set()
    for x1, x2, x3 in itertools.product(*fib):
        t12, t23 = T.mu0(Y2, Y1, Y0, x1, x2), T.mu0(Y3, Y2, Y1, x2, x3)
        for a in enumerate_group(T.hom(Y2, Y0).c1):
            if T.d(Y2, Y0, a) != t12:
                continue
            for b in enumerate_group(T.hom(Y3, Y1).c1):
                if T.d(Y3, Y1, b) != t23:
                    continue
                K1 = T.hom(Y3, Y0).c1
                v = K1.sub(T.rwhisk(Y3, Y2, Y0, a, x3), T.lwhisk(Y3, Y1, Y0, x1, b, T.zero0(Y3, Y1)))
                out.add(H.cycle_coords(v))
    return out


@pytest.fixture(scope="module")
def m2_inst():
    return corpus_instance("M2")


def test_toda_equals_massey_on_m2(m2_inst):
    T = m2_inst.T
    p = problem_from_elements(T, STAR4, [(0, 1, 0)] * 3)
    toda = toda_bracket(T, p)
    massey = massey_product(FiniteDG(T), p)
    assert set(toda.elements) == set(massey.elements) == {(1,)}
    assert toda.is_coset


def test_toda_matches_brute_force(m2_inst, tc):
    for T in (m2_inst.T, tc[0]):
        for p in random_problems(T, 8, random.Random(1)):
            assert set(toda_bracket(T, p).elements) == brute_toda(T, p)


def test_vanishing_conditions_enforced(m2_inst):
    T = m2_inst.T
    with pytest.raises(BracketError):
        problem_from_elements(T, STAR4, [(1, 0, 0), (0, 1, 0), (0, 1, 0)])
    with pytest.raises(BracketError):
        make_problem(T, STAR4, [(1, 0), (0,)])


def test_transfer_m2(m2_inst):
    inst = m2_inst
    P = build_pseudo_padic(inst.graph, inst.lift, inst.T, inst.G, 2)
    p = problem_from_elements(inst.T, STAR4, [(0, 1, 0)] * 3)
    rep = transfer_check(P, p, 1, 2)
    assert rep.passed and rep.identity_ok and rep.inclusion_ok and rep.equality_ok
    assert set(rep.target.elements) == set(rep.source.elements)


def test_bracket_report_serializes(m2_inst):
    T = m2_inst.T
    b = toda_bracket(T, problem_from_elements(T, STAR4, [(0, 1, 0)] * 3))
    d = b.to_dict()
    assert d["bracket"][0]["class"] == [1]
    assert "witness" in d["bracket"][0]
    assert "indeterminacy order 1" in b.summary()
