import itertools

import pytest

from trackalg.algebra import enumerate_group
from trackalg.fixtures import (BUILTINS, FixtureError, TwistDatum, builtin, fixture_twisted, quadratic_generators,
                               right_linearity_witness, tc_base, tc_datum, validate)
from trackalg.freecat import check_generating, classes_of_lifts


@pytest.mark.parametrize("name", BUILTINS)
def test_builtins_validate(name):
    T, G = builtin(name)
    validate(T, G, budget=3000)


def test_unknown_builtin():
    with pytest.raises(FixtureError):
        builtin("nope")


def test_right_linearity_witness_rank_two(q2_rank2):
    T, _ = q2_rank2
    A, B, C, a, x, y = right_linearity_witness(T)
    H = T.hom(A, B).c0
    lhs = T.mu0(A, B, C, a, H.add(x, y))
    rhs = T.hom(A, C).c0.add(T.mu0(A, B, C, a, x), T.mu0(A, B, C, a, y))
    assert lhs != rhs


def test_rank_one_is_right_linear(q2):
    T, _ = q2
    H = T.hom(1, 1).c0
    for a, x, y in itertools.product(enumerate_group(H), repeat=3):
        assert T.mu0(1, 1, 1, a, H.add(x, y)) == H.add(T.mu0(1, 1, 1, a, x), T.mu0(1, 1, 1, a, y))


def test_twist_must_be_cycle_and_satisfy_equations():
    T = tc_base()
    k = ("*", "*")
    fixture_twisted(tc_datum(), check=True)
    with pytest.raises(FixtureError):
        fixture_twisted(TwistDatum(T, {k: (1,)}, {k: (1, 0)}, {k: (1, 0)}), check=True)


def test_quadratic_generators_generate(q2, q2_rank2):
    for T, _ in (q2, q2_rank2):
        E, lifts = quadratic_generators(T)
        assert check_generating(T, E, classes_of_lifts(T, E, lifts))
        for e, (m, k) in E.edges.items():
            assert T.hom(m, k).c0.contains(lifts[e])


def test_quadratic_over_z4_is_not_2_torsion():
    T, _ = builtin("quadratic", p=2, modulus=4)
    H = T.hom(1, 1).c0
    assert any(H.scale(2, g) != H.zero() for g in H.basis())
