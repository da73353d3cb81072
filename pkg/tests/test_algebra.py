import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trackalg.algebra import (AbHom, FinAbGroup, Ring, cokernel, enumerate_group, homology,
                              image_elements, integer_kernel, kernel, matmul, smith_normal_form, solve_integer,
                              solve_preimage)

from conftest import complexes

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_smith_form_factorizes(M):
    S = smith_normal_form(M)
    D = matmul(matmul(S.U, M), S.V)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (S.diagonal[i] if i == j else 0)
    assert matmul(S.U, S.Uinv) == [[int(i == j) for j in range(len(M))] for i in range(len(M))]
    nz = [v for v in S.diagonal if v]
    assert all(v > 0 for v in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_smith_form_known_value():
    S = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert S.diagonal[:3] == [2, 6, 12]


@given(matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_integer_solutions_check(M, x):
    cols = len(M[0])
    y = [sum(a * b for a, b in zip(row, x[:cols])) for row in M]
    sol = solve_integer(M, cols, y)
    assert sol is not None
    assert [sum(a * b for a, b in zip(row, sol)) for row in M] == y
    for k in integer_kernel(M, cols):
        assert all(sum(a * b for a, b in zip(row, k)) == 0 for row in M)


def test_ring_reduce():
    assert Ring.modular(4).reduce(-1) == 3
    assert Ring.integers().reduce(-7) == -7
    assert Ring.modular(4).quotient(2).modulus == 2


@given(st.lists(st.sampled_from((2, 3, 4, 6)), max_size=3))
def test_group_enumeration_matches_order(orders):
    G = FinAbGroup(orders)
    els = list(enumerate_group(G))
    assert len(els) == G.order == math.prod(orders)
    assert len(set(els)) == len(els)


def test_incompatible_hom_rejected():
    with pytest.raises(ValueError):
        AbHom(FinAbGroup((2,)), FinAbGroup((3,)), [[1]])


def brute_kernel(h: AbHom):
    return [x for x in enumerate_group(h.source) if h(x) == h.target.zero()]


@settings(max_examples=60)
@given(complexes())
def test_kernel_and_cokernel_orders_by_brute_force(C):
    d = C.d
    assert kernel(d).group.order == len(brute_kernel(d))
    img = set(image_elements(d))
    assert cokernel(d).group.order * len(img) == C.c0.order


@settings(max_examples=60)
@given(complexes())
def test_homology_euler_characteristic(C):
    H = homology(C)
    assert H.H0.order * C.c1.order == H.H1.order * C.c0.order
    assert H.H1.order == len(brute_kernel(C.d))


@settings(max_examples=60)
@given(complexes())
def test_class_of_representative_roundtrip(C):
    H = homology(C)
    for c in enumerate_group(H.H0):
        x = H.representative(c)
        assert H.class_of(x) == c
    for x in enumerate_group(C.c0):
        diff = C.c0.sub(x, H.representative(H.class_of(x)))
        assert solve_preimage(C.d, diff) is not None
