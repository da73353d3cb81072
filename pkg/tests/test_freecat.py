import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trackalg.algebra import Ring
from trackalg.freecat import (DegreeError, FreeLinearCategory, Graph, GraphError, LinComb, Presentation,
                              check_generating, classes_of_lifts, compose_words, identity_word, matrix_edge,
                              matrix_graph, word, words, words_up_to)

E2 = Graph(("a", "b"), {"f": ("a", "b"), "g": ("b", "a"), "h": ("a", "a")})


def brute_words(E, A, B, n):
    out = []
    for es in itertools.product(sorted(E.edges), repeat=n):
        try:
            w = word(E, es)
        except GraphError:
            continue
        if w.src == A and w.tgt == B:
            out.append(w)
    return sorted(out)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("A,B", [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")])
def test_words_match_brute_force(A, B, n):
    assert words(E2, A, B, n) == brute_words(E2, A, B, n)


def test_words_up_to_includes_identity():
    assert words_up_to(E2, "a", "a", 0) == [identity_word("a")]
    assert words_up_to(E2, "a", "b", 0) == []


def test_word_composition_reads_right_to_left():
    w = word(E2, ["f", "h"])
    assert (w.src, w.tgt) == ("a", "b")
    with pytest.raises(GraphError):
        word(E2, ["h", "f"])
    assert compose_words(word(E2, ["g"]), w).edges == ("g", "f", "h")
    assert compose_words(w, identity_word("a")) == w


def test_graph_rejects_dangling_edge():
    with pytest.raises(GraphError):
        Graph(("a",), {"e": ("a", "z")})


coeffs = st.lists(st.integers(-8, 8), min_size=3, max_size=3)


def comb(R, cs):
    ws = words_up_to(E2, "a", "a", 2)[:3]
    return LinComb.make(R, "a", "a", list(zip(ws, cs)))


@given(coeffs, coeffs, coeffs)
def test_lincomb_abelian_group_and_bilinear(c1, c2, c3):
    R = Ring.modular(4)
    x, y, z = comb(R, c1), comb(R, c2), comb(R, c3)
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x - x == LinComb.zero(R, "a", "a")
    assert x.compose(y + z) == x.compose(y) + x.compose(z)
    assert (x + y).compose(z) == x.compose(z) + y.compose(z)
    assert x.compose(y).compose(z) == x.compose(y.compose(z))
    assert all(0 < c < 4 for _, c in x.terms)


def test_free_category_units_and_enumeration():
    F = FreeLinearCategory(E2, Ring.modular(2))
    f = F.edge("f")
    assert F.compose(f, F.identity("a")) == f
    assert F.compose(F.identity("b"), f) == f
    ws = F.words("a", "a", 2)
    assert len(list(F.combinations("a", "a", 2))) == 2 ** len(ws)


def test_generating_on_fixtures(tc, m2):
    T, _ = tc
    E = Graph(("*",), {"x": ("*", "*")})
    assert check_generating(T, E, classes_of_lifts(T, E, {"x": (0, 1)}))
    v = check_generating(T, E, classes_of_lifts(T, E, {"x": (0, 0)}))
    assert v.status == "false" and v.unreached
    T2, _ = m2
    assert check_generating(T2, E, classes_of_lifts(T2, E, {"x": (0, 1, 0)}))


def test_matrix_graph_degrees():
    P = Presentation({"Sq1": 1, "Sq2": 2})
    E, tmpl = matrix_graph(P, [(0,), (1,), (0, 1)])
    for eid, (s, t) in E.edges.items():
        assert tmpl[eid].source == s and tmpl[eid].target == t
    assert "(0,)->(1,):Sq1" in E.edges
    with pytest.raises(DegreeError):
        matrix_edge(P, (0,), (1,), [["Sq2"]])
