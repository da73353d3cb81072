import itertools

import pytest
from hypothesis import given, settings

from trackalg.algebra import FinAbGroup, TruncComplex1, homology
from trackalg.groupoid import (Track, TrackError, automorphisms_of_zero, denormalize, moore,
                               pi0_by_reachability)

from conftest import complexes


def same_complex(C, D):
    return C.c1.orders == D.c1.orders and C.c0.orders == D.c0.orders and C.d.matrix == D.d.matrix


@settings(max_examples=80)
@given(complexes())
def test_moore_denorm_roundtrip(C):
    assert same_complex(moore(denormalize(C)), C)


@settings(max_examples=40)
@given(complexes(max_order=32))
def test_groupoid_laws_exhaustive(C):
    G = denormalize(C)
    tracks = list(G.tracks())
    for a in tracks:
        assert G.compose(G.identity(G.target(a)), a) == a
        assert G.compose(a, G.identity(G.source(a))) == a
        inv = G.invert(a)
        assert G.compose(inv, a) == G.identity(G.source(a))
        assert G.compose(a, inv) == G.identity(G.target(a))
    for a, b in itertools.product(tracks, repeat=2):
        if G.target(b) == G.source(a):
            ab = G.compose(a, b)
            assert G.source(ab) == G.source(b) and G.target(ab) == G.target(a)


@settings(max_examples=40)
@given(complexes(max_order=32))
def test_homotopy_groups_by_enumeration(C):
    G = denormalize(C)
    H0, H1 = G.pi()
    assert pi0_by_reachability(G) == H0.order
    assert len(automorphisms_of_zero(G)) == H1.order


def test_compose_rejects_mismatched_tracks():
    C = TruncComplex1.from_matrix((2,), (2,), [[1]])
    G = denormalize(C)
    with pytest.raises(TrackError):
        G.compose(Track((0,), (0,)), Track((0,), (1,)))


def test_abelian_structure_interchange():
    C = TruncComplex1.from_matrix((4,), (2, 2), [[2], [0]])
    G = denormalize(C)
    tracks = list(G.tracks())
    for a, b in itertools.product(tracks[:16], repeat=2):
        s = G.add(a, b)
        assert G.source(s) == C.c0.add(G.source(a), G.source(b))
        assert G.target(s) == C.c0.add(G.target(a), G.target(b))
    assert G.add(tracks[3], G.neg(tracks[3])) == G.identity(C.c0.zero())


def test_discrete_complex_has_only_identities():
    C = TruncComplex1.discrete(FinAbGroup((3,)))
    G = denormalize(C)
    assert all(G.source(t) == G.target(t) for t in G.tracks())
    assert pi0_by_reachability(G) == 3
    assert homology(C).H1.order == 1
