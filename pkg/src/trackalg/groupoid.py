"""Abelian group objects in groupoids, stored through their Moore complexes.

A 1-truncated complex ``C1 -> C0`` denormalizes to the groupoid whose objects
are elements of ``C0`` and whose tracks are pairs ``(x1, x0)`` going from
``d(x1) + x0`` to ``x0``.  Tracks are never stored any other way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .algebra import AbHom, Element, FinAbGroup, TruncComplex1, enumerate_group, homology, kernel


class TrackError(ValueError):
    """Raised when two tracks are not composable."""


class Track(NamedTuple):
    """The track ``(moore, base): d(moore) + base => base``."""

    moore: Element
    base: Element


@dataclass(frozen=True)
class DenormGroupoid:
    complex: TruncComplex1

    @property
    def objects(self) -> FinAbGroup:
        return self.complex.c0

    def source(self, a: Track) -> Element:
        """delta_0."""
        return self.complex.c0.add(self.complex.d(a.moore), a.base)

    def target(self, a: Track) -> Element:
        """delta_1."""
        return a.base

    def identity(self, x0: Element) -> Track:
        return Track(self.complex.c1.zero(), x0)

    def compose(self, a: Track, b: Track) -> Track:
        """``a [] b``: first ``b``, then ``a``."""
        if self.target(b) != self.source(a):
            raise TrackError(
                f"tracks not composable: target of second track {self.target(b)} "
                f"!= source of first track {self.source(a)}")
        return Track(self.complex.c1.add(a.moore, b.moore), a.base)

    def invert(self, a: Track) -> Track:
        return Track(self.complex.c1.neg(a.moore), self.source(a))

    def add(self, a: Track, b: Track) -> Track:
        C = self.complex
        return Track(C.c1.add(a.moore, b.moore), C.c0.add(a.base, b.base))

    def neg(self, a: Track) -> Track:
        C = self.complex
        return Track(C.c1.neg(a.moore), C.c0.neg(a.base))

    def tracks(self) -> Iterator[Track]:
        C = self.complex
        for m in enumerate_group(C.c1):
            for b in enumerate_group(C.c0):
                yield Track(m, b)

    def pi(self) -> tuple[FinAbGroup, FinAbGroup]:
        h = homology(self.complex)
        return h.H0, h.H1

    # the abelian group object viewed as maps of groups on C1 + C0

    def track_group(self) -> FinAbGroup:
        return self.complex.c1.direct_sum(self.complex.c0)

    def delta0_hom(self) -> AbHom:
        C = self.complex
        rows = [list(r) + [int(i == j) for j in range(C.c0.rank)] for i, r in enumerate(C.d.matrix)]
        return AbHom(self.track_group(), C.c0, rows)

    def delta1_hom(self) -> AbHom:
        C = self.complex
        rows = [[0] * C.c1.rank + [int(i == j) for j in range(C.c0.rank)] for i in range(C.c0.rank)]
        return AbHom(self.track_group(), C.c0, rows)


def denormalize(C: TruncComplex1) -> DenormGroupoid:
    return DenormGroupoid(C)


def moore(G: DenormGroupoid) -> TruncComplex1:
    """The Moore complex ``ker delta_1 --delta_0--> G_0``.

    ``ker delta_1`` is identified with ``C1`` through ``x1 -> (x1, 0)``; the
    identification is checked against an independently computed kernel.
    """
    C = G.complex
    d1 = G.delta1_hom()
    incl = AbHom(C.c1, G.track_group(),
                 [[int(i == j) for j in range(C.c1.rank)] for i in range(C.c1.rank)]
                 + [[0] * C.c1.rank for _ in range(C.c0.rank)])
    K = kernel(d1)
    if K.group.order != C.c1.order or any(d1(incl(g)) != C.c0.zero() for g in C.c1.basis()):
        raise TrackError("kernel of the target map is not the degree-1 part")
    boundary = G.delta0_hom().compose(incl)
    return TruncComplex1(C.c1, C.c0, boundary, C.ring)


def pi0_by_reachability(G: DenormGroupoid) -> int:
    """Number of connected components, by union-find over explicit tracks."""
    objs = list(enumerate_group(G.objects))
    parent = {o: o for o in objs}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for t in G.tracks():
        a, b = find(G.source(t)), find(G.target(t))
        if a != b:
            parent[a] = b
    return len({find(o) for o in objs})


def automorphisms_of_zero(G: DenormGroupoid) -> list[Track]:
    """Explicit ``Aut(0)``: tracks from 0 to 0."""
    C = G.complex
    z = C.c0.zero()
    return [Track(m, z) for m in enumerate_group(C.c1) if C.d(m) == z]


__all__ = ["Track", "TrackError", "DenormGroupoid", "denormalize", "moore",
           "pi0_by_reachability", "automorphisms_of_zero"]
