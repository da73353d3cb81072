"""Finite left-linear track categories, stored hom-wise as Moore complexes.

An instance carries, for every ordered pair of objects, a 1-truncated complex
``Hom(A,B)_1 -> Hom(A,B)_0`` together with three composition maps:

* ``mu0(A,B,C, x, y)``       composite ``x y`` of 0-cells ``x: B->C``, ``y: A->B``
* ``rwhisk(A,B,C, h, y)``    Moore part of ``alpha (x) y`` for a track with Moore part ``h``
* ``lwhisk(A,B,C, x, h, b)`` Moore part of ``x (x) beta`` for the track ``beta = (h, b)``

Pointwise composition of tracks is always derived from these through the two
factorizations of the interchange law.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

from .algebra import (AbHom, ChainMap, Element, FinAbGroup, Homology, TruncComplex1,
                      enumerate_group, homology, image_elements, kernel, solve_preimage)
from .groupoid import Track
from .laws import Quantifier, Report, check_law, default_budget, DEFAULT_SEED

Obj = Hashable


class InstanceError(ValueError):
    """Malformed instance data."""


class AxiomViolation(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness


class TrackCategory:
    def __init__(self, objects: Sequence[Obj], homs: dict, mu0: Callable, rwhisk: Callable,
                 lwhisk: Callable, units: dict, name: str = "", description: dict | None = None):
        self.objects = tuple(objects)
        self.homs: dict[tuple, TruncComplex1] = dict(homs)
        for A in self.objects:
            for B in self.objects:
                if (A, B) not in self.homs:
                    raise InstanceError(f"missing hom complex for ({A}, {B})")
        self._mu0, self._rwhisk, self._lwhisk = mu0, rwhisk, lwhisk
        self.units = {A: self.homs[A, A].c0.reduce(u) for A, u in units.items()}
        self.name = name
        # json-able record of how the instance was built (used by save/load)
        self.description = description
        self._homology: dict = {}

    def hom(self, A, B) -> TruncComplex1:
        return self.homs[A, B]

    def mu0(self, A, B, C, x: Element, y: Element) -> Element:
        return self._mu0(A, B, C, x, y)

    def rwhisk(self, A, B, C, h: Element, y: Element) -> Element:
        return self._rwhisk(A, B, C, h, y)

    def lwhisk(self, A, B, C, x: Element, h: Element, base: Element) -> Element:
        return self._lwhisk(A, B, C, x, h, base)

    def unit(self, A) -> Element:
        return self.units[A]

    def zero0(self, A, B) -> Element:
        return self.homs[A, B].c0.zero()

    def zero1(self, A, B) -> Element:
        return self.homs[A, B].c1.zero()

    def d(self, A, B, h: Element) -> Element:
        return self.homs[A, B].d(h)

    def homology(self, A, B) -> Homology:
        if (A, B) not in self._homology:
            self._homology[A, B] = homology(self.homs[A, B])
        return self._homology[A, B]

    def h0_class(self, A, B, x: Element) -> Element:
        return self.homology(A, B).class_of(x)

    def multiple_of_unit(self, A, n: int) -> Element:
        return self.homs[A, A].c0.scale(n, self.unit(A))

    def pairs(self):
        return list(itertools.product(self.objects, repeat=2))

    def triples(self):
        return list(itertools.product(self.objects, repeat=3))

    def quads(self):
        return list(itertools.product(self.objects, repeat=4))

    def boundaries(self, A, B) -> list[Element]:
        return image_elements(self.homs[A, B].d)

    def class_fiber(self, A, B, x: Element) -> list[Element]:
        """All 0-cells homotopic to ``x``."""
        G = self.homs[A, B].c0
        return sorted({G.add(x, b) for b in self.boundaries(A, B)})

    def tracks_to_zero(self, A, B, x: Element) -> list[Element]:
        """Moore parts ``h`` with ``d h = x``, i.e. tracks ``x => 0``."""
        C = self.homs[A, B]
        h0 = solve_preimage(C.d, x)
        if h0 is None:
            return []
        K = kernel(C.d)
        return sorted({C.c1.add(h0, K.embedding(k)) for k in enumerate_group(K.group)})

    def cycles(self, A, B) -> list[Element]:
        C = self.homs[A, B]
        K = kernel(C.d)
        return sorted({K.embedding(k) for k in enumerate_group(K.group)})

    def __repr__(self):
        return f"TrackCategory({self.name or '?'}, objects={list(self.objects)})"


# ---------------------------------------------------------------------------
# cells and the (x)-composition


@dataclass(frozen=True)
class Cell:
    """A 0-cell (``track is None``) or a track between ``src`` and ``tgt``."""

    src: Obj
    tgt: Obj
    value: Element | None = None
    track: Track | None = None

    @property
    def deg(self) -> int:
        return 0 if self.track is None else 1

    @classmethod
    def map(cls, src, tgt, x) -> "Cell":
        return cls(src, tgt, value=tuple(x))

    @classmethod
    def tr(cls, src, tgt, moore, base) -> "Cell":
        return cls(src, tgt, track=Track(tuple(moore), tuple(base)))


def identity_track(x: Cell, T: TrackCategory) -> Cell:
    return Cell.tr(x.src, x.tgt, T.zero1(x.src, x.tgt), x.value)


def track_source(T: TrackCategory, c: Cell) -> Element:
    C = T.hom(c.src, c.tgt)
    return C.c0.add(C.d(c.track.moore), c.track.base)


def otimes(T: TrackCategory, u: Cell, v: Cell) -> Cell:
    """``u (x) v`` for ``u: B -> C`` and ``v: A -> B`` of total degree at most 1."""
    if u.src != v.tgt:
        raise InstanceError(f"cells not composable: {u.src} != {v.tgt}")
    A, B, C = v.src, v.tgt, u.tgt
    if u.deg + v.deg > 1:
        raise InstanceError("(x) of two tracks is undefined; use pointwise_compose")
    if u.deg == 0 and v.deg == 0:
        return Cell.map(A, C, T.mu0(A, B, C, u.value, v.value))
    if u.deg == 1:
        h, a0 = u.track
        return Cell.tr(A, C, T.rwhisk(A, B, C, h, v.value), T.mu0(A, B, C, a0, v.value))
    h, b0 = v.track
    return Cell.tr(A, C, T.lwhisk(A, B, C, u.value, h, b0), T.mu0(A, B, C, u.value, b0))


def _box(T: TrackCategory, a: Cell, b: Cell) -> Cell:
    if b.track.base != track_source(T, a):
        raise AxiomViolation("tracks not composable in []")
    G = T.hom(a.src, a.tgt).c1
    return Cell.tr(a.src, a.tgt, G.add(a.track.moore, b.track.moore), a.track.base)


def pointwise_compose(T: TrackCategory, alpha: Cell, beta: Cell) -> Cell:
    """``alpha beta`` via both factorizations, which must agree."""
    if alpha.deg != 1 or beta.deg != 1:
        raise InstanceError("pointwise_compose takes two tracks")
    d0a = Cell.map(alpha.src, alpha.tgt, track_source(T, alpha))
    d1a = Cell.map(alpha.src, alpha.tgt, alpha.track.base)
    d0b = Cell.map(beta.src, beta.tgt, track_source(T, beta))
    d1b = Cell.map(beta.src, beta.tgt, beta.track.base)
    first = _box(T, otimes(T, alpha, d1b), otimes(T, d0a, beta))
    second = _box(T, otimes(T, d1a, beta), otimes(T, alpha, d0b))
    if first != second:
        raise AxiomViolation("the two factorizations of pointwise composition disagree",
                             {"alpha": alpha.track, "beta": beta.track,
                              "first": first.track, "second": second.track})
    return first


# ---------------------------------------------------------------------------
# axiom checking


def axiom_check(T: TrackCategory, budget: int | None = None, seed: int = DEFAULT_SEED,
                probe_right_linearity: bool = True) -> Report:
    """Check every structural law of a pointed left-linear track category."""
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    rep = Report(f"axiom_check[{T.name}]", seed, budget)
    H = T.homs

    def c0(A, B):
        return H[A, B].c0

    def c1(A, B):
        return H[A, B].c1

    def run(name, blocks, pred, ctx, probe=False):
        rep.results.append(check_law(name, blocks, pred, budget, rng, ctx, probe))

    tri = T.triples()
    ctx3 = ("A", "B", "C")

    run("pointedness: 0 y = 0", [Quantifier(t, ("y",), (c0(t[0], t[1]),)) for t in tri],
        lambda A, B, C, y: T.mu0(A, B, C, T.zero0(B, C), y) == T.zero0(A, C), ctx3)
    run("pointedness: x 0 = 0", [Quantifier(t, ("x",), (c0(t[1], t[2]),)) for t in tri],
        lambda A, B, C, x: T.mu0(A, B, C, x, T.zero0(A, B)) == T.zero0(A, C), ctx3)
    run("pointedness: 0 (x) beta = 0",
        [Quantifier(t, ("h", "b"), (c1(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
        lambda A, B, C, h, b: T.lwhisk(A, B, C, T.zero0(B, C), h, b) == T.zero1(A, C), ctx3)
    run("pointedness: alpha (x) 0 = 0", [Quantifier(t, ("h",), (c1(t[1], t[2]),)) for t in tri],
        lambda A, B, C, h: T.rwhisk(A, B, C, h, T.zero0(A, B)) == T.zero1(A, C), ctx3)
    run("pointedness: x (x) id_0 = 0", [Quantifier(t, ("x",), (c0(t[1], t[2]),)) for t in tri],
        lambda A, B, C, x: T.lwhisk(A, B, C, x, T.zero1(A, B), T.zero0(A, B)) == T.zero1(A, C), ctx3)

    quads = T.quads()
    ctx4 = ("A", "B", "C", "D")

    def assoc(A, B, C, D, x, y, z):
        return (T.mu0(A, C, D, x, T.mu0(A, B, C, y, z))
                == T.mu0(A, B, D, T.mu0(B, C, D, x, y), z))

    run("associativity of mu0",
        [Quantifier(q, ("x", "y", "z"), (c0(q[2], q[3]), c0(q[1], q[2]), c0(q[0], q[1]))) for q in quads],
        assoc, ctx4)
    pairs = T.pairs()
    run("units of mu0", [Quantifier(p, ("x",), (c0(*p),)) for p in pairs],
        lambda A, B, x: T.mu0(A, B, B, T.unit(B), x) == x and T.mu0(A, A, B, x, T.unit(A)) == x,
        ("A", "B"))

    def left_lin(A, B, C, a, a2, x):
        G = c0(A, C)
        return T.mu0(A, B, C, c0(B, C).add(a, a2), x) == G.add(T.mu0(A, B, C, a, x), T.mu0(A, B, C, a2, x))

    run("left linearity",
        [Quantifier(t, ("a", "a'", "x"), (c0(t[1], t[2]), c0(t[1], t[2]), c0(t[0], t[1]))) for t in tri],
        left_lin, ctx3)

    def r_add(A, B, C, h, h2, y):
        return T.rwhisk(A, B, C, c1(B, C).add(h, h2), y) == c1(A, C).add(
            T.rwhisk(A, B, C, h, y), T.rwhisk(A, B, C, h2, y))

    run("rwhisk additive in the track",
        [Quantifier(t, ("h", "h'", "y"), (c1(t[1], t[2]), c1(t[1], t[2]), c0(t[0], t[1]))) for t in tri],
        r_add, ctx3)

    def l_add(A, B, C, x, x2, h, b):
        return T.lwhisk(A, B, C, c0(B, C).add(x, x2), h, b) == c1(A, C).add(
            T.lwhisk(A, B, C, x, h, b), T.lwhisk(A, B, C, x2, h, b))

    run("lwhisk additive in the 0-cell",
        [Quantifier(t, ("x", "x'", "h", "b"),
                    (c0(t[1], t[2]), c0(t[1], t[2]), c1(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
        l_add, ctx3)

    def r_bdry(A, B, C, h, y):
        return T.d(A, C, T.rwhisk(A, B, C, h, y)) == T.mu0(A, B, C, T.d(B, C, h), y)

    def l_bdry(A, B, C, x, h, b):
        G = c0(A, B)
        lhs = T.d(A, C, T.lwhisk(A, B, C, x, h, b))
        rhs = c0(A, C).sub(T.mu0(A, B, C, x, G.add(T.d(A, B, h), b)), T.mu0(A, B, C, x, b))
        return lhs == rhs

    run("boundary compatibility (rwhisk)",
        [Quantifier(t, ("h", "y"), (c1(t[1], t[2]), c0(t[0], t[1]))) for t in tri], r_bdry, ctx3)
    run("boundary compatibility",
        [Quantifier(t, ("x", "h", "b"), (c0(t[1], t[2]), c1(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
        l_bdry, ctx3)

    def l_box(A, B, C, x, h, h2, b):
        # (h, b) [] (h2, dh + b) = (h + h2, b)
        G1, G0 = c1(A, B), c0(A, B)
        src = G0.add(T.d(A, B, h), b)
        lhs = T.lwhisk(A, B, C, x, G1.add(h, h2), b)
        rhs = c1(A, C).add(T.lwhisk(A, B, C, x, h, b), T.lwhisk(A, B, C, x, h2, src))
        return lhs == rhs

    run("lwhisk functorial in []",
        [Quantifier(t, ("x", "h", "h'", "b"),
                    (c0(t[1], t[2]), c1(t[0], t[1]), c1(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
        l_box, ctx3)

    def interchange(A, B, C, h, a0, k, b0):
        beta_src = c0(A, B).add(T.d(A, B, k), b0)
        alpha_src = c0(B, C).add(T.d(B, C, h), a0)
        first = c1(A, C).add(T.rwhisk(A, B, C, h, b0), T.lwhisk(A, B, C, alpha_src, k, b0))
        second = c1(A, C).add(T.lwhisk(A, B, C, a0, k, b0), T.rwhisk(A, B, C, h, beta_src))
        return first == second

    run("interchange",
        [Quantifier(t, ("h", "a0", "k", "b0"),
                    (c1(t[1], t[2]), c0(t[1], t[2]), c1(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
        interchange, ctx3)

    def rr_assoc(A, B, C, D, h, y, z):
        return T.rwhisk(A, B, D, T.rwhisk(B, C, D, h, y), z) == T.rwhisk(A, C, D, h, T.mu0(A, B, C, y, z))

    def ll_assoc(A, B, C, D, x, y, h, b):
        inner = T.lwhisk(A, B, C, y, h, b)
        return (T.lwhisk(A, C, D, x, inner, T.mu0(A, B, C, y, b))
                == T.lwhisk(A, B, D, T.mu0(B, C, D, x, y), h, b))

    def lr_assoc(A, B, C, D, x, h, b, z):
        lhs = T.rwhisk(A, B, D, T.lwhisk(B, C, D, x, h, b), z)
        rhs = T.lwhisk(A, C, D, x, T.rwhisk(A, B, C, h, z), T.mu0(A, B, C, b, z))
        return lhs == rhs

    run("whisker associativity (alpha y) z",
        [Quantifier(q, ("h", "y", "z"), (c1(q[2], q[3]), c0(q[1], q[2]), c0(q[0], q[1]))) for q in quads],
        rr_assoc, ctx4)
    run("whisker associativity x (y beta)",
        [Quantifier(q, ("x", "y", "h", "b"),
                    (c0(q[2], q[3]), c0(q[1], q[2]), c1(q[0], q[1]), c0(q[0], q[1]))) for q in quads],
        ll_assoc, ctx4)
    run("whisker associativity (x alpha) z",
        [Quantifier(q, ("x", "h", "b", "z"),
                    (c0(q[2], q[3]), c1(q[1], q[2]), c0(q[1], q[2]), c0(q[0], q[1]))) for q in quads],
        lr_assoc, ctx4)
    run("whisker units",
        [Quantifier(p, ("h", "b"), (c1(*p), c0(*p))) for p in pairs],
        lambda A, B, h, b: (T.rwhisk(A, A, B, h, T.unit(A)) == h
                            and T.lwhisk(A, B, B, T.unit(B), h, b) == h),
        ("A", "B"))

    def descends(A, B, C, x, y, h, k):
        base = T.mu0(A, B, C, x, y)
        x2 = c0(B, C).add(x, T.d(B, C, h))
        y2 = c0(A, B).add(y, T.d(A, B, k))
        cls = T.h0_class(A, C, base)
        return T.h0_class(A, C, T.mu0(A, B, C, x2, y2)) == cls

    run("homotopy composition well defined",
        [Quantifier(t, ("x", "y", "h", "k"),
                    (c0(t[1], t[2]), c0(t[0], t[1]), c1(t[1], t[2]), c1(t[0], t[1]))) for t in tri],
        descends, ctx3)

    if probe_right_linearity:
        def right_lin(A, B, C, a, x, y):
            G = c0(A, C)
            return T.mu0(A, B, C, a, c0(A, B).add(x, y)) == G.add(T.mu0(A, B, C, a, x), T.mu0(A, B, C, a, y))

        run("right linearity",
            [Quantifier(t, ("a", "x", "y"), (c0(t[1], t[2]), c0(t[0], t[1]), c0(t[0], t[1]))) for t in tri],
            right_lin, ctx3, probe=True)
    return rep


# ---------------------------------------------------------------------------
# homotopy category


class HomotopyCategory:
    """``pi_0`` of a track category, with composition computed on representatives."""

    def __init__(self, T: TrackCategory):
        self.T = T
        self.objects = T.objects

    def hom(self, A, B) -> FinAbGroup:
        return self.T.homology(A, B).H0

    def representative(self, A, B, c: Element) -> Element:
        return self.T.homology(A, B).representative(c)

    def compose(self, A, B, C, u: Element, v: Element) -> Element:
        T = self.T
        x = self.representative(B, C, u)
        y = self.representative(A, B, v)
        return T.h0_class(A, C, T.mu0(A, B, C, x, y))

    def is_bilinear(self) -> bool:
        for A, B, C in self.T.triples():
            for u in enumerate_group(self.hom(B, C)):
                for v in enumerate_group(self.hom(A, B)):
                    for w in enumerate_group(self.hom(A, B)):
                        G = self.hom(A, C)
                        if self.compose(A, B, C, u, self.hom(A, B).add(v, w)) != G.add(
                                self.compose(A, B, C, u, v), self.compose(A, B, C, u, w)):
                            return False
        return True

    def isomorphic(self, A, B) -> bool:
        if A == B:
            return True
        for u in enumerate_group(self.hom(A, B)):
            for v in enumerate_group(self.hom(B, A)):
                if (self.compose(A, B, A, v, u) == self.T.h0_class(A, A, self.T.unit(A))
                        and self.compose(B, A, B, u, v) == self.T.h0_class(B, B, self.T.unit(B))):
                    return True
        return False


# ---------------------------------------------------------------------------
# functors and DK-equivalence


@dataclass
class TrackFunctor:
    """A strict, locally linear track functor between finite instances."""

    source: TrackCategory
    target: TrackCategory
    obj_map: dict
    hom_maps: dict  # (A, B) -> ChainMap into Hom(FA, FB)

    def on0(self, A, B, x):
        return self.hom_maps[A, B].f0(x)

    def on1(self, A, B, h):
        return self.hom_maps[A, B].f1(h)


@dataclass
class DKVerdict:
    equivalence: bool
    reasons: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)
    bound: int | None = None

    def __bool__(self):
        return self.equivalence

    def to_dict(self) -> dict:
        d = {"equivalence": self.equivalence, "reasons": self.reasons, "details": self.details}
        if self.bound is not None:
            d["word_bound"] = self.bound
        return d


def induced_on_homology(S: TrackCategory, T: TrackCategory, A, B, FA, FB, f: ChainMap):
    """Induced homomorphisms ``H0 S(A,B) -> H0 T(FA,FB)`` and likewise on ``H1``."""
    hs, ht = S.homology(A, B), T.homology(FA, FB)
    h0 = AbHom.from_images(hs.H0, ht.H0, [ht.class_of(f.f0(hs.representative(g))) for g in hs.H0.basis()])
    h1 = AbHom.from_images(hs.H1, ht.H1, [ht.cycle_coords(f.f1(hs.embedding(g))) for g in hs.H1.basis()])
    return h0, h1


def dk_compare(F: TrackFunctor, check_strict: bool = True, budget: int | None = None,
               seed: int = DEFAULT_SEED) -> DKVerdict:
    """Decide whether ``F`` is a Dwyer-Kan equivalence by finite checks."""
    S, T = F.source, F.target
    reasons, details = [], {}
    for A, B in S.pairs():
        f = F.hom_maps[A, B]
        FA, FB = F.obj_map[A], F.obj_map[B]
        if f.source != S.hom(A, B) or f.target != T.hom(FA, FB):
            raise InstanceError(f"hom map for ({A}, {B}) has wrong source/target")
        if not f.is_chain_map():
            raise InstanceError(f"hom map for ({A}, {B}) is not a chain map")
        h0, h1 = induced_on_homology(S, T, A, B, FA, FB, f)
        ok0, ok1 = h0.is_isomorphism(), h1.is_isomorphism()
        details[f"{A}->{B}"] = {"H0_iso": ok0, "H1_iso": ok1}
        if not ok0:
            reasons.append(f"H0 map on ({A}, {B}) is not an isomorphism")
        if not ok1:
            reasons.append(f"H1 (pi_1) map on ({A}, {B}) is not an isomorphism")
    if check_strict:
        rng = random.Random(seed)
        budget = default_budget() if budget is None else budget

        def strict(A, B, C, x, y):
            FA, FB, FC = (F.obj_map[o] for o in (A, B, C))
            return F.on0(A, C, S.mu0(A, B, C, x, y)) == T.mu0(FA, FB, FC, F.on0(B, C, x), F.on0(A, B, y))

        res = check_law("functor preserves composition",
                        [Quantifier(t, ("x", "y"), (S.hom(t[1], t[2]).c0, S.hom(t[0], t[1]).c0))
                         for t in S.triples()], strict, budget, rng, ("A", "B", "C"))
        if not res.passed:
            reasons.append(f"not a strict functor: {res.witness}")
    image = set(F.obj_map.values())
    hc = HomotopyCategory(T)
    for X in T.objects:
        if X not in image and not any(hc.isomorphic(X, Y) for Y in image):
            reasons.append(f"object {X} is not in the essential image")
    return DKVerdict(not reasons, reasons, details)


def identity_functor(T: TrackCategory) -> TrackFunctor:
    maps = {}
    for A, B in T.pairs():
        C = T.hom(A, B)
        maps[A, B] = ChainMap(C, C, AbHom.identity(C.c1), AbHom.identity(C.c0))
    return TrackFunctor(T, T, {A: A for A in T.objects}, maps)


# ---------------------------------------------------------------------------
# builders


def _bilinear_eval(G_out: FinAbGroup, table: Sequence[Sequence[Element]], u: Element, v: Element) -> Element:
    acc = [0] * G_out.rank
    for i, a in enumerate(u):
        if not a:
            continue
        row = table[i]
        for j, b in enumerate(v):
            if not b:
                continue
            c = a * b
            for k, e in enumerate(row[j]):
                acc[k] += c * e
    return G_out.reduce(acc)


def _check_bilinear_table(name, G: FinAbGroup, H: FinAbGroup, out: FinAbGroup, table):
    if len(table) != G.rank or any(len(r) != H.rank for r in table):
        raise InstanceError(f"{name}: structure table has wrong shape")
    for i, di in enumerate(G.orders):
        for j, ej in enumerate(H.orders):
            v = out.reduce(table[i][j])
            if out.scale(di, v) != out.zero() or out.scale(ej, v) != out.zero():
                raise InstanceError(f"{name}: product of generators {i},{j} is not well defined")


def bilinear_instance(objects, homs: dict, units: dict, mu: dict, rw: dict, lw: dict,
                      name: str = "", description: dict | None = None) -> TrackCategory:
    """A bilinear (DG) instance from structure constants.

    ``mu[A,B,C][i][j]`` is the composite of generator ``i`` of ``Hom(B,C)_0``
    with generator ``j`` of ``Hom(A,B)_0``; ``rw`` pairs ``Hom(B,C)_1`` with
    ``Hom(A,B)_0`` and ``lw`` pairs ``Hom(B,C)_0`` with ``Hom(A,B)_1``.
    Missing triples mean zero products.
    """
    homs = dict(homs)

    def table(tab, key, G, H, out, label):
        t = tab.get(key)
        if t is None:
            t = [[out.zero() for _ in range(H.rank)] for _ in range(G.rank)]
        _check_bilinear_table(f"{label}{key}", G, H, out, t)
        return t

    mu_t, rw_t, lw_t = {}, {}, {}
    for A, B, C in itertools.product(objects, repeat=3):
        hAB, hBC, hAC = homs[A, B], homs[B, C], homs[A, C]
        mu_t[A, B, C] = table(mu, (A, B, C), hBC.c0, hAB.c0, hAC.c0, "mu0")
        rw_t[A, B, C] = table(rw, (A, B, C), hBC.c1, hAB.c0, hAC.c1, "rwhisk")
        lw_t[A, B, C] = table(lw, (A, B, C), hBC.c0, hAB.c1, hAC.c1, "lwhisk")

    def mu0(A, B, C, x, y):
        return _bilinear_eval(homs[A, C].c0, mu_t[A, B, C], x, y)

    def rwhisk(A, B, C, h, y):
        return _bilinear_eval(homs[A, C].c1, rw_t[A, B, C], h, y)

    def lwhisk(A, B, C, x, h, base):
        return _bilinear_eval(homs[A, C].c1, lw_t[A, B, C], x, h)

    T = TrackCategory(objects, homs, mu0, rwhisk, lwhisk, units, name, description)
    T.structure = {"mu0": mu_t, "rwhisk": rw_t, "lwhisk": lw_t}
    return T


def table_instance(objects, homs: dict, units: dict, mu0_table: dict, rwhisk_table: dict,
                   lwhisk_table: dict, name: str = "", description: dict | None = None) -> TrackCategory:
    """An instance given by explicit lookup tables keyed by element tuples."""

    def look(tab, key, args, label):
        try:
            return tab[key][args]
        except KeyError:
            raise InstanceError(f"{label} table has no entry for {key} {args}") from None

    def mu0(A, B, C, x, y):
        return look(mu0_table, (A, B, C), (tuple(x), tuple(y)), "mu0")

    def rwhisk(A, B, C, h, y):
        return look(rwhisk_table, (A, B, C), (tuple(h), tuple(y)), "rwhisk")

    def lwhisk(A, B, C, x, h, base):
        return look(lwhisk_table, (A, B, C), (tuple(x), tuple(h), tuple(base)), "lwhisk")

    T = TrackCategory(objects, homs, mu0, rwhisk, lwhisk, units, name, description)
    T.tables = {"mu0": mu0_table, "rwhisk": rwhisk_table, "lwhisk": lwhisk_table}
    return T


def tabulate(T: TrackCategory, name: str | None = None) -> TrackCategory:
    """Materialize every composition map of a finite instance as a table."""
    mu, rw, lw = {}, {}, {}
    for A, B, C in T.triples():
        hAB, hBC = T.hom(A, B), T.hom(B, C)
        mu[A, B, C] = {(x, y): T.mu0(A, B, C, x, y)
                       for x in enumerate_group(hBC.c0) for y in enumerate_group(hAB.c0)}
        rw[A, B, C] = {(h, y): T.rwhisk(A, B, C, h, y)
                       for h in enumerate_group(hBC.c1) for y in enumerate_group(hAB.c0)}
        lw[A, B, C] = {(x, h, b): T.lwhisk(A, B, C, x, h, b)
                       for x in enumerate_group(hBC.c0) for h in enumerate_group(hAB.c1)
                       for b in enumerate_group(hAB.c0)}
    return table_instance(T.objects, T.homs, T.units, mu, rw, lw, name or T.name)


def with_lwhisk_override(T: TrackCategory, key: tuple, args: tuple, value: Element,
                         name: str | None = None) -> TrackCategory:
    """Copy of ``T`` with one ``lwhisk`` entry replaced (used for mutation tests)."""

    def lwhisk(A, B, C, x, h, base):
        if (A, B, C) == key and (tuple(x), tuple(h), tuple(base)) == args:
            return tuple(value)
        return T.lwhisk(A, B, C, x, h, base)

    return TrackCategory(T.objects, T.homs, T._mu0, T._rwhisk, lwhisk, T.units,
                         name or f"{T.name}*")


def iter_hom0(T: TrackCategory, A, B) -> Iterator[Element]:
    return enumerate_group(T.hom(A, B).c0)
