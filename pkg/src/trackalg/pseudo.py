"""Pseudo-functors ``(s, Gamma)`` from a free linear category into a track category.

``gammac(x, y)`` is the Moore part of ``Gamma(x, y): (sx)(sy) => s(xy)``,
a track with base ``s(xy)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .algebra import Element, Ring
from .freecat import FreeLinearCategory, Graph, LinComb, Word, check_generating, classes_of_lifts
from .laws import DEFAULT_SEED, Quantifier, Report, check_law, default_budget
from .linearity import LinearitySystem, gamma_int, iterated_gamma
from .trackcat import InstanceError, TrackCategory


class PreconditionError(ValueError):
    pass


class PseudoFunctor:
    """Identity on objects; ``s`` and ``gammac`` act on :class:`LinComb` morphisms."""

    def __init__(self, B0: FreeLinearCategory, T: TrackCategory, s: Callable, gammac: Callable,
                 name: str = "", pointed: bool = True):
        self.B0 = B0
        self.T = T
        self._s = s
        self._gammac = gammac
        self.name = name
        self.pointed = pointed
        self._s_cache: dict = {}
        self._g_cache: dict = {}

    def s(self, x: LinComb) -> Element:
        v = self._s_cache.get(x)
        if v is None:
            v = self._s_cache[x] = self._s(x)
        return v

    def gammac(self, x: LinComb, y: LinComb) -> Element:
        if y.tgt != x.src:
            raise InstanceError(f"not composable: {y.tgt} != {x.src}")
        key = (x, y)
        v = self._g_cache.get(key)
        if v is None:
            v = self._g_cache[key] = self._gammac(x, y)
        return v

    def boundary_ok(self, x: LinComb, y: LinComb) -> bool:
        T = self.T
        A, B, C = y.src, y.tgt, x.tgt
        G0 = T.hom(A, C).c0
        return T.d(A, C, self.gammac(x, y)) == G0.sub(T.mu0(A, B, C, self.s(x), self.s(y)), self.s(x.compose(y)))


def strict_pseudo(B0: FreeLinearCategory, T: TrackCategory, s: Callable, name="strict") -> PseudoFunctor:
    return PseudoFunctor(B0, T, s, lambda x, y: T.zero1(y.src, x.tgt), name)


# ---------------------------------------------------------------------------
# the construction


@dataclass
class Construction:
    """Shared data of both constructions: ``s`` on words and the raw formulas."""

    E: Graph
    s_E: dict
    T: TrackCategory
    G: LinearitySystem
    p: int | None  # None for the integral construction
    _word_cache: dict = field(default_factory=dict)

    def s_word(self, w: Word) -> Element:
        v = self._word_cache.get(w)
        if v is not None:
            return v
        T = self.T
        if not w.edges:
            v = T.unit(w.src)
        else:
            v = self.s_E[w.edges[-1]]
            src = w.src
            mid = self.E.target(w.edges[-1])
            for e in reversed(w.edges[:-1]):
                v = T.mu0(src, mid, self.E.target(e), self.s_E[e], v)
                mid = self.E.target(e)
        self._word_cache[w] = v
        return v

    def scalar(self, c: int) -> int:
        return c % self.p if self.p is not None else c

    def s_terms(self, A, B, terms) -> Element:
        G0 = self.T.hom(A, B).c0
        return G0.sum([G0.scale(self.scalar(c), self.s_word(w)) for w, c in terms])

    def gamma_word(self, A, B, C, x: Word, y_terms: Sequence) -> Element:
        """``Gamma(x, sum d_j y_j)`` for a single word ``x: B -> C`` and raw integer terms."""
        T, G = self.T, self.G
        K1 = T.hom(A, C).c1
        if not y_terms:
            return K1.zero()
        sx = self.s_word(x)
        H0 = T.hom(A, B).c0
        acc = K1.zero()
        for w, d in y_terms:
            acc = K1.add(acc, T.rwhisk(A, B, C, gamma_int(T, G, B, C, sx, d), self.s_word(w)))
        acc = K1.add(acc, iterated_gamma(T, G, A, B, C, sx, [H0.scale(d, self.s_word(w)) for w, d in y_terms]))
        return acc

    def gamma_terms(self, A, B, C, x_terms: Sequence, y_terms: Sequence) -> Element:
        """``Gamma(sum c_i x_i, sum d_j y_j) = sum c_i Gamma(x_i, y)`` on raw integer lifts."""
        K1 = self.T.hom(A, C).c1
        return K1.sum([K1.scale(c, self.gamma_word(A, B, C, x, y_terms)) for x, c in x_terms])


def _check_lift(T: TrackCategory, E: Graph, s_E: dict):
    for e, (A, B) in E.edges.items():
        if e not in s_E:
            raise PreconditionError(f"edge {e} has no lift")
        if not T.hom(A, B).c0.contains(s_E[e]):
            raise PreconditionError(f"lift of edge {e} is not a 0-cell {A} -> {B}")


def _check_generating(T, E, s_E, max_length):
    v = check_generating(T, E, classes_of_lifts(T, E, s_E), max_length)
    if v.status != "true":
        raise PreconditionError(f"generating graph check returned {v.status}: unreached {v.unreached}")
    return v


def build_pseudo_padic(E: Graph, s_E: dict, T: TrackCategory, G: LinearitySystem, p: int,
                       check_graph: bool = True, max_length: int = 16) -> PseudoFunctor:
    """The pseudo-functor on ``Z/p^2 Mon(E)`` with scalars lifted to least residues."""
    for A, B in T.pairs():
        H = T.hom(A, B).c0
        if any(H.scale(p, g) != H.zero() for g in H.basis()):
            raise PreconditionError(f"0-cells of Hom({A}, {B}) are not {p}-torsion")
    _check_lift(T, E, s_E)
    if check_graph:
        _check_generating(T, E, s_E, max_length)
    K = Construction(E, dict(s_E), T, G, p)
    B0 = FreeLinearCategory(E, Ring.modular(p * p))
    P = PseudoFunctor(B0, T, lambda x: K.s_terms(x.src, x.tgt, x.terms),
                      lambda x, y: K.gamma_terms(y.src, y.tgt, x.tgt, x.terms, y.terms),
                      f"padic[{T.name}]")
    P.construction = K
    return P


def build_pseudo_integral(E: Graph, s_E: dict, T: TrackCategory, G: LinearitySystem,
                          check_graph: bool = True, max_length: int = 16) -> PseudoFunctor:
    """The pseudo-functor on ``Z Mon(E)``; negative scalars go through ``Gamma(-m)``."""
    _check_lift(T, E, s_E)
    if check_graph:
        _check_generating(T, E, s_E, max_length)
    K = Construction(E, dict(s_E), T, G, None)
    B0 = FreeLinearCategory(E, Ring.integers())
    P = PseudoFunctor(B0, T, lambda x: K.s_terms(x.src, x.tgt, x.terms),
                      lambda x, y: K.gamma_terms(y.src, y.tgt, x.tgt, x.terms, y.terms),
                      f"integral[{T.name}]")
    P.construction = K
    return P


# ---------------------------------------------------------------------------
# bounded morphism spaces and checks


def bounded_morphisms(P: PseudoFunctor, A, B, bound: int, max_terms: int = 2,
                      coeffs: Sequence[int] | None = None) -> list[LinComb]:
    """Linear combinations of at most ``max_terms`` words of length ``<= bound``."""
    B0 = P.B0
    if coeffs is None:
        coeffs = range(B0.ring.modulus) if B0.ring.modulus else range(-2, 3)
    return list(B0.combinations(A, B, bound, coeffs, max_terms))


def check_coherence(P: PseudoFunctor, bound: int = 3, budget: int | None = None, seed: int = DEFAULT_SEED,
                    max_terms: int = 2, domains: dict | None = None) -> Report:
    """Pasting associativity, both unit clauses, boundaries and pointedness.

    ``domains[(A, B)]`` overrides the bounded morphism list of a hom.
    """
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    T = P.T
    rep = Report(f"check_coherence[{P.name}]", seed, budget, info={"word_bound": bound, "max_terms": max_terms})
    objs = list(P.B0.objects)
    dom = {}
    for A in objs:
        for B in objs:
            dom[A, B] = domains[A, B] if domains and (A, B) in domains else bounded_morphisms(P, A, B, bound, max_terms)

    products: dict = {}

    def comp(u, v):
        r = products.get((u, v))
        if r is None:
            r = products[u, v] = u.compose(v)
        return r

    def assoc(A, B, C, D, x, y, z):
        K1 = T.hom(A, D).c1
        xy, yz = comp(x, y), comp(y, z)
        lhs = K1.add(P.gammac(xy, z), T.rwhisk(A, B, D, P.gammac(x, y), P.s(z)))
        rhs = K1.add(P.gammac(x, yz), T.lwhisk(A, C, D, P.s(x), P.gammac(y, z), P.s(yz)))
        return lhs == rhs

    quads = [(A, B, C, D) for A in objs for B in objs for C in objs for D in objs]
    rep.results.append(check_law(
        "associativity (pasting)",
        [Quantifier(q, ("x", "y", "z"), (dom[q[2], q[3]], dom[q[1], q[2]], dom[q[0], q[1]])) for q in quads],
        assoc, budget, rng, ("A", "B", "C", "D")))
    tri = [(A, B, C) for A in objs for B in objs for C in objs]
    rep.results.append(check_law(
        "boundary", [Quantifier(t, ("x", "y"), (dom[t[1], t[2]], dom[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, y: P.boundary_ok(x, y), budget, rng, ("A", "B", "C")))
    pairs = [(A, B) for A in objs for B in objs]
    rep.results.append(check_law(
        "strict units", [Quantifier(p, ("x",), (dom[p],)) for p in pairs],
        lambda A, B, x: (P.gammac(P.B0.identity(B), x) == T.zero1(A, B)
                         and P.gammac(x, P.B0.identity(A)) == T.zero1(A, B)),
        budget, rng, ("A", "B")))
    rep.results.append(check_law(
        "s(1) = 1", [Quantifier((A,), (), ()) for A in objs],
        lambda A: P.s(P.B0.identity(A)) == T.unit(A), budget, rng, ("A",)))
    rep.results.append(check_law(
        "pointedness", [Quantifier(t, ("x", "y"), (dom[t[1], t[2]], dom[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, y: (P.s(P.B0.zero(A, B)) == T.zero0(A, B)
                               and P.gammac(x, P.B0.zero(A, B)) == T.zero1(A, C)
                               and P.gammac(P.B0.zero(B, C), y) == T.zero1(A, C)),
        budget, rng, ("A", "B", "C")))
    return rep


def conditions_report(P: PseudoFunctor, bound: int = 2, budget: int | None = None, seed: int = DEFAULT_SEED,
                      max_terms: int = 2, G: LinearitySystem | None = None) -> Report:
    """The three characterizing conditions: left linearity, ``Gamma(x, w) = id``
    on words, and the right-linearization square."""
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    T, B0 = P.T, P.B0
    G = G if G is not None else P.construction.G
    objs = list(B0.objects)
    rep = Report(f"conditions[{P.name}]", seed, budget, info={"word_bound": bound})
    dom = {(A, B): bounded_morphisms(P, A, B, bound, max_terms) for A in objs for B in objs}
    wds = {(A, B): [LinComb.of_word(B0.ring, w) for w in B0.words(A, B, bound)] for A in objs for B in objs}
    tri = [(A, B, C) for A in objs for B in objs for C in objs]

    def left(A, B, C, x, x2, y):
        return P.gammac(x + x2, y) == T.hom(A, C).c1.add(P.gammac(x, y), P.gammac(x2, y))

    def on_words(A, B, C, x, w):
        return P.gammac(x, w) == T.zero1(A, C)

    def square(A, B, C, x, y, z):
        K1 = T.hom(A, C).c1
        rhs = K1.sum([P.gammac(x, y), P.gammac(x, z),
                      G(A, B, C, P.s(x), P.s(y), P.s(z))])
        return P.gammac(x, y + z) == rhs

    rep.results.append(check_law("Gamma left linear",
                                 [Quantifier(t, ("x", "x'", "y"), (dom[t[1], t[2]], dom[t[1], t[2]], dom[t[0], t[1]]))
                                  for t in tri], left, budget, rng, ("A", "B", "C")))
    rep.results.append(check_law("Gamma(x, w) = id on words",
                                 [Quantifier(t, ("x", "w"), (dom[t[1], t[2]], wds[t[0], t[1]])) for t in tri],
                                 on_words, budget, rng, ("A", "B", "C")))
    rep.results.append(check_law("right-linearization square",
                                 [Quantifier(t, ("x", "y", "z"), (dom[t[1], t[2]], dom[t[0], t[1]], dom[t[0], t[1]]))
                                  for t in tri], square, budget, rng, ("A", "B", "C")))
    return rep


@dataclass
class UniquenessVerdict:
    equal: bool
    conditions: dict
    divergence: dict | None = None
    bound: int = 0

    def to_dict(self):
        return {"equal": self.equal, "conditions": self.conditions, "divergence": self.divergence,
                "word_bound": self.bound}


def uniqueness_probe(P: PseudoFunctor, P2: PseudoFunctor, bound: int = 2, max_terms: int = 2,
                     require_conditions: bool = True, budget: int | None = None,
                     seed: int = DEFAULT_SEED) -> UniquenessVerdict:
    """Compare two pseudo-functors on the word-length-bounded subcategory."""
    conds = {}
    for name, Q in (("first", P), ("second", P2)):
        r = conditions_report(Q, bound, budget, seed, max_terms)
        conds[name] = r.passed
        if require_conditions and not r.passed:
            raise PreconditionError(f"{name} pseudo-functor violates {r.failures()[0].name}")
    objs = list(P.B0.objects)
    for A in objs:
        for B in objs:
            for C in objs:
                xs = bounded_morphisms(P, B, C, bound, max_terms)
                ys = bounded_morphisms(P, A, B, bound, max_terms)
                for x in xs:
                    if P.s(x) != P2.s(x):
                        return UniquenessVerdict(False, conds, {"x": str(x), "what": "s"}, bound)
                    for y in ys:
                        if P.gammac(x, y) != P2.gammac(x, y):
                            return UniquenessVerdict(False, conds, {"A": A, "B": B, "C": C, "x": str(x),
                                                                    "y": str(y)}, bound)
    return UniquenessVerdict(True, conds, None, bound)


def with_gammac_override(P: PseudoFunctor, x: LinComb, y: LinComb, value: Element) -> PseudoFunctor:
    def gammac(a, b):
        if (a, b) == (x, y):
            return tuple(value)
        return P._gammac(a, b)

    Q = PseudoFunctor(P.B0, P.T, P._s, gammac, f"{P.name}*", P.pointed)
    if hasattr(P, "construction"):
        Q.construction = P.construction
    return Q


# ---------------------------------------------------------------------------
# probes of the construction


def construction_probes(P: PseudoFunctor, bound: int = 2, max_terms: int = 2) -> Report:
    """Independence of scalar lifts and term order, and the torsion vanishing
    (or, integrally, the negative-scalar square and representation independence)."""
    K: Construction = P.construction
    T = P.T
    rep = Report(f"construction_probes[{P.name}]", 0, 0, info={"word_bound": bound})
    objs = list(P.B0.objects)
    tri = [(A, B, C) for A in objs for B in objs for C in objs]
    ring = P.B0.ring

    def lift_shift(A, B, C, x, y):
        if K.p is None:
            return True
        q = K.p * K.p
        base = K.gamma_terms(A, B, C, x.terms, y.terms)
        xs = [(w, c + q) for w, c in x.terms]
        ys = [(w, d + q) for w, d in y.terms]
        return (K.gamma_terms(A, B, C, xs, y.terms) == base and K.gamma_terms(A, B, C, x.terms, ys) == base)

    def order(A, B, C, x, y):
        base = K.gamma_terms(A, B, C, x.terms, y.terms)
        return (K.gamma_terms(A, B, C, x.terms[::-1], y.terms[::-1]) == base)

    dom = {(A, B): bounded_morphisms(P, A, B, bound, max_terms) for A in objs for B in objs}
    wds = {(A, B): P.B0.words(A, B, bound) for A in objs for B in objs}
    big = 10 ** 9
    rng = random.Random(0)
    blocks = [Quantifier(t, ("x", "y"), (dom[t[1], t[2]], dom[t[0], t[1]])) for t in tri]
    if K.p is not None:
        rep.results.append(check_law("lift independence", blocks, lift_shift, big, rng, ("A", "B", "C")))
    rep.results.append(check_law("term-order independence", blocks, order, big, rng, ("A", "B", "C")))
    wblocks = [Quantifier(t, ("x", "y"), (wds[t[1], t[2]], wds[t[0], t[1]])) for t in tri]
    if K.p is not None:
        p = K.p
        rep.results.append(check_law(
            "Gamma(x, p^2 y) = id", wblocks,
            lambda A, B, C, x, y: K.gamma_terms(A, B, C, [(x, 1)], [(y, p * p)]) == T.zero1(A, C),
            big, rng, ("A", "B", "C")))
        rep.results.append(check_law(
            "Gamma(p x, y) = id", blocks,
            lambda A, B, C, x, y: K.gamma_terms(A, B, C, [(w, p * c) for w, c in x.terms], y.terms) == T.zero1(A, C),
            big, rng, ("A", "B", "C")))
    rep.results.append(check_law(
        "Gamma(x, 5y - 2y) = Gamma(x, 3y)", wblocks,
        lambda A, B, C, x, y: (K.gamma_terms(A, B, C, [(x, 1)], [(y, 5), (y, -2)])
                               == K.gamma_terms(A, B, C, [(x, 1)], [(y, 3)])),
        big, rng, ("A", "B", "C")))

    def negative(A, B, C, x, y):
        # Gamma(x, -y) = -Gamma(x, y) [] Gamma(-1)_{sx} (sy)
        K1 = T.hom(A, C).c1
        sx, sy = K.s_word(x), K.s_word(y)
        forced = K1.add(K1.neg(K.gamma_terms(A, B, C, [(x, 1)], [(y, 1)])),
                        T.rwhisk(A, B, C, gamma_int(T, K.G, B, C, sx, -1), sy))
        return K.gamma_terms(A, B, C, [(x, 1)], [(y, -1)]) == forced

    rep.results.append(check_law("Gamma(x, -y) forced by Gamma(-1)", wblocks, negative, big, rng, ("A", "B", "C")))

    def iterated(A, B, C, x, *ys):
        K1 = T.hom(A, C).c1
        total = ys[0]
        for y in ys[1:]:
            total = total + y
        sx = P.s(x)
        rhs = K1.add(K1.sum([P.gammac(x, y) for y in ys]),
                     iterated_gamma(T, K.G, A, B, C, sx, [P.s(y) for y in ys]))
        return P.gammac(x, total) == rhs

    for k in (2, 3):
        kb = [Quantifier(t, ("x",) + tuple(f"y{i}" for i in range(k)),
                         (dom[t[1], t[2]],) + tuple([LinComb.of_word(ring, w) for w in wds[t[0], t[1]]] for _ in range(k)))
              for t in tri]
        rep.results.append(check_law(f"iterated right-linearization k={k}", kb, iterated, big, rng, ("A", "B", "C")))
    return rep
