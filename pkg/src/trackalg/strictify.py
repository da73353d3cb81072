"""Strictification: the pullback DG-category ``B``, the relaxation and the zigzag.

Every DG-category built here has the same shape: degree-1 cells are pairs
``(h, x)`` of a 0-cell ``x`` and a Moore element ``h`` of a finite track
category ``T`` with ``dh = image(x)``; the differential is ``(h, x) -> x``.
A :class:`DGView` supplies the 0-cells, ``image`` and a correction
``gamma``; the actions are

    y (x) (h, x) = (lwhisk(image y, (h, 0)) - gamma(y, x), y x)
    (h, x) (x) y = (rwhisk(h, image y) - gamma(x, y), x y)
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from .algebra import Element, enumerate_group
from .freecat import Graph, LinComb, _span, check_generating, classes_of_lifts
from .laws import _jsonable, DEFAULT_SEED, LawResult, Quantifier, Report, check_law, default_budget
from .pseudo import PseudoFunctor, bounded_morphisms
from .trackcat import DKVerdict, TrackCategory, axiom_check


class StrictifyError(ValueError):
    pass


def _fmt(w) -> str:
    return json.dumps(_jsonable(w), sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# views


class DGView:
    """Abstract 1-truncated DG-category of pullback shape over ``self.T``."""

    T: TrackCategory
    objects: tuple
    name: str = "view"

    def zero0(self, A, B): raise NotImplementedError
    def add0(self, A, B, x, y): raise NotImplementedError
    def scale0(self, A, B, k, x): raise NotImplementedError
    def compose0(self, A, B, C, x, y): raise NotImplementedError
    def unit0(self, A): raise NotImplementedError
    def image(self, A, B, x) -> Element: raise NotImplementedError
    def gamma(self, A, B, C, x, y) -> Element: raise NotImplementedError
    def letters(self, A, B, bound: int) -> list: raise NotImplementedError
    def letter_value(self, A, B, letter): raise NotImplementedError
    def decompose(self, A, B, x) -> list: raise NotImplementedError
    def morphisms(self, A, B, bound: int, max_terms: int) -> list: raise NotImplementedError

    def sub0(self, A, B, x, y):
        return self.add0(A, B, x, self.scale0(A, B, -1, y))

    # degree 1

    def fiber(self, A, B, x) -> list[Element]:
        return self.T.tracks_to_zero(A, B, self.image(A, B, x))

    def is_boundary(self, A, B, x) -> bool:
        return bool(self.fiber(A, B, x))

    def cells1(self, A, B, bound: int, max_terms: int) -> list:
        return [(h, x) for x in self.morphisms(A, B, bound, max_terms) for h in self.fiber(A, B, x)]

    def in_pullback(self, A, B, cell) -> bool:
        h, x = cell
        return self.T.d(A, B, h) == self.image(A, B, x)

    def add1(self, A, B, u, v):
        return (self.T.hom(A, B).c1.add(u[0], v[0]), self.add0(A, B, u[1], v[1]))

    def tensor01(self, A, B, C, y, cell):
        """``y (x) (h, x)`` for ``y: B -> C`` and a cell ``A -> B``."""
        h, x = cell
        T = self.T
        moore = T.hom(A, C).c1.sub(T.lwhisk(A, B, C, self.image(B, C, y), h, T.zero0(A, B)),
                                   self.gamma(A, B, C, y, x))
        return moore, self.compose0(A, B, C, y, x)

    def tensor10(self, A, B, C, cell, y):
        """``(h, x) (x) y`` for a cell ``B -> C`` and ``y: A -> B``."""
        h, x = cell
        T = self.T
        moore = T.hom(A, C).c1.sub(T.rwhisk(A, B, C, h, self.image(A, B, y)), self.gamma(A, B, C, x, y))
        return moore, self.compose0(A, B, C, x, y)


class FiniteDG(DGView):
    """A finite bilinear instance seen as a DG view (``image`` = identity)."""

    def __init__(self, S: TrackCategory):
        self.T = S
        self.objects = S.objects
        self.name = S.name

    def zero0(self, A, B):
        return self.T.zero0(A, B)

    def add0(self, A, B, x, y):
        return self.T.hom(A, B).c0.add(x, y)

    def scale0(self, A, B, k, x):
        return self.T.hom(A, B).c0.scale(k, x)

    def compose0(self, A, B, C, x, y):
        return self.T.mu0(A, B, C, x, y)

    def unit0(self, A):
        return self.T.unit(A)

    def image(self, A, B, x):
        return x

    def gamma(self, A, B, C, x, y):
        return self.T.zero1(A, C)

    def letters(self, A, B, bound=0):
        G = self.T.hom(A, B).c0
        return [(i, d) for i, d in enumerate(G.orders) if d != 1]

    def letter_value(self, A, B, letter):
        G = self.T.hom(A, B).c0
        return tuple(int(j == letter) for j in range(G.rank))

    def decompose(self, A, B, x):
        return [(i, c) for i, c in enumerate(x) if c]

    def morphisms(self, A, B, bound=0, max_terms=0):
        return list(enumerate_group(self.T.hom(A, B).c0))


class PseudoDG(DGView):
    """``B``: 0-cells from ``R Mon(E)``, tracks pulled back along ``s``."""

    def __init__(self, P: PseudoFunctor):
        self.P = P
        self.T = P.T
        self.objects = tuple(P.B0.objects)
        self.name = f"B[{P.T.name}]"
        self.ring = P.B0.ring

    def zero0(self, A, B):
        return self.P.B0.zero(A, B)

    def add0(self, A, B, x, y):
        return x + y

    def scale0(self, A, B, k, x):
        return x.scale(k)

    def compose0(self, A, B, C, x, y):
        return x.compose(y)

    def unit0(self, A):
        return self.P.B0.identity(A)

    def image(self, A, B, x):
        return self.P.s(x)

    def gamma(self, A, B, C, x, y):
        return self.P.gammac(x, y)

    def letters(self, A, B, bound):
        return [(w, self.ring.modulus or 0) for w in self.P.B0.words(A, B, bound)]

    def letter_value(self, A, B, letter):
        return LinComb.of_word(self.ring, letter)

    def decompose(self, A, B, x):
        return list(x.terms)

    def morphisms(self, A, B, bound, max_terms):
        return bounded_morphisms(self.P, A, B, bound, max_terms)


# ---------------------------------------------------------------------------
# relaxation


@dataclass(frozen=True)
class RelaxComb:
    """Normal form in the relaxation: ``((letters, coeff), ...)``.

    A word is a tuple of interned letter ids read right to left; the coefficient
    of a nonempty word is reduced modulo the gcd of its letters' orders (0 for
    free letters), the empty word keeps an integer coefficient.
    """

    src: object
    tgt: object
    terms: tuple = ()
    view: object = field(default=None, compare=False, repr=False)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.src, self.tgt, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for w, c in self.terms:
            body = "".join(f"[{self.view.render_letter(i)}]" for i in w) if w else f"1~_{self.src}"
            out.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(out)

    def to_json(self):
        return {"src": self.src, "tgt": self.tgt, "value": str(self)}


class Relaxation(DGView):
    """The relaxation of a bilinear DG view ``S``.

    ``image`` and ``gamma`` factor through evaluation ``Q~`` into ``S``, so a
    track ``u => 0`` is a track of ``S`` from ``Q~ u`` to 0.
    """

    def __init__(self, S: DGView, letter_bound: int = 1):
        self.S = S
        self.T = S.T
        self.objects = S.objects
        self.name = f"relax[{S.name}]"
        self.letter_bound = letter_bound
        self._ids: dict = {}
        self._table: list = []
        self._order: list = []
        self._mod: dict = {(): 0}
        self._q: dict = {}
        self._comp: dict = {}
        self._loaded: set = set()

    def _load(self, X, Y):
        if (X, Y) not in self._loaded:
            self._loaded.add((X, Y))
            for r, order in self.S.letters(X, Y, self.letter_bound):
                if (X, Y, r) not in self._ids:
                    self._ids[X, Y, r] = len(self._table)
                    self._table.append((X, Y, r))
                    self._order.append(order)

    def letter(self, X, Y, raw) -> int:
        self._load(X, Y)
        i = self._ids.get((X, Y, raw))
        if i is None:
            raise StrictifyError(f"{raw} is not a letter of {X} -> {Y}")
        return i

    def decode(self, i: int) -> tuple:
        """``(X, Y, raw letter)`` of an interned id."""
        return self._table[i]

    def render_letter(self, i: int) -> str:
        X, Y, r = self._table[i]
        v = self.S.letter_value(X, Y, r)
        return str(v) if isinstance(v, LinComb) else f"{X}->{Y}:{r}"

    def modulus(self, w: tuple) -> int:
        m = self._mod.get(w)
        if m is None:
            m = 0
            for i in w:
                m = math.gcd(m, self._order[i])
            self._mod[w] = m
        return m

    def normalize(self, A, B, terms) -> RelaxComb:
        acc: dict = {}
        for w, c in terms:
            acc[w] = acc.get(w, 0) + c
        out = []
        for w in sorted(acc, key=lambda w: (len(w), w)):
            m = self.modulus(w)
            c = acc[w] % m if m else acc[w]
            if c:
                out.append((w, c))
        return RelaxComb(A, B, tuple(out), self)

    def zero0(self, A, B):
        return RelaxComb(A, B, (), self)

    def add0(self, A, B, x, y):
        return self.normalize(A, B, x.terms + y.terms)

    def scale0(self, A, B, k, x):
        return self.normalize(A, B, [(w, k * c) for w, c in x.terms])

    def compose0(self, A, B, C, x, y):
        key = (x, y)
        v = self._comp.get(key)
        if v is None:
            v = self.normalize(A, C, [(w + u, c * d) for w, c in x.terms for u, d in y.terms])
            self._comp[key] = v
        return v

    def unit0(self, A):
        return RelaxComb(A, A, (((), 1),), self)

    def word_comb(self, A, B, word, c=1):
        return self.normalize(A, B, [(tuple(word), c)])

    def evaluate_word(self, A, B, word):
        """``Q~`` of a single word: the composite in ``S``."""
        S = self.S
        if not word:
            return S.unit0(A)
        X, Y, r = self.decode(word[-1])
        val = S.letter_value(X, Y, r)
        for i in reversed(word[:-1]):
            X2, Y2, r2 = self.decode(i)
            val = S.compose0(A, X2, Y2, S.letter_value(X2, Y2, r2), val)
        return val

    def Q(self, A, B, u: RelaxComb):
        key = u
        v = self._q.get(key)
        if v is None:
            S = self.S
            v = S.zero0(A, B)
            for w, c in u.terms:
                v = S.add0(A, B, v, S.scale0(A, B, c, self.evaluate_word(A, B, w)))
            self._q[key] = v
        return v

    def P(self, A, B, x):
        """``P~``: length-one words of the letters of ``x``."""
        return self.normalize(A, B, [((self.letter(A, B, r),), c) for r, c in self.S.decompose(A, B, x)])

    def image(self, A, B, x):
        return self.S.image(A, B, self.Q(A, B, x))

    def gamma(self, A, B, C, x, y):
        return self.S.gamma(A, B, C, self.Q(B, C, x), self.Q(A, B, y))

    def letters(self, A, B, bound):
        raise StrictifyError("relaxations are not relaxed again here")

    def words(self, A, B, length: int) -> list[tuple]:
        """Composable letter words ``A -> B`` of the given length."""
        if length == 0:
            return [()] if A == B else []
        objs = self.objects
        out = []

        def build(prefix, at):
            if len(prefix) == length:
                if at == A:
                    out.append(tuple(prefix))
                return
            for X in objs:
                self._load(X, at)
                for i, (X1, Y1, _) in enumerate(self._table):
                    if X1 == X and Y1 == at:
                        build(prefix + [i], X)

        build([], B)
        return out

    def morphisms(self, A, B, bound, max_terms):
        ws = [w for n in range(bound + 1) for w in self.words(A, B, n)]
        seen, out = set(), []
        for k in range(max_terms + 1):
            for sub in itertools.combinations(ws, k):
                ranges = []
                for w in sub:
                    m = self.modulus(w)
                    ranges.append(range(1, m) if m else (1, -1, 2))
                for cs in itertools.product(*ranges):
                    u = self.normalize(A, B, list(zip(sub, cs)))
                    if u not in seen:
                        seen.add(u)
                        out.append(u)
        return out


def relax(S: TrackCategory | DGView, word_bound: int = 3, letter_bound: int = 1, budget: int = 20000) -> tuple:
    """``(S~, Q~, P~)`` for a bilinear finite instance or a DG view.

    ``Q~`` and ``P~`` are returned as callables on 0-cells.
    """
    if isinstance(S, TrackCategory):
        _require_bilinear(S, budget)
        S = FiniteDG(S)
    R = Relaxation(S, letter_bound)
    R.word_bound = word_bound
    return R, R.Q, R.P


def _require_bilinear(S: TrackCategory, budget: int = 20000):
    rep = axiom_check(S, budget)
    if not rep.passed:
        raise StrictifyError(f"{S.name} is not a valid instance")
    if not rep["right linearity"].passed:
        raise StrictifyError(f"{S.name} is not bilinear: right linearity fails")

    def lw_base_free(A, B, C, x, h, b):
        return S.lwhisk(A, B, C, x, h, b) == S.lwhisk(A, B, C, x, h, S.zero0(A, B))

    def rw_additive(A, B, C, h, y, y2):
        return S.rwhisk(A, B, C, h, S.hom(A, B).c0.add(y, y2)) == S.hom(A, C).c1.add(
            S.rwhisk(A, B, C, h, y), S.rwhisk(A, B, C, h, y2))

    rng = random.Random(0)
    tri = S.triples()
    for name, blocks, pred in [
        ("lwhisk independent of base", [Quantifier(t, ("x", "h", "b"), (S.hom(t[1], t[2]).c0, S.hom(t[0], t[1]).c1,
                                                                         S.hom(t[0], t[1]).c0)) for t in tri], lw_base_free),
        ("rwhisk additive in the 0-cell", [Quantifier(t, ("h", "y", "y'"), (S.hom(t[1], t[2]).c1, S.hom(t[0], t[1]).c0,
                                                                            S.hom(t[0], t[1]).c0)) for t in tri], rw_additive)]:
        r = check_law(name, blocks, pred, budget, rng, ("A", "B", "C"))
        if not r.passed:
            raise StrictifyError(f"{S.name} is not bilinear: {name} fails at {r.witness}")


# ---------------------------------------------------------------------------
# DG laws


def dg_laws(V: DGView, bound: int = 2, max_terms: int = 1, budget: int | None = None,
            seed: int = DEFAULT_SEED) -> Report:
    """Associativity, units, bilinearity (including right linearity) and Leibniz."""
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    rep = Report(f"dg_laws[{V.name}]", seed, budget, info={"word_bound": bound, "max_terms": max_terms})
    objs = list(V.objects)
    m0 = {(A, B): V.morphisms(A, B, bound, max_terms) for A in objs for B in objs}
    m1 = {(A, B): [(h, x) for x in m0[A, B] for h in V.fiber(A, B, x)] for A in objs for B in objs}
    rep.info["cells"] = {f"{A}->{B}": [len(m0[A, B]), len(m1[A, B])] for A in objs for B in objs}
    tri = [(A, B, C) for A in objs for B in objs for C in objs]
    quads = [(A, B, C, D) for A in objs for B in objs for C in objs for D in objs]
    ctx3, ctx4 = ("A", "B", "C"), ("A", "B", "C", "D")

    def run(name, blocks, pred, ctx):
        rep.results.append(check_law(name, blocks, pred, budget, rng, ctx))

    run("pullback condition",
        [Quantifier(t, ("y", "alpha"), (m0[t[1], t[2]], m1[t[0], t[1]])) for t in tri],
        lambda A, B, C, y, a: V.in_pullback(A, C, V.tensor01(A, B, C, y, a)), ctx3)
    run("pullback condition (right action)",
        [Quantifier(t, ("alpha", "y"), (m1[t[1], t[2]], m0[t[0], t[1]])) for t in tri],
        lambda A, B, C, a, y: V.in_pullback(A, C, V.tensor10(A, B, C, a, y)), ctx3)
    run("associativity (x y) alpha = x (y alpha)",
        [Quantifier(q, ("x", "y", "alpha"), (m0[q[2], q[3]], m0[q[1], q[2]], m1[q[0], q[1]])) for q in quads],
        lambda A, B, C, D, x, y, a: (V.tensor01(A, B, D, V.compose0(B, C, D, x, y), a)
                                     == V.tensor01(A, C, D, x, V.tensor01(A, B, C, y, a))), ctx4)
    run("associativity (x alpha) z = x (alpha z)",
        [Quantifier(q, ("x", "alpha", "z"), (m0[q[2], q[3]], m1[q[1], q[2]], m0[q[0], q[1]])) for q in quads],
        lambda A, B, C, D, x, a, z: (V.tensor10(A, B, D, V.tensor01(B, C, D, x, a), z)
                                     == V.tensor01(A, C, D, x, V.tensor10(A, B, C, a, z))), ctx4)
    run("associativity (alpha y) z = alpha (y z)",
        [Quantifier(q, ("alpha", "y", "z"), (m1[q[2], q[3]], m0[q[1], q[2]], m0[q[0], q[1]])) for q in quads],
        lambda A, B, C, D, a, y, z: (V.tensor10(A, B, D, V.tensor10(B, C, D, a, y), z)
                                     == V.tensor10(A, C, D, a, V.compose0(A, B, C, y, z))), ctx4)
    pairs = [(A, B) for A in objs for B in objs]
    run("units", [Quantifier(p, ("alpha",), (m1[p],)) for p in pairs],
        lambda A, B, a: (V.tensor01(A, B, B, V.unit0(B), a) == a and V.tensor10(A, A, B, a, V.unit0(A)) == a),
        ("A", "B"))
    run("left linearity (x + x') alpha",
        [Quantifier(t, ("x", "x'", "alpha"), (m0[t[1], t[2]], m0[t[1], t[2]], m1[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, x2, a: (V.tensor01(A, B, C, V.add0(B, C, x, x2), a)
                                   == V.add1(A, C, V.tensor01(A, B, C, x, a), V.tensor01(A, B, C, x2, a))), ctx3)
    run("x (alpha + alpha')",
        [Quantifier(t, ("x", "alpha", "alpha'"), (m0[t[1], t[2]], m1[t[0], t[1]], m1[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, a, a2: (V.tensor01(A, B, C, x, V.add1(A, B, a, a2))
                                   == V.add1(A, C, V.tensor01(A, B, C, x, a), V.tensor01(A, B, C, x, a2))), ctx3)
    run("(alpha + alpha') y",
        [Quantifier(t, ("alpha", "alpha'", "y"), (m1[t[1], t[2]], m1[t[1], t[2]], m0[t[0], t[1]])) for t in tri],
        lambda A, B, C, a, a2, y: (V.tensor10(A, B, C, V.add1(B, C, a, a2), y)
                                   == V.add1(A, C, V.tensor10(A, B, C, a, y), V.tensor10(A, B, C, a2, y))), ctx3)
    run("right linearity alpha (y + y')",
        [Quantifier(t, ("alpha", "y", "y'"), (m1[t[1], t[2]], m0[t[0], t[1]], m0[t[0], t[1]])) for t in tri],
        lambda A, B, C, a, y, y2: (V.tensor10(A, B, C, a, V.add0(A, B, y, y2))
                                   == V.add1(A, C, V.tensor10(A, B, C, a, y), V.tensor10(A, B, C, a, y2))), ctx3)
    run("bilinearity in degree 0",
        [Quantifier(t, ("x", "y", "y'"), (m0[t[1], t[2]], m0[t[0], t[1]], m0[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, y, y2: (V.compose0(A, B, C, x, V.add0(A, B, y, y2))
                                   == V.add0(A, C, V.compose0(A, B, C, x, y), V.compose0(A, B, C, x, y2))), ctx3)
    run("Leibniz (d alpha) beta = alpha (d beta)",
        [Quantifier(t, ("alpha", "beta"), (m1[t[1], t[2]], m1[t[0], t[1]])) for t in tri],
        lambda A, B, C, a, b: V.tensor01(A, B, C, a[1], b) == V.tensor10(A, B, C, a, b[1]), ctx3)
    run("Leibniz d(x alpha) = x d(alpha), d(alpha y) = d(alpha) y",
        [Quantifier(t, ("x", "alpha"), (m0[t[1], t[2]], m1[t[0], t[1]])) for t in tri],
        lambda A, B, C, x, a: V.tensor01(A, B, C, x, a)[1] == V.compose0(A, B, C, x, a[1]), ctx3)
    return rep


# ---------------------------------------------------------------------------
# comparison maps and DK verdicts


def _h0_classes(T: TrackCategory, A, B):
    return list(enumerate_group(T.homology(A, B).H0))


def dk_view(V: DGView, F0, F1, target: TrackCategory, bound: int, max_terms: int, name: str,
            strict=None) -> DKVerdict:
    """Bounded DK test for a map from a view to a finite instance.

    ``F0(A, B, x)`` and ``F1(A, B, (h, x))`` give the 0-cell and Moore part.
    ``H1`` is finite and compared exactly.  ``H0`` surjectivity asks that the
    classes of bounded 0-cells generate ``H0`` (the induced map is additive);
    injectivity checks that every bounded 0-cell in the zero class is a
    boundary.
    """
    reasons, details = [], {}
    for A in V.objects:
        for B in V.objects:
            ht = target.homology(A, B)
            cyc = V.T.cycles(A, B)
            zero = V.zero0(A, B)
            imgs = {ht.cycle_coords(F1(A, B, (h, zero))) for h in cyc}
            h1_ok = (len(imgs) == len(cyc) == ht.H1.order)
            xs = V.morphisms(A, B, bound, max_terms)
            chain_ok = True
            reached, inj_ok = set(), True
            for x in xs:
                c = target.h0_class(A, B, F0(A, B, x))
                reached.add(c)
                if c == ht.H0.zero() and not V.is_boundary(A, B, x):
                    inj_ok = False
                for h in V.fiber(A, B, x):
                    if target.d(A, B, F1(A, B, (h, x))) != F0(A, B, x):
                        chain_ok = False
            surj_ok = len(_span(ht.H0, reached)) == ht.H0.order
            details[f"{A}->{B}"] = {"H1_iso": h1_ok, "H0_surjective": surj_ok, "H0_injective": inj_ok,
                                    "chain_map": chain_ok}
            if not chain_ok:
                reasons.append(f"{name} is not a chain map on ({A}, {B})")
            if not h1_ok:
                reasons.append(f"{name}: H1 map on ({A}, {B}) is not an isomorphism")
            if not surj_ok:
                reasons.append(f"{name}: H0 map on ({A}, {B}) misses classes at word bound {bound}")
            if not inj_ok:
                reasons.append(f"{name}: H0 map on ({A}, {B}) is not injective")
    if strict is not None and not strict.passed:
        details["strict"] = strict.to_dict()
        reasons.append(f"{name} does not preserve composition: {_fmt(strict.witness)}")
    elif strict is not None:
        details["strict"] = strict.to_dict()
    return DKVerdict(not reasons, reasons, details, bound)


def sigma(V: DGView):
    """``sigma: V -> T`` on 0-cells and tracks."""
    return (lambda A, B, x: V.image(A, B, x)), (lambda A, B, cell: cell[0])


def sigma_verdict(V: DGView, bound: int, max_terms: int) -> DKVerdict:
    F0, F1 = sigma(V)
    return dk_view(V, F0, F1, V.T, bound, max_terms, "sigma")


def q_tilde(R: Relaxation):
    """``Q~`` followed by ``image`` into the finite base (equal to ``Q~`` for finite bilinear S)."""
    return ((lambda A, B, u: R.image(A, B, u)), (lambda A, B, cell: cell[0]))


def hat_gamma(R: Relaxation, A, B, word) -> Element:
    """Moore part of the coherence track ``G~(w) => image(Q~ w)`` for a letter word."""
    S, T = R.S, R.T
    if len(word) <= 1:
        return T.zero1(A, B)
    X, Y, r = R.decode(word[0])           # last letter applied
    rest = word[1:]                       # a word A -> X
    f = S.letter_value(X, Y, r)
    q_rest = R.evaluate_word(A, X, rest)
    inner = hat_gamma(R, A, X, rest)
    K1 = T.hom(A, B).c1
    return K1.add(T.lwhisk(A, X, Y, S.image(X, Y, f), inner, S.image(A, X, q_rest)),
                  S.gamma(A, X, Y, f, q_rest))


def g_tilde_word(R: Relaxation, A, B, word) -> Element:
    S, T = R.S, R.T
    if not word:
        return T.unit(A)
    X, Y, r = R.decode(word[-1])
    val = S.image(X, Y, S.letter_value(X, Y, r))
    for i in reversed(word[:-1]):
        X2, Y2, r2 = R.decode(i)
        val = T.mu0(A, X2, Y2, S.image(X2, Y2, S.letter_value(X2, Y2, r2)), val)
    return val


def g_tilde(R: Relaxation):
    """``G~: S~ -> T`` with ``G~ P~ = F`` where ``F = (image, gamma)`` of ``S``."""
    T = R.T

    def F0(A, B, u):
        K0 = T.hom(A, B).c0
        return K0.sum([K0.scale(c, g_tilde_word(R, A, B, w)) for w, c in u.terms])

    def F1(A, B, cell):
        h, u = cell
        K1 = T.hom(A, B).c1
        return K1.sum([h] + [K1.scale(c, hat_gamma(R, A, B, w)) for w, c in u.terms])

    return F0, F1


def functor_strictness(R: Relaxation, F0, target: TrackCategory, bound: int, max_terms: int,
                       budget: int | None = None, seed: int = DEFAULT_SEED, name: str = "") -> LawResult:
    budget = default_budget() if budget is None else budget
    objs = list(R.objects)
    m0 = {(A, B): R.morphisms(A, B, bound, max_terms) for A in objs for B in objs}
    tri = [(A, B, C) for A in objs for B in objs for C in objs]
    return check_law(f"{name} preserves composition",
                     [Quantifier(t, ("u", "v"), (m0[t[1], t[2]], m0[t[0], t[1]])) for t in tri],
                     lambda A, B, C, u, v: F0(A, C, R.compose0(A, B, C, u, v))
                     == target.mu0(A, B, C, F0(B, C, u), F0(A, B, v)),
                     budget, random.Random(seed), ("A", "B", "C"))


def factorization_check(R: Relaxation, bound: int, max_terms: int, budget: int | None = None,
                        seed: int = DEFAULT_SEED) -> Report:
    """``G~ P~ = F`` on bounded 0-cells and tracks of ``S``."""
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    S = R.S
    G0, G1 = g_tilde(R)
    rep = Report(f"factorization[{R.name}]", seed, budget, info={"word_bound": bound})
    pairs = [(A, B) for A in R.objects for B in R.objects]
    m0 = {p: S.morphisms(*p, bound, max_terms) for p in pairs}
    m1 = {p: [(h, x) for x in m0[p] for h in S.fiber(*p, x)] for p in pairs}
    rep.results.append(check_law("G~ P~ = F on 0-cells", [Quantifier(p, ("x",), (m0[p],)) for p in pairs],
                                 lambda A, B, x: G0(A, B, R.P(A, B, x)) == S.image(A, B, x),
                                 budget, rng, ("A", "B")))
    rep.results.append(check_law("G~ P~ = F on tracks", [Quantifier(p, ("alpha",), (m1[p],)) for p in pairs],
                                 lambda A, B, a: G1(A, B, (a[0], R.P(A, B, a[1]))) == a[0],
                                 budget, rng, ("A", "B")))
    rep.results.append(check_law("Q~ P~ = id", [Quantifier(p, ("x",), (m0[p],)) for p in pairs],
                                 lambda A, B, x: R.Q(A, B, R.P(A, B, x)) == x, budget, rng, ("A", "B")))
    return rep


# ---------------------------------------------------------------------------
# B and the pipeline


@dataclass
class Dossier:
    title: str
    ring: str
    word_bound: int
    sections: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)
    homology: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        secs = all(r.passed for r in self.sections.values())
        return secs and all(v.equivalence for k, v in self.verdicts.items() if k != "G~ (strict)")

    def to_dict(self):
        return {"title": self.title, "ring": self.ring, "word_bound": self.word_bound, "passed": self.passed,
                "sections": {k: v.to_dict() for k, v in self.sections.items()},
                "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
                "homology": self.homology, "findings": self.findings}

    def summary(self) -> str:
        lines = [f"{self.title} (ring={self.ring}, word bound={self.word_bound})"]
        for k, r in self.sections.items():
            lines.append(r.summary())
        for k, v in self.verdicts.items():
            lines.append(f"DK verdict {k}: {'equivalence' if v.equivalence else 'NOT an equivalence'}"
                         f" (word bound {v.bound})")
            lines.extend(f"  - {x}" for x in v.reasons)
        for f in self.findings:
            lines.append(f"finding: {f}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def build_B(P: PseudoFunctor, bound: int = 2, max_terms: int = 1, budget: int | None = None,
            seed: int = DEFAULT_SEED, check_graph: bool = True) -> tuple[PseudoDG, DKVerdict, Report]:
    """Assemble ``B`` from a pseudo-functor; return ``(B, sigma verdict, DG-law report)``."""
    T = P.T
    K = getattr(P, "construction", None)
    if check_graph and K is not None:
        v = check_generating(T, K.E, classes_of_lifts(T, K.E, K.s_E))
        if v.status != "true":
            raise StrictifyError(f"fullness fails: generating graph verdict {v.status}")
    V = PseudoDG(P)
    # local linearity of s
    for A in V.objects:
        for B in V.objects:
            ms = V.morphisms(A, B, bound, max_terms)
            for x, y in itertools.islice(itertools.product(ms, ms), 4000):
                if P.s(x + y) != T.hom(A, B).c0.add(P.s(x), P.s(y)):
                    raise StrictifyError(f"s is not locally linear at {x}, {y}")
    rep = dg_laws(V, bound, max_terms, budget, seed)
    return V, sigma_verdict(V, bound, max(2, max_terms)), rep


def strictify_pipeline(T: TrackCategory, G, E: Graph, s_E: dict, ring: str = "zpp", p: int | None = None,
                       word_bound: int = 2, max_terms: int = 1, budget: int | None = None,
                       seed: int = DEFAULT_SEED, relax_bound: int | None = None) -> Dossier:
    """Pseudo-functor, ``B``, its relaxation, and the zigzag ``B <- B~ -> T``."""
    from .pseudo import build_pseudo_integral, build_pseudo_padic, check_coherence

    if ring == "zpp":
        if p is None:
            raise StrictifyError("ring zpp needs the prime p")
        P = build_pseudo_padic(E, s_E, T, G, p)
        ring_name = f"Z/{p * p}"
    elif ring == "z":
        P = build_pseudo_integral(E, s_E, T, G)
        ring_name = "Z"
    else:
        raise StrictifyError(f"unknown ring {ring!r}")
    d = Dossier(f"strictify[{T.name}]", ring_name, word_bound)
    d.sections["coherence"] = check_coherence(P, word_bound, budget, seed, max_terms)
    V, sig, laws = build_B(P, word_bound, max_terms, budget, seed, check_graph=False)
    d.sections["B laws"] = laws
    d.verdicts["sigma"] = sig
    if sig.equivalence:
        for A in V.objects:
            for B in V.objects:
                h = T.homology(A, B)
                d.homology[f"{A}->{B}"] = {"H0": list(h.H0.orders), "H1": list(h.H1.orders)}
    if any(P.gammac(x, y) != T.zero1(A, C)
           for A in V.objects for B in V.objects for C in V.objects
           for x in V.morphisms(B, C, word_bound, max_terms) for y in V.morphisms(A, B, word_bound, max_terms)):
        d.findings.append("B differs from the naive linearization: some coherence track is nonzero")
    rb = relax_bound if relax_bound is not None else min(word_bound, 2)
    R = Relaxation(V, letter_bound=rb)
    q0, q1 = q_tilde(R)
    d.verdicts["Q~"] = dk_view(R, q0, q1, T, rb, 2, "Q~")
    g0, g1 = g_tilde(R)
    strict = functor_strictness(R, g0, T, rb, 2, budget, seed, "G~")
    d.verdicts["G~"] = dk_view(R, g0, g1, T, rb, 2, "G~")
    d.verdicts["G~ (strict)"] = DKVerdict(strict.passed, [] if strict.passed else
                                          [f"G~ is not strictly functorial: {_fmt(strict.witness)}"],
                                          {"strict": strict.to_dict()}, rb)
    if not strict.passed:
        d.findings.append("G~ fails strict functoriality on sums; the target is not right linear")
    d.sections["factorization"] = factorization_check(R, rb, 1, budget, seed)
    d.sections["relaxation laws"] = dg_laws(R, rb, 1, budget, seed)
    return d
