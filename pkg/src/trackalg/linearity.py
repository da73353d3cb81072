"""Linearity tracks ``Gamma_a^{x,y}: a(x+y) => ax + ay`` and their laws.

All tracks are handled through Moore parts.  ``g(a; x, y)`` denotes the
Moore part of ``Gamma_a^{x,y}``; its base is ``ax + ay``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .algebra import (AbHom, ChainMap, Element, TruncComplex1, enumerate_group, homology, kernel,
                      solve_preimage)
from .laws import DEFAULT_SEED, LawResult, Quantifier, Report, check_law, default_budget
from .trackcat import InstanceError, TrackCategory

EQUATIONS = tuple("Gamma " + n for n in ("precomposition", "postcomposition", "symmetry", "left linearity",
                                          "associativity", "naturality in x,y", "naturality in a"))


class LinearitySystem:
    """``gamma(A, B, C, a, x, y)`` with ``a: B -> C`` and ``x, y: A -> B``."""

    def __init__(self, T: TrackCategory, gamma: Callable, name: str = "", description: dict | None = None):
        self.T = T
        self._gamma = gamma
        self.name = name
        self.description = description

    def __call__(self, A, B, C, a: Element, x: Element, y: Element) -> Element:
        return self._gamma(A, B, C, a, x, y)

    def track(self, A, B, C, a, x, y):
        """``(moore, base)`` of ``Gamma_a^{x,y}``."""
        T = self.T
        base = T.hom(A, C).c0.add(T.mu0(A, B, C, a, x), T.mu0(A, B, C, a, y))
        return self(A, B, C, a, x, y), base


def identity_system(T: TrackCategory) -> LinearitySystem:
    def gamma(A, B, C, a, x, y):
        return T.zero1(A, C)

    return LinearitySystem(T, gamma, "identity", {"rule": "identity"})


def table_system(T: TrackCategory, table: dict, name: str = "") -> LinearitySystem:
    """``table[(A,B,C)][(a, x, y)]``; missing entries are errors."""

    def gamma(A, B, C, a, x, y):
        try:
            return table[A, B, C][tuple(a), tuple(x), tuple(y)]
        except KeyError:
            raise InstanceError(f"linearity table has no entry for {(A, B, C)} {(a, x, y)}") from None

    return LinearitySystem(T, gamma, name, None)


def with_gamma_override(G: LinearitySystem, key: tuple, args: tuple, value: Element) -> LinearitySystem:
    def gamma(A, B, C, a, x, y):
        if (A, B, C) == key and (tuple(a), tuple(x), tuple(y)) == args:
            return tuple(value)
        return G(A, B, C, a, x, y)

    return LinearitySystem(G.T, gamma, f"{G.name}*")


# ---------------------------------------------------------------------------
# the seven equations


def verify_linearity(T: TrackCategory, G: LinearitySystem, budget: int | None = None,
                     seed: int = DEFAULT_SEED) -> Report:
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    rep = Report(f"verify_linearity[{T.name}]", seed, budget)

    def c0(A, B):
        return T.hom(A, B).c0

    def c1(A, B):
        return T.hom(A, B).c1

    def run(name, blocks, pred, ctx):
        rep.results.append(check_law(name, blocks, pred, budget, rng, ctx))

    tri, quads = T.triples(), T.quads()
    ctx3, ctx4 = ("A", "B", "C"), ("A", "B", "C", "D")

    def axy(t, extra=()):
        A, B, C = t
        return Quantifier(t, ("a", "x", "y") + tuple(n for n, _ in extra),
                          (c0(B, C), c0(A, B), c0(A, B)) + tuple(d for _, d in extra))

    def boundary(A, B, C, a, x, y):
        lhs = T.d(A, C, G(A, B, C, a, x, y))
        G0 = c0(A, C)
        rhs = G0.sub(G0.sub(T.mu0(A, B, C, a, c0(A, B).add(x, y)), T.mu0(A, B, C, a, x)),
                     T.mu0(A, B, C, a, y))
        return lhs == rhs

    run("boundary", [axy(t) for t in tri], boundary, ctx3)

    # (1): objects A' -> A -> B -> C, z: A' -> A
    def pre(A0, A, B, C, a, x, y, z):
        lhs = G(A0, B, C, a, T.mu0(A0, A, B, x, z), T.mu0(A0, A, B, y, z))
        return lhs == T.rwhisk(A0, A, C, G(A, B, C, a, x, y), z)

    run(EQUATIONS[0],
        [Quantifier(q, ("a", "x", "y", "z"), (c0(q[2], q[3]), c0(q[1], q[2]), c0(q[1], q[2]), c0(q[0], q[1])))
         for q in quads], pre, ("A'", "A", "B", "C"))

    # (2): x, y: A -> B, a: B -> C, b: C -> D
    def post(A, B, C, D, b, a, x, y):
        ax, ay = T.mu0(A, B, C, a, x), T.mu0(A, B, C, a, y)
        lhs = G(A, B, D, T.mu0(B, C, D, b, a), x, y)
        rhs = c1(A, D).add(G(A, C, D, b, ax, ay),
                           T.lwhisk(A, C, D, b, G(A, B, C, a, x, y), c0(A, C).add(ax, ay)))
        return lhs == rhs

    run(EQUATIONS[1],
        [Quantifier(q, ("b", "a", "x", "y"), (c0(q[2], q[3]), c0(q[1], q[2]), c0(q[0], q[1]), c0(q[0], q[1])))
         for q in quads], post, ctx4)

    run(EQUATIONS[2], [axy(t) for t in tri],
        lambda A, B, C, a, x, y: G(A, B, C, a, x, y) == G(A, B, C, a, y, x), ctx3)

    def left_lin(A, B, C, a, x, y, a2):
        return G(A, B, C, c0(B, C).add(a, a2), x, y) == c1(A, C).add(G(A, B, C, a, x, y), G(A, B, C, a2, x, y))

    run(EQUATIONS[3], [axy(t, (("a'", c0(t[1], t[2])),)) for t in tri], left_lin, ctx3)

    def assoc(A, B, C, a, x, y, z):
        H0 = c0(A, B)
        lhs = c1(A, C).add(G(A, B, C, a, x, y), G(A, B, C, a, H0.add(x, y), z))
        rhs = c1(A, C).add(G(A, B, C, a, y, z), G(A, B, C, a, x, H0.add(y, z)))
        return lhs == rhs

    run(EQUATIONS[4], [axy(t, (("z", c0(t[0], t[1])),)) for t in tri], assoc, ctx3)

    # (6): tracks (Gx, x'): x => x' and (Hy, y'): y => y'
    def nat_xy(A, B, C, a, xp, yp, gx, hy):
        H0, K1 = c0(A, B), c1(A, C)
        x = H0.add(T.d(A, B, gx), xp)
        y = H0.add(T.d(A, B, hy), yp)
        lhs = K1.sum([T.lwhisk(A, B, C, a, gx, xp), T.lwhisk(A, B, C, a, hy, yp), G(A, B, C, a, x, y)])
        rhs = K1.add(G(A, B, C, a, xp, yp),
                     T.lwhisk(A, B, C, a, c1(A, B).add(gx, hy), H0.add(xp, yp)))
        return lhs == rhs

    run(EQUATIONS[5],
        [Quantifier(t, ("a", "x'", "y'", "G", "H"),
                    (c0(t[1], t[2]), c0(t[0], t[1]), c0(t[0], t[1]), c1(t[0], t[1]), c1(t[0], t[1])))
         for t in tri], nat_xy, ctx3)

    # (7): track (h, a'): a => a'
    def nat_a(A, B, C, ap, x, y, h):
        K1 = c1(A, C)
        a = c0(B, C).add(T.d(B, C, h), ap)
        lhs = K1.sum([T.rwhisk(A, B, C, h, x), T.rwhisk(A, B, C, h, y), G(A, B, C, a, x, y)])
        rhs = K1.add(G(A, B, C, ap, x, y), T.rwhisk(A, B, C, h, c0(A, B).add(x, y)))
        return lhs == rhs

    run(EQUATIONS[6],
        [Quantifier(t, ("a'", "x", "y", "h"),
                    (c0(t[1], t[2]), c0(t[0], t[1]), c0(t[0], t[1]), c1(t[1], t[2]))) for t in tri],
        nat_a, ctx3)

    # derived consequences
    run("derived: unit Gamma_1 = id", [Quantifier(p, ("x", "y"), (c0(*p), c0(*p))) for p in T.pairs()],
        lambda A, B, x, y: G(A, B, B, T.unit(B), x, y) == T.zero1(A, B), ("A", "B"))
    run("derived: Gamma_a^{x,0} = id",
        [Quantifier(t, ("a", "x"), (c0(t[1], t[2]), c0(t[0], t[1]))) for t in tri],
        lambda A, B, C, a, x: G(A, B, C, a, x, T.zero0(A, B)) == T.zero1(A, C), ctx3)
    ok = sum(1 for r in rep.results if r.name in EQUATIONS and r.passed)
    rep.info["equations"] = f"{ok}/{len(EQUATIONS)}"
    return rep


# ---------------------------------------------------------------------------
# iterated tracks


def _sum0(T, A, B, xs):
    return T.hom(A, B).c0.sum(xs)


def iterated_gamma(T: TrackCategory, G: LinearitySystem, A, B, C, a: Element, xs: Sequence[Element]) -> Element:
    """Moore part of ``Gamma_a^{x_1,...,x_n}`` (identity for ``n = 1``)."""
    if not xs:
        raise ValueError("iterated_gamma needs at least one map")
    K1 = T.hom(A, C).c1
    acc = K1.zero()
    for k in range(1, len(xs)):
        acc = K1.add(acc, G(A, B, C, a, _sum0(T, A, B, xs[:k]), xs[k]))
    return acc


def bracketings(indices: Sequence[int]):
    """All binary trees with the given leaves in order."""
    indices = tuple(indices)
    if len(indices) == 1:
        yield indices[0]
        return
    for k in range(1, len(indices)):
        for left in bracketings(indices[:k]):
            for right in bracketings(indices[k:]):
                yield (left, right)


def _leaves(tree):
    return [tree] if isinstance(tree, int) else _leaves(tree[0]) + _leaves(tree[1])


def break_sum(T: TrackCategory, G: LinearitySystem, A, B, C, a, xs, tree) -> Element:
    """Moore part of the track ``a(sum xs) => sum a x_i`` obtained by breaking
    the sum along ``tree`` (outermost split first)."""
    if isinstance(tree, int):
        return T.zero1(A, C)
    left, right = tree
    L = _sum0(T, A, B, [xs[i] for i in _leaves(left)])
    R = _sum0(T, A, B, [xs[i] for i in _leaves(right)])
    return T.hom(A, C).c1.sum([G(A, B, C, a, L, R), break_sum(T, G, A, B, C, a, xs, left),
                               break_sum(T, G, A, B, C, a, xs, right)])


def left_comb(n: int):
    tree = 0
    for i in range(1, n):
        tree = (tree, i)
    return tree


def gamma_int(T: TrackCategory, G: LinearitySystem, A, B, a: Element, n: int) -> Element:
    """Moore part of ``Gamma(n)_a: a(n 1_A) => n a`` for any integer ``n``.

    ``Gamma(0)`` is the identity of ``0`` by convention.
    """
    one = T.unit(A)
    H0 = T.hom(A, A).c0
    K1 = T.hom(A, B).c1
    if n == 0:
        return K1.zero()
    if n > 0:
        return iterated_gamma(T, G, A, A, B, a, [one] * n)
    minus_one = H0.neg(one)
    g1 = K1.neg(G(A, A, B, a, one, minus_one))
    if n == -1:
        return g1
    m = -n
    return K1.add(K1.scale(m, g1), iterated_gamma(T, G, A, A, B, a, [minus_one] * m))


def gamma_int_square(T: TrackCategory, G: LinearitySystem, A, B, a: Element, m: int) -> Element:
    """The other path of the square defining ``Gamma(-m)_a``: ``-Gamma(m) [] Gamma(-1)(m)``."""
    K1 = T.hom(A, B).c1
    m1 = T.multiple_of_unit(A, m)
    return K1.sub(T.rwhisk(A, A, B, gamma_int(T, G, A, B, a, -1), m1), gamma_int(T, G, A, B, a, m))


def check_integer_laws(T: TrackCategory, G: LinearitySystem, bound: int = 3, p: int | None = None) -> Report:
    """``Gamma(mn)``, ``Gamma(-m)`` and ``Gamma(m+n)`` identities, exhaustively in ``a``.

    With ``p`` given, also ``Gamma(p^2) = id`` (meaningful when 0-cells are
    ``p``-torsion).
    """
    rep = Report(f"integer_laws[{T.name}]", 0, 0)
    rng = random.Random(0)
    pairs = T.pairs()

    def mul(A, B, a, m, n):
        K1 = T.hom(A, B).c1
        na = T.hom(A, B).c0.scale(n, a)
        rhs = K1.add(T.lwhisk(A, B, B, T.multiple_of_unit(B, m), gamma_int(T, G, A, B, a, n), na),
                     T.rwhisk(A, A, B, gamma_int(T, G, A, B, a, m), T.multiple_of_unit(A, n)))
        return gamma_int(T, G, A, B, a, m * n) == rhs

    def neg(A, B, a, m):
        return gamma_int(T, G, A, B, a, -m) == gamma_int_square(T, G, A, B, a, m)

    def add(A, B, a, m, n):
        K1 = T.hom(A, B).c1
        rhs = K1.sum([gamma_int(T, G, A, B, a, m), gamma_int(T, G, A, B, a, n),
                      G(A, A, B, a, T.multiple_of_unit(A, m), T.multiple_of_unit(A, n))])
        return gamma_int(T, G, A, B, a, m + n) == rhs

    pos = list(range(1, bound + 1))
    allz = list(range(-bound, bound + 1))
    big = 10 ** 9
    rep.results.append(check_law("Gamma(mn)", [Quantifier(q, ("a", "m", "n"), (T.hom(*q).c0, allz, allz))
                                               for q in pairs], mul, big, rng, ("A", "B")))
    rep.results.append(check_law("Gamma(-m)", [Quantifier(q, ("a", "m"), (T.hom(*q).c0, pos))
                                                for q in pairs], neg, big, rng, ("A", "B")))
    rep.results.append(check_law("Gamma(m+n)", [Quantifier(q, ("a", "m", "n"), (T.hom(*q).c0, allz, allz))
                                                 for q in pairs], add, big, rng, ("A", "B")))
    if p is not None:
        rep.results.append(check_law(
            f"Gamma({p * p}) = id", [Quantifier(q, ("a",), (T.hom(*q).c0,)) for q in pairs],
            lambda A, B, a: gamma_int(T, G, A, B, a, p * p) == T.zero1(A, B), big, rng, ("A", "B")))
    return rep


def check_iterated_laws(T: TrackCategory, G: LinearitySystem, n_max: int = 4,
                        budget: int | None = None, seed: int = DEFAULT_SEED) -> Report:
    """Break-sum invariance over all bracketings and permutations, plus the
    iterated pre- and postcomposition equations, for ``2 <= n <= n_max``."""
    budget = default_budget() if budget is None else budget
    rng = random.Random(seed)
    rep = Report(f"iterated_laws[{T.name}]", seed, budget)
    tri, quads = T.triples(), T.quads()

    for n in range(2, n_max + 1):
        trees = list(bracketings(range(n)))
        perms = list(itertools.permutations(range(n)))

        def invariance(A, B, C, a, *xs):
            ref = iterated_gamma(T, G, A, B, C, a, xs)
            for tree in trees:
                if break_sum(T, G, A, B, C, a, xs, tree) != ref:
                    return False
            for s in perms:
                if iterated_gamma(T, G, A, B, C, a, [xs[i] for i in s]) != ref:
                    return False
            return True

        names = ("a",) + tuple(f"x{i + 1}" for i in range(n))
        blocks = [Quantifier(t, names, (T.hom(t[1], t[2]).c0,) + (T.hom(t[0], t[1]).c0,) * n) for t in tri]
        rep.results.append(check_law(f"break-sum invariance n={n}", blocks, invariance, budget, rng,
                                     ("A", "B", "C")))

        def pre(A0, A, B, C, a, z, *xs):
            lhs = iterated_gamma(T, G, A0, B, C, a, [T.mu0(A0, A, B, x, z) for x in xs])
            return lhs == T.rwhisk(A0, A, C, iterated_gamma(T, G, A, B, C, a, xs), z)

        blocks = [Quantifier(q, ("a", "z") + names[1:],
                             (T.hom(q[2], q[3]).c0, T.hom(q[0], q[1]).c0) + (T.hom(q[1], q[2]).c0,) * n)
                  for q in quads]
        rep.results.append(check_law(f"iterated precomposition n={n}", blocks, pre, budget, rng,
                                     ("A'", "A", "B", "C")))

        def post(A, B, C, D, b, a, *xs):
            axs = [T.mu0(A, B, C, a, x) for x in xs]
            lhs = iterated_gamma(T, G, A, B, D, T.mu0(B, C, D, b, a), xs)
            rhs = T.hom(A, D).c1.add(
                iterated_gamma(T, G, A, C, D, b, axs),
                T.lwhisk(A, C, D, b, iterated_gamma(T, G, A, B, C, a, xs), _sum0(T, A, C, axs)))
            return lhs == rhs

        blocks = [Quantifier(q, ("b", "a") + names[1:],
                             (T.hom(q[2], q[3]).c0, T.hom(q[1], q[2]).c0) + (T.hom(q[0], q[1]).c0,) * n)
                  for q in quads]
        rep.results.append(check_law(f"iterated postcomposition n={n}", blocks, post, budget, rng, ("A", "B", "C", "D")))
    return rep


def check_torsion(T: TrackCategory, p: int) -> LawResult:
    """If ``p x = 0`` for all 0-cells then ``p alpha = 0`` for all tracks."""
    torsion0 = all(T.hom(A, B).c0.scale(p, g) == T.zero0(A, B)
                   for A, B in T.pairs() for g in T.hom(A, B).c0.basis())
    if not torsion0:
        return LawResult(f"{p}-torsion of tracks", True, 0, True, note="0-cells not p-torsion")
    cases = 0
    for A, B in T.pairs():
        for g in T.hom(A, B).c1.basis():
            cases += 1
            if T.hom(A, B).c1.scale(p, g) != T.zero1(A, B):
                return LawResult(f"{p}-torsion of tracks", False, cases, True, {"A": A, "B": B, "h": g})
    return LawResult(f"{p}-torsion of tracks", True, cases, True)


# ---------------------------------------------------------------------------
# canonical linearity tracks from biproducts


@dataclass
class Biproduct:
    """Designated ``Y (+) Y`` with its structure maps, all 0-cells of ``T``."""

    Y: object
    YY: object
    i1: Element
    i2: Element
    pr1: Element
    pr2: Element
    plus: Element  # +_Y : YY -> Y
    pair: Callable  # pair(X, x, y) -> 0-cell X -> YY


@dataclass
class CanonicalGamma:
    moore: Element  # Gamma_a as a Moore element of Hom(YY, B)_1
    multiplicity: int  # number of solutions


def restriction_map(T: TrackCategory, bp: Biproduct, B) -> ChainMap:
    """``(i1*, i2*): Hom(YY, B) -> Hom(Y, B) (+) Hom(Y, B)``."""
    Y, YY = bp.Y, bp.YY
    src = T.hom(YY, B)
    tgt1 = T.hom(Y, B).c1.direct_sum(T.hom(Y, B).c1)
    tgt0 = T.hom(Y, B).c0.direct_sum(T.hom(Y, B).c0)
    d = T.hom(Y, B).d
    n1 = T.hom(Y, B).c1.rank
    dd = [list(r) + [0] * n1 for r in d.matrix] + [[0] * n1 + list(r) for r in d.matrix]
    tgt = TruncComplex1(tgt1, tgt0, AbHom(tgt1, tgt0, dd), src.ring)
    f1 = AbHom.from_images(src.c1, tgt1, [T.rwhisk(Y, YY, B, h, bp.i1) + T.rwhisk(Y, YY, B, h, bp.i2)
                                          for h in src.c1.basis()])
    f0 = AbHom.from_images(src.c0, tgt0, [T.mu0(Y, YY, B, x, bp.i1) + T.mu0(Y, YY, B, x, bp.i2)
                                          for x in src.c0.basis()])
    return ChainMap(src, tgt, f1, f0)


def canonical_gamma(T: TrackCategory, bp: Biproduct, B, a: Element) -> CanonicalGamma:
    """The track ``Gamma_a: a(+) => a pr1 + a pr2`` restricting to identities.

    Picks the lexicographically least Moore solution; ``multiplicity`` counts
    all solutions.
    """
    Y, YY = bp.Y, bp.YY
    r = restriction_map(T, bp, B)
    h0, h1 = _restriction_homology(r)
    if not (h0.is_isomorphism() and h1.is_isomorphism()):
        raise InstanceError(f"restriction along the biproduct is not an equivalence on Hom({YY}, {B})")
    src = T.hom(YY, B)
    K0 = T.hom(YY, B).c0
    target0 = K0.sub(K0.sub(T.mu0(YY, Y, B, a, bp.plus), T.mu0(YY, Y, B, a, bp.pr1)), T.mu0(YY, Y, B, a, bp.pr2))
    joint_target = K0.direct_sum(r.target.c1)
    joint = AbHom.from_images(src.c1, joint_target,
                              [src.d(h) + r.f1(h) for h in src.c1.basis()])
    rhs = target0 + r.target.c1.zero()
    sol = solve_preimage(joint, rhs)
    if sol is None:
        raise InstanceError(f"no linearity track for a={a}: instance inconsistent")
    K = kernel(joint)
    sols = sorted({src.c1.add(sol, K.embedding(k)) for k in enumerate_group(K.group)})
    return CanonicalGamma(sols[0], len(sols))


def _restriction_homology(r: ChainMap):
    hs, ht = homology(r.source), homology(r.target)
    h0 = AbHom.from_images(hs.H0, ht.H0, [ht.class_of(r.f0(hs.representative(g))) for g in hs.H0.basis()])
    h1 = AbHom.from_images(hs.H1, ht.H1, [ht.cycle_coords(r.f1(hs.embedding(g))) for g in hs.H1.basis()])
    return h0, h1


def canonical_system(T: TrackCategory, biproducts: dict) -> LinearitySystem:
    """Linearity system ``Gamma_a^{x,y} := Gamma_a (x, y)`` from designated biproducts.

    ``biproducts[Y]`` is a :class:`Biproduct` for each object ``Y`` used as
    the middle object.
    """
    cache: dict = {}

    def gamma(A, B, C, a, x, y):
        bp = biproducts.get(B)
        if bp is None:
            raise InstanceError(f"no designated biproduct for object {B}")
        key = (C, tuple(a))
        if key not in cache:
            cache[key] = canonical_gamma(T, bp, C, a)
        return T.rwhisk(A, bp.YY, C, cache[key].moore, bp.pair(A, x, y))

    G = LinearitySystem(T, gamma, "canonical", {"rule": "canonical"})
    G.cache = cache
    return G
