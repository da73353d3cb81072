"""Shipped instance families.

* ``denorm``: bilinear (DG) instances with identity linearity tracks.
* ``twisted``: bilinear 0-cells with a twisted linearity system
  ``g(a; y, z) = eps(a) kappa(y) kappa(z) t``; the reference datum is ``T_c``.
* ``quadratic``: pairs ``(A, q)`` of a matrix and a pointed function, a small
  model that is left linear but not right linear.
* ``M2``: a one-object DG instance with a nontrivial triple Massey product.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import Ring, TruncComplex1
from .linearity import Biproduct, LinearitySystem, identity_system, verify_linearity
from .trackcat import InstanceError, TrackCategory, axiom_check, bilinear_instance


class FixtureError(ValueError):
    pass


def _cx(c1_orders, c0_orders, d_rows, modulus):
    ring = Ring.modular(modulus) if modulus else Ring.integers()
    return TruncComplex1.from_matrix(c1_orders, c0_orders, d_rows, ring)


# ---------------------------------------------------------------------------
# bilinear instances


def fixture_denorm(objects, homs, units, mu, rw, lw, name="denorm", description=None):
    """A DG-category viewed as a track category, with ``Gamma = id``."""
    T = bilinear_instance(objects, homs, units, mu, rw, lw, name, description)
    return T, identity_system(T)


def trivial_dg():
    """One object, ``Hom = (Z/2 t --0--> Z/2 1)``, only unit products."""
    homs = {("*", "*"): _cx([2], [2], [[0]], 2)}
    key = ("*", "*", "*")
    T, G = fixture_denorm(["*"], homs, {"*": (1,)}, {key: [[(1,)]]}, {key: [[(1,)]]},
                          {key: [[(1,)]]}, "trivial", {"builtin": "trivial"})
    return T, G


def two_object_dg():
    """Objects 0, 1 over Z/2 with ``Hom(1,0) = 0``.

    ``Hom(i,i) = (Z/2 t_i --0--> Z/2 1_i)``, ``Hom(0,1) = (Z/2 k --0--> Z/2 f)``
    with ``t_1 f = k = f t_0``.
    """
    z = _cx([], [], [], 2)
    loop = _cx([2], [2], [[0]], 2)
    homs = {(0, 0): loop, (1, 1): loop, (0, 1): _cx([2], [2], [[0]], 2), (1, 0): z}
    mu, rw, lw = {}, {}, {}
    for A, B, C in [(0, 0, 0), (1, 1, 1), (0, 0, 1), (0, 1, 1)]:
        mu[A, B, C] = [[(1,)]]
        rw[A, B, C] = [[(1,)]]
        lw[A, B, C] = [[(1,)]]
    T = bilinear_instance([0, 1], homs, {0: (1,), 1: (1,)}, mu, rw, lw, "two-object",
                          {"builtin": "two-object"})
    return T, identity_system(T)


def m2():
    """``M2``: ``C0 = Z/2{1, x, u}``, ``C1 = Z/2{a, t}``, ``da = u``, ``dt = 0``,
    ``x x = u``, ``a x = t``, all other products of non-units zero."""
    homs = {("*", "*"): _cx([2, 2], [2, 2, 2], [[0, 0], [0, 0], [1, 0]], 2)}
    key = ("*", "*", "*")
    # generators: C0 = (1, x, u), C1 = (a, t)
    mu = [[(1, 0, 0), (0, 1, 0), (0, 0, 1)],
          [(0, 1, 0), (0, 0, 1), (0, 0, 0)],
          [(0, 0, 1), (0, 0, 0), (0, 0, 0)]]
    rw = [[(1, 0), (0, 1), (0, 0)],   # a.1 = a, a.x = t
          [(0, 1), (0, 0), (0, 0)]]   # t.1 = t
    lw = [[(1, 0), (0, 1)],           # 1.a = a, 1.t = t
          [(0, 0), (0, 0)],
          [(0, 0), (0, 0)]]
    T = bilinear_instance(["*"], homs, {"*": (1, 0, 0)}, {key: mu}, {key: rw}, {key: lw}, "M2",
                          {"builtin": "M2"})
    return T, identity_system(T)


# ---------------------------------------------------------------------------
# twisted linearity


@dataclass
class TwistDatum:
    """``c(a; y, z) = eps(a) kappa(y) kappa(z) t``.

    ``eps[(B, C)]`` and ``kappa[(A, B)]`` are coefficient vectors of linear
    functionals on the 0-cell generators; ``t[(A, C)]`` is a cycle of
    ``Hom(A, C)_1``.  Missing entries are zero.
    """

    base: TrackCategory
    t: dict
    eps: dict
    kappa: dict
    eta: dict = field(default_factory=dict)  # accepted for completeness, unused by the cocycle rule


def _functional(coeffs, x):
    return sum(c * v for c, v in zip(coeffs, x))


def fixture_twisted(datum: TwistDatum, name: str = "twisted", check: bool = True,
                    budget: int | None = None) -> tuple[TrackCategory, LinearitySystem]:
    T = datum.base

    def gamma(A, B, C, a, y, z):
        t = datum.t.get((A, C))
        e = datum.eps.get((B, C))
        k = datum.kappa.get((A, B))
        if t is None or e is None or k is None:
            return T.zero1(A, C)
        c = _functional(e, a) * _functional(k, y) * _functional(k, z)
        return T.hom(A, C).c1.scale(c, t)

    G = LinearitySystem(T, gamma, name, {"rule": "twisted"})
    G.datum = datum
    for (A, C), t in datum.t.items():
        if T.d(A, C, t) != T.zero0(A, C):
            raise FixtureError(f"twist element on ({A}, {C}) is not a cycle")
    if check:
        rep = verify_linearity(T, G, budget)
        if not rep.passed:
            bad = rep.failures()[0]
            raise FixtureError(f"twist datum violates {bad.name}: witness {bad.witness}")
    return T, G


def tc_base() -> TrackCategory:
    """``F2{t} --0--> F2{1, x}``, ``x^2 = 0``, ``t`` acted on through ``kappa``."""
    homs = {("*", "*"): _cx([2], [2, 2], [[0], [0]], 2)}
    key = ("*", "*", "*")
    mu = [[(1, 0), (0, 1)], [(0, 1), (0, 0)]]
    rw = [[(1,), (0,)]]      # t.1 = t, t.x = 0
    lw = [[(1,)], [(0,)]]    # 1.t = t, x.t = 0
    return bilinear_instance(["*"], homs, {"*": (1, 0)}, {key: mu}, {key: rw}, {key: lw}, "Tc",
                             {"builtin": "Tc"})


def tc_datum(eps=(0, 1), kappa=(1, 0)) -> TwistDatum:
    T = tc_base()
    k = ("*", "*")
    return TwistDatum(T, {k: (1,)}, {k: tuple(eps)}, {k: tuple(kappa)})


def tc(check: bool = True):
    """The reference twisted fixture ``T_c`` and its linearity system."""
    return fixture_twisted(tc_datum(), "Tc", check)


# ---------------------------------------------------------------------------
# quadratic pair model


class QuadraticModel:
    """``Hom(m, n)_0 = {(A, q)}``: ``A`` an ``n x m`` matrix over ``Z/n_mod``,
    ``q`` a pointed function ``(Z/n_mod)^m -> (Z/n_mod)^n``.

    Element encoding: matrix entries row-major, then ``q(v)`` for each nonzero
    ``v`` in lexicographic order.  ``Hom(m, n)_1`` holds pointed functions ``h``
    with ``dh = (0, h)``.
    """

    def __init__(self, modulus: int, max_rank: int):
        if max_rank < 1 or max_rank > 2:
            raise FixtureError("quadratic model supports ranks 1..2")
        self.n = modulus
        self.max_rank = max_rank
        self.ranks = list(range(1, max_rank + 1))
        self.vecs = {m: [v for v in itertools.product(range(modulus), repeat=m) if any(v)]
                     for m in self.ranks}
        self.index = {m: {v: i for i, v in enumerate(vs)} for m, vs in self.vecs.items()}

    def complex(self, m, k) -> TruncComplex1:
        nv = len(self.vecs[m])
        c1 = [self.n] * (k * nv)
        c0 = [self.n] * (k * m + k * nv)
        d = [[0] * len(c1) for _ in range(k * m)] + [[int(i == j) for j in range(len(c1))] for i in range(len(c1))]
        return TruncComplex1.from_matrix(c1, c0, d, Ring.modular(self.n))

    # encoding

    def decode(self, m, k, x):
        A = [list(x[i * m:(i + 1) * m]) for i in range(k)]
        return A, self.decode_fn(m, k, x[k * m:])

    def decode_fn(self, m, k, h):
        return [tuple(h[i * k:(i + 1) * k]) for i in range(len(self.vecs[m]))]

    def encode(self, m, k, A, q):
        return tuple(e % self.n for row in A for e in row) + self.encode_fn(q)

    def encode_fn(self, q):
        return tuple(e % self.n for w in q for e in w)

    def apply(self, A, v):
        return tuple(sum(a * b for a, b in zip(row, v)) % self.n for row in A)

    def fn_after_matrix(self, m, r, A):
        """``r o A`` for ``r`` a table over nonzero vectors of the middle rank."""
        mid = len(A)
        out = []
        for v in self.vecs[m]:
            w = self.apply(A, v)
            out.append(r[self.index[mid][w]] if any(w) else (0,) * len(r[0]) if r else ())
        return out

    def matrix_after_fn(self, B, q):
        return [self.apply(B, w) for w in q]

    def add_fn(self, *fs):
        return [tuple(sum(c) % self.n for c in zip(*ws)) for ws in zip(*fs)]

    def sub_fn(self, f, g):
        return [tuple((a - b) % self.n for a, b in zip(u, w)) for u, w in zip(f, g)]

    def matmul(self, B, A):
        return [[sum(B[i][l] * A[l][j] for l in range(len(A))) % self.n for j in range(len(A[0]))]
                for i in range(len(B))]

    # structure maps (objects are ranks; A -> B -> C)

    def mu0(self, A, B, C, x, y):
        Bm, r = self.decode(B, C, x)
        Am, q = self.decode(A, B, y)
        comp = self.add_fn(self.matrix_after_fn(Bm, q), self.fn_after_matrix(A, r, Am))
        return self.encode(A, C, self.matmul(Bm, Am), comp)

    def rwhisk(self, A, B, C, h, y):
        Am, _ = self.decode(A, B, y)
        return self.encode_fn(self.fn_after_matrix(A, self.decode_fn(B, C, h), Am))

    def lwhisk(self, A, B, C, x, h, base):
        Bm, _ = self.decode(B, C, x)
        return self.encode_fn(self.matrix_after_fn(Bm, self.decode_fn(A, B, h)))

    def gamma(self, A, B, C, a, x, y):
        _, r = self.decode(B, C, a)
        Am, _ = self.decode(A, B, x)
        Ap, _ = self.decode(A, B, y)
        S = [[(u + v) % self.n for u, v in zip(r1, r2)] for r1, r2 in zip(Am, Ap)]
        g = self.sub_fn(self.sub_fn(self.fn_after_matrix(A, r, S), self.fn_after_matrix(A, r, Am)),
                        self.fn_after_matrix(A, r, Ap))
        return self.encode_fn(g)

    def identity(self, m):
        return [[int(i == j) for j in range(m)] for i in range(m)]

    def zero_fn(self, m, k):
        return [(0,) * k for _ in self.vecs[m]]

    def element(self, m, k, A, q=None):
        return self.encode(m, k, A, q if q is not None else self.zero_fn(m, k))

    def fn_from_rule(self, m, k, rule):
        return [tuple(c % self.n for c in rule(v)) for v in self.vecs[m]]

    def biproduct(self) -> Biproduct | None:
        if self.max_rank < 2:
            return None
        e = lambda m, k, A: self.element(m, k, A)  # noqa: E731
        ident = self

        def pair(X, x, y):
            Ax, qx = ident.decode(X, 1, x)
            Ay, qy = ident.decode(X, 1, y)
            return ident.encode(X, 2, Ax + Ay, [u + w for u, w in zip(qx, qy)])

        return Biproduct(1, 2, e(1, 2, [[1], [0]]), e(1, 2, [[0], [1]]), e(2, 1, [[1, 0]]),
                         e(2, 1, [[0, 1]]), e(2, 1, [[1, 1]]), pair)


def fixture_quadratic(p: int, max_rank: int = 1, modulus: int | None = None,
                      name: str | None = None) -> tuple[TrackCategory, LinearitySystem]:
    """``Q(p)`` (or the same model over ``Z/modulus``) with its closed-form ``Gamma``."""
    n = modulus or p
    Q = QuadraticModel(n, max_rank)
    homs = {(m, k): Q.complex(m, k) for m in Q.ranks for k in Q.ranks}
    units = {m: Q.element(m, m, Q.identity(m)) for m in Q.ranks}
    desc = {"builtin": "quadratic", "p": p, "max_rank": max_rank, "modulus": n}
    T = TrackCategory(Q.ranks, homs, Q.mu0, Q.rwhisk, Q.lwhisk, units,
                      name or (f"Q({p})" if n == p else f"Q[Z/{n}]"), desc)
    T.model = Q
    G = LinearitySystem(T, Q.gamma, "quadratic", {"rule": "quadratic"})
    return T, G


def right_linearity_witness(T: TrackCategory):
    """``(A, B, C, a, x, y)`` with ``a(x + y) != ax + ay`` in ``Q(2)`` at rank 2.

    Rank-1 sources cannot witness failure over ``F_2``: every pointed function
    on ``F_2`` is linear.
    """
    Q = T.model
    r = Q.fn_from_rule(2, 1, lambda v: (v[0] * v[1],))
    a = Q.element(2, 1, [[0, 0]], r)
    x = Q.element(2, 2, [[1, 0], [0, 0]])
    y = Q.element(2, 2, [[0, 0], [0, 1]])
    return 2, 2, 1, a, x, y


def quadratic_generators(T: TrackCategory, nonlinear: bool = True):
    """Elementary-matrix edges ``E_ij: m -> k`` of a quadratic instance and their lifts.

    With ``nonlinear`` the lift of an edge out of rank 2 carries the quadratic
    part ``v -> v1 v2 e_i``, which is null-homotopic but not linear.
    """
    from .freecat import Graph

    Q = T.model
    edges, lifts = {}, {}
    for m in Q.ranks:
        for k in Q.ranks:
            for i in range(k):
                for j in range(m):
                    name = f"E{i + 1}{j + 1}:{m}->{k}"
                    A = [[int((r, c) == (i, j)) for c in range(m)] for r in range(k)]
                    q = None
                    if nonlinear and m == 2:
                        q = Q.fn_from_rule(m, k, lambda v, i=i: tuple(v[0] * v[1] * int(r == i) for r in range(k)))
                    edges[name] = (m, k)
                    lifts[name] = Q.element(m, k, A, q)
    return Graph(tuple(Q.ranks), edges), lifts


# ---------------------------------------------------------------------------
# registry


def builtin(name: str, **params):
    """Build a named fixture: ``Tc``, ``M2``, ``Q2``, ``trivial``, ``two-object``,
    ``quadratic`` (params p, max_rank, modulus)."""
    if name == "Tc":
        return tc()
    if name == "M2":
        return m2()
    if name in ("Q2", "quadratic"):
        p = int(params.get("p", 2))
        return fixture_quadratic(p, int(params.get("max_rank", 1)), params.get("modulus"))
    if name == "trivial":
        return trivial_dg()
    if name == "two-object":
        return two_object_dg()
    raise FixtureError(f"unknown builtin fixture {name!r}")


BUILTINS = ("Tc", "M2", "Q2", "trivial", "two-object")


def corpus_instance(name: str):
    """The corpus entry for a builtin: instance, named 0-cells, generator graph, lifts."""
    from .freecat import Graph
    from .instance_io import Instance

    T, G = builtin(name)
    star = ("*", "*")
    pipeline = {"ring": "zpp", "p": 2, "word_bound": 2}
    if name == "Tc":
        named = {"1": (*star, (1, 0)), "x": (*star, (0, 1))}
        graph, lift = Graph(("*",), {"x": star}), {"x": (0, 1)}
    elif name == "M2":
        named = {"1": (*star, (1, 0, 0)), "x": (*star, (0, 1, 0)), "u": (*star, (0, 0, 1))}
        graph, lift = Graph(("*",), {"x": star}), {"x": (0, 1, 0)}
    elif name == "Q2":
        Q = T.model
        named = {"1": (1, 1, Q.element(1, 1, Q.identity(1))), "0": (1, 1, T.zero0(1, 1))}
        graph, lift = quadratic_generators(T)
    else:
        named, graph, lift, pipeline = {}, None, None, {}
    T.named = named
    return Instance(T, G, named, graph, lift, None, pipeline)


def fixture_load(path, budget: int | None = None, seed: int = 0):
    """Load an instance file and validate it; raises :class:`FixtureError` with the failing report."""
    from .instance_io import load_instance

    inst = load_instance(path)
    try:
        validate(inst.T, inst.G, budget, seed)
    except InstanceError as e:
        raise FixtureError(f"{path} failed validation: {e}") from None
    return inst


def validate(T: TrackCategory, G: LinearitySystem | None, budget: int | None = None, seed: int = 0):
    """Axiom check plus linearity check; raises with the failing report."""
    rep = axiom_check(T, budget, seed)
    if not rep.passed:
        raise InstanceError(f"instance {T.name} fails axiom_check:\n{rep.summary()}")
    if G is not None:
        lrep = verify_linearity(T, G, budget, seed)
        if not lrep.passed:
            raise InstanceError(f"instance {T.name} fails verify_linearity:\n{lrep.summary()}")
        return rep, lrep
    return rep, None
