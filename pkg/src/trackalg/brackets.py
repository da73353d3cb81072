"""Three-fold Toda brackets and Massey products.

Objects run ``Y3 -> Y2 -> Y1 -> Y0`` and classes ``y1: Y1 -> Y0``,
``y2: Y2 -> Y1``, ``y3: Y3 -> Y2`` with ``y1 y2 = 0 = y2 y3`` in ``H0``.
Brackets are sets of ``H1(Y3, Y0)`` coordinate tuples, each with one stored
witness ``(x1, x2, x3, a, b)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algebra import Element, enumerate_group
from .freecat import _span
from .laws import _jsonable
from .trackcat import InstanceError, TrackCategory


class BracketError(ValueError):
    pass


@dataclass(frozen=True)
class BracketProblem:
    objects: tuple  # (Y3, Y2, Y1, Y0)
    classes: tuple  # (y1, y2, y3) as H0 coordinates

    def homs(self):
        Y3, Y2, Y1, Y0 = self.objects
        return (Y1, Y0), (Y2, Y1), (Y3, Y2)


def make_problem(T: TrackCategory, objects, classes) -> BracketProblem:
    """Validate the vanishing conditions in ``H0``."""
    objects, classes = tuple(objects), tuple(tuple(c) for c in classes)
    if len(objects) != 4 or len(classes) != 3:
        raise BracketError("a bracket needs four objects and three classes")
    p = BracketProblem(objects, classes)
    Y3, Y2, Y1, Y0 = objects
    for (A, B), y in zip(p.homs(), classes):
        if not T.homology(A, B).H0.contains(y):
            raise BracketError(f"{y} is not an H0 class of ({A}, {B})")
    reps = [T.homology(A, B).representative(y) for (A, B), y in zip(p.homs(), classes)]
    if T.h0_class(Y2, Y0, T.mu0(Y2, Y1, Y0, reps[0], reps[1])) != T.homology(Y2, Y0).H0.zero():
        raise BracketError("y1 y2 is not zero in H0")
    if T.h0_class(Y3, Y1, T.mu0(Y3, Y2, Y1, reps[1], reps[2])) != T.homology(Y3, Y1).H0.zero():
        raise BracketError("y2 y3 is not zero in H0")
    return p


def problem_from_elements(T: TrackCategory, objects, elements) -> BracketProblem:
    """Problem whose classes are those of the given 0-cells ``(x1, x2, x3)``."""
    Y3, Y2, Y1, Y0 = objects
    homs = ((Y1, Y0), (Y2, Y1), (Y3, Y2))
    return make_problem(T, objects, [T.h0_class(A, B, x) for (A, B), x in zip(homs, elements)])


@dataclass
class Bracket:
    kind: str
    problem: BracketProblem
    elements: dict = field(default_factory=dict)  # class -> witness dict
    indeterminacy: frozenset = frozenset()
    is_coset: bool = True
    cases: int = 0

    def classes(self) -> list[Element]:
        return sorted(self.elements)

    def to_dict(self):
        return {"kind": self.kind, "objects": list(self.problem.objects),
                "classes": [list(c) for c in self.problem.classes],
                "cases": self.cases,
                "bracket": [{"class": list(c), "witness": _jsonable(self.elements[c])} for c in self.classes()],
                "indeterminacy": sorted(list(c) for c in self.indeterminacy),
                "is_coset": self.is_coset}

    def summary(self) -> str:
        lines = [f"{self.kind} bracket over {' -> '.join(map(str, self.problem.objects))}: "
                 f"{len(self.elements)} element(s), {self.cases} choices enumerated"]
        for c in self.classes():
            w = self.elements[c]
            lines.append(f"  {list(c)}  witness x1={w['x1']} x2={w['x2']} x3={w['x3']} a={w['a']} b={w['b']}")
        lines.append(f"  indeterminacy order {len(self.indeterminacy)}; coset: {'yes' if self.is_coset else 'NO'}")
        return "\n".join(lines)


def _coset_check(H1, values: set, indet: frozenset) -> bool:
    if not values:
        return False
    v0 = min(values)
    return {H1.add(v0, i) for i in indet} == set(values)


def _indeterminacy(T: TrackCategory, p: BracketProblem, x1s, x3s) -> frozenset:
    """Classes of ``x1 (c, 0)`` and ``c x3`` for cycles ``c``, spanned."""
    Y3, Y2, Y1, Y0 = p.objects
    H = T.homology(Y3, Y0)
    gens = set()
    for x3 in x3s:
        for c in T.cycles(Y2, Y0):
            gens.add(H.cycle_coords(T.rwhisk(Y3, Y2, Y0, c, x3)))
    for x1 in x1s:
        for c in T.cycles(Y3, Y1):
            gens.add(H.cycle_coords(T.lwhisk(Y3, Y1, Y0, x1, c, T.zero0(Y3, Y1))))
    return _span(H.H1, gens)


def toda_value(T: TrackCategory, Y, x1, x3, a, b) -> Element:
    """Moore part of ``(a x3) [] (x1 b)^-1``, a cycle of ``Hom(Y3, Y0)``."""
    Y3, Y2, Y1, Y0 = Y
    K1 = T.hom(Y3, Y0).c1
    return K1.sub(T.rwhisk(Y3, Y2, Y0, a, x3), T.lwhisk(Y3, Y1, Y0, x1, b, T.zero0(Y3, Y1)))


def toda_bracket(T: TrackCategory, p: BracketProblem) -> Bracket:
    """Enumerate all representatives and all null-tracks ``a``, ``b``."""
    Y3, Y2, Y1, Y0 = Y = p.objects
    fibers = [T.class_fiber(A, B, T.homology(A, B).representative(y)) for (A, B), y in zip(p.homs(), p.classes)]
    H = T.homology(Y3, Y0)
    out: dict = {}
    cases = 0
    for x1, x2, x3 in itertools.product(*fibers):
        as_ = T.tracks_to_zero(Y2, Y0, T.mu0(Y2, Y1, Y0, x1, x2))
        bs = T.tracks_to_zero(Y3, Y1, T.mu0(Y3, Y2, Y1, x2, x3))
        if not as_ or not bs:
            raise InstanceError("H0 products vanish but no null-track exists")
        for a, b in itertools.product(as_, bs):
            cases += 1
            v = toda_value(T, Y, x1, x3, a, b)
            if T.d(Y3, Y0, v) != T.zero0(Y3, Y0):
                raise InstanceError(f"bracket value {v} is not a cycle")
            c = H.cycle_coords(v)
            if c not in out:
                out[c] = {"x1": x1, "x2": x2, "x3": x3, "a": a, "b": b}
    indet = _indeterminacy(T, p, fibers[0], fibers[2])
    return Bracket("toda", p, out, indet, _coset_check(H.H1, set(out), indet), cases)


def massey_product(V, p: BracketProblem, bound: int = 2, max_terms: int = 2) -> Bracket:
    """Massey product on a DG view; classes are ``H0`` classes of ``V.T``.

    Representatives are the bounded 0-cells of ``V`` whose image lies in the
    class.  Each value ``a x3 - x1 b`` is checked to be a cycle.
    """
    T = V.T
    Y3, Y2, Y1, Y0 = p.objects
    fibers = []
    for (A, B), y in zip(p.homs(), p.classes):
        fibers.append([x for x in V.morphisms(A, B, bound, max_terms) if T.h0_class(A, B, V.image(A, B, x)) == y])
        if not fibers[-1]:
            raise BracketError(f"no representative of {y} on ({A}, {B}) within the bound")
    H = T.homology(Y3, Y0)
    K1 = T.hom(Y3, Y0).c1
    out: dict = {}
    cases = 0
    for x1, x2, x3 in itertools.product(*fibers):
        x12, x23 = V.compose0(Y2, Y1, Y0, x1, x2), V.compose0(Y3, Y2, Y1, x2, x3)
        as_ = [(h, x12) for h in V.fiber(Y2, Y0, x12)]
        bs = [(h, x23) for h in V.fiber(Y3, Y1, x23)]
        if not as_ or not bs:
            raise InstanceError("H0 products vanish but no preimage under d exists")
        for a, b in itertools.product(as_, bs):
            cases += 1
            l = V.tensor10(Y3, Y2, Y0, a, x3)
            r = V.tensor01(Y3, Y1, Y0, x1, b)
            if V.sub0(Y3, Y0, l[1], r[1]) != V.zero0(Y3, Y0):
                raise InstanceError("d(a x3 - x1 b) is not zero")
            v = K1.sub(l[0], r[0])
            if T.d(Y3, Y0, v) != T.zero0(Y3, Y0):
                raise InstanceError(f"massey value {v} is not a cycle")
            c = H.cycle_coords(v)
            if c not in out:
                out[c] = {"x1": x1, "x2": x2, "x3": x3, "a": a[0], "b": b[0]}
    imgs = [[V.image(A, B, x) for x in f] for (A, B), f in zip(p.homs(), fibers)]
    indet = _indeterminacy(T, p, imgs[0], imgs[2])
    return Bracket("massey", p, out, indet, _coset_check(H.H1, set(out), indet), cases)


@dataclass
class TransferReport:
    identity_cases: int
    identity_ok: bool
    inclusion_ok: bool
    iso: bool
    equality_ok: bool | None
    witness: dict | None
    source: Bracket
    target: Bracket

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.inclusion_ok and self.equality_ok is not False

    def to_dict(self):
        return {"passed": self.passed, "identity_cases": self.identity_cases, "identity": self.identity_ok,
                "inclusion": self.inclusion_ok, "iso_hypotheses": self.iso, "equality": self.equality_ok,
                "witness": _jsonable(self.witness), "source": self.source.to_dict(),
                "target": self.target.to_dict()}

    def summary(self) -> str:
        eq = "n/a" if self.equality_ok is None else ("PASS" if self.equality_ok else "FAIL")
        return "\n".join([
            f"transfer: representative identity {'PASS' if self.identity_ok else 'FAIL'} "
            f"({self.identity_cases} choices), inclusion {'PASS' if self.inclusion_ok else 'FAIL'}, "
            f"set equality {eq} (iso hypotheses {'hold' if self.iso else 'not verified'})",
            self.source.summary(), self.target.summary()])


def transfer_check(P, p: BracketProblem, bound: int = 2, max_terms: int = 2,
                   iso: bool | None = None) -> TransferReport:
    """Compare the Massey product in ``B`` with the Toda bracket in ``T``.

    For every choice the Moore identity ``sigma(a x3 - x1 b) =
    a' (s x3) - (s x1) b'`` with ``a' = a + Gamma(x1, x2)`` and
    ``b' = b + Gamma(x2, x3)`` is checked exactly.
    """
    from .strictify import PseudoDG, sigma_verdict

    V = PseudoDG(P)
    T = P.T
    Y3, Y2, Y1, Y0 = Y = p.objects
    B0 = P.B0
    for A in B0.objects:
        if P.s(B0.zero(A, A)) != T.zero0(A, A):
            raise BracketError("pseudo-functor is not pointed: s(0) != 0")
    src = massey_product(V, p, bound, max_terms)
    tgt = toda_bracket(T, p)
    K1 = T.hom(Y3, Y0).c1
    cases, ok, witness = 0, True, None
    fibers = [[x for x in V.morphisms(A, B, bound, max_terms) if T.h0_class(A, B, P.s(x)) == y]
              for (A, B), y in zip(p.homs(), p.classes)]
    for x1, x2, x3 in itertools.product(*fibers):
        x12, x23 = x1.compose(x2), x2.compose(x3)
        for a in V.fiber(Y2, Y0, x12):
            for b in V.fiber(Y3, Y1, x23):
                cases += 1
                l = V.tensor10(Y3, Y2, Y0, (a, x12), x3)[0]
                r = V.tensor01(Y3, Y1, Y0, x1, (b, x23))[0]
                lhs = K1.sub(l, r)
                a2 = T.hom(Y2, Y0).c1.add(a, P.gammac(x1, x2))
                b2 = T.hom(Y3, Y1).c1.add(b, P.gammac(x2, x3))
                rhs = toda_value(T, Y, P.s(x1), P.s(x3), a2, b2)
                if lhs != rhs and ok:
                    ok = False
                    witness = {"x1": x1, "x2": x2, "x3": x3, "a": a, "b": b, "lhs": lhs, "rhs": rhs}
    inclusion = set(src.elements) <= set(tgt.elements)
    if iso is None:
        iso = sigma_verdict(V, bound, max_terms).equivalence
    equality = (set(src.elements) == set(tgt.elements)) if iso else None
    return TransferReport(cases, ok, inclusion, iso, equality, witness, src, tgt)


def random_problems(T: TrackCategory, n: int, rng: random.Random, tries: int = 200) -> list[BracketProblem]:
    """Random problems with random classes satisfying the vanishing conditions."""
    objs = list(T.objects)
    out = []
    for _ in range(n):
        for _ in range(tries):
            Y = tuple(rng.choice(objs) for _ in range(4))
            Y3, Y2, Y1, Y0 = Y
            cls = [rng.choice(list(enumerate_group(T.homology(A, B).H0)))
                   for A, B in ((Y1, Y0), (Y2, Y1), (Y3, Y2))]
            try:
                out.append(make_problem(T, Y, cls))
                break
            except BracketError:
                continue
        else:
            raise BracketError("no admissible problem found")
    return out
