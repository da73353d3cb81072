"""Graphs, free categories, free linear categories and generating graphs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

from .algebra import FinAbGroup, Ring, enumerate_group
from .trackcat import HomotopyCategory, TrackCategory


class GraphError(ValueError):
    pass


class DegreeError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: dict  # edge id -> (source, target)

    def __post_init__(self):
        vs = set(self.vertices)
        for e, (s, t) in self.edges.items():
            if s not in vs or t not in vs:
                raise GraphError(f"edge {e} has an endpoint outside the vertex set")

    def source(self, e):
        return self.edges[e][0]

    def target(self, e):
        return self.edges[e][1]

    def edges_into(self, v):
        return sorted(e for e, (_, t) in self.edges.items() if t == v)

    def edges_from(self, v):
        return sorted(e for e, (s, _) in self.edges.items() if s == v)

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.edges.items()))))


@dataclass(frozen=True)
class Word:
    """A composable word ``e_1 e_2 ... e_k`` read as ``e_1 o e_2 o ... o e_k``.

    The empty word is the identity of ``src == tgt``.
    """

    src: Hashable
    tgt: Hashable
    edges: tuple = ()

    def __len__(self):
        return len(self.edges)

    def key(self):
        return (len(self.edges), self.edges)

    def __lt__(self, other):
        return _word_order(self) < _word_order(other)

    def __str__(self):
        return "*".join(map(str, self.edges)) if self.edges else f"1_{self.src}"

    def to_json(self):
        return str(self)


def _word_order(w: Word):
    return (len(w.edges), w.edges, repr(w.src), repr(w.tgt))


def word(E: Graph, edges: Sequence) -> Word:
    edges = tuple(edges)
    if not edges:
        raise GraphError("use identity_word for the empty word")
    for a, b in zip(edges, edges[1:]):
        if E.source(a) != E.target(b):
            raise GraphError(f"edges {a} and {b} are not composable")
    return Word(E.source(edges[-1]), E.target(edges[0]), edges)


def identity_word(v) -> Word:
    return Word(v, v, ())


def compose_words(w: Word, v: Word) -> Word:
    """``w o v``."""
    if v.tgt != w.src:
        raise GraphError(f"words not composable: {v} ends at {v.tgt}, {w} starts at {w.src}")
    return Word(v.src, w.tgt, w.edges + v.edges)


def words(E: Graph, A, B, length: int) -> list[Word]:
    """All words ``A -> B`` of exactly the given length, length-lex ordered."""
    if length == 0:
        return [identity_word(A)] if A == B else []
    out = []

    def build(prefix, at):  # ``prefix`` is a word ``at -> B``
        if len(prefix) == length:
            if at == A:
                out.append(Word(A, B, tuple(prefix)))
            return
        for e in E.edges_into(at):
            build(prefix + [e], E.source(e))

    build([], B)
    return sorted(out)


def words_up_to(E: Graph, A, B, bound: int) -> list[Word]:
    return [w for n in range(bound + 1) for w in words(E, A, B, n)]


# ---------------------------------------------------------------------------
# linear combinations


@dataclass(frozen=True)
class LinComb:
    """Normal form: coefficients reduced and nonzero, words sorted length-lex."""

    ring: Ring
    src: Hashable
    tgt: Hashable
    terms: tuple = ()  # ((Word, coeff), ...)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.ring, self.src, self.tgt, self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def make(cls, ring: Ring, src, tgt, terms) -> "LinComb":
        acc: dict = {}
        for w, c in terms:
            if w.src != src or w.tgt != tgt:
                raise GraphError(f"word {w} is not a morphism {src} -> {tgt}")
            acc[w] = acc.get(w, 0) + c
        norm = []
        for w in sorted(acc, key=_word_order):
            c = ring.reduce(acc[w])
            if c:
                norm.append((w, c))
        return cls(ring, src, tgt, tuple(norm))

    @classmethod
    def of_word(cls, ring: Ring, w: Word, c: int = 1) -> "LinComb":
        return cls.make(ring, w.src, w.tgt, [(w, c)])

    @classmethod
    def zero(cls, ring: Ring, src, tgt) -> "LinComb":
        return cls(ring, src, tgt, ())

    def __add__(self, other: "LinComb") -> "LinComb":
        self._parallel(other)
        return LinComb.make(self.ring, self.src, self.tgt, self.terms + other.terms)

    def __neg__(self) -> "LinComb":
        return LinComb.make(self.ring, self.src, self.tgt, [(w, -c) for w, c in self.terms])

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def scale(self, k: int) -> "LinComb":
        return LinComb.make(self.ring, self.src, self.tgt, [(w, k * c) for w, c in self.terms])

    def compose(self, other: "LinComb") -> "LinComb":
        """``self o other``, bilinear extension of concatenation."""
        if self.ring != other.ring:
            raise GraphError("ring mismatch")
        if other.tgt != self.src:
            raise GraphError(f"not composable: {other.tgt} != {self.src}")
        terms = [(compose_words(w, v), c * d) for w, c in self.terms for v, d in other.terms]
        return LinComb.make(self.ring, other.src, self.tgt, terms)

    def _parallel(self, other):
        if (self.src, self.tgt, self.ring) != (other.src, other.tgt, other.ring):
            raise GraphError("linear combinations are not parallel")

    def max_length(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    def is_word(self) -> bool:
        return len(self.terms) == 1 and self.terms[0][1] == 1

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w}" if c != 1 else str(w) for w, c in self.terms)

    def to_json(self):
        return {"src": self.src, "tgt": self.tgt, "value": str(self)}


class FreeLinearCategory:
    """``R Mon(E)``."""

    def __init__(self, E: Graph, ring: Ring):
        self.E = E
        self.ring = ring
        self.objects = E.vertices

    def identity(self, A) -> LinComb:
        return LinComb.of_word(self.ring, identity_word(A))

    def edge(self, e, c: int = 1) -> LinComb:
        return LinComb.of_word(self.ring, word(self.E, [e]), c)

    def word(self, edges, c: int = 1) -> LinComb:
        return LinComb.of_word(self.ring, word(self.E, edges), c)

    def zero(self, A, B) -> LinComb:
        return LinComb.zero(self.ring, A, B)

    def compose(self, x: LinComb, y: LinComb) -> LinComb:
        return x.compose(y)

    def words(self, A, B, bound: int) -> list[Word]:
        return words_up_to(self.E, A, B, bound)

    def coefficient_range(self) -> list[int]:
        if self.ring.modulus is None:
            raise GraphError("coefficient enumeration needs a finite ring")
        return list(range(self.ring.modulus))

    def combinations(self, A, B, bound: int, coeffs: Sequence[int] | None = None,
                     max_terms: int | None = None) -> Iterator[LinComb]:
        """All linear combinations of words of length <= bound with the given coefficients."""
        ws = self.words(A, B, bound)
        coeffs = list(coeffs) if coeffs is not None else self.coefficient_range()
        if max_terms is None:
            for cs in itertools.product(coeffs, repeat=len(ws)):
                yield LinComb.make(self.ring, A, B, list(zip(ws, cs)))
            return
        nonzero = [c for c in coeffs if self.ring.reduce(c)]
        seen = set()
        for k in range(max_terms + 1):
            for sub in itertools.combinations(ws, k):
                for cs in itertools.product(nonzero, repeat=k):
                    lc = LinComb.make(self.ring, A, B, list(zip(sub, cs)))
                    if lc not in seen:
                        seen.add(lc)
                        yield lc


def free_category(E: Graph) -> FreeLinearCategory:
    """The free category, realized as words with coefficient 1 over ``Z``."""
    return FreeLinearCategory(E, Ring.integers())


def linearize(ring: Ring, E: Graph) -> FreeLinearCategory:
    return FreeLinearCategory(E, ring)


# ---------------------------------------------------------------------------
# generating graphs


@dataclass
class GeneratingVerdict:
    status: str  # "true", "false" or "indeterminate"
    length: int
    unreached: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == "true"

    def to_dict(self):
        return {"status": self.status, "saturated_at_length": self.length,
                "unreached": {f"{a}->{b}": list(c) for (a, b), c in self.unreached.items()}}


def _span(G: FinAbGroup, gens) -> frozenset:
    seen = {G.zero()}
    frontier = [G.zero()]
    gens = [g for g in set(gens) if g != G.zero()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def check_generating(T: TrackCategory, E: Graph, h_E: dict, max_length: int = 16) -> GeneratingVerdict:
    """Does the linear functor induced by ``h_E`` hit every ``H_0`` class?

    ``h_E[e]`` is an ``H_0``-class of ``Hom(source, target)``.  Reached
    subgroups grow by word length; when every hom stabilizes in the same step
    the result is saturated.
    """
    hc = HomotopyCategory(T)
    objs = list(E.vertices)
    for v in objs:
        if v not in T.objects:
            raise GraphError(f"vertex {v} is not an object of {T.name}")
    pairs = [(A, B) for A in objs for B in objs]
    base = {}
    for A, B in pairs:
        gens = [T.h0_class(A, A, T.unit(A))] if A == B else []
        base[A, B] = _span(hc.hom(A, B), gens)
    V = dict(base)
    for L in range(1, max_length + 1):
        new = {}
        for A, B in pairs:
            gens = list(base[A, B])
            for e in E.edges_into(B):
                C = E.source(e)
                gens.extend(hc.compose(A, C, B, h_E[e], v) for v in V[A, C])
            new[A, B] = _span(hc.hom(A, B), gens)
        if new == V:
            unreached = {}
            for A, B in pairs:
                missing = [c for c in enumerate_group(hc.hom(A, B)) if c not in V[A, B]]
                if missing:
                    unreached[A, B] = missing[0]
            return GeneratingVerdict("false" if unreached else "true", L - 1, unreached)
        V = new
    return GeneratingVerdict("indeterminate", max_length)


def classes_of_lifts(T: TrackCategory, E: Graph, s_E: dict) -> dict:
    """``h_E`` induced by a lift ``s_E``: each edge goes to the class of its lift."""
    return {e: T.h0_class(E.source(e), E.target(e), s_E[e]) for e in E.edges}


# ---------------------------------------------------------------------------
# matrix graphs over a presented graded algebra


@dataclass(frozen=True)
class Presentation:
    """Graded generators ``name -> degree`` of an algebra (relations are not needed)."""

    generators: dict

    def degree(self, g) -> int:
        return self.generators[g]


@dataclass(frozen=True)
class LiftTemplate:
    """Row ``i`` lists ``(generator, shift m_j, projection j)`` for its nonzero entries."""

    source: tuple
    target: tuple
    rows: tuple

    def evaluate(self, rep: Callable, proj: Callable, coordinates: Callable, add: Callable,
                 compose: Callable, zero: Callable):
        """``f~`` with ``i``-th coordinate ``sum_j sh^{m_j}(rep g_ij) o proj_j``.

        ``rep(g, shift)`` represents a shifted generator, ``proj(j)`` the
        projection, ``coordinates(list)`` assembles coordinate maps,
        ``zero(i)`` is the zero map into factor ``i``.
        """
        coords = []
        for i, row in enumerate(self.rows):
            acc = zero(i)
            for g, shift, j in row:
                acc = add(acc, compose(rep(g, shift), proj(j)))
            coords.append(acc)
        return coordinates(coords)


def matrix_edge(P: Presentation, source: tuple, target: tuple, matrix) -> LiftTemplate:
    """Validate a generator matrix ``target x source`` and return its lift template."""
    if len(matrix) != len(target) or any(len(r) != len(source) for r in matrix):
        raise DegreeError("matrix shape does not match the vertex tuples")
    rows = []
    for i, r in enumerate(matrix):
        row = []
        for j, g in enumerate(r):
            if g is None:
                continue
            if g not in P.generators:
                raise DegreeError(f"unknown generator {g!r}")
            if P.degree(g) != target[i] - source[j]:
                raise DegreeError(
                    f"entry ({i},{j}) = {g} has degree {P.degree(g)}, needs {target[i] - source[j]}")
            row.append((g, source[j], j))
        rows.append(tuple(row))
    return LiftTemplate(tuple(source), tuple(target), tuple(rows))


def matrix_graph(P: Presentation, vertices: Sequence[tuple]) -> tuple[Graph, dict]:
    """Graph with an edge for every nonzero matrix of generators (or 0) of matching degrees."""
    vertices = [tuple(v) for v in vertices]
    edges, templates = {}, {}
    gens = sorted(P.generators)
    for src in vertices:
        for tgt in vertices:
            choices = []
            for i in range(len(tgt)):
                for j in range(len(src)):
                    choices.append([None] + [g for g in gens if P.degree(g) == tgt[i] - src[j]])
            for entries in itertools.product(*choices):
                if all(g is None for g in entries):
                    continue
                M = [list(entries[i * len(src):(i + 1) * len(src)]) for i in range(len(tgt))]
                eid = f"{src}->{tgt}:" + ",".join("0" if g is None else str(g) for g in entries)
                edges[eid] = (src, tgt)
                templates[eid] = matrix_edge(P, src, tgt, M)
    return Graph(tuple(vertices), edges), templates
