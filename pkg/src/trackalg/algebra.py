"""Exact arithmetic for finite abelian groups and 1-truncated chain complexes.

Every group is presented as a direct sum of cyclic groups ``Z/d_1 + ... + Z/d_k``
and elements are tuples of residues.  All kernel, cokernel and preimage
computations go through a single Smith normal form routine over the integers,
with the cyclic moduli encoded as extra relation columns.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Element = tuple[int, ...]
Matrix = list[list[int]]

DEFAULT_ENUMERATION_BOUND = 2**20


class AlgebraError(ValueError):
    """Raised on incompatible or malformed algebraic data."""


@dataclass(frozen=True)
class Ring:
    """Ground ring: the integers (``modulus=None``) or ``Z/m``."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 2:
            raise AlgebraError(f"modulus must be >= 2, got {self.modulus}")

    @classmethod
    def integers(cls) -> "Ring":
        return cls(None)

    @classmethod
    def modular(cls, m: int) -> "Ring":
        return cls(m)

    @property
    def is_integral(self) -> bool:
        return self.modulus is None

    def reduce(self, c: int) -> int:
        return c if self.modulus is None else c % self.modulus

    def quotient(self, q: int) -> "Ring":
        """The ring ``Z/q`` receiving the canonical projection from this ring."""
        if self.modulus is not None and self.modulus % q:
            raise AlgebraError(f"Z/{self.modulus} does not project onto Z/{q}")
        return Ring(q)

    def __str__(self):
        return "Z" if self.modulus is None else f"Z/{self.modulus}"


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithForm:
    """``U @ M @ V == diag(diagonal)`` with ``U``, ``V`` unimodular."""

    diagonal: list[int]
    U: Matrix
    Uinv: Matrix
    V: Matrix
    Vinv: Matrix
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], rows: int | None = None,
                      cols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix, tracking both transforms."""
    A = [list(map(int, r)) for r in M]
    m = len(A) if rows is None else rows
    n = (len(A[0]) if A else 0) if cols is None else cols
    if not A:
        A = [[0] * n for _ in range(m)]
    U, Uinv, V, Vinv = _identity(m), _identity(m), _identity(n), _identity(n)

    def row_add(i, j, c):  # row_i += c * row_j
        if c == 0:
            return
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in Uinv:
            r[j] -= c * r[i]

    def row_swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    def col_add(j, i, c):  # col_j += c * col_i
        if c == 0:
            return
        for r in A:
            r[j] += c * r[i]
        for r in V:
            r[j] += c * r[i]
        Vinv[i] = [a - c * b for a, b in zip(Vinv[i], Vinv[j])]

    def col_swap(i, j):
        if i == j:
            return
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                best = (t, t)
                for i in range(t, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t, n):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                row_swap(t, best[0])
                col_swap(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        t += 1
    diagonal = [A[i][i] for i in range(min(m, n))]
    return SmithForm(diagonal, U, Uinv, V, Vinv, m, n)


def matvec(M: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    k = len(B) if inner is None else inner
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(cols)] for i in range(len(A))]


def integer_kernel(M: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Basis (as a list of vectors) of ``{v in Z^cols : M v = 0}``."""
    snf = smith_normal_form(M, rows=len(M), cols=cols)
    r = snf.rank
    return [[snf.V[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(M: Sequence[Sequence[int]], cols: int, y: Sequence[int]) -> list[int] | None:
    """Some integer ``v`` with ``M v = y`` or ``None``."""
    snf = smith_normal_form(M, rows=len(M), cols=cols)
    uy = matvec(snf.U, y)
    u = [0] * cols
    for i, c in enumerate(uy):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if c != 0:
                return None
        else:
            if c % d:
                return None
            u[i] = c // d
    return matvec(snf.V, u)


# ---------------------------------------------------------------------------
# Groups and homomorphisms


@dataclass(frozen=True)
class FinAbGroup:
    """The group ``Z/d_1 + ... + Z/d_k``."""

    orders: tuple[int, ...]

    def __init__(self, orders: Sequence[int] = ()):
        orders = tuple(int(d) for d in orders)
        if any(d < 1 for d in orders):
            raise AlgebraError(f"cyclic orders must be >= 1: {orders}")
        object.__setattr__(self, "orders", orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> Element:
        if len(v) != self.rank:
            raise AlgebraError(f"element of length {len(v)} in group of rank {self.rank}")
        return tuple(int(a) % d for a, d in zip(v, self.orders))

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.rank and all(0 <= a < d for a, d in zip(v, self.orders))

    def add(self, u: Element, v: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(u, v, self.orders))

    def sub(self, u: Element, v: Element) -> Element:
        return tuple((a - b) % d for a, b, d in zip(u, v, self.orders))

    def neg(self, u: Element) -> Element:
        return tuple((-a) % d for a, d in zip(u, self.orders))

    def scale(self, c: int, u: Element) -> Element:
        return tuple((c * a) % d for a, d in zip(u, self.orders))

    def sum(self, elems) -> Element:
        acc = self.zero()
        for e in elems:
            acc = self.add(acc, e)
        return acc

    def basis(self) -> list[Element]:
        return [tuple(int(i == j) % self.orders[j] for j in range(self.rank)) for i in range(self.rank)]

    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    def direct_sum(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.orders + other.orders)

    def elements(self, bound: int = DEFAULT_ENUMERATION_BOUND) -> Iterator[Element]:
        return enumerate_group(self, bound)

    def random_element(self, rng) -> Element:
        return tuple(rng.randrange(d) for d in self.orders)

    def __str__(self):
        if not self.orders or all(d == 1 for d in self.orders):
            return "0"
        return " + ".join(f"Z/{d}" for d in self.orders if d != 1)


def enumerate_group(G: FinAbGroup, bound: int = DEFAULT_ENUMERATION_BOUND) -> Iterator[Element]:
    """All elements of ``G`` in lexicographic residue order."""
    if G.order > bound:
        raise AlgebraError(f"group of order {G.order} exceeds enumeration bound {bound}")
    return iter(itertools.product(*(range(d) for d in G.orders)))


@dataclass(frozen=True)
class AbHom:
    """Homomorphism ``source -> target`` given by an integer matrix.

    ``matrix[i][j]`` is the ``i``-th target coordinate of the image of the
    ``j``-th source generator.
    """

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __init__(self, source: FinAbGroup, target: FinAbGroup, matrix: Sequence[Sequence[int]], check: bool = True):
        mat = tuple(tuple(int(a) % e for a in row) for row, e in zip(matrix, target.orders))
        if len(mat) != target.rank or any(len(r) != source.rank for r in mat):
            raise AlgebraError(
                f"matrix shape does not match {source.rank} -> {target.rank}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "matrix", mat)
        if check:
            bad = self.incompatible_entry()
            if bad is not None:
                i, j = bad
                raise AlgebraError(
                    f"entry [{i}][{j}]={mat[i][j]} is not well defined: "
                    f"{mat[i][j]}*{source.orders[j]} != 0 mod {target.orders[i]}")

    def incompatible_entry(self) -> tuple[int, int] | None:
        for i, e in enumerate(self.target.orders):
            for j, d in enumerate(self.source.orders):
                if (self.matrix[i][j] * d) % e:
                    return (i, j)
        return None

    @classmethod
    def zero(cls, source: FinAbGroup, target: FinAbGroup) -> "AbHom":
        return cls(source, target, [[0] * source.rank for _ in range(target.rank)])

    @classmethod
    def identity(cls, G: FinAbGroup) -> "AbHom":
        return cls(G, G, _identity(G.rank))

    @classmethod
    def from_images(cls, source: FinAbGroup, target: FinAbGroup, images: Sequence[Element]) -> "AbHom":
        """Build from the images of the source's cyclic generators."""
        cols = list(images)
        return cls(source, target, [[cols[j][i] for j in range(source.rank)] for i in range(target.rank)])

    @classmethod
    def from_function(cls, source: FinAbGroup, target: FinAbGroup, f) -> "AbHom":
        """Matrix of an additive function, sampled on generators."""
        return cls.from_images(source, target, [target.reduce(f(g)) for g in source.basis()])

    def __call__(self, x: Sequence[int]) -> Element:
        return self.target.reduce(matvec(self.matrix, x))

    def compose(self, other: "AbHom") -> "AbHom":
        """``self o other``."""
        if other.target != self.source:
            raise AlgebraError("composing homomorphisms with mismatched groups")
        return AbHom(other.source, self.target,
                     matmul(self.matrix, other.matrix, inner=self.source.rank))

    def __add__(self, other: "AbHom") -> "AbHom":
        return AbHom(self.source, self.target,
                     [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def is_injective(self) -> bool:
        return kernel(self).group.order == 1

    def is_surjective(self) -> bool:
        return cokernel(self).group.order == 1

    def is_isomorphism(self) -> bool:
        return self.source.order == self.target.order and self.is_injective()


def _relations(h: AbHom) -> Matrix:
    """``[A | diag(e)]``: the presentation of ``target / im h`` over the integers."""
    m = h.target.rank
    return [list(h.matrix[i]) + [h.target.orders[i] if k == i else 0 for k in range(m)]
            for i in range(m)]


@dataclass(frozen=True)
class Cokernel:
    """``group = target / im h`` with ``projection`` and a set-theoretic ``lift``."""

    group: FinAbGroup
    projection: AbHom
    lift_matrix: tuple[tuple[int, ...], ...]

    def lift(self, c: Sequence[int]) -> Element:
        T = self.projection.source
        return T.reduce(matvec(self.lift_matrix, c))


@dataclass(frozen=True)
class Kernel:
    """``group = ker h`` with ``embedding`` into the source and coordinates back."""

    group: FinAbGroup
    embedding: AbHom
    _coord: tuple = field(repr=False)

    def coords(self, x: Sequence[int]) -> Element:
        """Coordinates in ``group`` of a source element lying in the kernel."""
        lb_rows, denoms, U3, _ = self._coord
        c = []
        for row, d in zip(lb_rows, denoms):
            s = sum(a * b for a, b in zip(row, x))
            if s % d:
                raise AlgebraError("element is not in the kernel lattice")
            c.append(s // d)
        return self.group.reduce(matvec(U3, c)) if self.group.rank else ()


def cokernel(h: AbHom) -> Cokernel:
    m = h.target.rank
    rel = _relations(h)
    snf = smith_normal_form(rel, rows=m, cols=h.source.rank + m)
    keep = [i for i in range(m) if snf.diagonal[i] != 1]
    G = FinAbGroup([snf.diagonal[i] for i in keep])
    proj = AbHom(h.target, G, [snf.U[i] for i in keep])
    lift = tuple(tuple(snf.Uinv[r][i] for i in keep) for r in range(m))
    return Cokernel(G, proj, lift)


def kernel(h: AbHom) -> Kernel:
    n, m = h.source.rank, h.target.rank
    if n == 0:
        return Kernel(FinAbGroup(()), AbHom.zero(FinAbGroup(()), h.source), ((), (), [], []))
    P = [list(h.matrix[i]) + [-h.target.orders[i] if k == i else 0 for k in range(m)]
         for i in range(m)]
    gens = integer_kernel(P, n + m)
    G = [[g[i] for g in gens] for i in range(n)]  # n x k, columns generate the lattice L
    snf2 = smith_normal_form(G, rows=n, cols=len(gens))
    if snf2.rank != n:
        raise AlgebraError("kernel lattice is not of full rank")  # cannot happen for finite groups
    D2 = snf2.diagonal[:n]
    # coordinates of x in the lattice basis Lb = Uinv2 diag(D2): c = diag(1/D2) U2 x
    Mrel = []
    for i in range(n):
        row = []
        for j in range(n):
            num = snf2.U[i][j] * h.source.orders[j]
            if num % D2[i]:
                raise AlgebraError("source relations not contained in kernel lattice")
            row.append(num // D2[i])
        Mrel.append(row)
    snf3 = smith_normal_form(Mrel, rows=n, cols=n)
    keep = [i for i in range(n) if snf3.diagonal[i] != 1]
    K = FinAbGroup([snf3.diagonal[i] for i in keep])
    Lb = [[snf2.Uinv[r][c] * D2[c] for c in range(n)] for r in range(n)]
    gens_in_source = []
    for k in keep:
        col = [snf3.Uinv[r][k] for r in range(n)]
        gens_in_source.append(h.source.reduce(matvec(Lb, col)))
    emb = AbHom.from_images(K, h.source, gens_in_source)
    coord = (tuple(tuple(r) for r in snf2.U[:n]), tuple(D2), [snf3.U[i] for i in keep], None)
    return Kernel(K, emb, coord)


def image_elements(h: AbHom, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[Element]:
    """Distinct elements of ``im h``, sorted."""
    return sorted({h(x) for x in enumerate_group(h.source, bound)})


def solve_preimage(h: AbHom, y: Sequence[int]) -> Element | None:
    """Some ``x`` with ``h(x) == y``, or ``None`` if ``y`` is not in the image."""
    m = h.target.rank
    y = h.target.reduce(y)
    if h.source.rank == 0:
        return () if all(c == 0 for c in y) else None
    sol = solve_integer(_relations(h), h.source.rank + m, list(y))
    if sol is None:
        return None
    return h.source.reduce(sol[:h.source.rank])


def direct_sum_hom(parts: Sequence[AbHom], source: FinAbGroup) -> AbHom:
    """``x -> (f_1 x, ..., f_k x)`` into the direct sum of targets."""
    target = FinAbGroup(sum((p.target.orders for p in parts), ()))
    rows = [list(r) for p in parts for r in p.matrix]
    return AbHom(source, target, rows)


# ---------------------------------------------------------------------------
# 1-truncated chain complexes


@dataclass(frozen=True)
class TruncComplex1:
    """A 1-truncated chain complex ``c1 --d--> c0``."""

    c1: FinAbGroup
    c0: FinAbGroup
    d: AbHom
    ring: Ring | None = None

    def __post_init__(self):
        if self.d.source != self.c1 or self.d.target != self.c0:
            raise AlgebraError("differential does not match the complex's groups")
        if self.ring is not None and self.ring.modulus is not None:
            m = self.ring.modulus
            for d in self.c1.orders + self.c0.orders:
                if m % d:
                    raise AlgebraError(f"cyclic order {d} is not a {self.ring}-module")

    @classmethod
    def from_matrix(cls, c1: Sequence[int], c0: Sequence[int], d: Sequence[Sequence[int]],
                    ring: Ring | None = None) -> "TruncComplex1":
        G1, G0 = FinAbGroup(c1), FinAbGroup(c0)
        return cls(G1, G0, AbHom(G1, G0, d), ring)

    @classmethod
    def discrete(cls, G: FinAbGroup, ring: Ring | None = None) -> "TruncComplex1":
        Z = FinAbGroup(())
        return cls(Z, G, AbHom.zero(Z, G), ring)


@dataclass(frozen=True)
class Homology:
    H0: FinAbGroup
    projection: AbHom
    H1: FinAbGroup
    embedding: AbHom
    _coker: Cokernel = field(repr=False)
    _ker: Kernel = field(repr=False)

    def class_of(self, x0: Sequence[int]) -> Element:
        return self.projection(x0)

    def representative(self, c: Sequence[int]) -> Element:
        return self._coker.lift(c)

    def cycle_coords(self, x1: Sequence[int]) -> Element:
        return self._ker.coords(x1)


def homology(C: TruncComplex1) -> Homology:
    """``H0 = coker d`` with its projection, ``H1 = ker d`` with its embedding."""
    ck = cokernel(C.d)
    k = kernel(C.d)
    return Homology(ck.group, ck.projection, k.group, k.embedding, ck, k)


# ---------------------------------------------------------------------------
# tensor products


def tensor_groups(G: FinAbGroup, H: FinAbGroup) -> FinAbGroup:
    return FinAbGroup([math.gcd(a, b) for a in G.orders for b in H.orders])


def tensor_homs(f: AbHom, g: AbHom) -> AbHom:
    src = tensor_groups(f.source, g.source)
    tgt = tensor_groups(f.target, g.target)
    rows = []
    for k in range(f.target.rank):
        for l in range(g.target.rank):
            rows.append([f.matrix[k][i] * g.matrix[l][j]
                         for i in range(f.source.rank) for j in range(g.source.rank)])
    return AbHom(src, tgt, rows)


@dataclass(frozen=True)
class TruncatedTensor:
    """``tr_1(M (x) N)`` together with the quotient data of its degree-1 part."""

    complex: TruncComplex1
    degree1_cover: FinAbGroup  # (M1 (x) N0) + (M0 (x) N1)
    quotient: Cokernel


def truncated_tensor(M: TruncComplex1, N: TruncComplex1) -> TruncatedTensor:
    if M.ring is not None and N.ring is not None and M.ring != N.ring:
        raise AlgebraError(f"ring mismatch: {M.ring} vs {N.ring}")
    ring = M.ring or N.ring
    idM1, idM0 = AbHom.identity(M.c1), AbHom.identity(M.c0)
    idN1, idN0 = AbHom.identity(N.c1), AbHom.identity(N.c0)
    t10 = tensor_groups(M.c1, N.c0)
    t01 = tensor_groups(M.c0, N.c1)
    t11 = tensor_groups(M.c1, N.c1)
    t00 = tensor_groups(M.c0, N.c0)
    cover = t10.direct_sum(t01)
    # d(a (x) b) = da (x) b - a (x) db for a, b both of degree 1
    minus = tensor_homs(idM1, N.d)
    plus = tensor_homs(M.d, idN1)
    d2 = AbHom(t11, cover, [[-a for a in r] for r in minus.matrix] + [list(r) for r in plus.matrix])
    d1a = tensor_homs(M.d, idN0)
    d1b = tensor_homs(idM0, N.d)
    d1 = AbHom(cover, t00, [list(r1) + list(r2) for r1, r2 in zip(d1a.matrix, d1b.matrix)])
    q = cokernel(d2)
    induced = AbHom.from_images(q.group, t00, [d1(q.lift(g)) for g in q.group.basis()])
    return TruncatedTensor(TruncComplex1(q.group, t00, induced, ring), cover, q)


@dataclass(frozen=True)
class ChainMap:
    """A map of 1-truncated complexes: ``f1`` in degree 1, ``f0`` in degree 0."""

    source: TruncComplex1
    target: TruncComplex1
    f1: AbHom
    f0: AbHom

    def is_chain_map(self) -> bool:
        return all(self.target.d(self.f1(g)) == self.f0(self.source.d(g)) for g in self.source.c1.basis())

    def compose(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target, self.f1.compose(other.f1), self.f0.compose(other.f0))


def tensor_chain_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    """The induced map ``tr_1(M (x) N) -> tr_1(M' (x) N')``."""
    src = truncated_tensor(f.source, g.source)
    tgt = truncated_tensor(f.target, g.target)
    a = tensor_homs(f.f1, g.f0)
    b = tensor_homs(f.f0, g.f1)

    def on_cover(v):
        n = src.degree1_cover.rank
        k = f.source.c1.rank * g.source.c0.rank
        left, right = v[:k], v[k:n]
        return a(left) + b(right)

    f1 = AbHom.from_images(src.complex.c1, tgt.complex.c1,
                           [tgt.quotient.projection(on_cover(src.quotient.lift(e)))
                            for e in src.complex.c1.basis()])
    f0 = tensor_homs(f.f0, g.f0)
    return ChainMap(src.complex, tgt.complex, f1, f0)
