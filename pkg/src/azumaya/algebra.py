"""Associative algebras given by structure constants over a ring tower."""

from __future__ import annotations

import itertools
from typing import Sequence

from . import linalg
from .errors import BaseRingMismatch, InvalidAlgebra, NotInvertible, UnsupportedRing
from .rings import Elem, QuotientRing, Ring


class AlgebraElement:
    """Coordinates (raw reprs of the base ring) on the algebra's basis."""

    __slots__ = ("alg", "c")

    def __init__(self, alg: "FiniteAlgebra", coords: Sequence):
        self.alg = alg
        self.c = tuple(coords)

    def _coords(self, other):
        if isinstance(other, AlgebraElement):
            return other.c
        return self.alg.scalar(other).c

    def __add__(self, other):
        R = self.alg.ring
        return AlgebraElement(self.alg, [R.add(x, y) for x, y in zip(self.c, self._coords(other))])

    __radd__ = __add__

    def __sub__(self, other):
        R = self.alg.ring
        return AlgebraElement(self.alg, [R.sub(x, y) for x, y in zip(self.c, self._coords(other))])

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        R = self.alg.ring
        return AlgebraElement(self.alg, [R.neg(x) for x in self.c])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement(self.alg, self.alg.mul(self.c, other.c))
        R = self.alg.ring
        s = R.coerce(other)
        return AlgebraElement(self.alg, [R.mul(s, x) for x in self.c])

    def __rmul__(self, other):
        R = self.alg.ring
        s = R.coerce(other)
        return AlgebraElement(self.alg, [R.mul(s, x) for x in self.c])

    def __pow__(self, e: int):
        out = self.alg.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            try:
                other = self.alg.scalar(other)
            except (TypeError, ValueError):
                return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        R = self.alg.ring
        return all(R.is_zero(x) for x in self.c)

    def coords(self) -> list[Elem]:
        return [Elem(self.alg.ring, x) for x in self.c]

    def dump(self) -> list:
        return [self.alg.ring.dump(x) for x in self.c]

    def __str__(self):
        return "[" + ", ".join(self.alg.ring.format(x) for x in self.c) + "]"

    __repr__ = __str__


class FiniteAlgebra:
    """``A`` free over ``ring`` with basis ``x_0..x_{r-1}`` and ``x_i x_j = sum_k sc[i][j][k] x_k``."""

    def __init__(self, ring: Ring, rank: int, sc, unit, check: bool = True, raw: bool = False):
        # raw=True: entries are already reprs of ``ring``; otherwise they are parsed
        self.ring = ring
        self.rank = rank
        conv = (lambda x: x) if raw else ring.coerce
        try:
            self.sc = [[tuple(conv(x) for x in sc[i][j]) for j in range(rank)] for i in range(rank)]
            self.unit = tuple(conv(x) for x in unit)
        except (IndexError, TypeError) as exc:
            raise InvalidAlgebra(f"malformed structure constants: {exc}") from None
        if check:
            self.validate()

    # -- construction checks -------------------------------------------------
    def validate(self) -> None:
        r = self.rank
        if len(self.sc) != r or any(len(row) != r for row in self.sc) or len(self.unit) != r:
            raise InvalidAlgebra(f"structure constants do not have shape {r}x{r}x{r}")
        for i in range(r):
            for j in range(r):
                if len(self.sc[i][j]) != r:
                    raise InvalidAlgebra(f"sc[{i}][{j}] has length {len(self.sc[i][j])}, expected {r}")
        bad = self.associativity_failure()
        if bad is not None:
            raise InvalidAlgebra(f"not associative on basis triple {bad}")
        for i in range(r):
            xi = self.basis(i)
            if not (self.one() * xi == xi and xi * self.one() == xi):
                raise InvalidAlgebra(f"unit law fails on basis element {i}")

    def associativity_failure(self):
        for i, j, k in itertools.product(range(self.rank), repeat=3):
            a, b, c = self.basis(i), self.basis(j), self.basis(k)
            if not ((a * b) * c == a * (b * c)):
                return (i, j, k)
        return None

    # -- raw arithmetic --------------------------------------------------------
    def mul(self, u, v):
        R = self.ring
        r = self.rank
        out = [R.zero] * r
        for i in range(r):
            ui = u[i]
            if R.is_zero(ui):
                continue
            row = self.sc[i]
            for j in range(r):
                vj = v[j]
                if R.is_zero(vj):
                    continue
                s = R.mul(ui, vj)
                cij = row[j]
                for k in range(r):
                    if not R.is_zero(cij[k]):
                        out[k] = R.add(out[k], R.mul(s, cij[k]))
        return out

    # -- elements --------------------------------------------------------------
    def element(self, x) -> AlgebraElement:
        if isinstance(x, AlgebraElement):
            if x.alg is not self and x.alg != self:
                raise BaseRingMismatch("element belongs to a different algebra")
            return x if x.alg is self else AlgebraElement(self, x.c)
        coords = list(x)
        if len(coords) != self.rank:
            raise InvalidAlgebra(f"expected {self.rank} coordinates, got {len(coords)}")
        return AlgebraElement(self, [self.ring.coerce(c) for c in coords])

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [self.ring.zero] * self.rank)

    def one(self) -> AlgebraElement:
        return AlgebraElement(self, self.unit)

    def basis(self, i: int) -> AlgebraElement:
        R = self.ring
        return AlgebraElement(self, [R.one if j == i else R.zero for j in range(self.rank)])

    def scalar(self, s) -> AlgebraElement:
        R = self.ring
        s = R.coerce(s)
        return AlgebraElement(self, [R.mul(s, u) for u in self.unit])

    def random_element(self, rng) -> AlgebraElement:
        return AlgebraElement(self, [self.ring.random(rng) for _ in range(self.rank)])

    # -- linear maps -----------------------------------------------------------
    def left_matrix(self, a: AlgebraElement) -> list[list]:
        """Matrix of ``x -> a x`` (column j = coordinates of ``a x_j``)."""
        cols = [(a * self.basis(j)).c for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def right_matrix(self, a: AlgebraElement) -> list[list]:
        cols = [(self.basis(j) * a).c for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    def inverse_or_none(self, a: AlgebraElement) -> AlgebraElement | None:
        a = self.element(a)
        sol = linalg.solve_over(self.ring, self.left_matrix(a), list(self.unit))
        if sol is None:
            return None
        # a b = 1 makes x -> a x a surjective endomorphism of a finite free
        # module, hence bijective, so b is also a left inverse
        return AlgebraElement(self, sol)

    def inverse(self, a: AlgebraElement) -> AlgebraElement:
        b = self.inverse_or_none(a)
        if b is None:
            raise NotInvertible(f"{a} is not invertible in the algebra")
        return b

    def is_unit(self, a: AlgebraElement) -> bool:
        return self.inverse_or_none(a) is not None

    # -- identity / serialization ---------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        if self.ring != other.ring or self.rank != other.rank:
            return False
        R = self.ring
        eq = lambda x, y: R.is_zero(R.sub(x, y))  # noqa: E731
        if not all(eq(x, y) for x, y in zip(self.unit, other.unit)):
            return False
        for i in range(self.rank):
            for j in range(self.rank):
                if not all(eq(x, y) for x, y in zip(self.sc[i][j], other.sc[i][j])):
                    return False
        return True

    __hash__ = None

    def is_commutative(self) -> bool:
        return all(self.basis(i) * self.basis(j) == self.basis(j) * self.basis(i)
                   for i in range(self.rank) for j in range(i + 1, self.rank))

    def dump_sc(self) -> list:
        R = self.ring
        return [[[R.dump(x) for x in self.sc[i][j]] for j in range(self.rank)] for i in range(self.rank)]

    def __repr__(self):
        return f"FiniteAlgebra(rank {self.rank} over {self.ring})"

    # -- base change -----------------------------------------------------------
    def base_change(self, S: Ring) -> "FiniteAlgebra":
        """Structure constants mapped into the extension ``S``."""
        R = self.ring
        conv = lambda x: S.coerce(Elem(R, x))  # noqa: E731
        sc = [[[conv(x) for x in self.sc[i][j]] for j in range(self.rank)] for i in range(self.rank)]
        return FiniteAlgebra(S, self.rank, sc, [conv(x) for x in self.unit], check=False, raw=True)


# ---------------------------------------------------------------------------
# Families


def matrix_algebra(R: Ring, n: int) -> FiniteAlgebra:
    """``M_n(R)`` on the matrix-unit basis ``E_ij`` at index ``i*n + j``."""
    r = n * n
    z, o = R.zero, R.one
    sc = [[[z] * r for _ in range(r)] for _ in range(r)]
    for i, j, l in itertools.product(range(n), repeat=3):
        sc[i * n + j][j * n + l][i * n + l] = o
    unit = [o if (a // n) == (a % n) else z for a in range(r)]
    return FiniteAlgebra(R, r, sc, unit, check=False, raw=True)


def quaternion_algebra(R: Ring, a, b) -> FiniteAlgebra:
    """``(a, b)`` on the basis ``1, i, j, ij`` with ``i^2 = a``, ``j^2 = b``, ``ji = -ij``."""
    a = R.coerce(a)
    b = R.coerce(b)
    z, o = R.zero, R.one
    ab = R.mul(a, b)
    # table[(p, q)] = (coefficient, basis index) of basis_p * basis_q
    table = {
        (0, 0): (o, 0), (0, 1): (o, 1), (0, 2): (o, 2), (0, 3): (o, 3),
        (1, 0): (o, 1), (1, 1): (a, 0), (1, 2): (o, 3), (1, 3): (a, 2),
        (2, 0): (o, 2), (2, 1): (R.neg(o), 3), (2, 2): (b, 0), (2, 3): (R.neg(b), 1),
        (3, 0): (o, 3), (3, 1): (R.neg(a), 2), (3, 2): (b, 1), (3, 3): (R.neg(ab), 0),
    }
    sc = [[[z] * 4 for _ in range(4)] for _ in range(4)]
    for (p, q), (c, k) in table.items():
        sc[p][q][k] = c
    return FiniteAlgebra(R, 4, sc, [o, z, z, z], check=False, raw=True)


def monic_quotient_algebra(R: Ring, modulus) -> FiniteAlgebra:
    """``R[X]/(P)`` on the basis ``1, x, ..., x^{d-1}``."""
    S = R.quotient(modulus, "x")
    if not isinstance(S, QuotientRing):
        raise UnsupportedRing("expected a monic quotient")
    d = S.d
    pw = [S.gen ** i for i in range(d)]
    sc = [[list((pw[i] * pw[j]).v) for j in range(d)] for i in range(d)]
    return FiniteAlgebra(R, d, sc, list(S.one), check=False, raw=True)


def trivial_algebra(R: Ring) -> FiniteAlgebra:
    return FiniteAlgebra(R, 0, [], [], check=False, raw=True)


def conjugate_basis(A: FiniteAlgebra, T: Sequence[Sequence]) -> FiniteAlgebra:
    """Rewrite ``A`` on the basis ``y_j = sum_i T[i][j] x_i``; ``T`` must be invertible."""
    R = A.ring
    r = A.rank
    T = [[R.coerce(x) for x in row] for row in T]
    ys = [AlgebraElement(A, [T[i][j] for i in range(r)]) for j in range(r)]
    sc = []
    for p in range(r):
        row = []
        for q in range(r):
            prod = ys[p] * ys[q]
            c = linalg.solve_over(R, T, list(prod.c))
            if c is None:
                raise NotInvertible("change of basis matrix is not invertible")
            row.append(c)
        sc.append(row)
    unit = linalg.solve_over(R, T, list(A.unit))
    if unit is None:
        raise NotInvertible("change of basis matrix is not invertible")
    return FiniteAlgebra(R, r, sc, unit, check=False, raw=True)


# ---------------------------------------------------------------------------
# Constructions


def opposite(A: FiniteAlgebra) -> FiniteAlgebra:
    r = A.rank
    sc = [[A.sc[j][i] for j in range(r)] for i in range(r)]
    return FiniteAlgebra(A.ring, r, sc, A.unit, check=False, raw=True)


def tensor(A: FiniteAlgebra, B: FiniteAlgebra) -> FiniteAlgebra:
    """``A (x) B`` with basis ``x_i (x) y_j`` at index ``i * rank(B) + j``."""
    if A.ring != B.ring:
        raise BaseRingMismatch(f"{A.ring} and {B.ring} differ")
    R = A.ring
    ra, rb = A.rank, B.rank
    r = ra * rb
    sc = [[None] * r for _ in range(r)]
    for i1, j1, i2, j2 in itertools.product(range(ra), range(rb), range(ra), range(rb)):
        ca = A.sc[i1][i2]
        cb = B.sc[j1][j2]
        sc[i1 * rb + j1][i2 * rb + j2] = [R.mul(ca[k], cb[l]) for k in range(ra) for l in range(rb)]
    unit = [R.mul(A.unit[k], B.unit[l]) for k in range(ra) for l in range(rb)]
    return FiniteAlgebra(R, r, sc, unit, check=False, raw=True)


def canonical_map_matrix(A: FiniteAlgebra) -> list[list]:
    """Matrix of ``A (x) A^op -> End(A)``, ``a (x) b -> (x -> a x b)``.

    Column ``i*r + j`` is the image of ``x_i (x) x_j``; an endomorphism with
    matrix ``M`` (column l = image of ``x_l``) is flattened so that entry
    ``M[k][l]`` sits in row ``k*r + l``.
    """
    R = A.ring
    r = A.rank
    n = r * r
    out = [[R.zero] * n for _ in range(n)]
    for i in range(r):
        xi = A.basis(i)
        left = [(xi * A.basis(l)) for l in range(r)]
        for j in range(r):
            xj = A.basis(j)
            col = i * r + j
            for l in range(r):
                img = (left[l] * xj).c
                for k in range(r):
                    out[k * r + l][col] = img[k]
    return out


def canonical_map_det(A: FiniteAlgebra) -> Elem:
    return Elem(A.ring, linalg.det(A.ring, canonical_map_matrix(A)))


def is_azumaya(A: FiniteAlgebra) -> bool:
    """Whether the canonical map is an isomorphism, decided by its determinant."""
    if A.rank == 0:
        return True
    return canonical_map_det(A).is_unit()


def center(A: FiniteAlgebra) -> list[AlgebraElement]:
    """Generators of ``{a : a x_j = x_j a for all j}`` as a module over the base."""
    R = A.ring
    r = A.rank
    if r == 0:
        return []
    rows = []
    for j in range(r):
        for k in range(r):
            rows.append([R.sub(A.sc[s][j][k], A.sc[j][s][k]) for s in range(r)])
    gens = linalg.kernel_over(R, rows, r)
    return [AlgebraElement(A, g) for g in gens]


def in_span(A: FiniteAlgebra, gens: Sequence[AlgebraElement], x: AlgebraElement) -> bool:
    R = A.ring
    if not gens:
        return x.is_zero()
    M = [[g.c[i] for g in gens] for i in range(A.rank)]
    return linalg.solve_over(R, M, list(x.c)) is not None


def center_is_scalars(A: FiniteAlgebra) -> bool:
    """``center(A) = R * 1``."""
    gens = center(A)
    one = A.one()
    if A.rank == 0:
        return True
    return in_span(A, gens, one) and all(in_span(A, [one], g) for g in gens)
