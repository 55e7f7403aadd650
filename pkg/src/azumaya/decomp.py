"""Universal decomposition algebras, unramifiability, and the Zariski lattice."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CoefficientNotInBase, NonMonic, RankCapExceeded, UnsupportedRing
from .local import unit_ideal_test
from .poly import Poly, derivative, divmod_monic, evaluate
from .rings import ZZ, QQ, Elem, Localization, Ring, scalar_is_artinian

DEFAULT_MAX_DEGREE = 6


@dataclass
class DecompositionAlgebra:
    """``L = R[x_1, ..., x_n]`` in which ``f = prod (X - x_i)``.

    ``levels[j]`` is ``R[x_1, ..., x_{j+1}]``; ``tower`` is the last level.
    """

    base: Ring
    f: Poly
    levels: list[Ring]
    roots: list[Elem]

    @property
    def tower(self) -> Ring:
        return self.levels[-1] if self.levels else self.base

    @property
    def n(self) -> int:
        return self.f.degree

    @property
    def rank(self) -> int:
        r = 1
        for L in self.levels:
            r *= L.d
        return r

    def descend(self, x: Elem, level: int = 0) -> Elem:
        """Express ``x`` as an element of ``R[x_1..x_level]`` (``level = 0`` is ``R``)."""
        if x.ring is not self.tower:
            x = self.tower(x)
        v = x.v
        for j in range(len(self.levels) - 1, level - 1, -1):
            L = self.levels[j]
            inner = L.inner
            if any(not inner.is_zero(c) for c in v[1:]):
                where = "R" if level == 0 else f"R[x_1..x_{level}]"
                raise CoefficientNotInBase(f"element {L.format(v)} does not lie in {where}")
            v = v[0]
        ring = self.base if level == 0 else self.levels[level - 1]
        return Elem(ring, v)

    def to_base(self, x: Elem) -> Elem:
        return self.descend(x, 0)

    def embed(self, x) -> Elem:
        return self.tower(x)


def build_uda(R: Ring, f: Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> DecompositionAlgebra:
    """Adjoin the roots of monic ``f`` one at a time by iterated division."""
    if f.ring != R:
        f = f.change_ring(R)
    if not f.is_monic() or f.degree < 1:
        raise NonMonic(f"{f} must be monic of degree >= 1")
    n = f.degree
    if n > max_degree:
        raise RankCapExceeded(f"degree {n} exceeds the decomposition-algebra cap {max_degree} (rank {math.factorial(n)})")
    g = f
    ring = R
    levels: list[Ring] = []
    roots: list[Elem] = []
    for i in range(n):
        ring = ring.quotient(g, f"x{i + 1}")
        levels.append(ring)
        xi = ring.gen
        roots = [ring(r) for r in roots] + [xi]
        g = g.change_ring(ring)
        q, r = divmod_monic(g, Poly._raw(ring, [ring.neg(xi.v), ring.one]))
        assert r.is_zero(), "root adjunction left a nonzero remainder"
        g = q
    return DecompositionAlgebra(R, f, levels, roots)


def root_product(uda: DecompositionAlgebra) -> Poly:
    """``prod (X - x_i)`` computed in ``L[X]``."""
    return Poly.from_roots(uda.tower, uda.roots)


def derivative_values(uda: DecompositionAlgebra) -> list[Elem]:
    df = derivative(uda.f)
    return [evaluate(df, x) for x in uda.roots]


def deltas(uda: DecompositionAlgebra) -> list[Elem]:
    """``delta_i = sigma_i(f'(x_1), ..., f'(x_n))`` as elements of ``R``.

    Read off the coefficients of ``prod (T - f'(x_i))``; each one must lie in
    the image of ``R`` since it is symmetric in the roots.
    """
    n = uda.n
    g = Poly.from_roots(uda.tower, derivative_values(uda))
    out = []
    for i in range(1, n + 1):
        c = uda.to_base(g.coeff(n - i))
        out.append(c if i % 2 == 0 else -c)
    return out


@dataclass
class UnramifiabilityResult:
    unramifiable: bool
    deltas: list[Elem]
    cofactors: list[Elem] | None
    # the same condition decided in L on f'(x_1), ..., f'(x_n)
    unramifiable_in_L: bool | None = None
    cofactors_in_L: list[Elem] | None = None
    uda: DecompositionAlgebra | None = None

    def __bool__(self):
        return self.unramifiable


def is_unramifiable(R: Ring, f: Poly, max_degree: int = DEFAULT_MAX_DEGREE, cross_check: bool = True) -> UnramifiabilityResult:
    uda = build_uda(R, f, max_degree)
    ds = deltas(uda)
    ok, cof = unit_ideal_test(ds, R)
    res = UnramifiabilityResult(ok, ds, cof, uda=uda)
    if cross_check:
        ok_l, cof_l = unit_ideal_test(derivative_values(uda), uda.tower)
        res.unramifiable_in_L = ok_l
        res.cofactors_in_L = cof_l
    return res


# ---------------------------------------------------------------------------
# Zariski lattice


@dataclass(frozen=True)
class ZariskiElement:
    """``D(a_1, ..., a_n)``: the radical of the ideal the generators span."""

    ring: Ring
    generators: tuple

    def __and__(self, other: "ZariskiElement") -> "ZariskiElement":
        return ZariskiElement(self.ring, tuple(a * b for a in self.generators for b in other.generators))

    def __or__(self, other: "ZariskiElement") -> "ZariskiElement":
        return ZariskiElement(self.ring, self.generators + other.generators)

    def __le__(self, other: "ZariskiElement") -> bool:
        return zariski_leq(self, other)

    def __ge__(self, other: "ZariskiElement") -> bool:
        return zariski_leq(other, self)

    def same(self, other: "ZariskiElement") -> bool:
        return zariski_leq(self, other) and zariski_leq(other, self)


def D(ring: Ring, *gens) -> ZariskiElement:
    return ZariskiElement(ring, tuple(ring(g) for g in gens))


def zariski_is_top(z: ZariskiElement) -> bool:
    return unit_ideal_test(list(z.generators), z.ring)[0]


def zariski_leq(y: ZariskiElement, z: ZariskiElement) -> bool:
    return all(in_radical(b, z.generators, z.ring) for b in y.generators)


def in_radical(b: Elem, gens: Sequence[Elem], R: Ring) -> bool:
    """Decide ``b`` in the radical of ``(gens)``."""
    b = R(b)
    if b.is_zero():
        return True
    if R is ZZ or (isinstance(R, Localization) and R.inner is ZZ):
        return _in_radical_integral(b, gens, R)
    if R is QQ:
        return any(not g.is_zero() for g in gens)
    if R.flat_rank is None or not scalar_is_artinian(R.scalar):
        raise UnsupportedRing(f"radical membership is not decided over {R}")
    K = R.nilpotency_bound()
    target = b ** K
    if not gens:
        return target.is_zero()
    from . import linalg

    return linalg.solve_over(R, [[R.coerce(a) for a in gens]], [target.v]) is not None


def _in_radical_integral(b: Elem, gens, R: Ring) -> bool:
    def part(x: Elem) -> int:
        if R is ZZ:
            return x.v
        return R._sfree(x.v[0])

    g = 0
    for a in gens:
        g = math.gcd(g, part(R(a)))
    if g == 0:
        return False
    bv = part(b)
    from .rings import prime_factors

    return all(bv % q == 0 for q in prime_factors(g))
