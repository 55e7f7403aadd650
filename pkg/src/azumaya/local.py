"""Locality certificates for finite towers and the unit-ideal test."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import linalg
from .errors import NotLocal, UnsupportedBase, UnsupportedRing
from .poly import Poly, factor_over_finite_field
from .rings import Elem, Localization, ModularIntegers, PrimeField, QuotientRing, Ring


@dataclass
class LocalCertificate:
    """Evidence that ``ring`` is local with a computable residue field.

    ``residue`` is a ring homomorphism onto ``residue_field`` whose kernel is
    the ideal generated by ``maximal_ideal_generators``; ``lift`` is a
    set-theoretic section of it.
    """

    ring: Ring
    maximal_ideal_generators: list[Elem]
    residue_field: Ring
    _residue: Callable = field(repr=False)
    _lift: Callable = field(repr=False)

    def residue(self, x) -> Elem:
        if not isinstance(x, Elem) or x.ring is not self.ring:
            x = self.ring(x)
        return Elem(self.residue_field, self._residue(x.v))

    def lift(self, y) -> Elem:
        if not isinstance(y, Elem) or y.ring is not self.residue_field:
            y = self.residue_field(y)
        return Elem(self.ring, self._lift(y.v))

    def residue_poly(self, f: Poly) -> Poly:
        return f.map(self.residue_field, self._residue)

    def lift_poly(self, f: Poly) -> Poly:
        return f.map(self.ring, self._lift)

    def in_maximal_ideal(self, x) -> bool:
        return self.residue(x).is_zero()

    @property
    def nilpotency_bound(self) -> int:
        """``m^K = 0`` for this K (length of the ring as a module over itself is at most K)."""
        return self.ring.nilpotency_bound()


def _chain(R: Ring) -> list[Ring]:
    out = []
    r = R
    while r is not None:
        out.append(r)
        r = r.inner
    return out[::-1]


def check_local(ring: Ring) -> LocalCertificate:
    """Certify that a tower over ``GF(p)`` or ``Z/p^k`` made of monic quotients is local."""
    chain = _chain(ring)
    base = chain[0]
    if not isinstance(base, ModularIntegers):
        raise UnsupportedBase(f"locality is only certified over GF(p) or Z/p^k, not {base}")
    for r in chain[1:]:
        if isinstance(r, Localization):
            raise UnsupportedBase("locality certification does not cover localization steps")
        if not isinstance(r, QuotientRing):
            raise UnsupportedBase(f"unsupported extension step in {ring}")

    p = base.p
    F: Ring = PrimeField(p)
    res = lambda a: a % p  # noqa: E731
    lift = lambda b: b  # noqa: E731
    gens = [Elem(base, p % base.n)] if base.k > 1 else []

    for R in chain[1:]:
        inner_res, inner_lift, Fprev = res, lift, F
        residual_mod = Poly._raw(Fprev, [inner_res(c) for c in R.modulus])
        factors = factor_over_finite_field(residual_mod)
        if len(factors) != 1:
            raise NotLocal(
                f"residual modulus {residual_mod} of {R} has {len(factors)} distinct irreducible factors"
            )
        pi, mult = factors[0]
        gens = [Elem(R, R.embed(g.v)) for g in gens]
        if mult > 1:
            g = R.zero
            xpow = R.one
            x = R.gen.v
            for c in pi.c:
                g = R.add(g, R.mul(R.embed(inner_lift(c)), xpow))
                xpow = R.mul(xpow, x)
            gens.append(Elem(R, g))
        if pi.degree == 1:
            root = Fprev.neg(pi.c[0])
            F = Fprev
            res = _residue_eval(Fprev, inner_res, root)
            lift = _lift_const(R, inner_lift)
        else:
            F = Fprev.quotient(pi, f"t{len(gens)}")
            res = _residue_eval(F, lambda a, _r=inner_res, _F=F: _F.embed(_r(a)), F.gen.v)
            lift = _lift_vec(R, inner_lift)
    return LocalCertificate(ring, gens, F, res, lift)


def _residue_eval(F: Ring, inner_res, t):
    def res(v):
        acc = F.zero
        for c in reversed(v):
            acc = F.add(F.mul(acc, t), inner_res(c))
        return acc

    return res


def _lift_const(R: QuotientRing, inner_lift):
    return lambda y: R.embed(inner_lift(y))


def _lift_vec(R: QuotientRing, inner_lift):
    x = R.gen.v

    def lift(y):
        acc = R.zero
        xpow = R.one
        for c in y:
            acc = R.add(acc, R.mul(R.embed(inner_lift(c)), xpow))
            xpow = R.mul(xpow, x)
        return acc

    return lift


def residue(x: Elem, cert: LocalCertificate) -> Elem:
    return cert.residue(x)


def unit_ideal_test(elements: Sequence[Elem], ring: Ring | None = None) -> tuple[bool, list[Elem] | None]:
    """Decide ``1 in (a_1, ..., a_n)``; on success also return cofactors ``c_i``.

    The cofactors satisfy ``sum c_i a_i = 1`` exactly.
    """
    if ring is None:
        if not elements:
            raise ValueError("empty generator list needs an explicit ring")
        ring = elements[0].ring
    R = ring
    if R.flat_rank is None:
        raise UnsupportedRing(f"unit ideal test needs a ring that flattens to a free module; {R} does not")
    if not elements:
        return (True, []) if R.is_zero(R.one) else (False, None)
    A = [[R.coerce(a) for a in elements]]
    sol = linalg.solve_over(R, A, [R.one])
    if sol is None:
        return False, None
    return True, [Elem(R, s) for s in sol]
