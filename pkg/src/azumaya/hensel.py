"""Hensel lifting over certified finite local rings.

Roots lift by Newton iteration, idempotents of ``R[X]/(P)`` lift either by
Newton (``u <- 3u^2 - 2u^3``) or by the symmetric-product construction on the
universal decomposition algebra, coprime factorizations lift through a lifted
idempotent, and idempotents of finite algebras lift through a factored
annihilating polynomial.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .decomp import build_uda, is_unramifiable
from .errors import (
    NonMonic,
    NoResidualRoot,
    NotCoprime,
    NotResiduallyIdempotent,
    NotSimpleRoot,
    NotUnramifiable,
    RankCapExceeded,
    ResidueMismatch,
)
from .local import LocalCertificate, check_local
from .poly import Poly, derivative, divmod_field, divmod_monic, evaluate, gcdex, roots_in_finite_field
from .rings import Elem, QuotientRing, Ring

PAPER_MAX_DEGREE = 5
METHODS = ("newton", "paper")


def _cert(R: Ring, cert: LocalCertificate | None) -> LocalCertificate:
    if cert is None:
        return check_local(R)
    return cert


def _newton_steps(R: Ring) -> int:
    K = max(R.nilpotency_bound(), 1)
    return math.ceil(math.log2(K)) + 1 if K > 1 else 1


# ---------------------------------------------------------------------------
# roots


def lift_simple_root(P: Poly, r0, cert: LocalCertificate | None = None) -> Elem:
    """The unique root of ``P`` with residue ``r0``, for a residually simple root."""
    R = P.ring
    cert = _cert(R, cert)
    F = cert.residue_field
    if not (isinstance(r0, Elem) and r0.ring is F):
        r0 = F(r0)
    Pbar = cert.residue_poly(P)
    if not evaluate(Pbar, r0).is_zero():
        raise NotSimpleRoot(f"{r0} is not a residual root of {Pbar}")
    if evaluate(derivative(Pbar), r0).is_zero():
        raise NotSimpleRoot(f"{r0} is a multiple residual root of {Pbar}")
    dP = derivative(P)
    a = cert.lift(r0)
    for _ in range(_newton_steps(R) + 1):
        val = evaluate(P, a)
        if val.is_zero():
            return a
        a = a - val * evaluate(dP, a).inverse()
    raise AssertionError(f"Newton iteration for a root of {P} did not stabilize")


def _exact_root_with_residue(f: Poly, r, cert: LocalCertificate) -> Elem | None:
    R = f.ring
    for v in R.elements():
        x = Elem(R, v)
        if cert.residue(x) == r and evaluate(f, x).is_zero():
            return x
    return None


def _some_root(f: Poly, cert: LocalCertificate) -> Elem:
    fbar = cert.residue_poly(f)
    rts = roots_in_finite_field(fbar)
    if not rts:
        raise NoResidualRoot(f"{fbar} has no root in {cert.residue_field}")
    dfbar = derivative(fbar)
    for r in rts:
        if not evaluate(dfbar, r).is_zero():
            return lift_simple_root(f, r, cert)
        x = _exact_root_with_residue(f, r, cert)
        if x is not None:
            return x
    raise NoResidualRoot(f"no residual root of {fbar} lifts to an exact root of {f}")


def find_simple_root(f: Poly, cert: LocalCertificate | None = None) -> Elem:
    """A root ``a`` of the unramifiable ``f`` with ``f'(a)`` invertible.

    Peels roots ``f = (X - a_1)(X - a_2)...f_p``; as long as none of the
    ``f'(a_i)`` is a unit the cofactor ``f_p`` stays unramifiable.
    """
    R = f.ring
    cert = _cert(R, cert)
    if not f.is_monic():
        raise NonMonic(f"{f} is not monic")
    if not is_unramifiable(R, f, cross_check=False).unramifiable:
        raise NotUnramifiable(f"{f} is not unramifiable over {R}")
    df = derivative(f)
    g = f
    while True:
        a = _some_root(g, cert)
        if evaluate(df, a).is_unit():
            return a
        g, r = divmod_monic(g, Poly._raw(R, [R.neg(a.v), R.one]))
        assert r.is_zero()
        if g.degree < 1 or not is_unramifiable(R, g, cross_check=False).unramifiable:
            raise AssertionError(f"no simple root found for {f}; cofactor {g} is not unramifiable")


# ---------------------------------------------------------------------------
# idempotents in R[X]/(P)


def _in_max_ideal_coords(cert: LocalCertificate, R: Ring, coords: Sequence) -> bool:
    return all(cert.in_maximal_ideal(Elem(R, c)) for c in coords)


def _quotient_for(P: Poly, e) -> tuple[QuotientRing, Elem]:
    R = P.ring
    if isinstance(e, Elem) and isinstance(e.ring, QuotientRing) and e.ring.inner == R:
        S = e.ring
        if Poly._raw(R, list(S.modulus)) != P:
            raise ResidueMismatch(f"{e} does not live in {R}[X]/({P})")
        return S, e
    S = R.quotient(P, "x")
    if isinstance(e, Poly):
        e = e.c
    return S, S(list(e) if isinstance(e, (list, tuple)) else e)


def _newton_idempotent(S: Ring, e: Elem, steps: int) -> Elem:
    u = e
    for _ in range(steps + 1):
        u2 = u * u
        if (u2 - u).is_zero():
            return u
        u = 3 * u2 - 2 * u2 * u
    raise AssertionError("idempotent Newton iteration did not stabilize")


@dataclass
class PaperLift:
    """Intermediate data of the symmetric-product idempotent lift."""

    u: Elem
    k: int | None
    Q: Poly | None = None
    alpha: Elem | None = None
    family: list[tuple[tuple[int, ...], Elem]] = field(default_factory=list)

    def fsoi_ok(self) -> bool:
        """Pairwise orthogonal, idempotent, summing to 1."""
        if not self.family:
            return True
        vs = [v for _, v in self.family]
        L = vs[0].ring
        total = L(0)
        for i, v in enumerate(vs):
            if not (v * v - v).is_zero():
                return False
            for w in vs[i + 1:]:
                if not (v * w).is_zero():
                    return False
            total = total + v
        return total.is_one()


def paper_lift(P: Poly, e, cert: LocalCertificate | None = None) -> PaperLift:
    R = P.ring
    cert = _cert(R, cert)
    S, e = _quotient_for(P, e)
    n = P.degree
    if n > PAPER_MAX_DEGREE:
        raise RankCapExceeded(f"the symmetric-product lift is capped at degree {PAPER_MAX_DEGREE}, got {n}")
    _check_residual_idempotent(S, e, cert)
    uda = build_uda(R, P, max_degree=PAPER_MAX_DEGREE)
    L = uda.tower
    epoly = Poly._raw(R, list(e.v))
    ex = [evaluate(epoly, x) for x in uda.roots]

    def r_coords(v):
        items = [v]
        for _ in uda.levels:
            items = [c for t in items for c in t]
        return items

    def residually_zero(y: Elem) -> bool:
        return _in_max_ideal_coords(cert, R, r_coords(y.v))

    full = L(1)
    for y in ex:
        full = full * y
    if not residually_zero(full):
        # e(x_1)...e(x_n) is residually 1, and so is e
        return PaperLift(S(1), None)

    prods: dict[tuple[int, ...], Elem] = {(): L(1)}
    for size in range(1, n + 1):
        for I in itertools.combinations(range(n), size):
            prods[I] = prods[I[:-1]] * ex[I[-1]]
    k = 0
    for size in range(n - 1, -1, -1):
        if any(not residually_zero(prods[I]) for I in itertools.combinations(range(n), size)):
            k = size
            break
    layer = list(itertools.combinations(range(n), k))
    if any(residually_zero(prods[I]) for I in layer):
        raise AssertionError(f"products of size {k} are not uniformly nonzero modulo the maximal ideal")

    X = Poly.x(L)
    QL = Poly.constant(L, 1)
    for I in layer:
        QL = QL * (X - prods[I])
    Q = Poly._raw(R, [uda.to_base(c).v for c in QL.coeffs])
    N = len(layer)
    Qbar = cert.residue_poly(Q)
    F = cert.residue_field
    expect = Poly._raw(F, [F.zero] * (N - 1) + [F.neg(F.one), F.one])
    if Qbar != expect:
        raise AssertionError(f"residual form of {Q} is {Qbar}, expected X^{N - 1}(X - 1)")
    alpha = lift_simple_root(Q, 1, cert)
    lam_inv = evaluate(derivative(Q), alpha).inverse()
    aL = L(alpha)
    family = []
    for I in layer:
        v = L(lam_inv)
        for J in layer:
            if J != I:
                v = v * (aL - prods[J])
        family.append((I, v))
    u1 = L(0)
    for I, v in family:
        if 0 in I:
            u1 = u1 + v
    u = Elem(S, uda.descend(u1, 1).v)
    return PaperLift(u, k, Q, alpha, family)


def _check_residual_idempotent(S: QuotientRing, e: Elem, cert: LocalCertificate) -> None:
    d = e * e - e
    if not _in_max_ideal_coords(cert, S.inner, d.v):
        raise NotResiduallyIdempotent(f"{e} is not idempotent modulo the maximal ideal")


def lift_idempotent_monic_quotient(P: Poly, e, cert: LocalCertificate | None = None, method: str = "newton") -> Elem:
    """Idempotent ``u`` of ``R[X]/(P)`` congruent to ``e`` modulo the maximal ideal of ``R``."""
    R = P.ring
    cert = _cert(R, cert)
    if not P.is_monic():
        raise NonMonic(f"{P} is not monic")
    S, e = _quotient_for(P, e)
    _check_residual_idempotent(S, e, cert)
    if method == "newton":
        u = _newton_idempotent(S, e, _newton_steps(R))
    elif method == "paper":
        u = paper_lift(P, e, cert).u
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    assert (u * u - u).is_zero(), "lifted element is not idempotent"
    assert _in_max_ideal_coords(cert, R, (u - e).v), "lifted idempotent has the wrong residue"
    return u


# ---------------------------------------------------------------------------
# coprime factorizations


def _residual_poly(cert: LocalCertificate, f) -> Poly:
    F = cert.residue_field
    if isinstance(f, Poly):
        return f if f.ring == F else f.change_ring(F)
    return Poly(F, f)


def _annihilating_monic(S: QuotientRing, e: Elem, m: int, R: Ring) -> Poly:
    # e x^m = sum c_i e x^i; then G = X^m - sum c_i X^i has e G(x) = 0
    x = S.gen
    cols = []
    t = e
    for _ in range(m):
        cols.append(list(t.v))
        t = t * x
    A = [[cols[j][i] for j in range(m)] for i in range(S.d)]
    sol = linalg.solve_local(R, A, list(t.v)) if m else []
    if sol is None:
        raise AssertionError("residually independent generators failed to give unit pivots")
    return Poly._raw(R, [R.neg(c) for c in sol] + [R.one])


def hensel_factor(P: Poly, f, g, cert: LocalCertificate | None = None, method: str = "newton") -> tuple[Poly, Poly]:
    """Monic ``F, G`` with ``P = F G`` exactly and residues ``f, g``."""
    R = P.ring
    cert = _cert(R, cert)
    if not P.is_monic():
        raise NonMonic(f"{P} is not monic")
    f = _residual_poly(cert, f)
    g = _residual_poly(cert, g)
    if not (f.is_monic() and g.is_monic()):
        raise NonMonic("residual factors must be monic")
    if cert.residue_poly(P) != f * g:
        raise ResidueMismatch(f"residue of {P} is {cert.residue_poly(P)}, not ({f})*({g})")
    h, s, _t = gcdex(f, g)
    if h.degree != 0:
        raise NotCoprime(f"{f} and {g} share the factor {h}")
    if f.degree == 0:
        return Poly.constant(R, 1), P
    if g.degree == 0:
        return P, Poly.constant(R, 1)
    Pbar = f * g
    ebar = divmod_field(s * f, Pbar)[1]
    S = R.quotient(P, "x")
    e0 = S([cert.lift(c) for c in ebar.coeffs] + [R(0)] * (S.d - len(ebar.c)))
    e = lift_idempotent_monic_quotient(P, e0, cert, method)
    G = _annihilating_monic(S, e, g.degree, R)
    F = _annihilating_monic(S, 1 - e, f.degree, R)
    assert F * G == P, "lifted factors do not multiply back to P"
    assert cert.residue_poly(F) == f and cert.residue_poly(G) == g
    return F, G


# ---------------------------------------------------------------------------
# idempotents in finite algebras


def minimal_annihilator(A, a) -> Poly:
    """Monic polynomial of least degree killing ``a`` in the algebra ``A``."""
    R = A.ring
    powers = [A.one().c]
    cur = A.one()
    for d in range(1, A.rank + 2):
        cur = cur * a
        cols = powers
        M = [[cols[j][i] for j in range(d)] for i in range(A.rank)]
        sol = linalg.solve_over(R, M, list(cur.c))
        if sol is not None:
            return Poly._raw(R, [R.neg(c) for c in sol] + [R.one])
        powers.append(cur.c)
    raise AssertionError(f"no monic annihilator of degree <= {A.rank + 1}")


def _eval_in_algebra(A, poly: Poly, a):
    acc = A.zero()
    for c in reversed(poly.c):
        acc = acc * a + A.scalar(Elem(poly.ring, c))
    return acc


def lift_idempotent_algebra(A, a, cert: LocalCertificate | None = None, method: str = "newton"):
    """Idempotent ``e`` of ``A`` with ``e = a`` modulo the maximal ideal of the base."""
    R = A.ring
    cert = _cert(R, cert)
    a = A.element(a)
    if A.rank == 0:
        return a
    if not _in_max_ideal_coords(cert, R, (a * a - a).c):
        raise NotResiduallyIdempotent(f"{a} is not idempotent modulo the maximal ideal")
    F = minimal_annihilator(A, a)
    Fbar = cert.residue_poly(F)
    Fld = cert.residue_field
    X = Poly.x(Fld)
    n = 0
    rest = Fbar
    while not rest.is_zero() and Fld.is_zero(rest.c[0]):
        rest = divmod_monic(rest, X)[0]
        n += 1
    m = 0
    Xm1 = X - 1
    while rest.degree > 0 and evaluate(rest, Fld(1)).is_zero():
        rest = divmod_monic(rest, Xm1)[0]
        m += 1
    h = rest
    if n == 0:
        e = A.one()
    elif m == 0:
        e = A.zero()
    else:
        P, QH = hensel_factor(F, X ** n, Xm1 ** m * h, cert, method)
        Q, _H = hensel_factor(QH, Xm1 ** m, h, cert, method)
        Pa = _eval_in_algebra(A, P, a)
        Qa = _eval_in_algebra(A, Q, a)
        # Q is monic, residually (X - 1)^m = (-1)^m (1 - X)^m
        s = Pa + Qa if m % 2 == 0 else Pa - Qa
        mu = A.inverse(s)
        e = mu * Pa
    assert (e * e - e).is_zero(), "lifted element is not idempotent"
    assert _in_max_ideal_coords(cert, R, (e - a).c), "lifted idempotent has the wrong residue"
    return e
