"""Dense univariate polynomials over a ring tower, and finite-field factoring."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import NonMonicDivisor, NotFiniteField
from .rings import Elem, Ring


class Poly:
    """Polynomial with coefficients (raw reprs) in ``ring``, lowest degree first.

    The coefficient list carries no trailing zeros; the zero polynomial has
    an empty list.
    """

    __slots__ = ("ring", "c")

    def __init__(self, ring: Ring, coeffs: Iterable = ()):
        self.ring = ring
        c = [ring.coerce(x) for x in coeffs]
        while c and ring.is_zero(c[-1]):
            c.pop()
        self.c = c

    @classmethod
    def _raw(cls, ring: Ring, c: list) -> "Poly":
        p = cls.__new__(cls)
        p.ring = ring
        while c and ring.is_zero(c[-1]):
            c.pop()
        p.c = c
        return p

    @classmethod
    def x(cls, ring: Ring) -> "Poly":
        return cls._raw(ring, [ring.zero, ring.one])

    @classmethod
    def constant(cls, ring: Ring, a) -> "Poly":
        return cls._raw(ring, [ring.coerce(a)])

    @classmethod
    def from_roots(cls, ring: Ring, roots: Sequence) -> "Poly":
        """``prod (X - r)``."""
        p = cls.constant(ring, 1)
        for r in roots:
            p = p * cls._raw(ring, [ring.neg(ring.coerce(r)), ring.one])
        return p

    # -- basic accessors -----------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def coeff(self, i: int) -> Elem:
        return Elem(self.ring, self.c[i] if i < len(self.c) else self.ring.zero)

    @property
    def coeffs(self) -> list[Elem]:
        return [Elem(self.ring, x) for x in self.c]

    def lc(self) -> Elem:
        return Elem(self.ring, self.c[-1]) if self.c else Elem(self.ring, self.ring.zero)

    def is_monic(self) -> bool:
        return bool(self.c) and self.ring.is_zero(self.ring.sub(self.c[-1], self.ring.one))

    def map(self, target: Ring, f) -> "Poly":
        """Apply the raw map ``f`` coefficientwise into ``target``."""
        return Poly._raw(target, [f(x) for x in self.c])

    def change_ring(self, target: Ring) -> "Poly":
        return Poly._raw(target, [target.coerce(Elem(self.ring, x)) for x in self.c])

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                return other.change_ring(self.ring)
            return other
        return Poly.constant(self.ring, other)

    def __add__(self, other):
        o = self._coerce(other)
        R = self.ring
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = R.add(out[i], y)
        return Poly._raw(R, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, [self.ring.neg(x) for x in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        R = self.ring
        if not isinstance(other, Poly):
            s = R.coerce(other)
            return Poly._raw(R, [R.mul(s, x) for x in self.c])
        o = self._coerce(other)
        if not self.c or not o.c:
            return Poly._raw(R, [])
        out = [R.zero] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if R.canonical and x == R.zero:
                continue
            for j, y in enumerate(o.c):
                out[i + j] = R.add(out[i + j], R.mul(x, y))
        return Poly._raw(R, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly.constant(self.ring, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        d = self - other
        return d.is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __call__(self, x) -> Elem:
        return evaluate(self, x)

    def __divmod__(self, other):
        return divmod_monic(self, self._coerce(other))

    def __mod__(self, other):
        return divmod_monic(self, self._coerce(other))[1]

    def __floordiv__(self, other):
        return divmod_monic(self, self._coerce(other))[0]

    def dump(self) -> list:
        return [self.ring.dump(x) for x in self.c]

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if self.ring.is_zero(x):
                continue
            s = self.ring.format(x)
            if i == 0:
                terms.append(s)
            else:
                mon = "X" if i == 1 else f"X^{i}"
                terms.append(mon if s == "1" else f"({s})*{mon}")
        return " + ".join(terms)

    def __repr__(self):
        return f"Poly({self} over {self.ring})"


def poly(ring: Ring, coeffs: Iterable) -> Poly:
    return Poly(ring, coeffs)


def divmod_monic(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder of ``a`` by the monic ``b``; exact over any ring."""
    R = a.ring
    if not b.is_monic():
        raise NonMonicDivisor(f"divisor {b} is not monic")
    db = b.degree
    r = list(a.c)
    if len(r) <= db:
        return Poly._raw(R, []), Poly._raw(R, r)
    q = [R.zero] * (len(r) - db)
    bc = b.c
    for s in range(len(r) - 1, db - 1, -1):
        top = r[s]
        if R.is_zero(top):
            continue
        q[s - db] = top
        for i in range(db):
            r[s - db + i] = R.sub(r[s - db + i], R.mul(top, bc[i]))
        r[s] = R.zero
    return Poly._raw(R, q), Poly._raw(R, r[:db])


def derivative(f: Poly) -> Poly:
    R = f.ring
    return Poly._raw(R, [R.mul(R.from_int(i), x) for i, x in enumerate(f.c)][1:])


def evaluate(f: Poly, x) -> Elem:
    """Horner evaluation; ``x`` may live in any extension of ``f.ring``."""
    if isinstance(x, Elem) and x.ring is not f.ring:
        S = x.ring
        coeffs = [S.coerce(Elem(f.ring, c)) for c in f.c]
        v = x.v
    else:
        S = f.ring
        coeffs = f.c
        v = S.coerce(x)
    acc = S.zero
    for c in reversed(coeffs):
        acc = S.add(S.mul(acc, v), c)
    return Elem(S, acc)


# ---------------------------------------------------------------------------
# Polynomials over fields (including finite-field towers)


def monic(f: Poly) -> Poly:
    if f.is_zero():
        return f
    inv = f.ring.inverse(f.c[-1])
    return f * Elem(f.ring, inv)


def divmod_field(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    R = a.ring
    lc_inv = Elem(R, R.inverse(b.c[-1]))
    q, r = divmod_monic(a, b * lc_inv)
    return q * lc_inv, r


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over a field."""
    while not b.is_zero():
        a, b = b, divmod_field(a, b)[1]
    return monic(a)


def gcdex(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """``(g, s, t)`` with ``s a + t b = g`` monic gcd, over a field."""
    R = a.ring
    r0, r1 = a, b
    s0, s1 = Poly.constant(R, 1), Poly._raw(R, [])
    t0, t1 = Poly._raw(R, []), Poly.constant(R, 1)
    while not r1.is_zero():
        q, r = divmod_field(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = Elem(R, R.inverse(r0.c[-1]))
    return r0 * inv, s0 * inv, t0 * inv


def powmod(base: Poly, e: int, mod: Poly) -> Poly:
    out = Poly.constant(base.ring, 1)
    base = divmod_field(base, mod)[1]
    while e:
        if e & 1:
            out = divmod_field(out * base, mod)[1]
        e >>= 1
        if e:
            base = divmod_field(base * base, mod)[1]
    return out


# ---------------------------------------------------------------------------
# Finite fields


def finite_field_data(F: Ring) -> tuple[int, int]:
    """``(p, q)``: characteristic and order of a finite field tower."""
    if not F.finite or F.char_p is None or F.nil_k != 1 or not F.is_field:
        raise NotFiniteField(f"{F} is not a finite field")
    return F.char_p, F.order


def frobenius_root(F: Ring, a):
    """The unique ``b`` with ``b^p = a`` in the finite field ``F``."""
    p, q = finite_field_data(F)
    return F.pow(a, q // p)


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic square-free parts ``[(g, m), ...]`` with ``f = prod g^m``."""
    F = f.ring
    p, q = finite_field_data(F)
    f = monic(f)
    out: list[tuple[Poly, int]] = []
    if f.degree <= 0:
        return out
    df = derivative(f)
    if df.is_zero():
        # f = g(X^p); take p-th roots of the coefficients
        g = Poly._raw(F, [frobenius_root(F, f.c[i]) for i in range(0, len(f.c), p)])
        return [(h, m * p) for h, m in squarefree_decomposition(g)]
    c = gcd(f, df)
    w = divmod_field(f, c)[0]
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        fac = divmod_field(w, y)[0]
        if fac.degree > 0:
            out.append((monic(fac), i))
        w = y
        c = divmod_field(c, y)[0]
        i += 1
    if c.degree > 0:
        g = Poly._raw(F, [frobenius_root(F, c.c[j]) for j in range(0, len(c.c), p)])
        out.extend((h, m * p) for h, m in squarefree_decomposition(g))
    return out


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic square-free ``f`` into products of irreducibles of equal degree."""
    F = f.ring
    p, q = finite_field_data(F)
    X = Poly.x(F)
    out = []
    h = X
    i = 0
    rest = f
    while rest.degree >= 2 * (i + 1):
        i += 1
        h = powmod(h, q, rest)
        g = gcd(rest, h - X)
        if g.degree > 0:
            out.append((g, i))
            rest = divmod_field(rest, g)[0]
            h = divmod_field(h, rest)[1] if rest.degree > 0 else h
    if rest.degree > 0:
        out.append((rest, rest.degree))
    return out


def equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-``d`` irreducibles."""
    F = f.ring
    p, q = finite_field_data(F)
    n = f.degree
    if n == d:
        return [f]
    while True:
        a = Poly(F, [F.elem(F.random(rng)) for _ in range(n)])
        if a.degree < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(k d - 1)), q = 2^k
            k = q.bit_length() - 1
            t = a
            acc = a
            for _ in range(k * d - 1):
                t = divmod_field(t * t, f)[1]
                acc = acc + t
            b = acc
        else:
            b = powmod(a, (q**d - 1) // 2, f) - 1
        g = gcd(f, b)
        if 0 < g.degree < n:
            return equal_degree(g, d, rng) + equal_degree(divmod_field(f, g)[0], d, rng)


def factor_over_finite_field(f: Poly, seed: int = 0) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, sorted deterministically.

    ``f`` must be monic over a finite field (a prime field, or a quotient
    tower over one flagged as a field).
    """
    F = f.ring
    finite_field_data(F)
    if not f.is_monic():
        raise NotFiniteField("factor_over_finite_field expects a monic polynomial")
    rng = random.Random(seed)
    out: list[tuple[Poly, int]] = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree(g):
            for irr in equal_degree(h, d, rng):
                out.append((monic(irr), m))
    merged: dict = {}
    for g, m in out:
        key = tuple(g.c)
        if key in merged:
            merged[key] = (g, merged[key][1] + m)
        else:
            merged[key] = (g, m)
    return sorted(merged.values(), key=lambda gm: (gm[0].degree, [F.dump(x) for x in gm[0].c], gm[1]))


BRUTE_FORCE_LIMIT = 10_000


def roots_in_finite_field(f: Poly) -> list[Elem]:
    """Distinct roots in the field, in enumeration order."""
    F = f.ring
    p, q = finite_field_data(F)
    if f.is_zero():
        raise ValueError("every element is a root of the zero polynomial")
    if q <= BRUTE_FORCE_LIMIT:
        out = []
        for a in F.elements():
            if evaluate(f, F.elem(a)).is_zero():
                out.append(F.elem(a))
        return out
    roots = []
    for g, _ in factor_over_finite_field(monic(f)):
        if g.degree == 1:
            roots.append(F.elem(F.neg(g.c[0])))
    return roots


def is_irreducible(f: Poly) -> bool:
    """Ben-Or style check: ``gcd(f, X^(q^i) - X) = 1`` for ``i <= deg/2``."""
    F = f.ring
    p, q = finite_field_data(F)
    f = monic(f)
    n = f.degree
    if n <= 0:
        return False
    X = Poly.x(F)
    h = X
    for _ in range(n // 2):
        h = powmod(h, q, f)
        if gcd(f, h - X).degree > 0:
            return False
    return True
