"""Computable commutative rings built as towers over decidable bases.

A tower starts at one of the integers, the rationals, a prime field or
``Z/p^k`` and then applies extension steps: monic quotients ``R[X]/(P)`` and
localizations ``R[1/u]``.  Ring objects work on raw representations
("reprs"); user code normally handles :class:`Elem` wrappers instead.

Raw representations:

* integers, prime fields, ``Z/p^k``: ``int`` (reduced into ``[0, n)`` for the
  modular rings), rationals: ``Fraction``;
* monic quotient of degree ``d``: a tuple of ``d`` inner reprs (eagerly
  reduced, coefficient of ``x^i`` at index ``i``);
* localization at ``u``: a pair ``(numerator, exponent)`` meaning
  ``numerator / u^exponent``.

Quotient and base reprs are canonical, so ``==`` on them decides equality.
Localization pairs are not canonicalized; use :meth:`Ring.is_zero`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Sequence

from .errors import (
    DescriptorError,
    NonMonicModulus,
    NonPrimeModulus,
    NotInvertible,
    UnsupportedRing,
    ZeroLocalization,
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# Descriptors


@dataclass(frozen=True)
class BaseSpec:
    kind: str  # "integers" | "rationals" | "prime_field" | "zmod_pk"
    p: int | None = None
    k: int | None = None


@dataclass(frozen=True)
class MonicQuotient:
    var: str
    modulus: tuple  # coefficients, degree 0 first, in any form the inner ring parses


@dataclass(frozen=True)
class Localize:
    u: Any


@dataclass(frozen=True)
class RingDescriptor:
    base: BaseSpec
    steps: tuple = field(default_factory=tuple)


def Integers_() -> BaseSpec:
    return BaseSpec("integers")


def Rationals_() -> BaseSpec:
    return BaseSpec("rationals")


def PrimeField_(p: int) -> BaseSpec:
    return BaseSpec("prime_field", p=p)


def IntegersModPrimePower_(p: int, k: int) -> BaseSpec:
    return BaseSpec("zmod_pk", p=p, k=k)


def make_ring(descriptor: RingDescriptor) -> "Ring":
    """Build the ring handle for a descriptor, validating it step by step."""
    ring = _make_base(descriptor.base)
    for step in descriptor.steps:
        if isinstance(step, MonicQuotient):
            ring = ring.quotient([ring.parse(c) for c in step.modulus], step.var)
        elif isinstance(step, Localize):
            ring = ring.localize(ring.parse(step.u))
        else:
            raise DescriptorError(f"unknown extension step {step!r}")
    return ring


def _make_base(spec: BaseSpec) -> "Ring":
    if spec.kind == "integers":
        return ZZ
    if spec.kind == "rationals":
        return QQ
    if spec.kind == "prime_field":
        return ModularIntegers(spec.p, 1)
    if spec.kind == "zmod_pk":
        return ModularIntegers(spec.p, spec.k)
    raise DescriptorError(f"unknown base ring kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# Elements


class Elem:
    """An element of a ring handle.  Immutable."""

    __slots__ = ("ring", "v")

    def __init__(self, ring: "Ring", v):
        self.ring = ring
        self.v = v

    def _other(self, other):
        if isinstance(other, Elem) and other.ring is self.ring:
            return other.v
        try:
            return self.ring.coerce(other)
        except (TypeError, DescriptorError):
            raise TypeError(f"cannot combine {self.ring} element with {other!r}") from None

    def _lift(self, other):
        # the result lives in the larger of the two rings
        if isinstance(other, Elem) and other.ring is not self.ring and self.ring.is_subring_of(other.ring):
            return Elem(other.ring, other.ring.coerce(self)), other
        return self, None

    def __add__(self, other):
        a, b = self._lift(other)
        if b is not None:
            return a + b
        return Elem(self.ring, self.ring.add(self.v, self._other(other)))

    def __radd__(self, other):
        return Elem(self.ring, self.ring.add(self._other(other), self.v))

    def __sub__(self, other):
        a, b = self._lift(other)
        if b is not None:
            return a - b
        return Elem(self.ring, self.ring.sub(self.v, self._other(other)))

    def __rsub__(self, other):
        return Elem(self.ring, self.ring.sub(self._other(other), self.v))

    def __mul__(self, other):
        a, b = self._lift(other)
        if b is not None:
            return a * b
        return Elem(self.ring, self.ring.mul(self.v, self._other(other)))

    def __rmul__(self, other):
        return Elem(self.ring, self.ring.mul(self._other(other), self.v))

    def __neg__(self):
        return Elem(self.ring, self.ring.neg(self.v))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Elem(self.ring, self.ring.pow(self.v, e))

    def __eq__(self, other):
        if isinstance(other, Elem) and other.ring is not self.ring:
            if self.ring.is_subring_of(other.ring):
                return other.ring.is_zero(other.ring.sub(other.ring.coerce(self), other.v))
            if not other.ring.is_subring_of(self.ring):
                return NotImplemented
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self.ring.is_zero(self.ring.sub(self.v, o))

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if not self.ring.canonical:
            raise TypeError(f"elements of {self.ring} are not hashable")
        return hash(self.v)

    def is_zero(self) -> bool:
        return self.ring.is_zero(self.v)

    def is_one(self) -> bool:
        return self.ring.is_zero(self.ring.sub(self.v, self.ring.one))

    def is_unit(self) -> bool:
        return self.ring.is_invertible(self.v)

    def inverse(self) -> "Elem":
        return Elem(self.ring, self.ring.inverse(self.v))

    def flat(self) -> list:
        return self.ring.to_flat(self.v)

    def dump(self):
        return self.ring.dump(self.v)

    def __str__(self):
        return self.ring.format(self.v)

    def __repr__(self):
        return f"Elem({self.ring.format(self.v)} in {self.ring})"


# ---------------------------------------------------------------------------
# Rings


class Ring:
    """Common interface; subclasses implement the raw operations."""

    inner: "Ring | None" = None
    canonical = True  # == on reprs decides equality
    finite = False
    order: int | None = None
    char_p: int | None = None  # residue characteristic of the base (p) if any
    nil_k = 1  # k for Z/p^k bases, 1 otherwise
    flat_rank: int | None = 1

    # raw interface ------------------------------------------------------
    zero: Any
    one: Any

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def pow(self, a, e: int):
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    # flattening to a free module over the scalar ring ----------------------
    @property
    def scalar(self) -> "Ring":
        return self

    def to_flat(self, a) -> list:
        return [a]

    def from_flat(self, vec: Sequence):
        return vec[0]

    def basis(self) -> list:
        if not hasattr(self, "_basis"):
            n = self.flat_rank
            if n is None:
                raise UnsupportedRing(f"{self} is not a finite free module over a scalar ring")
            C = self.scalar
            vecs = []
            for i in range(n):
                v = [C.zero] * n
                v[i] = C.one
                vecs.append(self.from_flat(v))
            self._basis = vecs
        return self._basis

    def mul_matrix(self, a) -> list[list]:
        """Matrix over the scalar ring of multiplication by ``a`` (column j = a*basis_j)."""
        cols = [self.to_flat(self.mul(a, b)) for b in self.basis()]
        n = len(cols)
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def embed_scalar(self, c):
        """Image of a scalar-ring repr in this ring."""
        if self.inner is None:
            return c
        return self.embed(self.inner.embed_scalar(c))

    def embed(self, a):
        raise NotImplementedError

    # units --------------------------------------------------------------
    def is_invertible(self, a) -> bool:
        return self.inverse_or_none(a) is not None

    def inverse(self, a):
        y = self.inverse_or_none(a)
        if y is None:
            raise NotInvertible(f"{self.format(a)} is not invertible in {self}")
        return y

    def inverse_or_none(self, a):
        from . import linalg

        C = self.scalar
        M = self.mul_matrix(a)
        sol = linalg.solve(C, M, self.to_flat(self.one))
        if sol is None:
            return None
        return self.from_flat(sol)

    def nilpotency_bound(self) -> int:
        """An exponent K such that kernels of multiplication maps stabilize at K."""
        if self.flat_rank is None:
            raise UnsupportedRing(f"no nilpotency bound for {self}")
        return self.nil_k * self.flat_rank

    # construction -------------------------------------------------------
    def quotient(self, modulus, var: str = "x") -> "Ring":
        """``self[var]/(modulus)``; ``modulus`` is a Poly or a coefficient list (low degree first)."""
        if hasattr(modulus, "ring") and hasattr(modulus, "c"):
            raw = [self.coerce(Elem(modulus.ring, c)) for c in modulus.c]
        else:
            raw = [self.coerce(c) for c in modulus]
        return QuotientRing(self, raw, var)

    def localize(self, u) -> "Ring":
        if isinstance(u, Elem):
            u = self.coerce(u)
        return _localize(self, u)

    # coercion / parsing -------------------------------------------------
    def __call__(self, x=0) -> Elem:
        return Elem(self, self.coerce(x))

    def elem(self, v) -> Elem:
        return Elem(self, v)

    def is_subring_of(self, other: "Ring") -> bool:
        if self is ZZ:
            return True
        r = other
        while r is not None:
            if r == self:
                return True
            via = getattr(r, "via", None)
            if via is not None and self.is_subring_of(via[0]):
                return True
            r = r.inner
        return False

    def coerce(self, x):
        if isinstance(x, Elem):
            if x.ring is self or x.ring == self:
                return x.v
            return self._coerce_foreign(x)
        return self.parse(x)

    def _coerce_foreign(self, x: Elem):
        if self.inner is not None:
            return self.embed(self.inner.coerce(x))
        if x.ring is ZZ:
            return self.from_int(x.v)
        raise TypeError(f"cannot coerce element of {x.ring} into {self}")

    def parse(self, x):
        raise NotImplementedError

    def dump(self, a):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(self.dump(a))

    def random(self, rng: random.Random):
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise UnsupportedRing(f"{self} is not finite")

    # identity -----------------------------------------------------------
    key: tuple

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def descriptor(self) -> RingDescriptor:
        raise NotImplementedError

    @property
    def is_field(self) -> bool:
        return False


class _Integers(Ring):
    zero = 0
    one = 1
    key = ("ZZ",)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return int(n)

    def parse(self, x):
        if isinstance(x, bool):
            raise DescriptorError("boolean is not an integer")
        if isinstance(x, int):
            return x
        if isinstance(x, str):
            try:
                return int(x.strip())
            except ValueError:
                raise DescriptorError(f"not an integer: {x!r}") from None
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        raise DescriptorError(f"not an integer: {x!r}")

    def dump(self, a):
        return str(a)

    def random(self, rng):
        return rng.randint(-50, 50)

    def inverse_or_none(self, a):
        return a if a in (1, -1) else None

    def nilpotency_bound(self):
        return 1

    # elimination interface
    def sn_key(self, a):
        return abs(a)

    def divides(self, a, b):
        if a == 0:
            return b == 0
        return b % a == 0

    def exact_div(self, b, a):
        return b // a

    def gcdex(self, a, b):
        if a == 0 and b == 0:
            return 0, 1, 0, 0, 1
        g, s, t = xgcd(a, b)
        return g, s, t, -b // g, a // g

    def ann(self, a):
        return 1 if a == 0 else 0

    @property
    def descriptor(self):
        return RingDescriptor(BaseSpec("integers"))

    def __str__(self):
        return "ZZ"

    __repr__ = __str__


class _Rationals(Ring):
    zero = Fraction(0)
    one = Fraction(1)
    key = ("QQ",)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)

    def parse(self, x):
        if isinstance(x, bool):
            raise DescriptorError("boolean is not a rational")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except ValueError:
                raise DescriptorError(f"not a rational: {x!r}") from None
        raise DescriptorError(f"not a rational: {x!r}")

    def dump(self, a):
        return str(a)

    def random(self, rng):
        return Fraction(rng.randint(-30, 30), rng.randint(1, 12))

    def inverse_or_none(self, a):
        return None if a == 0 else 1 / a

    def nilpotency_bound(self):
        return 1

    @property
    def is_field(self):
        return True

    def sn_key(self, a):
        return 0 if a != 0 else math.inf

    def divides(self, a, b):
        return a != 0 or b == 0

    def exact_div(self, b, a):
        return b / a

    def gcdex(self, a, b):
        if a != 0:
            return a, Fraction(1), Fraction(0), -b / a, Fraction(1)
        if b != 0:
            return b, Fraction(0), Fraction(1), Fraction(1), Fraction(0)
        return a, Fraction(1), Fraction(0), Fraction(0), Fraction(1)

    def ann(self, a):
        return Fraction(1) if a == 0 else Fraction(0)

    @property
    def descriptor(self):
        return RingDescriptor(BaseSpec("rationals"))

    def __str__(self):
        return "QQ"

    __repr__ = __str__


ZZ = _Integers()
QQ = _Rationals()


class ModularIntegers(Ring):
    """``Z/p^k``; ``k = 1`` is the prime field."""

    finite = True
    zero = 0
    one = 1

    def __init__(self, p: int, k: int = 1):
        if not isinstance(p, int) or not is_prime(p):
            raise NonPrimeModulus(f"{p!r} is not prime")
        if not isinstance(k, int) or k < 1:
            raise DescriptorError(f"exponent k must be a positive integer, got {k!r}")
        self.p = p
        self.k = k
        self.n = p**k
        self.order = self.n
        self.char_p = p
        self.nil_k = k
        self.key = ("Zmod", p, k)
        if self.n == 1:
            self.one = 0

    @property
    def is_field(self):
        return self.k == 1

    def add(self, a, b):
        return (a + b) % self.n

    def sub(self, a, b):
        return (a - b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def pow(self, a, e):
        return pow(a, e, self.n)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return int(n) % self.n

    def parse(self, x):
        if isinstance(x, bool):
            raise DescriptorError("boolean is not a residue")
        if isinstance(x, int):
            return x % self.n
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except ValueError:
                raise DescriptorError(f"not a residue: {x!r}") from None
        if isinstance(x, Fraction):
            d = x.denominator % self.n
            if math.gcd(d, self.p) != 1:
                raise DescriptorError(f"denominator of {x} is not invertible mod {self.n}")
            return x.numerator * pow(d, -1, self.n) % self.n
        raise DescriptorError(f"not a residue: {x!r}")

    def dump(self, a):
        return str(a)

    def random(self, rng):
        return rng.randrange(self.n)

    def elements(self):
        return iter(range(self.n))

    def valuation(self, a) -> int:
        if a == 0:
            return self.k
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def inverse_or_none(self, a):
        if a % self.p == 0:
            return None
        return pow(a, -1, self.n)

    def nilpotency_bound(self):
        return self.k

    def sn_key(self, a):
        return self.valuation(a)

    def divides(self, a, b):
        return self.valuation(a) <= self.valuation(b)

    def exact_div(self, b, a):
        v = self.valuation(a)
        if b == 0:
            return 0
        w = self.valuation(b)
        if v > w:
            raise ArithmeticError(f"{a} does not divide {b} mod {self.n}")
        alpha = a // self.p**v
        return (b // self.p**v) * pow(alpha, -1, self.n) % self.n

    def gcdex(self, a, b):
        if self.valuation(a) <= self.valuation(b):
            if a == 0:
                return 0, 1, 0, 0, 1
            return a, 1, 0, -self.exact_div(b, a) % self.n, 1
        return b, 0, 1, 1, 0

    def ann(self, a):
        return self.p ** (self.k - self.valuation(a)) % self.n

    @property
    def descriptor(self):
        if self.k == 1:
            return RingDescriptor(BaseSpec("prime_field", p=self.p))
        return RingDescriptor(BaseSpec("zmod_pk", p=self.p, k=self.k))

    def __str__(self):
        return f"GF({self.p})" if self.k == 1 else f"Z/{self.n}"

    __repr__ = __str__


def PrimeField(p: int) -> ModularIntegers:
    return ModularIntegers(p, 1)


def IntegersModPrimePower(p: int, k: int) -> ModularIntegers:
    return ModularIntegers(p, k)


class QuotientRing(Ring):
    """``inner[X]/(modulus)`` for a monic modulus of degree >= 1."""

    def __init__(self, inner: Ring, modulus: Sequence, var: str = "x"):
        mod = list(modulus)
        while len(mod) > 1 and inner.is_zero(mod[-1]):
            mod.pop()
        if len(mod) < 2:
            raise NonMonicModulus("modulus must have degree >= 1")
        if not inner.is_zero(inner.sub(mod[-1], inner.one)):
            raise NonMonicModulus(f"modulus leading coefficient {inner.format(mod[-1])} is not 1")
        self.inner = inner
        self.var = var
        self.d = len(mod) - 1
        self.modulus = tuple(mod[:-1]) + (inner.one,)
        self._tail = tuple(mod[:-1])
        self.zero = (inner.zero,) * self.d
        self.one = (inner.one,) + (inner.zero,) * (self.d - 1)
        self.canonical = inner.canonical
        self.finite = inner.finite
        self.order = inner.order**self.d if inner.order is not None else None
        self.char_p = inner.char_p
        self.nil_k = inner.nil_k
        self.flat_rank = inner.flat_rank * self.d if inner.flat_rank is not None else None
        self.key = inner.key + (("q", var, self.modulus),)
        self._izero = inner.zero
        self._is_field = None

    @property
    def scalar(self):
        return self.inner.scalar

    @property
    def is_field(self):
        if self._is_field is None:
            self._is_field = False
            if self.inner.is_field:
                if self.d == 1:
                    self._is_field = True
                elif self.inner.finite:
                    from .poly import Poly, is_irreducible

                    self._is_field = is_irreducible(Poly._raw(self.inner, list(self.modulus)))
        return self._is_field

    def embed(self, a):
        return (a,) + (self._izero,) * (self.d - 1)

    @property
    def gen(self) -> Elem:
        return Elem(self, self.reduce([self._izero, self.inner.one]))

    def reduce(self, coeffs: Sequence):
        """Reduce an arbitrary-length inner coefficient list modulo the modulus."""
        R = self.inner
        d = self.d
        c = list(coeffs)
        if len(c) < d:
            c.extend([self._izero] * (d - len(c)))
        tail = self._tail
        zero = self._izero
        for s in range(len(c) - 1, d - 1, -1):
            top = c[s]
            if top == zero and R.canonical:
                continue
            for i in range(d):
                t = tail[i]
                if t == zero and R.canonical:
                    continue
                c[s - d + i] = R.sub(c[s - d + i], R.mul(top, t))
        return tuple(c[:d])

    def add(self, a, b):
        add = self.inner.add
        return tuple(add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        sub = self.inner.sub
        return tuple(sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        neg = self.inner.neg
        return tuple(neg(x) for x in a)

    def mul(self, a, b):
        R = self.inner
        d = self.d
        if d == 1:
            return (R.mul(a[0], b[0]),)
        zero = self._izero
        skip = R.canonical
        if isinstance(R, ModularIntegers):
            return self._mul_modint(a, b, R.n)
        mul, add = R.mul, R.add
        prod = [zero] * (2 * d - 1)
        bnz = [(j, y) for j, y in enumerate(b) if not (skip and y == zero)]
        for i, x in enumerate(a):
            if skip and x == zero:
                continue
            for j, y in bnz:
                prod[i + j] = add(prod[i + j], mul(x, y))
        return self.reduce(prod)

    def _mul_modint(self, a, b, n):
        d = self.d
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        tail = self._tail
        for s in range(2 * d - 2, d - 1, -1):
            top = prod[s] % n
            if top:
                for i in range(d):
                    prod[s - d + i] -= top * tail[i]
        return tuple(x % n for x in prod[:d])

    def is_zero(self, a):
        if self.canonical:
            return a == self.zero
        return all(self.inner.is_zero(x) for x in a)

    def from_int(self, n):
        return self.embed(self.inner.from_int(n))

    def to_flat(self, a):
        out = []
        for c in a:
            out.extend(self.inner.to_flat(c))
        return out

    def from_flat(self, vec):
        m = self.inner.flat_rank
        return tuple(self.inner.from_flat(vec[i * m:(i + 1) * m]) for i in range(self.d))

    def inverse_or_none(self, a):
        if a == self.one:
            return a
        return super().inverse_or_none(a)

    def parse(self, x):
        if isinstance(x, (list, tuple)):
            coeffs = [self.inner.parse(c) if not isinstance(c, Elem) else self.inner.coerce(c) for c in x]
            return self.reduce(coeffs)
        if isinstance(x, Elem):
            return self.coerce(x)
        return self.embed(self.inner.parse(x))

    def dump(self, a):
        return [self.inner.dump(c) for c in a]

    def format(self, a):
        terms = []
        for i, c in enumerate(a):
            if self.inner.is_zero(c):
                continue
            cs = self.inner.format(c)
            if i == 0:
                terms.append(cs)
                continue
            mon = self.var if i == 1 else f"{self.var}^{i}"
            if cs == "1":
                terms.append(mon)
            else:
                if any(ch in cs for ch in "+- ") and not cs.lstrip("-").isdigit():
                    cs = f"({cs})"
                terms.append(f"{cs}*{mon}")
        return " + ".join(terms) if terms else "0"

    def random(self, rng):
        return tuple(self.inner.random(rng) for _ in range(self.d))

    def elements(self):
        for combo in itertools.product(list(self.inner.elements()), repeat=self.d):
            yield tuple(combo)

    @property
    def descriptor(self):
        d = self.inner.descriptor
        step = MonicQuotient(self.var, tuple(self.inner.dump(c) for c in self.modulus))
        return RingDescriptor(d.base, d.steps + (step,))

    def __str__(self):
        mod = " + ".join(
            f"{self.inner.format(c)}*X^{i}" for i, c in enumerate(self.modulus) if not self.inner.is_zero(c)
        )
        return f"{self.inner}[{self.var}]/({mod})"

    __repr__ = __str__


def _localize(inner: Ring, u) -> Ring:
    if inner.is_zero(u):
        raise ZeroLocalization("cannot localize at zero")
    if inner is ZZ:
        if u in (1, -1):
            return inner
        return Localization(inner, abs(u))
    try:
        unit = inner.is_invertible(u)
    except UnsupportedRing:
        unit = False
    if unit:
        return inner
    if isinstance(inner, Localization):
        # R[1/w][1/(b/w^e)] = R[1/(w b)]
        R = inner.inner
        b = u[0]
        w = R.mul(inner.u, b)
        if R is ZZ:
            w = abs(w)
        else:
            _check_not_nilpotent(R, w)
        return Localization(R, w, via=(inner, b))
    _check_not_nilpotent(inner, u)
    return Localization(inner, u)


def _check_not_nilpotent(R: Ring, u) -> None:
    if R.is_zero(R.pow(u, R.nilpotency_bound())):
        raise ZeroLocalization(f"{R.format(u)} is nilpotent in {R}; the localization is the zero ring")


class Localization(Ring):
    """``inner[1/u]`` with elements ``(numerator, exponent)``."""

    def __init__(self, inner: Ring, u, via=None):
        self.inner = inner
        self.u = u
        self.via = via
        self.zero = (inner.zero, 0)
        self.one = (inner.one, 0)
        self.canonical = inner is ZZ
        self.finite = False
        self.order = None
        self.char_p = inner.char_p
        self.nil_k = inner.nil_k
        self._upow = [inner.one]
        self.key = inner.key + (("loc", u),)
        if inner is ZZ:
            self.flat_rank = 1
            self._uprimes = prime_factors(u)
            self._K = 1
        else:
            self.flat_rank = None
            self._K = inner.nilpotency_bound()

    def upow(self, e):
        while len(self._upow) <= e:
            self._upow.append(self.inner.mul(self._upow[-1], self.u))
        return self._upow[e]

    def _norm(self, n, e):
        if self.inner is ZZ:
            if n == 0:
                return (0, 0)
            u = self.u
            while e and n % u == 0:
                n //= u
                e -= 1
        return (n, e)

    def add(self, a, b):
        R = self.inner
        (x, m), (y, n) = a, b
        if m == n:
            return self._norm(R.add(x, y), m)
        if m < n:
            return self._norm(R.add(R.mul(x, self.upow(n - m)), y), n)
        return self._norm(R.add(x, R.mul(y, self.upow(m - n))), m)

    def neg(self, a):
        return (self.inner.neg(a[0]), a[1])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return self._norm(self.inner.mul(a[0], b[0]), a[1] + b[1])

    def is_zero(self, a):
        R = self.inner
        if R is ZZ:
            return a[0] == 0
        return R.is_zero(R.mul(self.upow(self._K), a[0]))

    def from_int(self, n):
        return self._norm(self.inner.from_int(n), 0)

    def embed(self, a):
        return self._norm(a, 0)

    def _coerce_foreign(self, x: Elem):
        if self.via is not None and (x.ring == self.via[0] or x.ring.is_subring_of(self.via[0])):
            old, b = self.via
            num, e = old.coerce(x)
            R = self.inner
            return self._norm(R.mul(num, R.pow(b, e)), e)
        return super()._coerce_foreign(x)

    # scalar-ring view of Z[1/u] -------------------------------------------
    @property
    def scalar(self):
        if self.inner is ZZ:
            return self
        raise UnsupportedRing(f"{self} is not a finite free module over a scalar ring")

    def to_flat(self, a):
        if self.inner is ZZ:
            return [a]
        raise UnsupportedRing(f"{self} cannot be flattened")

    def from_flat(self, vec):
        return vec[0]

    def to_fraction(self, a) -> Fraction:
        return Fraction(a[0], self.u ** a[1])

    def from_fraction(self, q: Fraction):
        q = Fraction(q)
        den = q.denominator
        e = 0
        ue = 1
        while ue % den:
            e += 1
            ue *= self.u
            if e > 64 * max(1, den.bit_length()):
                raise DescriptorError(f"{q} does not lie in Z[1/{self.u}]")
        return self._norm(q.numerator * (ue // den), e)

    def _sfree(self, n: int) -> int:
        if n == 0:
            return 0
        for q in self._uprimes:
            while n % q == 0:
                n //= q
        return n

    def sn_key(self, a):
        return abs(self._sfree(a[0])) if a[0] != 0 else math.inf

    def divides(self, a, b):
        if a[0] == 0:
            return b[0] == 0
        return self._sfree(b[0]) % self._sfree(a[0]) == 0

    def exact_div(self, b, a):
        return self.from_fraction(self.to_fraction(b) / self.to_fraction(a))

    def gcdex(self, a, b):
        if a[0] == 0 and b[0] == 0:
            return self.zero, self.one, self.zero, self.zero, self.one
        ma = self._sfree(a[0])
        mb = self._sfree(b[0])
        g, x, y = xgcd(ma, mb)
        fa, fb = self.to_fraction(a), self.to_fraction(b)
        s = self.from_fraction(Fraction(x) * ma / fa) if ma else self.zero
        t = self.from_fraction(Fraction(y) * mb / fb) if mb else self.zero
        gg = self.from_int(g)
        return gg, s, t, self.from_fraction(-fb / g), self.from_fraction(fa / g)

    def ann(self, a):
        return self.one if a[0] == 0 else self.zero

    def inverse_or_none(self, a):
        R = self.inner
        if R is ZZ:
            n, e = a
            if n == 0 or abs(self._sfree(n)) != 1:
                return None
            return self.from_fraction(Fraction(self.u**e, n))
        if R.nil_k is None or not (R.scalar.is_field or isinstance(R.scalar, ModularIntegers)):
            raise UnsupportedRing(f"invertibility in {self} is only decided over Artinian inner rings")
        # inner ring is Artinian: a/u^m is a unit iff u^K lies in a*u^K*R
        uK = self.upow(self._K)
        from . import linalg

        target = R.mul(a[0], uK)
        sol = linalg.solve(R.scalar, R.mul_matrix(target), R.to_flat(uK))
        if sol is None:
            return None
        y = R.from_flat(sol)
        return self._norm(R.mul(y, self.upow(a[1])), 0)

    def nilpotency_bound(self):
        if self.inner is ZZ:
            return 1
        raise UnsupportedRing(f"no nilpotency bound for {self}")

    @property
    def is_field(self):
        return False

    def parse(self, x):
        if isinstance(x, dict):
            if set(x) != {"num", "exp"}:
                raise DescriptorError(f"localized element needs keys 'num' and 'exp', got {sorted(x)}")
            e = x["exp"]
            if not isinstance(e, int) or e < 0:
                raise DescriptorError(f"exponent must be a nonnegative integer, got {e!r}")
            return self._norm(self.inner.parse(x["num"]), e)
        if self.inner is ZZ and isinstance(x, (str, Fraction)) and not isinstance(x, bool):
            try:
                q = Fraction(x.strip()) if isinstance(x, str) else x
            except ValueError:
                raise DescriptorError(f"not an element of {self}: {x!r}") from None
            return self.from_fraction(q)
        return self.embed(self.inner.parse(x))

    def dump(self, a):
        if self.inner is ZZ:
            return str(self.to_fraction(a))
        return {"num": self.inner.dump(a[0]), "exp": a[1]}

    def format(self, a):
        if self.inner is ZZ:
            return str(self.to_fraction(a))
        if a[1] == 0:
            return self.inner.format(a[0])
        return f"({self.inner.format(a[0])})/u^{a[1]}"

    def random(self, rng):
        return self._norm(self.inner.random(rng), rng.randint(0, 3))

    @property
    def descriptor(self):
        d = self.inner.descriptor
        return RingDescriptor(d.base, d.steps + (Localize(self.inner.dump(self.u)),))

    def __str__(self):
        return f"{self.inner}[1/{self.inner.format(self.u)}]"

    __repr__ = __str__


def scalar_is_artinian(C: Ring) -> bool:
    return C.is_field or isinstance(C, ModularIntegers)
