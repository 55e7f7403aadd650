"""Splitting trees: certificates that an algebra is locally a matrix algebra.

A tree hangs off a base ring.  Its edges either cover the ring by
localizations ``R[1/u_i]`` with ``1 = (u_1, ..., u_n)`` or adjoin a root of a
monic polynomial; every leaf carries matrix units for the base-changed
algebra.  This module holds the tree values, the verifier, builders for the
families with explicit constructions, and Skolem-Noether conjugators.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Any, Sequence, Union

from . import linalg
from .algebra import (
    AlgebraElement,
    FiniteAlgebra,
    in_span,
    is_azumaya,
    quaternion_algebra,
)
from .decomp import is_unramifiable
from .errors import (
    AlgebraError,
    NotAutomorphism,
    NotAzumaya,
    NotFiniteField,
    NotLocal,
    RandomnessExhausted,
    UnsupportedFamily,
    UnsupportedRing,
)
from .hensel import lift_idempotent_algebra
from .local import LocalCertificate, check_local, unit_ideal_test
from .poly import Poly, divmod_monic, factor_over_finite_field, gcdex
from .rings import Elem, Ring

ETALE = "etale"
FPPF = "fppf"
MODES = (ETALE, FPPF)
DEFAULT_BUDGET = 64


# ---------------------------------------------------------------------------
# Tree values


@dataclass
class MatrixUnitWitness:
    """``units[i][j]`` is ``e_ij``; entries may be algebra elements or raw coordinate lists."""

    n: int
    units: list

    def flat(self) -> list:
        return [self.units[i][j] for i in range(self.n) for j in range(self.n)]


@dataclass
class Leaf:
    witness: MatrixUnitWitness
    # structure constants claimed for this leaf (an algebra, or a dict with
    # "sc" and optionally "unit" over the leaf ring); None means "the base change"
    algebra: Any = None


@dataclass
class RootAdjunction:
    poly: Any  # Poly over the parent ring or a coefficient list
    child: "Node"
    var: str = "y"


@dataclass
class LocalizationCover:
    units: list  # Elems of the parent ring or parseable values
    children: list


Node = Union[Leaf, RootAdjunction, LocalizationCover]


@dataclass
class SplitTree:
    algebra: FiniteAlgebra
    node: Node
    mode: str = ETALE

    @property
    def ring(self) -> Ring:
        return self.algebra.ring


@dataclass
class TreeReport:
    failures: list[tuple[str, str]] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, path: str, msg: str) -> None:
        self.failures.append((path, msg))

    @property
    def first(self) -> tuple[str, str] | None:
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok

    def lines(self) -> list[str]:
        if self.ok:
            return [f"ok: {self.checked} nodes verified"]
        return [f"{p}: {m}" for p, m in self.failures]


# ---------------------------------------------------------------------------
# Matrix units


def witness_failure(A: FiniteAlgebra, w: MatrixUnitWitness) -> str | None:
    """First violated matrix-unit condition, or None.  All ``n^4`` products are checked."""
    n = w.n
    if n * n != A.rank:
        return f"witness size {n} does not match algebra rank {A.rank}"
    if n == 0:
        return None
    try:
        e = [[A.element(w.units[i][j]) for j in range(n)] for i in range(n)]
    except (AlgebraError, IndexError, TypeError) as exc:
        return f"malformed matrix units: {exc}"
    zero = A.zero()
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    want = e[i][l] if j == k else zero
                    if not (e[i][j] * e[k][l] == want):
                        rhs = f"e{i + 1}{l + 1}" if j == k else "0"
                        return f"relation e{i + 1}{j + 1}*e{k + 1}{l + 1} = {rhs} fails"
    total = zero
    for i in range(n):
        total = total + e[i][i]
    if not (total == A.one()):
        return "sum of diagonal units is not 1"
    R = A.ring
    T = [[e[a // n][a % n].c[s] for a in range(n * n)] for s in range(A.rank)]
    if not Elem(R, linalg.det(R, T)).is_unit():
        return "matrix units are not a basis (change-of-basis determinant is not a unit)"
    return None


def _units_from_module(A: FiniteAlgebra, ws: Sequence[AlgebraElement]) -> MatrixUnitWitness:
    """Matrix units from a basis ``w_1..w_n`` of a left ideal ``V`` with ``A = End(V)``."""
    R = A.ring
    n = len(ws)
    r = A.rank
    if n * n != r:
        raise NotAzumaya(f"module of rank {n} cannot carry an algebra of rank {r}")
    W = [[w.c[s] for w in ws] for s in range(r)]

    def coords(v: AlgebraElement):
        c = linalg.solve_local(R, W, list(v.c))
        if c is None:
            raise NotAzumaya("left ideal is not stable or not free on the chosen basis")
        return c

    # column s: matrix of x_s acting on V, entry (i, k) in row i*n + k
    Phi = [[R.zero] * r for _ in range(r)]
    for s in range(r):
        xs = A.basis(s)
        for k in range(n):
            c = coords(xs * ws[k])
            for i in range(n):
                Phi[i * n + k][s] = c[i]
    if not R.is_invertible(linalg.det(R, Phi)):
        raise NotAzumaya("the action on the left ideal is not an isomorphism onto its endomorphisms")
    units = []
    for i in range(n):
        row = []
        for j in range(n):
            target = [R.zero] * r
            target[i * n + j] = R.one
            sol = linalg.solve_local(R, Phi, target)
            row.append(AlgebraElement(A, sol))
        units.append(row)
    w = MatrixUnitWitness(n, units)
    bad = witness_failure(A, w)
    if bad is not None:
        raise AssertionError(f"constructed matrix units are wrong: {bad}")
    return w


def _independent_subset(F: Ring, vecs: Sequence[AlgebraElement], need: int | None = None) -> list[AlgebraElement]:
    chosen: list[AlgebraElement] = []
    for v in vecs:
        if v.is_zero():
            continue
        if chosen:
            M = [[c.c[i] for c in chosen] for i in range(len(v.c))]
            if linalg.solve_over(F, M, list(v.c)) is not None:
                continue
        chosen.append(v)
        if need is not None and len(chosen) == need:
            break
    return chosen


def _corner_dim(A: FiniteAlgebra, e: AlgebraElement) -> int:
    return len(_independent_subset(A.ring, [e * A.basis(i) * e for i in range(A.rank)]))


def _corner_min_poly(A: FiniteAlgebra, y: AlgebraElement, e: AlgebraElement) -> Poly:
    F = A.ring
    powers = [e]
    cur = e
    while True:
        cur = cur * y
        d = len(powers)
        M = [[p.c[i] for p in powers] for i in range(A.rank)]
        sol = linalg.solve_over(F, M, list(cur.c))
        if sol is not None:
            return Poly._raw(F, [F.neg(c) for c in sol] + [F.one])
        powers.append(cur)
        if d > A.rank:
            raise AssertionError("minimal polynomial search ran past the rank")


def _eval_in_corner(f: Poly, y: AlgebraElement, e: AlgebraElement) -> AlgebraElement:
    acc = y.alg.zero()
    for c in reversed(f.c):
        acc = acc * y + e * Elem(f.ring, c)
    return acc


def _primitive_idempotent(A: FiniteAlgebra, rng: random.Random, budget: int) -> AlgebraElement:
    e = A.one()
    dim = A.rank
    draws = 0
    while dim > 1:
        if draws >= budget:
            raise RandomnessExhausted(f"no splitting element found in {budget} random draws")
        draws += 1
        y = e * A.random_element(rng) * e
        f = _corner_min_poly(A, y, e)
        factors = factor_over_finite_field(f)
        if len(factors) < 2:
            continue
        g1 = factors[0][0] ** factors[0][1]
        g2 = divmod_monic(f, g1)[0]
        _h, _s, t = gcdex(g1, g2)
        eps = _eval_in_corner(t * g2, y, e)
        other = e - eps
        d1, d2 = _corner_dim(A, eps), _corner_dim(A, other)
        e, dim = (eps, d1) if d1 <= d2 else (other, d2)
    return e


def _isqrt_rank(A: FiniteAlgebra) -> int:
    n = math.isqrt(A.rank)
    if n * n != A.rank:
        raise NotAzumaya(f"rank {A.rank} is not a square")
    return n


def split_over_finite_field(A: FiniteAlgebra, seed: int = 0, budget: int = DEFAULT_BUDGET) -> MatrixUnitWitness:
    """Matrix units for an Azumaya algebra over a finite field."""
    F = A.ring
    if not (F.finite and F.is_field):
        raise NotFiniteField(f"{F} is not a finite field")
    if A.rank == 0:
        return MatrixUnitWitness(0, [])
    if not is_azumaya(A):
        raise NotAzumaya("canonical map is not an isomorphism")
    n = _isqrt_rank(A)
    if n == 1:
        return MatrixUnitWitness(1, [[A.one()]])
    rng = random.Random(seed)
    e = _primitive_idempotent(A, rng, budget)
    ws = _independent_subset(F, [A.basis(i) * e for i in range(A.rank)], need=n)
    return _units_from_module(A, ws)


def residual_algebra(A: FiniteAlgebra, cert: LocalCertificate) -> FiniteAlgebra:
    R = A.ring
    F = cert.residue_field
    res = lambda x: cert.residue(Elem(R, x)).v  # noqa: E731
    r = A.rank
    sc = [[[res(x) for x in A.sc[i][j]] for j in range(r)] for i in range(r)]
    return FiniteAlgebra(F, r, sc, [res(x) for x in A.unit], check=False, raw=True)


def split_over_finite_local(A: FiniteAlgebra, cert: LocalCertificate | None = None, seed: int = 0,
                            budget: int = DEFAULT_BUDGET) -> MatrixUnitWitness:
    """Matrix units over a finite local ring: split residually, lift ``e_11``, transport back."""
    R = A.ring
    if cert is None:
        cert = check_local(R)
    if A.rank == 0:
        return MatrixUnitWitness(0, [])
    if not is_azumaya(A):
        raise NotAzumaya("canonical map is not an isomorphism")
    n = _isqrt_rank(A)
    Abar = residual_algebra(A, cert)
    wbar = split_over_finite_field(Abar, seed, budget)
    F = cert.residue_field

    def lift(x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(A, [cert.lift(Elem(F, c)).v for c in x.c])

    e = lift_idempotent_algebra(A, lift(wbar.units[0][0]), cert)
    ws = [lift(wbar.units[i][0]) * e for i in range(n)]
    return _units_from_module(A, ws)


# ---------------------------------------------------------------------------
# Verification


def _as_poly(S: Ring, p) -> Poly:
    if isinstance(p, Poly):
        return p if p.ring == S else p.change_ring(S)
    return Poly(S, p)


def _as_elem(S: Ring, u) -> Elem:
    return S(u)


def verify_tree(tree: SplitTree) -> TreeReport:
    """Check every edge and leaf of ``tree``; failures are reported with a path, never raised."""
    rep = TreeReport()
    A = tree.algebra
    if tree.mode not in MODES:
        rep.fail("$.mode", f"unknown mode {tree.mode!r}")
        return rep
    bad = A.associativity_failure()
    if bad is not None:
        rep.fail("$.algebra", f"structure constants are not associative on basis triple {bad}")
        return rep
    _verify_node(tree.node, A, tree.mode, "$.node", rep, depth=0)
    return rep


def _first_sc_difference(A: FiniteAlgebra, B: FiniteAlgebra) -> str | None:
    if A.rank != B.rank:
        return f"rank {B.rank} differs from the base change rank {A.rank}"
    R = A.ring
    for i in range(A.rank):
        for j in range(A.rank):
            for k in range(A.rank):
                try:
                    y = R.coerce(Elem(B.ring, B.sc[i][j][k]))
                except (AlgebraError, TypeError):
                    return f"sc[{i}][{j}][{k}] does not lie in {R}"
                if not R.is_zero(R.sub(A.sc[i][j][k], y)):
                    return f"sc[{i}][{j}][{k}] differs from the base change"
    for k in range(A.rank):
        y = R.coerce(Elem(B.ring, B.unit[k]))
        if not R.is_zero(R.sub(A.unit[k], y)):
            return f"unit[{k}] differs from the base change"
    return None


def _verify_node(node, A: FiniteAlgebra, mode: str, path: str, rep: TreeReport, depth: int) -> None:
    S = A.ring
    rep.checked += 1
    try:
        if isinstance(node, Leaf):
            if node.algebra is not None:
                claimed = node.algebra
                if isinstance(claimed, dict):
                    claimed = FiniteAlgebra(S, claimed.get("rank", A.rank), claimed["sc"],
                                            claimed.get("unit", [S.dump(x) for x in A.unit]), check=False)
                diff = _first_sc_difference(A, claimed)
                if diff is not None:
                    rep.fail(path, f"leaf algebra: {diff}")
                    return
            bad = witness_failure(A, node.witness)
            if bad is not None:
                rep.fail(path, bad)
            return
        if isinstance(node, RootAdjunction):
            P = _as_poly(S, node.poly)
            if P.degree < 1 or not P.is_monic():
                rep.fail(path, f"adjoined polynomial {P} is not monic nonconstant")
                return
            if mode == ETALE:
                res = is_unramifiable(S, P, cross_check=False)
                if not res.unramifiable:
                    ds = ", ".join(str(d) for d in res.deltas)
                    rep.fail(path, f"adjoined polynomial {P} is not unramifiable (deltas {ds})")
            child_ring = S.quotient(P, node.var)
            _verify_node(node.child, A.base_change(child_ring), mode, path + ".child", rep, depth + 1)
            return
        if isinstance(node, LocalizationCover):
            us = [_as_elem(S, u) for u in node.units]
            if len(node.children) != len(us):
                rep.fail(path, f"cover has {len(us)} units but {len(node.children)} children")
                return
            ok, _ = unit_ideal_test(us, S)
            if not ok:
                rep.fail(path, "cover units do not generate the unit ideal: 1 not in (" + ", ".join(str(u) for u in us) + ")")
            for i, (u, child) in enumerate(zip(us, node.children)):
                cpath = f"{path}.children[{i}]"
                try:
                    child_ring = S.localize(u)
                except AlgebraError as exc:
                    rep.fail(cpath, f"cannot localize at {u}: {exc}")
                    continue
                _verify_node(child, A.base_change(child_ring), mode, cpath, rep, depth + 1)
            return
        rep.fail(path, f"unknown node type {type(node).__name__}")
    except (AlgebraError, KeyError, IndexError, TypeError) as exc:
        rep.fail(path, f"{type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------
# Builders


def standard_matrix_units(A: FiniteAlgebra) -> MatrixUnitWitness | None:
    """The basis itself, if it already is a system of matrix units in ``E_ij -> i*n + j`` order."""
    n = math.isqrt(A.rank)
    if n * n != A.rank:
        return None
    w = MatrixUnitWitness(n, [[A.basis(i * n + j) for j in range(n)] for i in range(n)])
    return w if witness_failure(A, w) is None else None


def quaternion_parameters(A: FiniteAlgebra):
    """``(a, b)`` when ``A`` is the quaternion algebra ``(a, b)`` on its standard basis."""
    if A.rank != 4:
        return None
    R = A.ring
    a, b = A.sc[1][1][0], A.sc[2][2][0]
    if quaternion_algebra(R, Elem(R, a), Elem(R, b)) == A:
        return Elem(R, a), Elem(R, b)
    return None


def quaternion_leaf(A: FiniteAlgebra, S: Ring) -> MatrixUnitWitness:
    """Matrix units of ``(a, b)`` over ``S = R[y]/(y^2 - a)``, from ``i -> diag(y, -y)``, ``j -> [[0, 1], [b, 0]]``."""
    a, b = quaternion_parameters(A)
    AS = A.base_change(S)
    y = S.gen
    half = S(2).inverse()
    c = y * (S(2) * S(a)).inverse()  # y / (2a) = 1 / (2y)
    binv = S(b).inverse()
    z = S(0)
    vec = lambda *xs: AlgebraElement(AS, [x.v for x in xs])  # noqa: E731
    e11 = vec(half, c, z, z)
    e22 = vec(half, -c, z, z)
    e12 = vec(z, z, half, c)
    e21 = vec(z, z, half * binv, -(c * binv))
    return MatrixUnitWitness(2, [[e11, e12], [e21, e22]])


FAMILIES = ("matrix", "quaternion", "finite-local")


def _detect_family(A: FiniteAlgebra) -> str:
    if standard_matrix_units(A) is not None:
        return "matrix"
    if A.ring.finite:
        return "finite-local"
    if quaternion_parameters(A) is not None:
        return "quaternion"
    if not is_azumaya(A):
        raise NotAzumaya("the canonical map A (x) A^op -> End(A) is not an isomorphism")
    raise UnsupportedFamily("no construction is known for this algebra; supply a tree to verify instead")


def build_tree(A: FiniteAlgebra, family: str | None = None, seed: int = 0, mode: str = ETALE,
               budget: int = DEFAULT_BUDGET) -> SplitTree:
    if family is None:
        family = _detect_family(A)
    if family not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {family!r}; expected one of {FAMILIES}")
    R = A.ring
    if family == "matrix":
        w = standard_matrix_units(A)
        if w is None:
            raise UnsupportedFamily("the basis is not a system of matrix units")
        return SplitTree(A, Leaf(w), mode)
    if family == "finite-local":
        if not R.finite:
            raise UnsupportedFamily(f"{R} is not finite")
        return SplitTree(A, Leaf(split_over_finite_local(A, seed=seed, budget=budget)), mode)
    params = quaternion_parameters(A)
    if params is None:
        raise UnsupportedFamily("not a quaternion algebra on the basis 1, i, j, ij")
    a, b = params
    if not (R(2) * a * b).is_unit():
        raise NotAzumaya(f"2ab = {R(2) * a * b} is not invertible in {R}")
    P = Poly._raw(R, [R.neg(a.v), R.zero, R.one])
    S = R.quotient(P, "y")
    return SplitTree(A, RootAdjunction(P, Leaf(quaternion_leaf(A, S)), "y"), mode)


# ---------------------------------------------------------------------------
# Skolem-Noether


def _psi_apply(A: FiniteAlgebra, psi, x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(A, linalg.mat_vec(A.ring, psi, list(x.c)))


def check_automorphism(A: FiniteAlgebra, psi) -> None:
    """Raise NotAutomorphism unless ``psi`` (column j = image of ``x_j``) is a unital algebra automorphism."""
    R = A.ring
    r = A.rank
    if len(psi) != r or any(len(row) != r for row in psi):
        raise NotAutomorphism(f"automorphism matrix must be {r}x{r}")
    if not (_psi_apply(A, psi, A.one()) == A.one()):
        raise NotAutomorphism("map does not fix 1")
    imgs = [_psi_apply(A, psi, A.basis(i)) for i in range(r)]
    for i in range(r):
        for j in range(r):
            if not (_psi_apply(A, psi, A.basis(i) * A.basis(j)) == imgs[i] * imgs[j]):
                raise NotAutomorphism(f"map is not multiplicative on basis pair ({i}, {j})")
    if not R.is_invertible(linalg.det(R, psi)):
        raise NotAutomorphism("map is not invertible")


def parse_automorphism(A: FiniteAlgebra, rows) -> list[list]:
    R = A.ring
    return [[R.coerce(x) for x in row] for row in rows]


def inner_automorphism(A: FiniteAlgebra, c: AlgebraElement) -> list[list]:
    """Matrix of ``x -> c x c^-1``."""
    ci = A.inverse(c)
    cols = [(c * A.basis(j) * ci).c for j in range(A.rank)]
    return [[cols[j][i] for j in range(A.rank)] for i in range(A.rank)]


def skolem_noether_matrix(witness: MatrixUnitWitness, psi, cert: LocalCertificate | None = None) -> AlgebraElement:
    """A unit ``a`` with ``psi(x) = a x a^-1``, built from the images ``psi(e_ij)``."""
    n = witness.n
    if n == 0:
        raise NotAutomorphism("the trivial algebra has no basis to conjugate")
    A = witness.units[0][0].alg
    R = A.ring
    if cert is None:
        cert = check_local(R)
    check_automorphism(A, psi)
    r = A.rank
    T = [[witness.units[a // n][a % n].c[s] for a in range(r)] for s in range(r)]

    def as_matrix(x: AlgebraElement):
        c = linalg.solve_local(R, T, list(x.c))
        return [[c[i * n + j] for j in range(n)] for i in range(n)]

    P = [[as_matrix(_psi_apply(A, psi, witness.units[i][j])) for j in range(n)] for i in range(n)]
    # a column of p_11 with a unit entry spans its (free, rank 1) image
    w1 = None
    for q in range(n):
        for p in range(n):
            inv = R.inverse_or_none(P[0][0][p][q])
            if inv is not None:
                w1 = [R.mul(P[0][0][i][q], inv) for i in range(n)]
                break
        if w1 is not None:
            break
    if w1 is None:
        raise NotLocal("image of psi(e_11) has no unit coordinate")
    ws = [linalg.mat_vec(R, P[j][0], w1) for j in range(n)]
    a = A.zero()
    for i in range(n):
        for j in range(n):
            a = a + witness.units[i][j] * Elem(R, ws[j][i])
    if not A.is_unit(a):
        raise AssertionError("constructed conjugator is not a unit")
    for s in range(r):
        x = A.basis(s)
        if not (_psi_apply(A, psi, x) * a == a * x):
            raise AssertionError(f"conjugation identity fails on basis element {s}")
    return a


@dataclass
class SNResult:
    generators: list[AlgebraElement]
    rank: int | None
    generator: AlgebraElement | None = None
    local: bool = False


def skolem_noether_module(A: FiniteAlgebra, psi, cert: LocalCertificate | None = None) -> SNResult:
    """``M = {a : a x = psi(x) a for all x}``; over a local base, a unit generator of ``M``."""
    R = A.ring
    check_automorphism(A, psi)
    rows = []
    for j in range(A.rank):
        xj = A.basis(j)
        Rm = A.right_matrix(xj)
        Lm = A.left_matrix(_psi_apply(A, psi, xj))
        for i in range(A.rank):
            rows.append([R.sub(Rm[i][s], Lm[i][s]) for s in range(A.rank)])
    gens = [AlgebraElement(A, g) for g in linalg.kernel_over(R, rows, A.rank)]
    gens = [g for g in gens if not g.is_zero()]
    if cert is None:
        try:
            cert = check_local(R)
        except (UnsupportedRing, NotLocal):
            cert = None
    if cert is None:
        return SNResult(gens, len(gens))
    # minimal number of generators = dimension of M / mM
    F = cert.residue_field
    res = [[cert.residue(Elem(R, g.c[i])).v for g in gens] for i in range(A.rank)]
    rank = len(gens) - len(linalg.kernel_over(F, res, len(gens)))
    if rank != 1:
        # only possible when A is not Azumaya (e.g. commutative A, psi = id)
        return SNResult(gens, rank, None, True)
    unit = next((g for g in gens if A.is_unit(g)), None)
    if unit is not None and not all(in_span(A, [unit], g) for g in gens):
        raise AssertionError("a unit of a rank-1 conjugator module does not generate it")
    return SNResult(gens, 1, unit, True)
