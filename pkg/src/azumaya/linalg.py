"""Exact linear algebra over the rings of a tower.

Scalar rings (integers, rationals, prime fields, ``Z/p^k``, ``Z[1/u]``) expose
an elimination interface (``sn_key``, ``divides``, ``exact_div``, ``gcdex``,
``ann``) that is enough to diagonalize a matrix with invertible row and column
operations.  Diagonal form decides solvability and yields kernels over all of
these rings, including the non-domain ``Z/p^k``.

Systems over a tower ring are flattened to the scalar ring first.  Matrices
are lists of rows of raw reprs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import UnsupportedRing
from .rings import ZZ, Localization, ModularIntegers, Ring


def diagonalize(C: Ring, A: Sequence[Sequence]):
    """Return ``(D, U, V, r)`` with ``U A V = D`` diagonal and ``r`` nonzero pivots.

    ``U`` and ``V`` are invertible over ``C``.  Pivots are chosen by minimal
    ``sn_key`` so that over ``Z/p^k`` the pivot divides its whole row/column.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(row) for row in A]
    U = [[C.one if i == j else C.zero for j in range(m)] for i in range(m)]
    V = [[C.one if i == j else C.zero for j in range(n)] for i in range(n)]
    zero = C.zero
    is_zero = C.is_zero
    add, mul, sub = C.add, C.mul, C.sub

    def row_comb(i, j, s, t, u, v):
        # (row_i, row_j) <- (s row_i + t row_j, u row_i + v row_j)
        for M in (S, U):
            ri, rj = M[i], M[j]
            M[i] = [add(mul(s, x), mul(t, y)) for x, y in zip(ri, rj)]
            M[j] = [add(mul(u, x), mul(v, y)) for x, y in zip(ri, rj)]

    def col_comb(i, j, s, t, u, v):
        for M in (S, V):
            for row in M:
                x, y = row[i], row[j]
                row[i] = add(mul(s, x), mul(t, y))
                row[j] = add(mul(u, x), mul(v, y))

    r = 0
    for t in range(min(m, n)):
        best = None
        bkey = math.inf
        for i in range(t, m):
            Si = S[i]
            for j in range(t, n):
                if not is_zero(Si[j]):
                    key = C.sn_key(Si[j])
                    if key < bkey:
                        best, bkey = (i, j), key
                        if key == 0:
                            break
            if bkey == 0:
                break
        if best is None:
            break
        i, j = best
        if i != t:
            S[t], S[i] = S[i], S[t]
            U[t], U[i] = U[i], U[t]
        if j != t:
            for M in (S, V):
                for row in M:
                    row[t], row[j] = row[j], row[t]
        while True:
            clean = True
            for i in range(t + 1, m):
                x = S[i][t]
                if is_zero(x):
                    continue
                p = S[t][t]
                if C.divides(p, x):
                    q = C.exact_div(x, p)
                    S[i] = [sub(a, mul(q, b)) for a, b in zip(S[i], S[t])]
                    U[i] = [sub(a, mul(q, b)) for a, b in zip(U[i], U[t])]
                else:
                    g, s_, t_, u_, v_ = C.gcdex(p, x)
                    row_comb(t, i, s_, t_, u_, v_)
                    clean = False
            for j in range(t + 1, n):
                x = S[t][j]
                if is_zero(x):
                    continue
                p = S[t][t]
                if C.divides(p, x):
                    q = C.exact_div(x, p)
                    for M in (S, V):
                        for row in M:
                            row[j] = sub(row[j], mul(q, row[t]))
                else:
                    g, s_, t_, u_, v_ = C.gcdex(p, x)
                    col_comb(t, j, s_, t_, u_, v_)
                    clean = False
            if clean and all(is_zero(S[i][t]) for i in range(t + 1, m)):
                break
        r = t + 1
    D = [S[i][i] for i in range(min(m, n))]
    return D, U, V, r


def _check_scalar(C: Ring):
    if not hasattr(C, "gcdex"):
        raise UnsupportedRing(f"no elimination procedure over {C}")


def solve(C: Ring, A: Sequence[Sequence], b: Sequence):
    """Some ``x`` with ``A x = b`` over the scalar ring ``C``, or ``None``."""
    _check_scalar(C)
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return []
    if n == 0:
        return [] if all(C.is_zero(x) for x in b) else None
    D, U, V, r = diagonalize(C, A)
    c = [_dot(C, row, b) for row in U]
    y = [C.zero] * n
    for i in range(m):
        ci = c[i]
        if i < r:
            if not C.divides(D[i], ci):
                return None
            y[i] = C.exact_div(ci, D[i]) if not C.is_zero(ci) else C.zero
        elif not C.is_zero(ci):
            return None
    return [_dot(C, row, y) for row in V]


def kernel(C: Ring, A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Generators of the solution module ``{x : A x = 0}`` over ``C``."""
    _check_scalar(C)
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if m == 0:
        return [[C.one if i == j else C.zero for j in range(n)] for i in range(n)]
    D, U, V, r = diagonalize(C, A)
    gens = []
    for i in range(n):
        if i < r:
            a = C.ann(D[i])
            if C.is_zero(a):
                continue
        else:
            a = C.one
        gens.append([C.mul(V[row][i], a) for row in range(n)])
    return gens


def _dot(C, u, v):
    acc = C.zero
    for x, y in zip(u, v):
        acc = C.add(acc, C.mul(x, y))
    return acc


def mat_vec(R: Ring, A, x):
    return [_dot(R, row, x) for row in A]


def mat_mul(R: Ring, A, B):
    cols = list(zip(*B))
    return [[_dot(R, row, col) for col in cols] for row in A]


def identity(R: Ring, n: int):
    return [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# Systems over tower rings


def flatten_system(R: Ring, A: Sequence[Sequence]):
    """Scalar-ring matrix of the R-linear map ``A`` (rows of R reprs)."""
    N = R.flat_rank
    if N is None:
        raise UnsupportedRing(f"{R} is not a finite free module over a scalar ring")
    m = len(A)
    n = len(A[0]) if m else 0
    out = [[None] * (n * N) for _ in range(m * N)]
    for i in range(m):
        for j in range(n):
            M = R.mul_matrix(A[i][j]) if N > 1 else [[R.to_flat(A[i][j])[0]]]
            for a in range(N):
                row = out[i * N + a]
                Ma = M[a]
                for b in range(N):
                    row[j * N + b] = Ma[b]
    return out


def solve_over(R: Ring, A: Sequence[Sequence], b: Sequence):
    """Some ``x`` over ``R`` with ``A x = b``, or ``None``; ``R`` must flatten."""
    C = R.scalar
    N = R.flat_rank
    n = len(A[0]) if A else 0
    if N == 1:
        sol = solve(C, [[R.to_flat(x)[0] for x in row] for row in A], [R.to_flat(x)[0] for x in b])
        return None if sol is None else [R.from_flat([s]) for s in sol]
    flatA = flatten_system(R, A)
    flatb = []
    for x in b:
        flatb.extend(R.to_flat(x))
    sol = solve(C, flatA, flatb)
    if sol is None:
        return None
    return [R.from_flat(sol[j * N:(j + 1) * N]) for j in range(n)]


def kernel_over(R: Ring, A: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Generators (as an R-module) of ``{x : A x = 0}``."""
    C = R.scalar
    N = R.flat_rank
    n = len(A[0]) if A else (ncols or 0)
    if N == 1:
        gens = kernel(C, [[R.to_flat(x)[0] for x in row] for row in A], n)
        return [[R.from_flat([s]) for s in g] for g in gens]
    if not A:
        return [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    gens = kernel(C, flatten_system(R, A), n * N)
    out = []
    for g in gens:
        out.append([R.from_flat(g[j * N:(j + 1) * N]) for j in range(n)])
    return out


def solve_local(R: Ring, A: Sequence[Sequence], b: Sequence):
    """Solve ``A x = b`` by Gauss-Jordan with unit pivots.

    Valid over any ring with decidable invertibility when the columns of ``A``
    are residually independent (every column gets a unit pivot), which is the
    situation of Nakayama-style arguments over local rings.  Returns ``None``
    when some column has no unit pivot or the system is inconsistent.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    pivrow = 0
    for col in range(n):
        p = None
        for i in range(pivrow, m):
            inv = R.inverse_or_none(M[i][col])
            if inv is not None:
                p = i
                break
        if p is None:
            return None
        M[pivrow], M[p] = M[p], M[pivrow]
        M[pivrow] = [R.mul(inv, x) for x in M[pivrow]]
        prow = M[pivrow]
        for i in range(m):
            if i != pivrow:
                f = M[i][col]
                if not R.is_zero(f):
                    M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], prow)]
        pivrow += 1
    for i in range(pivrow, m):
        if not R.is_zero(M[i][n]):
            return None
    return [M[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# Determinants


def det(R: Ring, A: Sequence[Sequence]):
    n = len(A)
    if n == 0:
        return R.one
    if R is ZZ:
        return _bareiss(A)
    if isinstance(R, Localization) and R.inner is ZZ:
        M = [[R.to_fraction(x) for x in row] for row in A]
        return R.from_fraction(_gauss_det_field(M, Fraction(0), Fraction(1)))
    if isinstance(R, ModularIntegers):
        return _det_local_pir(R, A)
    return _det_unit_pivot(R, A)


def _bareiss(A):
    M = [list(row) for row in A]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _gauss_det_field(M, zero, one):
    n = len(M)
    d = one
    for k in range(n):
        p = next((i for i in range(k, n) if M[i][k] != 0), None)
        if p is None:
            return zero
        if p != k:
            M[k], M[p] = M[p], M[k]
            d = -d
        piv = M[k][k]
        d = d * piv
        for i in range(k + 1, n):
            f = M[i][k] / piv
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return d


def _det_local_pir(R: ModularIntegers, A):
    # elimination with minimal-valuation pivots; row operations of determinant 1
    M = [list(row) for row in A]
    n = len(M)
    d = 1
    for k in range(n):
        p = min(range(k, n), key=lambda i: R.valuation(M[i][k]))
        if M[p][k] == 0:
            return 0
        if p != k:
            M[k], M[p] = M[p], M[k]
            d = -d
        piv = M[k][k]
        d = d * piv % R.n
        for i in range(k + 1, n):
            if M[i][k]:
                q = R.exact_div(M[i][k], piv)
                M[i] = [(x - q * y) % R.n for x, y in zip(M[i], M[k])]
    return d % R.n


def _det_unit_pivot(R: Ring, A):
    M = [list(row) for row in A]
    n = len(M)
    acc = R.one
    for k in range(n):
        p = None
        for i in range(k, n):
            inv = R.inverse_or_none(M[i][k]) if not R.is_zero(M[i][k]) else None
            if inv is not None:
                p = i
                break
        if p is None:
            rest = [row[k:] for row in M[k:]]
            return R.mul(acc, berkowitz_det(R, rest))
        if p != k:
            M[k], M[p] = M[p], M[k]
            acc = R.neg(acc)
        acc = R.mul(acc, M[k][k])
        for i in range(k + 1, n):
            f = M[i][k]
            if R.is_zero(f):
                continue
            f = R.mul(f, inv)
            M[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[i], M[k])]
    return acc


def charpoly_berkowitz(R: Ring, A: Sequence[Sequence]) -> list:
    """Characteristic polynomial ``det(X I - A)`` (coefficients low to high), division free."""
    n = len(A)
    if n == 0:
        return [R.one]
    # Samuelson-Berkowitz: build vectors of Toeplitz products
    C = [R.one]  # char poly of leading 0x0 block, high to low: [1]
    C = [R.one, R.neg(A[0][0])]
    for r in range(1, n):
        # block: a = A[r][r], R_row = A[r][:r], C_col = A[:r][r], Aprev = A[:r][:r]
        a = A[r][r]
        row = A[r][:r]
        col = [A[i][r] for i in range(r)]
        Ap = [A[i][:r] for i in range(r)]
        # Toeplitz first column: 1, -a, -row.col, -row.Ap.col, ...
        t = [R.one, R.neg(a)]
        v = col
        for _ in range(r):
            t.append(R.neg(_dot(R, row, v)))
            v = [_dot(R, Ap[i], v) for i in range(r)]
        # multiply Toeplitz (r+2 x r+1) lower-triangular by C (length r+1)
        newC = []
        for i in range(r + 2):
            acc = R.zero
            for j in range(min(i, r) + 1):
                acc = R.add(acc, R.mul(t[i - j], C[j]))
            newC.append(acc)
        C = newC
    return list(reversed(C))


def berkowitz_det(R: Ring, A):
    n = len(A)
    cp = charpoly_berkowitz(R, A)
    c0 = cp[0]
    return c0 if n % 2 == 0 else R.neg(c0)
