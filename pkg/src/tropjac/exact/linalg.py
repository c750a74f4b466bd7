"""Exact dense linear algebra over Z and Q.

Matrices are lists of rows; entries are ``int`` or ``Fraction``.  Nothing in
here touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..errors import InvalidInput, NotPSD, NotSaturated

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def zeros(r: int, c: int) -> list:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*A)] if A else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def dot(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def quad(Q: Sequence[Sequence], x: Sequence):
    """x^T Q x."""
    return dot(x, matvec(Q, x))


def congruence(Q: Sequence[Sequence], U: Sequence[Sequence]) -> list:
    """U^T Q U."""
    return matmul(transpose(U), matmul(Q, U))


def to_fraction_matrix(A: Sequence[Sequence]) -> Matrix:
    return [[Fraction(a) for a in row] for row in A]


def is_symmetric(A: Sequence[Sequence]) -> bool:
    n = len(A)
    return all(len(row) == n for row in A) and all(
        A[i][j] == A[j][i] for i in range(n) for j in range(i + 1, n))


def det(A: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for int and Fraction)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
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
        pk = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = M[i][j] * pk - M[i][k] * M[k][j]
                M[i][j] = v // prev if isinstance(v, int) and isinstance(prev, int) else v / prev
        prev = pk
    return sign * M[n - 1][n - 1]


def rref(A: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    M = to_fraction_matrix(A)
    rows = len(M)
    cols = len(M[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Sequence[Sequence]) -> int:
    if not A or not A[0]:
        return 0
    return len(rref(A)[1])


def nullspace(A: Sequence[Sequence], n: Optional[int] = None) -> List[Vector]:
    """Rational basis of {x : A x = 0}."""
    if not A:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -R[i][f]
        basis.append(x)
    return basis


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """One solution of A x = b, or None if inconsistent."""
    rows = len(A)
    n = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = R[i][n]
    return x


def inverse(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise InvalidInput("matrix is singular")
    return [row[n:] for row in R]


def primitive(v: Sequence, sign_normalize: bool = True) -> List[int]:
    """Scale a rational vector to a primitive integer vector.

    With ``sign_normalize`` the first nonzero entry is made positive; otherwise
    only positive scalings are applied (direction preserved).
    """
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return [0] * len(ints)
    ints = [x // g for x in ints]
    if sign_normalize:
        first = next(x for x in ints if x != 0)
        if first < 0:
            ints = [-x for x in ints]
    return ints


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def row_hermite(N: Sequence[Sequence[int]]) -> Tuple[list, list, list]:
    """Integer row reduction of the n x k matrix ``N``.

    Returns ``(H, W, Winv)`` with ``W`` unimodular, ``W N = H`` upper
    triangular and ``Winv = W^{-1}``.
    """
    H = [list(map(int, row)) for row in N]
    n = len(H)
    k = len(H[0]) if n else 0
    W = identity(n)
    Winv = identity(n)
    r = 0
    for c in range(k):
        if r >= n:
            break
        for i in range(r + 1, n):
            a, b = H[r][c], H[i][c]
            if b == 0:
                continue
            g, s, t = _xgcd(a, b)
            x, y = a // g, b // g
            for M in (H, W):
                ra, rb = M[r], M[i]
                M[r] = [s * p + t * q for p, q in zip(ra, rb)]
                M[i] = [-y * p + x * q for p, q in zip(ra, rb)]
            # inverse of [[s, t], [-y, x]] is [[x, -t], [y, s]], applied on columns
            for row in Winv:
                ca, cb = row[r], row[i]
                row[r] = ca * x + cb * y
                row[i] = -ca * t + cb * s
        if H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-v for v in H[r]]
                W[r] = [-v for v in W[r]]
                for row in Winv:
                    row[r] = -row[r]
            r += 1
    return H, W, Winv


def saturated_kernel_basis(A: Sequence[Sequence]) -> List[List[int]]:
    """Basis of the lattice {x in Z^n : A x = 0} (saturated by construction)."""
    rational = nullspace(A)
    if not rational:
        return []
    N = transpose([primitive(v) for v in rational])
    k = len(rational)
    _, _, Winv = row_hermite(N)
    return [primitive([Winv[i][j] for i in range(len(N))]) for j in range(k)]


def hermite_unimodular_complete(kernel_basis: Sequence[Sequence[int]], n: Optional[int] = None) -> List[List[int]]:
    """Unimodular U whose trailing columns are exactly ``kernel_basis``."""
    if not kernel_basis:
        if n is None:
            raise InvalidInput("dimension required for an empty kernel")
        return identity(n)
    k = len(kernel_basis)
    n = len(kernel_basis[0])
    for v in kernel_basis:
        if any(Fraction(x).denominator != 1 for x in v):
            raise InvalidInput("kernel basis must be integral")
    N = transpose([[int(x) for x in v] for v in kernel_basis])
    H, _, Winv = row_hermite(N)
    T = [row[:k] for row in H[:k]]
    dT = det(T)
    if dT == 0:
        raise InvalidInput("kernel vectors are linearly dependent")
    if abs(dT) != 1:
        raise NotSaturated(f"sublattice has index {abs(dT)} in its saturation")
    cols = [[Winv[i][j] for i in range(n)] for j in range(k, n)] + [list(map(int, v)) for v in kernel_basis]
    return transpose(cols)


def ldl_psd(Q: Sequence[Sequence]) -> Tuple[bool, int]:
    """Exact symmetric elimination with diagonal pivoting.

    Returns ``(is_psd, rank)``.
    """
    M = to_fraction_matrix(Q)
    n = len(M)
    active = list(range(n))
    rk = 0
    while active:
        piv = next((i for i in active if M[i][i] != 0), None)
        if piv is None:
            if any(M[i][j] != 0 for i in active for j in active):
                return False, rk
            break
        d = M[piv][piv]
        if d < 0:
            return False, rk
        active.remove(piv)
        for i in active:
            if M[i][piv] != 0:
                f = M[i][piv] / d
                for j in active:
                    M[i][j] -= f * M[piv][j]
        rk += 1
    return True, rk


def ldl(Q: Sequence[Sequence]) -> Tuple[List[Fraction], Matrix]:
    """Q = L^T diag(d) L with L unit upper triangular; Q positive definite.

    So x^T Q x = sum_i d_i (x_i + sum_{j>i} L[i][j] x_j)^2.
    """
    n = len(Q)
    M = to_fraction_matrix(Q)
    d: List[Fraction] = []
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        if M[i][i] <= 0:
            raise NotPSD("matrix is not positive definite")
        d.append(M[i][i])
        for j in range(i + 1, n):
            L[i][j] = M[i][j] / M[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] -= M[r][i] * M[i][c] / M[i][i]
    return d, L


def is_positive_definite(Q: Sequence[Sequence]) -> bool:
    ok, rk = ldl_psd(Q)
    return ok and rk == len(Q)


# Symmetric matrices as vectors: coordinates (Q_ij) for i <= j in row-major order.

def sym_index(g: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(g) for j in range(i, g)]


def sym_to_vec(Q: Sequence[Sequence]) -> List:
    return [Q[i][j] for i, j in sym_index(len(Q))]


def vec_to_sym(v: Sequence, g: int) -> list:
    Q = zeros(g, g)
    for (i, j), x in zip(sym_index(g), v):
        Q[i][j] = x
        Q[j][i] = x
    return Q


def sym_dim(g: int) -> int:
    return g * (g + 1) // 2


def rank_one(v: Sequence) -> list:
    return [[a * b for b in v] for a in v]


def quad_functional(x: Sequence, g: int) -> List:
    """Coefficients c with <c, sym_to_vec(Q)> = x^T Q x."""
    return [x[i] * x[j] * (1 if i == j else 2) for i, j in sym_index(g)]


def rank_one_root(M: Sequence[Sequence]) -> Optional[List[int]]:
    """Primitive v (first nonzero positive) with M a positive multiple of v v^T, else None."""
    n = len(M)
    i = next((i for i in range(n) if M[i][i] != 0), None)
    if i is None:
        return None if any(x != 0 for row in M for x in row) else None
    if M[i][i] < 0:
        return None
    v = primitive([M[r][i] for r in range(n)])
    vv = rank_one(v)
    ratio = Fraction(M[i][i]) / vv[i][i]
    if ratio <= 0:
        return None
    if all(Fraction(M[r][c]) == ratio * vv[r][c] for r in range(n) for c in range(n)):
        return v
    return None


def lll_reduce(Q: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> Tuple[Matrix, List[List[int]]]:
    """LLL reduction of a positive definite Gram matrix.

    Returns (R^T Q R, R) with R unimodular.  Exact; the Gram-Schmidt data is
    recomputed after every basis change, which is fine for small g.
    """
    g = len(Q)
    Qf = to_fraction_matrix(Q)
    R = identity(g)

    def gso(G):
        mu = [[Fraction(0)] * g for _ in range(g)]
        Bs = [Fraction(0)] * g
        for i in range(g):
            for j in range(i):
                s = G[i][j] - sum((mu[j][k] * mu[i][k] * Bs[k] for k in range(j)), Fraction(0))
                mu[i][j] = s / Bs[j]
            Bs[i] = G[i][i] - sum((mu[i][k] ** 2 * Bs[k] for k in range(i)), Fraction(0))
        return mu, Bs

    k = 1
    while k < g:
        G = congruence(Qf, R)
        mu, Bs = gso(G)
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                for r in range(g):
                    R[r][k] -= q * R[r][j]
                G = congruence(Qf, R)
                mu, Bs = gso(G)
        if Bs[k] >= (delta - mu[k][k - 1] ** 2) * Bs[k - 1]:
            k += 1
        else:
            for r in range(g):
                R[r][k], R[r][k - 1] = R[r][k - 1], R[r][k]
            k = max(k - 1, 1)
    return congruence(Qf, R), R
