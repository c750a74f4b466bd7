"""Small exact linear programs (dense two-phase simplex, Bland's rule)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple


def lp_max(c: Sequence, A: Sequence[Sequence], b: Sequence) -> Tuple[str, Optional[Fraction], Optional[List[Fraction]]]:
    """Maximize c.x subject to A x <= b with x free.

    Returns ``(status, value, x)`` with status one of ``"optimal"``,
    ``"infeasible"``, ``"unbounded"``.
    """
    m = len(A)
    n = len(c)
    # columns: y (n), z (n), slacks (m), artificials (as needed); x = y - z
    rows = []
    rhs = []
    art_rows = []
    for i in range(m):
        coeffs = [Fraction(a) for a in A[i]]
        row = coeffs + [-a for a in coeffs] + [Fraction(int(k == i)) for k in range(m)]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-a for a in row]
            bi = -bi
            art_rows.append(i)
        rows.append(row)
        rhs.append(bi)
    n_struct = 2 * n + m
    n_art = len(art_rows)
    for r in range(m):
        rows[r] = rows[r] + [Fraction(int(r == art_rows[k])) if k < n_art else Fraction(0) for k in range(n_art)]
    ncol = n_struct + n_art
    basis = []
    for i in range(m):
        if i in art_rows:
            basis.append(n_struct + art_rows.index(i))
        else:
            basis.append(2 * n + i)
    T = [rows[i] + [rhs[i]] for i in range(m)]

    def pivot(r: int, col: int) -> None:
        pv = T[r][col]
        T[r] = [x / pv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[r])]
        basis[r] = col

    def run(obj: List[Fraction], allowed: int) -> str:
        # obj: coefficients to maximize over columns [0, ncol)
        while True:
            # reduced costs
            cb = [obj[j] for j in basis]
            entering = None
            for j in range(allowed):
                if j in basis:
                    continue
                rc = obj[j] - sum(cb[i] * T[i][j] for i in range(m))
                if rc > 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(m):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], entering)

    if n_art:
        obj1 = [Fraction(0)] * n_struct + [Fraction(-1)] * n_art
        run(obj1, ncol)
        if sum(T[i][-1] for i in range(m) if basis[i] >= n_struct) != 0:
            return "infeasible", None, None
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= n_struct:
                col = next((j for j in range(n_struct) if T[i][j] != 0), None)
                if col is not None:
                    pivot(i, col)
    obj2 = [Fraction(x) for x in c] + [-Fraction(x) for x in c] + [Fraction(0)] * (m + n_art)
    status = run(obj2, n_struct)
    if status == "unbounded":
        return "unbounded", None, None
    vals = [Fraction(0)] * ncol
    for i in range(m):
        vals[basis[i]] = T[i][-1]
    x = [vals[j] - vals[n + j] for j in range(n)]
    value = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
    return "optimal", value, x


def interiors_meet(A1: Sequence[Sequence], b1: Sequence, A2: Sequence[Sequence], b2: Sequence) -> bool:
    """Whether {A1 x < b1} and {A2 x < b2} intersect (both strict systems)."""
    n = len(A1[0]) if A1 else len(A2[0])
    A = []
    b = []
    for Ai, bi in ((A1, b1), (A2, b2)):
        for row, rhs in zip(Ai, bi):
            A.append(list(row) + [1])
            b.append(rhs)
    A.append([0] * n + [1])
    b.append(1)
    status, value, _ = lp_max([0] * n + [1], A, b)
    return status == "optimal" and value > 0
