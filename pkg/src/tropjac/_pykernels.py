"""Pure-Python versions of the hot kernels (reference and fallback)."""

import math


def ellipsoid_candidates(L, d, center, bound):
    """Integer points y with sum_i d[i] (y_i - u_i(y))^2 <= bound, in floats with slack.

    ``L`` is unit upper triangular, ``d`` positive; the quadratic form is
    ``(y - c)^T L^T diag(d) L (y - c)``.  The result is a superset of the exact
    answer; callers filter with exact arithmetic.
    """
    g = len(d)
    bound = bound * (1 + 1e-9) + 1e-9
    out = []
    y = [0] * g

    def rec(i, budget):
        s = 0.0
        for j in range(i + 1, g):
            s += L[i][j] * (y[j] - center[j])
        u = center[i] - s
        if budget < 0:
            return
        r = math.sqrt(budget / d[i]) + 1e-9
        lo = math.ceil(u - r)
        hi = math.floor(u + r)
        for k in range(lo, hi + 1):
            y[i] = k
            rest = budget - d[i] * (k - u) ** 2
            if rest < -1e-9 * (1 + abs(bound)):
                continue
            if i == 0:
                out.append(tuple(y))
            else:
                rec(i - 1, max(rest, 0.0))

    rec(g - 1, bound)
    return out


def positive_side(normal, offset, coords, idxs):
    """Indices ``i`` in ``idxs`` with normal . coords[i] > offset."""
    res = []
    for i in idxs:
        p = coords[i]
        s = 0
        for a, b in zip(normal, p):
            s += a * b
        if s > offset:
            res.append(i)
    return res
