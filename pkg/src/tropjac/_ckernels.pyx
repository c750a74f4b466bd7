# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.  Same contracts as ``_pykernels``."""

from libc.math cimport sqrt, ceil, floor, fabs
import numpy as np
cimport numpy as cnp


def ellipsoid_candidates(L, d, center, bound):
    cdef int g = len(d)
    cdef double[:, :] Lm = np.ascontiguousarray(np.array(L, dtype=np.float64).reshape(g, g))
    cdef double[:] dm = np.array(d, dtype=np.float64)
    cdef double[:] cm = np.array(center, dtype=np.float64)
    cdef long[:] y = np.zeros(g, dtype=np.int64)
    cdef long[:] hi = np.zeros(g, dtype=np.int64)
    cdef double[:] budget = np.zeros(g + 1, dtype=np.float64)
    cdef double[:] uu = np.zeros(g, dtype=np.float64)
    cdef double b = bound * (1 + 1e-9) + 1e-9
    cdef double tol = 1e-9 * (1 + fabs(b))
    cdef int i, j
    cdef double s, u, r, rest
    out = []
    if g == 0:
        return [()]
    budget[g] = b
    i = g - 1
    # descend: set up level i
    s = 0.0
    u = cm[i]
    uu[i] = u
    r = sqrt(b / dm[i]) + 1e-9
    y[i] = <long>ceil(u - r) - 1
    hi[i] = <long>floor(u + r)
    budget[i] = b
    while i < g:
        y[i] += 1
        if y[i] > hi[i]:
            i += 1
            continue
        rest = budget[i] - dm[i] * (y[i] - uu[i]) * (y[i] - uu[i])
        if rest < -tol:
            continue
        if rest < 0:
            rest = 0.0
        if i == 0:
            out.append(tuple([y[j] for j in range(g)]))
            continue
        i -= 1
        s = 0.0
        for j in range(i + 1, g):
            s += Lm[i, j] * (y[j] - cm[j])
        u = cm[i] - s
        uu[i] = u
        budget[i] = rest
        r = sqrt(rest / dm[i]) + 1e-9
        y[i] = <long>ceil(u - r) - 1
        hi[i] = <long>floor(u + r)
    return out


def positive_side(normal, long offset, cnp.int64_t[:, :] coords, idxs):
    cdef cnp.int64_t[:] nm = np.asarray(normal, dtype=np.int64)
    cdef Py_ssize_t n = nm.shape[0]
    cdef Py_ssize_t k, i
    cdef long s
    res = []
    for i in idxs:
        s = 0
        for k in range(n):
            s += nm[k] * coords[i, k]
        if s > offset:
            res.append(i)
    return res
