# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``sasred._pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def residual_jacobian(const double[::1] x, const long[::1] rows, const long[::1] ia,
                      const long[::1] ib, const double[::1] coef, const double[::1] const_,
                      long nrows):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t nt = coef.shape[0]
    cdef Py_ssize_t t, r
    cdef long a, b
    cdef double c
    res_arr = np.empty(nrows, dtype=np.float64)
    jac_arr = np.zeros((nrows, n), dtype=np.float64)
    cdef double[::1] res = res_arr
    cdef double[:, ::1] jac = jac_arr
    with nogil:
        for r in range(nrows):
            res[r] = -const_[r]
        for t in range(nt):
            r = rows[t]
            a = ia[t]
            b = ib[t]
            c = coef[t]
            res[r] += c * x[a] * x[b]
            jac[r, a] += c * x[b]
            jac[r, b] += c * x[a]
    return res_arr, jac_arr


cdef inline long _gcd(long a, long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline bint _admissible(long p1, long p2, long p3) nogil:
    if not (0 < p1 < p2 < p3):
        return False
    if _gcd(p1, p2) != 1 or _gcd(p1, p3) != 1 or _gcd(p2, p3) != 1:
        return False
    if _gcd(p1 - p2, p1 - p3) != 1 or _gcd(p1 - p2, p1 + p3) != 1:
        return False
    if _gcd(p1 + p2, p1 - p3) != 1 or _gcd(p1 + p2, p1 + p3) != 1:
        return False
    return True


def admissible_triples(long bound):
    cdef long p1, p2, p3, count = 0
    out = []
    for p1 in range(1, bound + 1):
        for p2 in range(p1 + 1, bound + 1):
            for p3 in range(p2 + 1, bound + 1):
                if _admissible(p1, p2, p3):
                    out.append((p1, p2, p3))
    return np.array(out, dtype=np.int64).reshape(-1, 3)
