# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; :mod:`rfiqkd._fallback` holds numpy twins with the same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def bound_scan(const double[::1] a0, const double[::1] a1,
               const double[::1] b0, const double[::1] b1,
               double s, double al, double be, double p00, double p11,
               double eps_n):
    """Max of the raw upper-bound formula and min of the raw lower-bound formula
    over every (Alice sample, Bob sample) pair.

    Returns ``(umax, ia, ib, lmin, ja, jb)``; ties keep the first index in
    row-major order. Degenerate denominators count as +1 / -1.
    """
    cdef Py_ssize_t na = a0.shape[0], nb = b0.shape[0]
    cdef Py_ssize_t i, j, ia = 0, ib = 0, ja = 0, jb = 0
    cdef double umax = -1e300, lmin = 1e300
    cdef double x0, x1, y0, y1, cross, sq, n, u, l, d
    cdef double root = 2.0 * sqrt(p00 * p11)
    for i in range(na):
        x0 = a0[i]
        x1 = a1[i]
        for j in range(nb):
            y0 = b0[j]
            y1 = b1[j]
            n = root * x0 * x1 * y0 * y1
            if n <= eps_n:
                u = 1.0
                l = -1.0
            else:
                cross = al * x0 * y1 + be * x1 * y0
                sq = p00 * x0 * x0 * y0 * y0 + p11 * x1 * x1 * y1 * y1
                u = ((s + cross) * (s + cross) - sq) / n
                d = s - cross
                if d < 0.0:
                    d = 0.0
                l = (d * d - sq) / n
            if u > umax:
                umax = u
                ia = i
                ib = j
            if l < lmin:
                lmin = l
                ja = i
                jb = j
    return umax, ia, ib, lmin, ja, jb


def cyclic_sumset(const cnp.uint8_t[::1] a, const cnp.uint8_t[::1] b):
    """``out[k] = any_i a[i] and b[(k - i) mod n]`` for equal-length masks."""
    cdef Py_ssize_t n = a.shape[0], i, j, k
    out_arr = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] out = out_arr
    for i in range(n):
        if not a[i]:
            continue
        for j in range(n):
            if b[j]:
                k = i + j
                if k >= n:
                    k -= n
                out[k] = 1
    return out_arr
