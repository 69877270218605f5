# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled permanent kernels.  Mirrors ``mhd._kernels_py``."""

import numpy as np

cimport cython

cdef extern from *:
    int __builtin_popcountll(unsigned long long)


def ryser(double[:, ::1] a):
    """Permanent of a square matrix by Ryser's formula with Gray-code order."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, k, col
    cdef unsigned long long g, prev, diff, total
    cdef double prod, sign, acc = 0.0
    cdef double[::1] sums
    if n == 0:
        return 1.0
    sums = np.zeros(n, dtype=np.float64)
    total = (<unsigned long long>1) << n
    prev = 0
    for k in range(1, total):
        g = k ^ (k >> 1)
        diff = g ^ prev
        col = 0
        while (diff >> col) != 1:
            col += 1
        if g & diff:
            for i in range(n):
                sums[i] += a[i, col]
        else:
            for i in range(n):
                sums[i] -= a[i, col]
        prev = g
        prod = 1.0
        for i in range(n):
            prod *= sums[i]
        # (-1)**popcount(g)
        sign = -1.0 if (__builtin_popcountll(g) & 1) else 1.0
        acc += sign * prod
    if n & 1:
        acc = -acc
    return acc

