# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: DTW alignment cost and the PERMANOVA permutation
statistic.  dtw_cost matches kernels._reference bit-for-bit; ss_within_batch
agrees to floating-point round-off (different summation order)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def dtw_cost(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    if a.shape[1] != 2 or b.shape[1] != 2:
        raise ValueError("paths must have shape (n, 2)")

    cdef cnp.ndarray[double, ndim=1] prev_arr = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] cur_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] prev = prev_arr
    cdef double[::1] cur = cur_arr
    cdef double[::1] tmp
    cdef Py_ssize_t i, j
    cdef double dx, dy, local, best

    dx = a[0, 0] - b[0, 0]
    dy = a[0, 1] - b[0, 1]
    prev[0] = sqrt(dx * dx + dy * dy)
    for j in range(1, m):
        dx = a[0, 0] - b[j, 0]
        dy = a[0, 1] - b[j, 1]
        prev[j] = prev[j - 1] + sqrt(dx * dx + dy * dy)

    for i in range(1, n):
        dx = a[i, 0] - b[0, 0]
        dy = a[i, 1] - b[0, 1]
        cur[0] = prev[0] + sqrt(dx * dx + dy * dy)
        for j in range(1, m):
            dx = a[i, 0] - b[j, 0]
            dy = a[i, 1] - b[j, 1]
            local = sqrt(dx * dx + dy * dy)
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = local + best
        tmp = prev
        prev = cur
        cur = tmp

    return prev[m - 1]


def ss_within_batch(const double[:, ::1] d2, const long long[:, ::1] labels, int n_groups):
    cdef Py_ssize_t p = labels.shape[0]
    cdef Py_ssize_t n = labels.shape[1]
    if d2.shape[0] != n or d2.shape[1] != n:
        raise ValueError("d2 must be (n, n) matching the label width")

    cdef cnp.ndarray[double, ndim=1] out_arr = np.zeros(p, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef cnp.ndarray[double, ndim=1] sums_arr = np.empty(n_groups, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts_arr = np.empty(n_groups, dtype=np.int64)
    cdef double[::1] sums = sums_arr
    cdef cnp.int64_t[::1] counts = counts_arr
    cdef Py_ssize_t k, i, j, g
    cdef long long gi
    cdef double acc

    for k in range(p):
        for g in range(n_groups):
            sums[g] = 0.0
            counts[g] = 0
        for i in range(n):
            gi = labels[k, i]
            if gi < 0 or gi >= n_groups:
                raise ValueError("label out of range")
            counts[gi] += 1
            for j in range(i + 1, n):
                if labels[k, j] == gi:
                    sums[gi] += d2[i, j]
        acc = 0.0
        for g in range(n_groups):
            if counts[g] == 0:
                raise ValueError("every group must be nonempty in every labeling")
            acc += sums[g] / counts[g]
        out[k] = acc

    return out_arr
