# cython: boundscheck=False, wraparound=False, nonecheck=False, cdivision=True
"""Compiled table-driven kernels for fields with q <= TABLE_LIMIT.

Small exact eliminations and products are lookup-bound; doing them in C avoids
the per-call overhead that dominates the numpy backend at these sizes.
"""

import numpy as np

cimport numpy as cnp


def matmul_table(const cnp.int64_t[:, ::1] A, const cnp.int64_t[:, ::1] B,
                 const cnp.uint16_t[:, ::1] add_t, const cnp.uint16_t[:, ::1] mul_t):
    cdef Py_ssize_t m = A.shape[0], k = A.shape[1], n = B.shape[1]
    out_arr = np.zeros((m, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] C = out_arr
    cdef Py_ssize_t i, j, l
    cdef cnp.int64_t a
    for i in range(m):
        for l in range(k):
            a = A[i, l]
            if a == 0:
                continue
            for j in range(n):
                C[i, j] = add_t[C[i, j], mul_t[a, B[l, j]]]
    return out_arr


def matmul_many_table(const cnp.int64_t[:, :, ::1] A, const cnp.int64_t[:, :, ::1] B,
                      const cnp.uint16_t[:, ::1] add_t, const cnp.uint16_t[:, ::1] mul_t):
    cdef Py_ssize_t b = A.shape[0], m = A.shape[1], k = A.shape[2], n = B.shape[2]
    out_arr = np.zeros((b, m, n), dtype=np.int64)
    cdef cnp.int64_t[:, :, ::1] C = out_arr
    cdef Py_ssize_t t, i, j, l
    cdef cnp.int64_t a
    for t in range(b):
        for i in range(m):
            for l in range(k):
                a = A[t, i, l]
                if a == 0:
                    continue
                for j in range(n):
                    C[t, i, j] = add_t[C[t, i, j], mul_t[a, B[t, l, j]]]
    return out_arr


def rref_table(cnp.int64_t[:, ::1] R,
               const cnp.uint16_t[:, ::1] add_t, const cnp.uint16_t[:, ::1] mul_t,
               const cnp.int64_t[::1] inv_t, const cnp.int64_t[::1] neg_t):
    """In-place reduced row echelon form; returns the pivot column list.

    Pivot choice is the first nonzero entry in column order, matching the
    numpy backend exactly.
    """
    cdef Py_ssize_t rows = R.shape[0], cols = R.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef cnp.int64_t piv, inv, f, t
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if R[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                t = R[r, j]
                R[r, j] = R[pr, j]
                R[pr, j] = t
        piv = R[r, c]
        if piv != 1:
            inv = inv_t[piv]
            for j in range(cols):
                R[r, j] = mul_t[inv, R[r, j]]
        for i in range(rows):
            if i == r:
                continue
            f = R[i, c]
            if f == 0:
                continue
            f = neg_t[f]
            for j in range(cols):
                R[i, j] = add_t[R[i, j], mul_t[f, R[r, j]]]
        pivots.append(c)
        r += 1
    return pivots
