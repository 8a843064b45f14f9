# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate-application kernels (hot inner loops).

Same contract as the numpy fallback: in-place updates of a (2**n, T)
complex128 array holding T column-states; wire 1 is the most significant
bit of the row index. Single-threaded by design so results are
reproducible bit for bit.
"""

import numpy as np

cimport cython
cimport numpy as cnp

ctypedef double complex cplx

BACKEND = "cython"


def apply_1q(cplx[:, :] a, int n, int t, cplx[:, ::1] u):
    cdef Py_ssize_t N = a.shape[0]
    cdef Py_ssize_t T = a.shape[1]
    cdef Py_ssize_t m = 1 << (n - t)
    cdef Py_ssize_t base = 0
    cdef Py_ssize_t r, j, r1, stop
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef cplx x0, x1
    with nogil:
        while base < N:
            r = base
            stop = base + m
            while r < stop:
                r1 = r + m
                for j in range(T):
                    x0 = a[r, j]
                    x1 = a[r1, j]
                    a[r, j] = u00 * x0 + u01 * x1
                    a[r1, j] = u10 * x0 + u11 * x1
                r += 1
            base += 2 * m


def apply_cnot(cplx[:, :] a, int n, int c, int t):
    cdef Py_ssize_t N = a.shape[0]
    cdef Py_ssize_t T = a.shape[1]
    cdef Py_ssize_t mc = 1 << (n - c)
    cdef Py_ssize_t mt = 1 << (n - t)
    cdef Py_ssize_t i, j, i1
    cdef cplx tmp
    with nogil:
        for i in range(N):
            if (i & mc) != 0 and (i & mt) == 0:
                i1 = i | mt
                for j in range(T):
                    tmp = a[i, j]
                    a[i, j] = a[i1, j]
                    a[i1, j] = tmp


def apply_toffoli(cplx[:, :] a, int n, int c1, int c2, int t):
    cdef Py_ssize_t N = a.shape[0]
    cdef Py_ssize_t T = a.shape[1]
    cdef Py_ssize_t m1 = 1 << (n - c1)
    cdef Py_ssize_t m2 = 1 << (n - c2)
    cdef Py_ssize_t mt = 1 << (n - t)
    cdef Py_ssize_t i, j, i1
    cdef cplx tmp
    with nogil:
        for i in range(N):
            if (i & m1) != 0 and (i & m2) != 0 and (i & mt) == 0:
                i1 = i | mt
                for j in range(T):
                    tmp = a[i, j]
                    a[i, j] = a[i1, j]
                    a[i1, j] = tmp


def apply_cu(cplx[:, :] a, int n, int c, int t, cplx[:, ::1] u):
    cdef Py_ssize_t N = a.shape[0]
    cdef Py_ssize_t T = a.shape[1]
    cdef Py_ssize_t mc = 1 << (n - c)
    cdef Py_ssize_t mt = 1 << (n - t)
    cdef Py_ssize_t i, j, i1
    cdef cplx u00 = u[0, 0], u01 = u[0, 1], u10 = u[1, 0], u11 = u[1, 1]
    cdef cplx x0, x1
    with nogil:
        for i in range(N):
            if (i & mc) != 0 and (i & mt) == 0:
                i1 = i | mt
                for j in range(T):
                    x0 = a[i, j]
                    x1 = a[i1, j]
                    a[i, j] = u00 * x0 + u01 * x1
                    a[i1, j] = u10 * x0 + u11 * x1


def run_tracks(cnp.int32_t[:] kinds, cnp.int64_t[:] ma, cnp.int64_t[:] mb,
               cnp.int32_t[:] mi, cplx[:, :, ::1] mats, cnp.int64_t[:] bits,
               cplx[:, ::1] vec):
    """Classical-track evolution; see the numpy fallback for the contract."""
    cdef Py_ssize_t G = kinds.shape[0]
    cdef Py_ssize_t T = bits.shape[0]
    cdef Py_ssize_t g, t
    cdef int kind, m
    cdef cnp.int64_t cm, tm
    cdef cplx u00, u01, u10, u11, x0, x1
    with nogil:
        for g in range(G):
            kind = kinds[g]
            cm = ma[g]
            if kind == 0 or kind == 1:
                tm = mb[g]
                for t in range(T):
                    if (bits[t] & cm) == cm:
                        bits[t] ^= tm
            elif kind == 2 or kind == 5:
                for t in range(T):
                    if (bits[t] & cm) == cm:
                        x0 = vec[t, 0]
                        vec[t, 0] = vec[t, 1]
                        vec[t, 1] = x0
            elif kind == 3:
                m = mi[g]
                u00 = mats[m, 0, 0]
                u01 = mats[m, 0, 1]
                u10 = mats[m, 1, 0]
                u11 = mats[m, 1, 1]
                for t in range(T):
                    x0 = vec[t, 0]
                    x1 = vec[t, 1]
                    vec[t, 0] = u00 * x0 + u01 * x1
                    vec[t, 1] = u10 * x0 + u11 * x1
            else:
                m = mi[g]
                u00 = mats[m, 0, 0]
                u01 = mats[m, 0, 1]
                u10 = mats[m, 1, 0]
                u11 = mats[m, 1, 1]
                for t in range(T):
                    if (bits[t] & cm) == cm:
                        x0 = vec[t, 0]
                        x1 = vec[t, 1]
                        vec[t, 0] = u00 * x0 + u01 * x1
                        vec[t, 1] = u10 * x0 + u11 * x1
