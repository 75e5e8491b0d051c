# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Semantics match ``_numpy_impl`` exactly; see there
for the contracts."""

import numpy as np

from libc.math cimport sqrt


def two_leader_totals(double[:, ::1] R):
    cdef Py_ssize_t n = R.shape[0]
    out = np.zeros((n, n))
    cdef double[:, ::1] T = out
    cdef Py_ssize_t x, y, u
    cdef double rxy, inv4, acc, d
    with nogil:
        for x in range(n):
            for y in range(x + 1, n):
                rxy = R[x, y]
                inv4 = 0.25 / rxy
                acc = 0.0
                for u in range(n):
                    d = R[u, x] - R[u, y] + rxy
                    acc += R[u, x] - d * d * inv4
                T[x, y] = acc
                T[y, x] = acc
    return out


def em_accumulate(double[:, ::1] A, double[:, ::1] X, double[:, :, ::1] noise,
                  double dt, Py_ssize_t skip, double[::1] acc):
    cdef Py_ssize_t steps = noise.shape[0]
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = X.shape[1]
    cdef double sq = sqrt(dt)
    work = np.empty(n)
    cdef double[::1] w = work
    cdef Py_ssize_t s, t, i, j
    cdef double z, q
    with nogil:
        for s in range(steps):
            for t in range(m):
                for i in range(n):
                    z = 0.0
                    for j in range(n):
                        z += A[i, j] * X[j, t]
                    w[i] = X[i, t] - dt * z + sq * noise[s, i, t]
                q = 0.0
                for i in range(n):
                    X[i, t] = w[i]
                    q += w[i] * w[i]
                if s >= skip:
                    acc[t] += q
    if steps > skip:
        return steps - skip
    return 0
