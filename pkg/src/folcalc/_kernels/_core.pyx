# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled batched trig evaluation kernel."""

from libc.math cimport cos, sin

import numpy as np
cimport numpy as cnp

cnp.import_array()


def eval_modes(const long long[:, ::1] K,
               const double[::1] cre,
               const double[::1] cim,
               const double[:, ::1] theta,
               double[::1] out):
    """out[p] = sum_m cre[m] cos(K[m].theta[p]) - cim[m] sin(K[m].theta[p])."""
    cdef Py_ssize_t M = K.shape[0]
    cdef Py_ssize_t n = K.shape[1]
    cdef Py_ssize_t N = theta.shape[0]
    cdef Py_ssize_t p, m, a
    cdef double ph, acc
    with nogil:
        for p in range(N):
            acc = 0.0
            for m in range(M):
                ph = 0.0
                for a in range(n):
                    ph += K[m, a] * theta[p, a]
                acc += cre[m] * cos(ph) - cim[m] * sin(ph)
            out[p] = acc
