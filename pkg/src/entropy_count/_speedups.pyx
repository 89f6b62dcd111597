# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled O(E^2) pair-sum kernel.

Same contract as _kernels_py.pair_cubic_sum; the pure module is the
reference implementation and the two must agree to ~1e-9 relative.
"""

import numpy as np

cimport numpy as cnp


def pair_cubic_sum(double[::1] b, double[::1] sigma2,
                   cnp.intp_t[::1] idx1, cnp.intp_t[::1] idx2,
                   double[:, ::1] w_pad):
    cdef Py_ssize_t n_edges = b.shape[0]
    cdef Py_ssize_t e, f, a1, a2
    cdef double acc = 0.0
    cdef double s9, s6, c
    for e in range(n_edges):
        a1 = idx1[e]
        a2 = idx2[e]
        s9 = 0.0
        s6 = 0.0
        for f in range(n_edges):
            c = (w_pad[a1, idx1[f]] + w_pad[a1, idx2[f]]
                 + w_pad[a2, idx1[f]] + w_pad[a2, idx2[f]])
            s9 += b[f] * sigma2[f] * c
            s6 += b[f] * c * c * c
        acc += b[e] * (9.0 * sigma2[e] * s9 + 6.0 * s6)
    return acc
