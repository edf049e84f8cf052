# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled detrended cross-sum kernel.

Same contract as ``ddfen._dcca_numpy.pair_cross_sums``; see that module
for the definition.  The residual layout and the per-pair accumulation
order are chosen so that identical (or negated) input profiles produce
bitwise-identical (or bitwise-negated) sums, which the coefficient layer
relies on for exact +/-1 results.
"""

import numpy as np


def pair_cross_sums(profiles, int w):
    arr = np.ascontiguousarray(profiles, dtype=np.float64)
    cdef double[:, ::1] prof = arr
    cdef Py_ssize_t k = prof.shape[0]
    cdef Py_ssize_t length = prof.shape[1]
    cdef Py_ssize_t nboxes = length - w + 1
    cdef Py_ssize_t nterms = nboxes * w

    resid_arr = np.empty((k, nterms), dtype=np.float64)
    cdef double[:, ::1] resid = resid_arr
    out_arr = np.empty((k, k), dtype=np.float64)
    cdef double[:, ::1] out = out_arr

    cdef double sx = w * (w + 1.0) / 2.0
    cdef double sxx = w * (w + 1.0) * (2.0 * w + 1.0) / 6.0
    cdef double disc = w * sxx - sx * sx

    cdef Py_ssize_t i, j, b, g, t
    cdef double sy, sxy, slope, intercept, val, acc

    for i in range(k):
        for b in range(nboxes):
            sy = 0.0
            sxy = 0.0
            for g in range(w):
                val = prof[i, b + g]
                sy += val
                sxy += val * (g + 1.0)
            slope = (w * sxy - sx * sy) / disc
            intercept = (sy - slope * sx) / w
            for g in range(w):
                resid[i, b * w + g] = prof[i, b + g] - (
                    intercept + slope * (g + 1.0))

    for i in range(k):
        for j in range(i, k):
            acc = 0.0
            for t in range(nterms):
                acc += resid[i, t] * resid[j, t]
            out[i, j] = acc
            out[j, i] = acc
    return out_arr
