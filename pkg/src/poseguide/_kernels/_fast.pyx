# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernel: per-segment angular error for one pose pair."""

from libc.math cimport atan2, fabs, fmod, M_PI, NAN

IMPLEMENTATION = "cython"

cdef int N_SEG = 10
cdef int[10] SEG_A = [5, 11, 5, 6, 7, 8, 11, 12, 13, 14]
cdef int[10] SEG_B = [6, 12, 7, 8, 9, 10, 13, 14, 15, 16]


def score_pair(double[:, ::1] a, double[:, ::1] b, double threshold,
               double[::1] out):
    """Same contract as the pure kernel: fills out[10], returns valid count."""
    cdef int s, i, j, valid = 0
    cdef double adx, ady, bdx, bdy, d
    cdef double two_pi = 2.0 * M_PI
    for s in range(N_SEG):
        i = SEG_A[s]
        j = SEG_B[s]
        if (a[i, 2] < threshold or a[j, 2] < threshold or
                b[i, 2] < threshold or b[j, 2] < threshold):
            out[s] = NAN
            continue
        adx = a[j, 0] - a[i, 0]
        ady = a[j, 1] - a[i, 1]
        bdx = b[j, 0] - b[i, 0]
        bdy = b[j, 1] - b[i, 1]
        if (adx == 0.0 and ady == 0.0) or (bdx == 0.0 and bdy == 0.0):
            out[s] = NAN
            continue
        d = fmod(fabs(atan2(ady, adx) - atan2(bdy, bdx)), two_pi)
        if d > M_PI:
            d = two_pi - d
        out[s] = d
        valid += 1
    return valid
