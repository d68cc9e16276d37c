# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: elementary symmetric sums in log-polar form.

Semantics match `_esym_py` exactly: direct k-subset enumeration over values
exp(L) * (Ur + i*Ui), max log-sum factored out, Neumaier-compensated
cartesian accumulation.
"""

from libc.math cimport atan2, exp, fabs, hypot, log
from libc.stdlib cimport free, malloc

import numpy as np

cdef double NEG_INF = float("-inf")


cdef void _esym_all(double* L, double* UR, double* UI, int mf, int kmax,
                    double* out_log, double* out_phase,
                    long* idx, double* pl, double* pr, double* pi) nogil:
    cdef int k, j, pos
    cdef double m_best, tot, w, v, t, a, b
    cdef double s_re, c_re, s_im, c_im, re, im, mag
    for k in range(1, kmax + 1):
        out_log[k - 1] = NEG_INF
        out_phase[k - 1] = 0.0
        if mf < k:
            continue
        # pass 1: maximum subset log-sum
        for j in range(k):
            idx[j] = j
            pl[j] = L[j] if j == 0 else pl[j - 1] + L[j]
        m_best = pl[k - 1]
        while True:
            pos = k - 1
            while pos >= 0 and idx[pos] == mf - k + pos:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for j in range(pos + 1, k):
                idx[j] = idx[j - 1] + 1
            for j in range(pos, k):
                if j == 0:
                    pl[0] = L[idx[0]]
                else:
                    pl[j] = pl[j - 1] + L[idx[j]]
            if pl[k - 1] > m_best:
                m_best = pl[k - 1]
        # pass 2: compensated accumulation of scaled terms
        s_re = c_re = s_im = c_im = 0.0
        for j in range(k):
            idx[j] = j
            if j == 0:
                pl[0] = L[0]
                pr[0] = UR[0]
                pi[0] = UI[0]
            else:
                pl[j] = pl[j - 1] + L[idx[j]]
                pr[j] = pr[j - 1] * UR[idx[j]] - pi[j - 1] * UI[idx[j]]
                pi[j] = pr[j - 1] * UI[idx[j]] + pi[j - 1] * UR[idx[j]]
        while True:
            w = exp(pl[k - 1] - m_best)
            v = w * pr[k - 1]
            t = s_re + v
            if fabs(s_re) >= fabs(v):
                c_re += (s_re - t) + v
            else:
                c_re += (v - t) + s_re
            s_re = t
            v = w * pi[k - 1]
            t = s_im + v
            if fabs(s_im) >= fabs(v):
                c_im += (s_im - t) + v
            else:
                c_im += (v - t) + s_im
            s_im = t
            pos = k - 1
            while pos >= 0 and idx[pos] == mf - k + pos:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for j in range(pos + 1, k):
                idx[j] = idx[j - 1] + 1
            for j in range(pos, k):
                if j == 0:
                    pl[0] = L[idx[0]]
                    pr[0] = UR[idx[0]]
                    pi[0] = UI[idx[0]]
                else:
                    pl[j] = pl[j - 1] + L[idx[j]]
                    a = pr[j - 1] * UR[idx[j]] - pi[j - 1] * UI[idx[j]]
                    b = pr[j - 1] * UI[idx[j]] + pi[j - 1] * UR[idx[j]]
                    pr[j] = a
                    pi[j] = b
        re = s_re + c_re
        im = s_im + c_im
        mag = hypot(re, im)
        if mag > 0.0:
            out_log[k - 1] = m_best + log(mag)
            out_phase[k - 1] = atan2(im, re)


cdef struct _Buffers:
    double* lf
    double* urf
    double* uif
    long* idx
    double* pl
    double* pr
    double* pi


cdef int _alloc(_Buffers* bufs, int m, int kmax) except -1:
    bufs.lf = <double*> malloc(m * sizeof(double))
    bufs.urf = <double*> malloc(m * sizeof(double))
    bufs.uif = <double*> malloc(m * sizeof(double))
    bufs.idx = <long*> malloc((kmax + 1) * sizeof(long))
    bufs.pl = <double*> malloc((kmax + 1) * sizeof(double))
    bufs.pr = <double*> malloc((kmax + 1) * sizeof(double))
    bufs.pi = <double*> malloc((kmax + 1) * sizeof(double))
    if (bufs.lf == NULL or bufs.urf == NULL or bufs.uif == NULL or
            bufs.idx == NULL or bufs.pl == NULL or bufs.pr == NULL or bufs.pi == NULL):
        _free(bufs)
        raise MemoryError()
    return 0


cdef void _free(_Buffers* bufs) nogil:
    free(bufs.lf); free(bufs.urf); free(bufs.uif)
    free(bufs.idx); free(bufs.pl); free(bufs.pr); free(bufs.pi)


def esym_log_complex(logmods, unit_re, unit_im, int kmax):
    """(log|e_k|, arg e_k) for k = 1..kmax of the values exp(L)*(Ur + i*Ui)."""
    cdef double[::1] lv = np.ascontiguousarray(logmods, dtype=np.float64)
    cdef double[::1] urv = np.ascontiguousarray(unit_re, dtype=np.float64)
    cdef double[::1] uiv = np.ascontiguousarray(unit_im, dtype=np.float64)
    cdef int m = lv.shape[0]
    out_log = np.full(kmax, NEG_INF)
    out_phase = np.zeros(kmax)
    cdef double[::1] olog = out_log
    cdef double[::1] ophs = out_phase
    cdef _Buffers bufs
    _alloc(&bufs, max(m, 1), kmax)
    cdef int mf = 0
    cdef int j
    try:
        for j in range(m):
            if lv[j] > NEG_INF:
                bufs.lf[mf] = lv[j]
                bufs.urf[mf] = urv[j]
                bufs.uif[mf] = uiv[j]
                mf += 1
        if kmax > 0:
            with nogil:
                _esym_all(bufs.lf, bufs.urf, bufs.uif, mf, kmax,
                          &olog[0], &ophs[0], bufs.idx, bufs.pl, bufs.pr, bufs.pi)
    finally:
        _free(&bufs)
    return out_log, out_phase


def esym_log_complex_batch(logmods2, unit_re2, unit_im2, int kmax):
    """Row-wise kernel over (npoints, m) arrays; loops stay in C."""
    cdef double[:, ::1] lv = np.ascontiguousarray(logmods2, dtype=np.float64)
    cdef double[:, ::1] urv = np.ascontiguousarray(unit_re2, dtype=np.float64)
    cdef double[:, ::1] uiv = np.ascontiguousarray(unit_im2, dtype=np.float64)
    cdef int npoints = lv.shape[0]
    cdef int m = lv.shape[1]
    out_log = np.full((npoints, kmax), NEG_INF)
    out_phase = np.zeros((npoints, kmax))
    cdef double[:, ::1] olog = out_log
    cdef double[:, ::1] ophs = out_phase
    cdef _Buffers bufs
    _alloc(&bufs, max(m, 1), kmax)
    cdef int i, j, mf
    try:
        if kmax > 0 and npoints > 0:
            with nogil:
                for i in range(npoints):
                    mf = 0
                    for j in range(m):
                        if lv[i, j] > NEG_INF:
                            bufs.lf[mf] = lv[i, j]
                            bufs.urf[mf] = urv[i, j]
                            bufs.uif[mf] = uiv[i, j]
                            mf += 1
                    _esym_all(bufs.lf, bufs.urf, bufs.uif, mf, kmax,
                              &olog[i, 0], &ophs[i, 0], bufs.idx, bufs.pl, bufs.pr, bufs.pi)
    finally:
        _free(&bufs)
    return out_log, out_phase
