"""Pure-Python kernel: elementary symmetric sums in log-polar form.

Mirrors the compiled module `_esym`; see `_kernels` for selection.  Each
input value is exp(L_j) * (Ur_j + i Ui_j) with a unit cartesian phase
factor; carrying the phase in cartesian form keeps exact cancellations
(1 + (-1) = 0) exact.  All k-subsets are enumerated directly: the largest
subset log-sum M is factored out, then the scaled complex terms are
accumulated with Neumaier compensation.  A zero accumulated sum is a
legitimate near-zero and comes back as log-modulus -inf.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

NEG_INF = float("-inf")


def esym_log_complex(logmods, unit_re, unit_im, kmax):
    """(log|e_k|, arg e_k) for k = 1..kmax of the values exp(L)*(Ur + i*Ui)."""
    finite = [
        (float(l), float(ur), float(ui))
        for l, ur, ui in zip(logmods, unit_re, unit_im)
        if l > NEG_INF
    ]
    mf = len(finite)
    ls = [f[0] for f in finite]
    urs = [f[1] for f in finite]
    uis = [f[2] for f in finite]
    out_log = np.full(kmax, NEG_INF)
    out_phase = np.zeros(kmax)
    for k in range(1, kmax + 1):
        if mf < k:
            continue
        m_best = NEG_INF
        for idx in combinations(range(mf), k):
            tot = 0.0
            for i in idx:
                tot += ls[i]
            if tot > m_best:
                m_best = tot
        s_re = c_re = s_im = c_im = 0.0
        for idx in combinations(range(mf), k):
            tot = 0.0
            pr, pi = 1.0, 0.0
            for i in idx:
                tot += ls[i]
                pr, pi = pr * urs[i] - pi * uis[i], pr * uis[i] + pi * urs[i]
            w = math.exp(tot - m_best)
            v = w * pr
            t = s_re + v
            c_re += (s_re - t) + v if abs(s_re) >= abs(v) else (v - t) + s_re
            s_re = t
            v = w * pi
            t = s_im + v
            c_im += (s_im - t) + v if abs(s_im) >= abs(v) else (v - t) + s_im
            s_im = t
        re = s_re + c_re
        im = s_im + c_im
        mag = math.hypot(re, im)
        if mag > 0.0:
            out_log[k - 1] = m_best + math.log(mag)
            out_phase[k - 1] = math.atan2(im, re)
    return out_log, out_phase


def esym_log_complex_batch(logmods2, unit_re2, unit_im2, kmax):
    """Row-wise esym_log_complex over (npoints, m) arrays."""
    logmods2 = np.asarray(logmods2, dtype=np.float64)
    unit_re2 = np.asarray(unit_re2, dtype=np.float64)
    unit_im2 = np.asarray(unit_im2, dtype=np.float64)
    npoints = logmods2.shape[0]
    out_log = np.full((npoints, kmax), NEG_INF)
    out_phase = np.zeros((npoints, kmax))
    for i in range(npoints):
        out_log[i], out_phase[i] = esym_log_complex(
            logmods2[i], unit_re2[i], unit_im2[i], kmax
        )
    return out_log, out_phase
