#!/usr/bin/env python3
"""Benchmark: compiled elementary-symmetric kernel vs the pure-Python fallback.

Times batched evaluation over random log-polar inputs for a few (m, kmax)
shapes, checks that both backends agree to near machine precision, and
prints a speedup table.  Run from the repository root:

    python3 benchmarks/bench_esym.py [--points 200] [--repeat 3]
"""

import argparse
import math
import time

import numpy as np

from greenlem import _esym_py

try:
    from greenlem import _esym as _compiled
except ImportError:
    _compiled = None


def _inputs(points, m, seed):
    rng = np.random.default_rng(seed)
    L = rng.uniform(-20.0, 5.0, (points, m))
    L[rng.random((points, m)) < 0.05] = -math.inf
    P = rng.uniform(-math.pi, math.pi, (points, m))
    return L, np.cos(P), np.sin(P)


def _time(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=200)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    shapes = [(6, 2), (12, 2), (24, 3), (40, 3), (60, 3)]
    print(f"{'m':>4} {'kmax':>4} {'subsets':>9} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for m, kmax in shapes:
        L, UR, UI = _inputs(args.points, m, seed=m)
        subsets = sum(math.comb(m, k) for k in range(1, kmax + 1))
        t_py, ref = _time(lambda: _esym_py.esym_log_complex_batch(L, UR, UI, kmax), args.repeat)
        if _compiled is None:
            print(f"{m:>4} {kmax:>4} {subsets:>9} {t_py:>9.4f}s {'missing':>10} {'-':>8}")
            continue
        t_c, got = _time(lambda: _compiled.esym_log_complex_batch(L, UR, UI, kmax), args.repeat)
        finite = np.isfinite(ref[0])
        assert np.array_equal(finite, np.isfinite(got[0]))
        np.testing.assert_allclose(got[0][finite], ref[0][finite], rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(got[1][finite], ref[1][finite], rtol=1e-12, atol=1e-12)
        print(
            f"{m:>4} {kmax:>4} {subsets:>9} {t_py:>9.4f}s {t_c:>9.4f}s {t_py / t_c:>7.1f}x"
        )
    if _compiled is None:
        print("compiled kernel not built; install with `pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()
