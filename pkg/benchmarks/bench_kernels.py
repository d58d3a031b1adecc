"""Compare the numba and numpy/Python paths of the integer table kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is called once
to warm up (so numba compile time is excluded) and then timed over a few
repetitions; results from both paths are checked for equality.
"""

import time

import numpy as np

from circord import kernels
from circord.enumeration import _ball_problem, cyclic_arrangements
from circord.groups import Tararin
from circord.orders import CyclicStandard


def _time(fn, reps=3):
    fn()
    start = time.perf_counter()
    for _ in range(reps):
        out = fn()
    return (time.perf_counter() - start) / reps, out


def cyclic_tables(n):
    c = CyclicStandard(n)
    els = [(a,) for a in range(n)]
    ctab = np.array([[[c(a, b, d) for d in els] for b in els] for a in els], dtype=np.int8)
    mtab = np.array([[(a + b) % n for b in range(n)] for a in range(n)], dtype=np.int64)
    return ctab, mtab


def main():
    if not kernels.HAS_NUMBA:
        print("numba is not installed; only the fallback path is available")
    cases = []
    ctab, mtab = cyclic_tables(24)
    cases.append(("check_tables Z/24", lambda u: kernels.check_tables(ctab, mtab, use_numba=u)))
    perms = cyclic_arrangements(9)
    cases.append(("invariant_arrangements n=9",
                  lambda u: kernels.invariant_arrangements(perms, 9, use_numba=u).tolist()))
    _, inv, triples = _ball_problem(Tararin(3), 3)
    cases.append(("cone_search Tararin(3) r=3",
                  lambda u: kernels.cone_search(inv, triples, 1 << 16, 10 ** 9, use_numba=u)[0].tolist()))
    print(f"{'kernel':32s} {'numba ms':>10s} {'fallback ms':>12s} {'speedup':>8s}")
    for name, fn in cases:
        t_fast, out_fast = _time(lambda: fn(True))
        t_slow, out_slow = _time(lambda: fn(False), reps=1)
        assert out_fast == out_slow, f"{name}: paths disagree"
        print(f"{name:32s} {t_fast * 1e3:10.2f} {t_slow * 1e3:12.2f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
