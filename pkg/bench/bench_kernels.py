#!/usr/bin/env python3
"""Benchmark: compiled vs pure-Python kernels, plus the Fraction wrappers.

Run from the repo root after `python setup.py build_ext --inplace`:

    PYTHONPATH=src python3 bench/bench_kernels.py

Without the extension the script still runs and reports the pure twin only.
"""

import random
import sys
import time
from fractions import Fraction

from d0res import _kernhot_py as pure

try:
    from d0res import _kernhot as compiled
except ImportError:
    compiled = None

from d0res import kernels


def _time(fn, repeat=5):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def int_matrix(rng, n, m, bits=40):
    return [[rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(m)]
            for _ in range(n)]


def frac_matrix(rng, n, m):
    return [[Fraction(rng.randint(-999, 999), rng.randint(1, 99))
             for _ in range(m)] for _ in range(n)]


def annihilator_workload():
    """End-to-end: annihilator of a padded fiber (the real hot path)."""
    from d0res.branches import BranchParam
    from d0res.modules import annihilator, fiber_module, graph_skyscraper, pad
    from d0res.series import Series

    b = BranchParam((Series.from_pairs([(2, Fraction(1))], 24),
                     Series.from_pairs([(3, Fraction(1)), (5, Fraction(1, 2))], 24)))
    base = fiber_module(b, 12)
    sky, _ = graph_skyscraper(b)
    module = pad(base, sky, 4)
    return annihilator(module, module.dim)


def main():
    rng = random.Random(20240817)
    rows = []

    a = int_matrix(rng, 36, 36)
    b = int_matrix(rng, 36, 36)
    impls = [("pure", pure)] + ([("compiled", compiled)] if compiled else [])
    mat_times = {}
    ech_times = {}
    for name, impl in impls:
        mat_times[name] = _time(lambda impl=impl: impl.imatmul(a, b))
        ech_times[name] = _time(
            lambda impl=impl: impl.irow_echelon([row[:] for row in a])
        )
    rows.append(("int matmul 36x36", mat_times))
    rows.append(("int row echelon 36x36", ech_times))

    fa = frac_matrix(rng, 24, 30)
    rref_times = {}
    for name, impl in impls:
        kernels.imatmul, kernels.irow_echelon = impl.imatmul, impl.irow_echelon
        rref_times[name] = _time(lambda: kernels.frref([r[:] for r in fa]))
    rows.append(("Fraction rref 24x30", rref_times))

    ann_times = {}
    for name, impl in impls:
        kernels.imatmul, kernels.irow_echelon = impl.imatmul, impl.irow_echelon
        ann_times[name] = _time(annihilator_workload, repeat=3)
    rows.append(("annihilator dim-16 module", ann_times))

    # restore the import-time selection
    kernels.imatmul = (compiled or pure).imatmul
    kernels.irow_echelon = (compiled or pure).irow_echelon

    print(f"kernel twins available: pure{' + compiled' if compiled else ' only'}")
    width = max(len(r[0]) for r in rows)
    for label, times in rows:
        parts = [f"{name}: {dt * 1e3:8.2f} ms" for name, dt in times.items()]
        if compiled and "pure" in times and "compiled" in times:
            parts.append(f"speedup: {times['pure'] / times['compiled']:.2f}x")
        print(f"{label:<{width}}  " + "   ".join(parts))
    return 0


if __name__ == "__main__":
    sys.exit(main())
