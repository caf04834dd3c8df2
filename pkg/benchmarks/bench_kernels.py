"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each kernel is run once to warm up (numba compiles on first call), then
timed with the best of ``--repeat`` runs. Results of the two paths are
compared; a mismatch aborts the run.
"""

import argparse
import sys
import time

import numpy as np

from legendre_bounds import kernels
from legendre_bounds._accel import HAVE_NUMBA
from legendre_bounds.galois import units


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(quick):
    n = 200_000 if quick else 1_000_000
    om, ph = kernels._omega_phi_numpy(n)
    N_orbit = 150 if quick else 400
    mults = np.asarray(units(N_orbit), dtype=np.int64)
    N_sweep = 13 if quick else 23
    us = np.asarray(units(N_sweep), dtype=np.int64)
    return [
        ("omega_phi_table n=%d" % n,
         lambda: kernels._omega_phi_numba(n), lambda: kernels._omega_phi_numpy(n)),
        ("screen_inequalities n=%d" % n,
         lambda: kernels._screen_numba(om, ph, 3, n, 1e-9), lambda: kernels._screen_numpy(om, ph, 3, n, 1e-9)),
        ("orbit_sizes N=%d" % N_orbit,
         lambda: kernels._orbit_sizes_numba(N_orbit, mults), lambda: kernels._orbit_sizes_numpy(N_orbit, mults)),
        ("cyclic_submodule_sweep N=%d r=4" % N_sweep,
         lambda: kernels._cyclic_sweep_numba(N_sweep, 4, us), lambda: kernels._cyclic_sweep_numpy(N_sweep, 4, us)),
    ]


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba unavailable (or LEGENDRE_BOUNDS_NO_NUMBA set); the @njit kernels run as plain Python")
    print("%-40s %12s %12s %9s" % ("kernel", "numba [s]", "numpy [s]", "speedup"))
    for name, fast, slow in cases(args.quick):
        if not same(fast(), slow()):
            print("MISMATCH in %s" % name)
            return 1
        if HAVE_NUMBA:
            tf = best_of(fast, args.repeat)
        else:
            tf = float("nan")
        ts = best_of(slow, args.repeat)
        print("%-40s %12.4f %12.4f %8.1fx" % (name, tf, ts, ts / tf if tf == tf else float("nan")))
    return 0


if __name__ == "__main__":
    sys.exit(main())
