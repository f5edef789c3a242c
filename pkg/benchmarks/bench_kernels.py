"""Timing comparison of the numba and numpy integration kernels.

Usage: python benchmarks/bench_kernels.py [--n-traj N] [--repeats R]

The two backends implement the identical update rule (see
cvteleport.mc.kernels); this script reports wall-clock times for a few
problem shapes and verifies the outputs agree bitwise while at it.
"""

import argparse
import time

import numpy as np

from cvteleport.mc.kernels import FORCE_NUMPY, integrate_chain

KW = dict(gamma_i=1.0, gamma_s=1.0, gamma_A=20.0, gamma_B=1.0,
          gamma_plus=1.5, gamma_minus=0.5, ou_sigma=1.0, ou_on=True)


def run_once(backend, n_traj, n_steps, z, dt=5e-4):
    state = np.zeros((n_traj, 10))
    t0 = time.perf_counter()
    taps = integrate_chain(state, z, dt, backend=backend, **KW)
    return time.perf_counter() - t0, state, taps


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-traj", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"] if FORCE_NUMPY else ["numba", "numpy"]
    if FORCE_NUMPY:
        print("CVTELEPORT_FORCE_NUMPY set: numba backend unavailable")

    rng = np.random.default_rng(0)
    shapes = [(args.n_traj, 20_000), (args.n_traj, 200_000), (1, 1_000_000)]

    if "numba" in backends:  # trigger the jit compile outside the timings
        run_once("numba", 1, 100, rng.standard_normal((1, 100, 10)))

    print(f"{'shape':>18s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for n_traj, n_steps in shapes:
        z = rng.standard_normal((n_traj, n_steps, 10))
        times = {}
        results = {}
        for backend in backends:
            best = np.inf
            for _ in range(args.repeats):
                t, state, taps = run_once(backend, n_traj, n_steps, z)
                best = min(best, t)
            times[backend] = best
            results[backend] = (state, taps)
        if len(backends) == 2:
            s1, t1 = results["numba"]
            s2, t2 = results["numpy"]
            assert np.array_equal(s1, s2) and np.array_equal(t1, t2), \
                "backends disagree"
            ratio = times["numpy"] / times["numba"]
        else:
            ratio = float("nan")
        row = f"{n_traj:>6d} x {n_steps:>8d}"
        row += "".join(f"{times[b]:>11.3f}s" for b in backends)
        row += f"{ratio:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
