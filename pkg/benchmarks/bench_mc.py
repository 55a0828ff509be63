#!/usr/bin/env python3
"""Benchmark: compiled vs pure-Python ensemble sweep kernel.

The Monte Carlo inner loop (sequential heat-bath label updates with
incremental shift bookkeeping) dominates the runtime of density sweeps;
everything else in the package is vectorized numpy.  This script times
one representative density point with both backends and reports the
speedup, and verifies that both backends produce identical estimates
from the same uniform stream.

Usage: python3 benchmarks/bench_mc.py [--atoms N] [--sweeps S]
"""

import argparse
import time

import numpy as np

from rydsim.mc._backend import BACKEND
from rydsim.mc.sampler import build_ensemble, sample_steady_state
from rydsim.params import MediumParams


def time_backend(state, p, sweeps, backend, repeats=3):
    best = np.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = sample_steady_state(state, 1.0, p, sweeps=sweeps, seed=7,
                                     backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--atoms", type=int, default=2000)
    ap.add_argument("--sweeps", type=int, default=320)
    args = ap.parse_args()

    p = MediumParams(rho=0.13, g=20.0, omega=2.0, delta=0.0, gamma=6.0,
                     c6=486.0, length=30.0, wavenumber=8.0, c=1.0)
    box = (args.atoms / p.rho) ** (1.0 / 3.0)
    state = build_ensemble(args.atoms, box, p, np.random.default_rng(1))

    print(f"atoms={args.atoms} sweeps={args.sweeps} "
          f"(plus 25% thermalization), box={box:.1f} um")
    t_py, r_py = time_backend(state, p, args.sweeps, "python")
    print(f"python  backend: {t_py:8.3f} s   chi_ratio={r_py.chi_ratio:.6f} "
          f"f_bl={r_py.f_bl:.4f}")
    if BACKEND != "cython":
        print("cython  backend: not built (pip install -e . with Cython)")
        return
    t_cy, r_cy = time_backend(state, p, args.sweeps, "cython")
    print(f"cython  backend: {t_cy:8.3f} s   chi_ratio={r_cy.chi_ratio:.6f} "
          f"f_bl={r_cy.f_bl:.4f}")
    print(f"speedup: {t_py / t_cy:.1f}x")
    same = (r_py.chi_ratio == r_cy.chi_ratio and r_py.f_bl == r_cy.f_bl)
    print(f"backends bit-identical on this run: {same}")


if __name__ == "__main__":
    main()
