#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure NumPy/Python fallback.

Runs the adaptive stepping loop and the dense-output batch evaluation in two
subprocesses, one per path (the path is selected at import time by
WARPCHECK_DISABLE_NUMBA), and prints a timing table. Results are numerically
identical; only throughput differs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from warpcheck import kernels
from warpcheck.ode import OdeRhs, integrate_ivp

repeat = int(sys.argv[1])

def best(fn, *args):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)

# warm up (jit compilation, if active, happens here)
sol = integrate_ivp(OdeRhs.power(0.5, -2.0), 0.0, 50.0, 1.0, 0.0, 1e-10)
tq = np.linspace(0.0, 50.0, 200_000)
kernels.dense_eval(sol.ts, sol.fs, sol.fps, sol.fpps, tq)

results = {
    "path": "numba" if kernels.USING_NUMBA else "pure",
    "integrate_tol_1e-10_[0,50]": best(
        integrate_ivp, OdeRhs.power(0.5, -2.0), 0.0, 50.0, 1.0, 0.0, 1e-10),
    "integrate_tol_1e-12_[0,200]": best(
        integrate_ivp, OdeRhs.power(2.0, -5.0), 0.0, 200.0, 1.0, 0.0, 1e-12),
    "dense_eval_200k_points": best(
        kernels.dense_eval, sol.ts, sol.fs, sol.fps, sol.fpps, tq),
}
print(json.dumps(results))
"""


def run_path(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ, WARPCHECK_DISABLE_NUMBA="1" if disable_numba else "0")
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5,
                    help="take the best of N timings per case")
    args = ap.parse_args()

    jit = run_path(False, args.repeat)
    pure = run_path(True, args.repeat)
    if jit["path"] != "numba":
        print("note: numba unavailable; both runs used the pure path")

    names = [k for k in jit if k != "path"]
    width = max(len(n) for n in names)
    print(f"{'kernel':<{width}}  {'jit (s)':>12}  {'pure (s)':>12}  {'speedup':>8}")
    for name in names:
        a, b = jit[name], pure[name]
        print(f"{name:<{width}}  {a:12.6f}  {b:12.6f}  {b / a:7.1f}x")


if __name__ == "__main__":
    main()
