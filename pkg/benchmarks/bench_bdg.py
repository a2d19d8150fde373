"""Benchmark the BdG integration backends (compiled kernel vs numpy).

Usage:
    python benchmarks/bench_bdg.py [--repeats 5]

The compiled kernel steps each mode adaptively on its own; the numpy twin
vectorizes over modes with a shared step.  The table reports one-period
monodromy times for representative sweep shapes plus the cross-backend
deviation.
"""

import argparse
import time

import numpy as np

from floqxy import bdg
from floqxy.model import ModelParams, mode_grid

CASES = [
    ("fig1 cell", dict(N=512, gamma=1.0, h0=1.0, dh=0.1, omega=2 * np.pi)),
    ("fig3 cell", dict(N=192, gamma=1.0, h0=1.0, dh=0.75, omega=4.0)),
    ("low-omega cell", dict(N=256, gamma=1.0, h0=1.0, dh=0.1, omega=0.5)),
    ("large chain", dict(N=4096, gamma=1.0, h0=1.0, dh=0.1, omega=2 * np.pi)),
    ("small chain", dict(N=16, gamma=0.8, h0=0.9, dh=0.3, omega=3.0)),
]


def time_backend(backend, k, p, tol, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        y, info = bdg.integrate_columns(k, p.gamma, p.h0, p.dh, p.omega,
                                        p.period, tol, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, y, info


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--tol", type=float, default=1e-10)
    args = parser.parse_args()

    backends = bdg.available_backends()
    print(f"backends: {', '.join(backends)} (selected: {bdg.BACKEND})")
    if len(backends) < 2:
        print("compiled kernel not built; benchmarking the numpy backend only")

    header = f"{'case':15s} {'modes':>6s}" + "".join(f" {b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9s} {'max|diff|':>10s}"
    print(header)
    for name, kwargs in CASES:
        p = ModelParams(**kwargs)
        k = mode_grid(p)
        times = {}
        results = {}
        for backend in backends:
            times[backend], results[backend], _ = time_backend(
                backend, k, p, args.tol, args.repeats)
        line = f"{name:15s} {k.size:6d}" + "".join(
            f" {times[b]*1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            diff = float(np.max(np.abs(results["cython"] - results["python"])))
            line += f" {times['python']/times['cython']:8.1f}x {diff:10.2e}"
        print(line)


if __name__ == "__main__":
    main()
