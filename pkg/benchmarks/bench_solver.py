"""Benchmark the compiled coordinate-descent kernel against the pure-numpy
fallback on representative problem sizes.

Run from the repository root after an editable install:

    python3 benchmarks/bench_solver.py
    python3 benchmarks/bench_solver.py --sizes 200x50,500x200 --repeat 5

Both kernels solve the same instances; the report includes the solution
agreement so a speedup never hides a numerical drift.
"""

import argparse
import time

import numpy as np

from hdlp.solver import PenaltyConfig
from hdlp.solver import _kernel_py

try:
    from hdlp.solver import _kernel as compiled
except ImportError:
    compiled = None


def make_instance(rng, n, d, correlate=0.3):
    base = rng.standard_normal((n, d))
    common = rng.standard_normal((n, 1))
    X = base + correlate * common
    beta = np.zeros(d)
    k = max(1, d // 10)
    beta[rng.choice(d, size=k, replace=False)] = rng.uniform(0.5, 2.0, size=k)
    y = X @ beta + rng.standard_normal(n)
    gamma = 0.5 * np.sqrt(np.log(d) / n)
    return X, y, gamma


def run_gram(kernel, X, y, gamma, config):
    G = np.ascontiguousarray(X.T @ X)
    q = np.ascontiguousarray(X.T @ y)
    w = np.ones(X.shape[1])
    t0 = time.perf_counter()
    beta, kkt, sweeps, ok = kernel.cd_gram(
        G, q, float(X.shape[0]), float(gamma), w,
        config.max_iter, config.tol)
    return time.perf_counter() - t0, beta, sweeps, ok


def run_naive(kernel, X, y, gamma, config):
    w = np.ones(X.shape[1])
    t0 = time.perf_counter()
    beta, kkt, sweeps, ok = kernel.cd_naive(
        np.asfortranarray(X), y, float(gamma), w,
        config.max_iter, config.tol)
    return time.perf_counter() - t0, beta, sweeps, ok


def bench_size(n, d, repeat, seed):
    rng = np.random.default_rng(seed)
    config = PenaltyConfig()
    rows = []
    for mode, runner in (("gram", run_gram), ("naive", run_naive)):
        t_py = t_c = 0.0
        drift = 0.0
        sweeps = 0
        for _ in range(repeat):
            X, y, gamma = make_instance(rng, n, d)
            dt, beta_py, sw, ok_py = runner(_kernel_py, X, y, gamma, config)
            t_py += dt
            sweeps = max(sweeps, sw)
            if compiled is not None:
                dt, beta_c, _, ok_c = runner(compiled, X, y, gamma, config)
                t_c += dt
                drift = max(drift, float(np.abs(beta_py - beta_c).max()))
                assert ok_py and ok_c
        rows.append((mode, t_py / repeat, t_c / repeat if compiled else None,
                     drift, sweeps))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="compare coordinate-descent kernels")
    parser.add_argument("--sizes", default="100x40,300x120,600x400,1000x800",
                        help="comma-separated n x d pairs")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if compiled is None:
        print("compiled kernel not importable; timing the fallback only")
    header = (f"{'size':>10}  {'mode':>5}  {'numpy (ms)':>11}  "
              f"{'compiled (ms)':>13}  {'speedup':>7}  {'max drift':>10}")
    print(header)
    print("-" * len(header))
    for size in args.sizes.split(","):
        n, d = (int(v) for v in size.lower().split("x"))
        for mode, t_py, t_c, drift, _ in bench_size(n, d, args.repeat,
                                                    args.seed):
            if t_c:
                print(f"{size:>10}  {mode:>5}  {1e3 * t_py:>11.2f}  "
                      f"{1e3 * t_c:>13.2f}  {t_py / t_c:>6.1f}x  "
                      f"{drift:>10.1e}")
            else:
                print(f"{size:>10}  {mode:>5}  {1e3 * t_py:>11.2f}  "
                      f"{'-':>13}  {'-':>7}  {'-':>10}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
