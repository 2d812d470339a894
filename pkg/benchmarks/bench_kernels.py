"""Benchmark the numba row-loop kernel against the pure-numpy fallback.

Builds a large hydrogen-like (state, field) grid, times both backends on
identical inputs and reports throughput, speedup and the worst cross-
backend disagreement of the log rates.

    python benchmarks/bench_kernels.py --rows 1000000 --repeats 5

Run with CROSSFIELD_DISABLE_NUMBA=1 to check the numpy path is the one
the package would actually use on a numba-less install (the numba column
is then skipped).
"""

import argparse
import time

import numpy as np

from crossfield import kernels
from crossfield.core import HydrogenicState, resolve_state


def build_grid(rows: int):
    zas = np.linspace(0.05, 0.9, 200)
    states = [resolve_state(HydrogenicState(float(za))) for za in zas]
    idx = np.arange(rows) % len(states)
    eps = np.array([states[i].epsilon for i in range(len(states))])[idx]
    q1 = np.array([states[i].one_minus_eps_sq for i in range(len(states))])[idx]
    za = np.array([states[i].zalpha for i in range(len(states))])[idx]
    eta = np.array([states[i].eta for i in range(len(states))])[idx]
    c2 = np.array([states[i].c_lambda_sq for i in range(len(states))])[idx]
    f = np.geomspace(1e-4, 0.2, rows)
    return eps, q1, za, eta, c2, f


def time_fn(fn, args, repeats: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=1_000_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    grid = build_grid(args.rows)
    print("rows=%d repeats=%d active_backend=%s"
          % (args.rows, args.repeats, kernels.ACTIVE_BACKEND))

    t_np, res_np = time_fn(kernels._rate_grid_numpy, grid, args.repeats)
    print("%-8s %8.3f ms   %10.2f Mrows/s"
          % ("numpy", 1e3 * t_np, args.rows / t_np / 1e6))

    if kernels.ACTIVE_BACKEND != "numba":
        print("numba backend unavailable or disabled; numpy timing only")
        return

    kernels.rate_grid(*(a[:16] for a in grid))  # compile before timing
    t_nb, res_nb = time_fn(kernels.rate_grid, grid, args.repeats)
    print("%-8s %8.3f ms   %10.2f Mrows/s   speedup x%.2f"
          % ("numba", 1e3 * t_nb, args.rows / t_nb / 1e6, t_np / t_nb))

    dev = np.max(np.abs(res_nb.ln_w - res_np.ln_w)
                 / np.maximum(1.0, np.abs(res_np.ln_w)))
    flags_equal = bool(np.array_equal(res_nb.flags, res_np.flags))
    print("max relative |delta ln w| between backends: %.3g" % dev)
    print("flag bitmasks identical: %s" % flags_equal)


if __name__ == "__main__":
    main()
