"""Timing comparison of the compiled and pure transport kernels.

Runs identical workloads through both backends: direct series
summation inside the convergence disc, and the staged path transport
that carries the whole scalar stack to points outside it.

Usage: python3 benchmarks/bench_kernel.py [--weight 5] [--traces 40]
"""

import argparse
import time

from polyreg._kernel_py import (
    li_series as py_li,
    path_state as py_path,
    sv_direct_state,
)
from polyreg.exact import beta

try:
    from polyreg._svkernel import li_series as cy_li, path_state as cy_path

    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False


def series_workload(li, reps):
    z = 0.41 + 0.33j
    acc = 0j
    for n in range(2, 8):
        for _ in range(reps):
            acc += li(n, z, 1e-16)
    return acc


def path_workload(path, weight, betas, traces):
    # transport from the base-point state computed once by the series
    state = sv_direct_state(weight, betas, 0.5, 1e-16)
    acc = 0j
    for k in range(traces):
        target = 2.0 + 0.5j * (k + 1) / traces
        nodes = [0.5, 0.5 + 0.9j, target]
        acc += path(weight, betas, nodes, 192, state[1:])[-1]
    return acc


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--weight", type=int, default=5)
    ap.add_argument("--traces", type=int, default=40)
    ap.add_argument("--series-reps", type=int, default=400)
    args = ap.parse_args()

    betas = [float(beta(k)) for k in range(args.weight + 1)]

    rows = []
    t_py, ref = timed(series_workload, py_li, args.series_reps)
    row = ["series x%d" % args.series_reps, t_py, None]
    if HAVE_COMPILED:
        t_cy, got = timed(series_workload, cy_li, args.series_reps)
        assert abs(got - ref) < 1e-12, "backend mismatch"
        row[2] = t_cy
    rows.append(row)

    t_py, ref = timed(path_workload, py_path, args.weight, betas, args.traces)
    row = ["path x%d (weight %d)" % (args.traces, args.weight), t_py, None]
    if HAVE_COMPILED:
        t_cy, got = timed(path_workload, cy_path, args.weight, betas, args.traces)
        assert abs(got - ref) < 1e-9, "backend mismatch"
        row[2] = t_cy
    rows.append(row)

    print("%-28s %12s %12s %9s" % ("workload", "pure (s)", "compiled (s)", "speedup"))
    for name, t_py, t_cy in rows:
        if t_cy is None:
            print("%-28s %12.4f %12s %9s" % (name, t_py, "n/a", "n/a"))
        else:
            print("%-28s %12.4f %12.4f %8.1fx" % (name, t_py, t_cy, t_py / t_cy))
    if not HAVE_COMPILED:
        print("compiled backend not built; only the pure kernel was timed")


if __name__ == "__main__":
    main()
