"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Prints one line per kernel with both timings, the speedup and the largest
absolute difference between the two backends' outputs.
"""

import argparse
import time

import numpy as np

from linelab.kernels import compiled_backend, python_backend

CAP = 1e7


def cases(n):
    rng = np.random.default_rng(0)
    xs4 = rng.uniform(-4, 4, n)
    xs1 = rng.uniform(-1, 1, n)
    return [
        ("phi_array", (0.0, 1.0, 0.5, 2.0, rng.uniform(-1, 2, n))),
        ("dphi_array", (0.0, 1.0, 0.5, 2.0, rng.uniform(-1, 2, n))),
        ("bump_array", (-1.0, 1.0, xs1)),
        ("bump_inv_array", (-1.0, 1.0, xs1)),
        ("stage_array", (1, 4, 1, 1.0, CAP, False, xs4)),
        ("stage_array[f4]", (4, 4, 1, 1.0, CAP, False, xs4)),
        ("stage_d_array", (2, 4, 1, 1.0, CAP, False, xs4)),
        ("stage_disp_array", (3, 4, 1, 1.0, CAP, False, xs4)),
    ]


def best(fn, args, repeat):
    out = None
    t = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        t = min(t, time.perf_counter() - t0)
    return t, np.asarray(out)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled_backend is None:
        print("compiled backend unavailable; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'kernel':18s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s} {'max diff':>10s}")
    for label, a in cases(args.n):
        name = label.split("[")[0]
        tp, yp = best(getattr(python_backend, name), a, args.repeat)
        tc, yc = best(getattr(compiled_backend, name), a, args.repeat)
        diff = float(np.nanmax(np.abs(yp - yc)))
        print(f"{label:18s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
