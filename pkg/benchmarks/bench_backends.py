"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_backends.py [--repeat 5]

Both implementations are called directly, so the environment flag does not
matter here.  The first numba call is timed separately as compile time.
"""
import argparse
import time

import numpy as np

from jacobi_needlets import JacobiParams
from jacobi_needlets._kernels import IMPLEMENTATIONS
from jacobi_needlets.jacobi import recurrence_arrays


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(nmax, npts):
    a, b = recurrence_arrays(JacobiParams(0.5, -0.3), nmax)
    rng = np.random.default_rng(0)
    x = np.cos(np.linspace(0.0, np.pi, npts))
    y = rng.uniform(-1.0, 1.0, npts)
    coef = rng.uniform(0.0, 1.0, nmax + 1)
    n = min(nmax, 400)
    diag, off = a[:n].copy(), b[1:n].copy()
    return {
        "orthonormal_table": lambda impl: impl["orthonormal_table"](a, b, x),
        "kernel_pairs": lambda impl: impl["kernel_pairs"](a, b, coef, x, y),
        "ql_first_row": lambda impl: impl["ql_first_row"](diag, off, 50),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=512)
    ap.add_argument("--points", type=int, default=2048)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if "numba" not in IMPLEMENTATIONS:
        print("numba is not importable, only the numpy path can run")
    print(f"nmax={args.nmax} points={args.points} best of {args.repeat}")
    print(f"{'kernel':<20}{'numpy s':>12}{'numba s':>12}{'jit s':>10}{'speedup':>10}")
    for name, call in cases(args.nmax, args.points).items():
        t_np = best_of(lambda: call(IMPLEMENTATIONS["numpy"]), args.repeat)
        if "numba" in IMPLEMENTATIONS:
            t0 = time.perf_counter()
            call(IMPLEMENTATIONS["numba"])
            jit = time.perf_counter() - t0
            t_nb = best_of(lambda: call(IMPLEMENTATIONS["numba"]), args.repeat)
            print(f"{name:<20}{t_np:>12.4g}{t_nb:>12.4g}{jit:>10.3g}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<20}{t_np:>12.4g}{'-':>12}{'-':>10}{'-':>10}")


if __name__ == "__main__":
    main()
