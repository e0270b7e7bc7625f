"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case is run on both backends, the results are compared, and the best
of N wall-clock timings is reported.
"""

import argparse
import timeit

import numpy as np

from rankone._kernels import _pykernels as py

try:
    from rankone._kernels import _ckernels as ck
except ImportError:
    ck = None

CASES = {
    "hc_coefficients K=2000": ("hc_coefficients", (4, 3, 0.5 - 0.25j, 2000, 0)),
    "mode_series K=300": ("mode_series_coefficients", (4, 3, 2.0, 12.0, 1.1 + 0.2j, 300)),
    "hyp2f1 z=0.95": ("hyp2f1_sum", (0.5 + 1j, 1.5 - 0.5j, 2.5 + 1j, 0.95, 1e-14, 100000)),
    "integrate t=0.001..10": ("integrate_radial", (
        2, 1, 0.0, 0.0, (1.3 + 0.2j) ** 2 + 4.0, 1e-3, 1.0 + 0j, 0j,
        list(np.arange(0.25, 10.0001, 0.25)), 1e-12, 1e-300, 1e-4, 200000)),
    "integrate backward 30..1 (8,7)": ("integrate_radial", (
        8, 7, 0.0, 0.0, (0.3 - 1j) ** 2 + 30.25, 30.0, 1e-60 + 0j, -1e-60 + 0j,
        [20.0, 10.0, 2.0, 1.0], 1e-12, 1e-300, 1e-2, 200000)),
}


def _first(out):
    return np.asarray(out[0], dtype=complex)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if ck is None:
        print("compiled extension not available; only the Python backend was timed")
    print(f"{'case':34s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s} {'max diff':>9s}")
    for name, (fn, fargs) in CASES.items():
        f_py = getattr(py, fn)
        t_py = min(timeit.repeat(lambda: f_py(*fargs), number=1, repeat=args.repeat))
        if ck is None:
            print(f"{name:34s} {t_py * 1e3:12.2f}")
            continue
        f_c = getattr(ck, fn)
        t_c = min(timeit.repeat(lambda: f_c(*fargs), number=1, repeat=args.repeat))
        a, b = _first(f_py(*fargs)), _first(f_c(*fargs))
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        print(f"{name:34s} {t_py * 1e3:12.2f} {t_c * 1e3:14.3f} {t_py / t_c:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
