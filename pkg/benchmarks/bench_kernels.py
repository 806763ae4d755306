"""Time the compiled and pure-Python kernel backends on identical inputs.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
timed on a representative array; the table lists the best-of-``N`` time per
backend, the speed-up and the largest relative difference between outputs.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from pvqed import kernels
from pvqed.pvscheme import make_scheme


def _cases():
    s = make_scheme(1.0, 2.0, 3.0)
    msq = np.asarray(s.masses_sq)
    c = np.asarray(s.coeffs)
    mom = (s.moment4, s.moment6, s.moment8)
    x = np.logspace(-4, 2, 20_000)
    ch = np.cosh(np.linspace(0.0, 10.0, 20_000))
    xj = np.array([0.7, 1.4, 2.1])
    return {
        "coth_m1": lambda k: k.coth_m1(x),
        "coth_m1_sub": lambda k: k.coth_m1_sub(x),
        "pv_exp_sum": lambda k: k.pv_exp_sum(x, msq, c, *mom),
        "pv_log_sum": lambda k: k.pv_log_sum(x, msq, c, *mom),
        "theta2": lambda k: k.theta2(x, 1.0),
        "theta2_dp": lambda k: k.theta2_dp(x, 1.0),
        "alt_gauss_sum": lambda k: k.alt_gauss_sum(x, 1.0),
        "pv_fermi": lambda k: k.pv_fermi(ch, xj, c),
        "pv_gt_cosh": lambda k: k.pv_gt_cosh(ch, xj, c),
        "bessel_k01": lambda k: k.bessel_k01(x)[0],
    }


def _maxrel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    scale = np.maximum(np.abs(b), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    py = kernels.backend_module("python")
    try:
        cy = kernels.backend_module("cython")
    except ImportError:
        cy = None
        print("compiled kernels not built; timing the Python backend only")

    print(f"{'kernel':<15}{'python [ms]':>13}{'cython [ms]':>13}{'speed-up':>10}{'max rel diff':>14}")
    for name, call in _cases().items():
        t_py = min(timeit.repeat(lambda: call(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<15}{t_py:13.3f}")
            continue
        t_cy = min(timeit.repeat(lambda: call(cy), number=1, repeat=args.repeat)) * 1e3
        diff = _maxrel(call(cy), call(py))
        print(f"{name:<15}{t_py:13.3f}{t_cy:13.3f}{t_py / t_cy:10.1f}{diff:14.1e}")


if __name__ == "__main__":
    main()
