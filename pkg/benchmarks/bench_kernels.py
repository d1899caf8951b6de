"""Numba vs numpy timings for the three hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

The backend is chosen per call from BERGMAN_LAB_DISABLE_NUMBA, so both are
timed in one process.  The first jitted call is reported separately as the
compile (or cache load) cost.
"""

import argparse
import json
import os
import time

import numpy as np

from bergman_lab import _kernels
from bergman_lab._accel import HAVE_NUMBA


def _cases(rng):
    z = rng.standard_normal((400, 2)) + 1j * rng.standard_normal((400, 2))
    z *= 0.9 / np.linalg.norm(z, axis=1, keepdims=True)
    w = rng.standard_normal((2000, 2)) + 1j * rng.standard_normal((2000, 2))
    w *= 0.95 / np.linalg.norm(w, axis=1, keepdims=True)
    return {
        "gauss_series": lambda: _kernels.gauss_series(0.7, 1.3, 2.0, 0.999),
        "coeff_square_sum": lambda: _kernels.coeff_square_sum(0.8, 3, 10 ** 6),
        "kernel_row_means": lambda: _kernels.kernel_row_means(z, w, 2.5),
    }


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run(repeat=5, seed=0):
    cases = _cases(np.random.default_rng(seed))
    rows = []
    for name, fn in cases.items():
        os.environ["BERGMAN_LAB_DISABLE_NUMBA"] = "1"
        t_np, v_np = _time(fn, repeat)
        row = {"kernel": name, "numpy_s": t_np}
        if HAVE_NUMBA:
            os.environ["BERGMAN_LAB_DISABLE_NUMBA"] = "0"
            t0 = time.perf_counter()
            fn()
            row["first_call_s"] = time.perf_counter() - t0
            t_nb, v_nb = _time(fn, repeat)
            row["numba_s"] = t_nb
            row["speedup"] = t_np / t_nb
            row["max_abs_diff"] = float(np.max(np.abs(np.asarray(v_np) - np.asarray(v_nb))))
        rows.append(row)
    os.environ.pop("BERGMAN_LAB_DISABLE_NUMBA", None)
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None, help="also write the rows here")
    args = ap.parse_args()
    rows = run(args.repeat, args.seed)
    print(f"{'kernel':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'|diff|':>11}")
    for r in rows:
        nb = r.get("numba_s", float("nan"))
        print(f"{r['kernel']:<18}{r['numpy_s']:>12.4g}{nb:>12.4g}"
              f"{r.get('speedup', float('nan')):>10.1f}{r.get('max_abs_diff', float('nan')):>11.2e}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
