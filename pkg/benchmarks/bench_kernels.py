"""Benchmark the jitted kernels against the pure-numpy fallback.

Runs each hot kernel on realistic sizes under both paths by re-importing
zakvmo._kernels in a subprocess with ZAKVMO_NO_NUMBA toggled, then prints a
side-by-side table.  Usage:

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, os, sys, time
import numpy as np
from zakvmo import _kernels

repeat = int(sys.argv[1])
rng = np.random.default_rng(42)
results = {"using_numba": _kernels.USING_NUMBA, "times": {}}

def bench(name, fn, *args):
    fn(*args)  # warm-up (JIT compile on the numba path)
    best = min(
        (lambda t0: (fn(*args), time.perf_counter() - t0)[1])(time.perf_counter())
        for _ in range(repeat)
    )
    results["times"][name] = best

# oscillation scan: 256x256 window, 16x16 cubes at every anchor
W = rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256))
c = np.zeros((257, 257), dtype=complex)
np.cumsum(np.cumsum(W, axis=0), axis=1, out=c[1:, 1:])
M = (c[16:, 16:] - c[:-16, 16:] - c[16:, :-16] + c[:-16, :-16]) / 256.0
bench("osc_scan 256^2 s=16", _kernels.osc_scan, W, M, 16, 16, 1)

c8 = (c[8:, 8:] - c[:-8, 8:] - c[8:, :-8] + c[:-8, :-8]) / 64.0
bench("osc_scan 256^2 s=8", _kernels.osc_scan, W, M if False else c8, 8, 8, 1)

# banded pair sum: 8192 samples (128 units at S=64)
v = np.ascontiguousarray(rng.standard_normal(8192) + 0j)
bench("gagliardo 8192 pts", _kernels.gagliardo_pairs, v, 1.0 / 64, 1, 2.0)

print(json.dumps(results))
"""


def run_path(disable_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable_numba:
        env["ZAKVMO_NO_NUMBA"] = "1"
    else:
        env.pop("ZAKVMO_NO_NUMBA", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    numba_res = run_path(False, args.repeat)
    numpy_res = run_path(True, args.repeat)
    if not numba_res["using_numba"]:
        print("warning: numba unavailable; both columns are the numpy path")

    print(f"{'kernel':28s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name in numba_res["times"]:
        tn = numba_res["times"][name]
        tp = numpy_res["times"][name]
        print(f"{name:28s} {tn * 1e3:10.2f}ms {tp * 1e3:10.2f}ms {tp / tn:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
