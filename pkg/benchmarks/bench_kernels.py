"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

For each case both backends run the same trial range, the outputs are compared
element by element, and the best of ``--repeat`` wall times is reported.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from randpart import _fallback

try:
    from randpart import _core
except ImportError:
    _core = None

CASES = [
    # (kernel, n, t, trials)
    ("sup_batch", 1_000, 4, 200),
    ("sup_batch", 100_000, 10, 3),
    ("inf_batch", 1_000, 2, 200),
    ("inf_batch", 100_000, 3, 3),
    ("join_maps", 100_000, 8, 1),
]
QUICK = [
    ("sup_batch", 1_000, 4, 20),
    ("inf_batch", 1_000, 2, 20),
    ("join_maps", 10_000, 4, 1),
]


def _maps(n, t):
    """Fixed input for join_maps, drawn once and left out of the timings."""
    state = np.array(_fallback.trial_state(0, 0), dtype=np.uint64)
    maps = np.empty(n * t, dtype=np.int64)
    (_core or _fallback).fill_bounded(state, n, maps)
    return maps.reshape(t, n)


def _run(module, kernel, n, t, trials, maps=None):
    if kernel == "join_maps":
        return [np.asarray(module.join_maps(n, maps))]
    cols = [np.zeros(trials, dtype=np.int64) for _ in range(3)]
    getattr(module, kernel)(n, t, 0, 0, trials, *cols)
    return cols


def best_time(module, case, repeat, maps=None):
    best, out = float("inf"), None
    for _ in range(repeat):
        start = time.perf_counter()
        out = _run(module, *case, maps=maps)
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="small cases only")
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'kernel':<10} {'n':>8} {'t':>3} {'trials':>6} {'cython s':>10} {'python s':>10} {'speedup':>8}  same")
    for case in QUICK if args.quick else CASES:
        kernel, n, t, trials = case
        maps = _maps(n, t) if kernel == "join_maps" else None
        fast, a = best_time(_core, case, args.repeat, maps)
        slow, b = best_time(_fallback, case, 1, maps)
        same = all(np.array_equal(x, y) for x, y in zip(a, b))
        print(f"{kernel:<10} {n:>8} {t:>3} {trials:>6} {fast:>10.4f} {slow:>10.4f} {slow / fast:>7.0f}x  {same}")
        if not same:
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
