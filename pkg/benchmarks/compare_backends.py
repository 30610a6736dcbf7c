"""Time the numpy and numba kernels side by side.

Usage::

    python benchmarks/compare_backends.py [--repeats 5] [--suite smoke] [--out timings.csv]
"""
from __future__ import annotations

import argparse
import csv

from joinwidth import bench
from joinwidth.kernels import numba_backend, numpy_backend


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--suite", choices=sorted(bench.SUITES), default="smoke")
    p.add_argument("--out", help="optional CSV with one row per measurement")
    args = p.parse_args()
    if numba_backend is None:
        raise SystemExit("numba kernels are disabled; unset JOINWIDTH_DISABLE_NUMBA")

    rows = []
    slow = bench.kernel_timings(numpy_backend, args.repeats)
    fast = bench.kernel_timings(numba_backend, args.repeats)
    for name in slow:
        rows.append((f"kernel:{name}", slow[name], fast[name]))
    rows.append((f"suite:{args.suite}", bench.suite_time_under("numpy", args.suite),
                 bench.suite_time_under("numba", args.suite)))

    print(f"{'case':<28}  {'numpy s':>10}  {'numba s':>10}  {'speedup':>8}")
    for name, a, b in rows:
        print(f"{name:<28}  {a:>10.5f}  {b:>10.5f}  {a / b:>7.1f}x")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("case", "numpy_seconds", "numba_seconds"))
            writer.writerows(rows)


if __name__ == "__main__":
    main()
