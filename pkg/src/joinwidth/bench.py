"""Benchmark harness: run engines over instance suites and report CSV rows.

Every (instance, engine) pair yields one :class:`BenchRow`. Rows come back in
suite order whether or not a process pool is used.
"""
from __future__ import annotations

import csv
import dataclasses
import os
import subprocess
import sys
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from joinwidth.engines import (
    Verdict,
    exact_joinwidth,
    find_decomposition_dp,
    solve_variable_dp,
    solve_with_decomposition,
)
from joinwidth.errors import LimitExceeded
from joinwidth.generators import gen_random, gen_star, gen_tree_complete, gen_triangle, random_corpus
from joinwidth.relational import Instance
from joinwidth.width import count_width, width_base

COLUMNS = ("instance_id", "family", "engine", "verdict", "width", "wall_time", "peak_relation_size")
ENGINES = ("exact", "dp-cons", "dp-vars")


@dataclasses.dataclass(frozen=True)
class BenchCase:
    instance_id: str
    family: str
    instance: Instance
    omega: float


@dataclasses.dataclass(frozen=True)
class BenchRow:
    instance_id: str
    family: str
    engine: str
    verdict: str
    width: float | None
    wall_time: float
    peak_relation_size: int

    def as_csv(self) -> list[str]:
        width = "" if self.width is None else f"{self.width:.3f}"
        return [self.instance_id, self.family, self.engine, self.verdict, width,
                f"{self.wall_time:.6f}", str(self.peak_relation_size)]


def perf_instance(seed: int = 12) -> Instance:
    """The desk-scale performance instance: 12 constraints, 10 variables, Boolean domain."""
    return gen_random(seed, 10, 2, 12, (2, 3), 0.8)


def _suite_smoke() -> list[BenchCase]:
    cases = [BenchCase(f"triangle-{n}", "triangle", gen_triangle(n), 1.0) for n in (1, 2, 3, 5)]
    cases += [BenchCase(f"star-{w}", "star", gen_star(w), 1.0) for w in (2, 3, 4)]
    for i, inst in enumerate(random_corpus(8, seed=1)):
        cases.append(BenchCase(f"random-{i}", "random", inst, 1.0))
    return cases


def _suite_families() -> list[BenchCase]:
    path = [(i, i + 1) for i in range(4)]
    star = [(0, i) for i in range(1, 5)]
    return [
        BenchCase("triangle-3", "triangle", gen_triangle(3), 1.0),
        BenchCase("star-4", "star", gen_star(4), 1.0),
        BenchCase("path-4-d2", "tree-complete", gen_tree_complete(path, 2), 1.0),
        BenchCase("star-4-d3", "tree-complete", gen_tree_complete(star, 3), 1.0),
    ]


def _suite_perf() -> list[BenchCase]:
    return [BenchCase("random-12x10x2", "random", perf_instance(), 1.0)]


SUITES: dict[str, Callable[[], list[BenchCase]]] = {
    "smoke": _suite_smoke,
    "families": _suite_families,
    "perf": _suite_perf,
}


def load_suite(name: str) -> list[BenchCase]:
    try:
        return SUITES[name]()
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None


def run_case(case: BenchCase, engine: str) -> BenchRow:
    inst = case.instance
    base = width_base(inst)
    start = time.perf_counter()
    try:
        if engine == "exact":
            res = exact_joinwidth(inst)
            verdict = str(solve_with_decomposition(inst, res.decomposition).verdict)
            width, peak = res.width, res.peak_count
        elif engine == "dp-cons":
            out = find_decomposition_dp(inst, case.omega)
            if out.found:
                verdict = str(solve_with_decomposition(inst, out.decomposition).verdict)
            else:
                verdict = str(Verdict.WIDTH_EXCEEDED)
            width, peak = out.width, out.peak_relation_size
        elif engine == "dp-vars":
            out = solve_variable_dp(inst, case.omega)
            verdict = str(out.verdict)
            peak = out.peak_relation_size
            width = count_width(peak, base)
        else:
            raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    except LimitExceeded as exc:
        verdict, width, peak = f"LIMIT:{exc.limit}", None, 0
    elapsed = time.perf_counter() - start
    return BenchRow(case.instance_id, case.family, engine, verdict, width, elapsed, peak)


def _run_task(task: tuple[BenchCase, str]) -> BenchRow:
    return run_case(*task)


def run_suite(cases: Sequence[BenchCase], engines: Iterable[str] = ENGINES,
              workers: int = 1) -> list[BenchRow]:
    tasks = [(case, engine) for case in cases for engine in engines]
    if workers <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))


def write_csv(rows: Iterable[BenchRow], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(row.as_csv())


def kernel_timings(backend, repeats: int = 5, seed: int = 0) -> dict[str, float]:
    """Best-of-``repeats`` seconds per kernel call for one backend module."""
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 4, size=(200_000, 6)).astype(np.int64)
    left = np.sort(rng.integers(0, 50_000, size=100_000)).astype(np.int64)
    right = np.sort(rng.integers(0, 50_000, size=100_000)).astype(np.int64)
    m = 14
    feasible = rng.random(1 << m) < 0.3
    f = rng.integers(0, 100, size=1 << m).astype(np.int64)
    jobs = {
        "encode_rows": lambda: backend.encode_rows(rows, 4),
        "join_pairs": lambda: backend.join_pairs(left, right),
        "member_mask": lambda: backend.member_mask(left, right),
        "first_feasible_split": lambda: [backend.first_feasible_split(mask, feasible)
                                         for mask in range((1 << m) - 64, 1 << m)],
        "best_split": lambda: [backend.best_split(mask, f) for mask in range((1 << m) - 64, 1 << m)],
    }
    out = {}
    for name, job in jobs.items():
        job()
        best = float("inf")
        for _ in range(repeats):
            t = time.perf_counter()
            job()
            best = min(best, time.perf_counter() - t)
        out[name] = best
    return out


def suite_time_under(backend: str, suite: str) -> float:
    """Wall time of a full suite run in a fresh interpreter pinned to ``backend``."""
    env = dict(os.environ)
    if backend == "numpy":
        env["JOINWIDTH_DISABLE_NUMBA"] = "1"
    else:
        env.pop("JOINWIDTH_DISABLE_NUMBA", None)
    code = (
        "import time\n"
        "from joinwidth import bench, kernels\n"
        f"cases = bench.load_suite({suite!r})\n"
        "bench.run_suite(cases[:1])\n"
        "t = time.perf_counter()\n"
        "bench.run_suite(cases)\n"
        "print(kernels.BACKEND, time.perf_counter() - t)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    if out[0] != backend:
        raise RuntimeError(f"requested backend {backend} but the child ran {out[0]}")
    return float(out[1])


__all__ = [
    "BenchCase",
    "BenchRow",
    "COLUMNS",
    "ENGINES",
    "SUITES",
    "kernel_timings",
    "load_suite",
    "perf_instance",
    "run_case",
    "run_suite",
    "suite_time_under",
    "write_csv",
]
