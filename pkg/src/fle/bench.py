"""Scaling benchmark: greedy decision against the quadratic oracle.

Each size uses ``m = n``.  One warm-up run is discarded, then the median
wall time over ``reps`` runs is reported.  The oracle only runs while
``n * m <= ORACLE_CELL_CAP``.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from dataclasses import dataclass
from statistics import median
from typing import Callable, Iterable, List, Sequence, TextIO, Tuple

import numpy as np

from fle.freespace import decide_alt_godau
from fle.generate import GenSpec, random_walk, sample_in_ball
from fle.geometry import PolygonalCurve
from fle.greedy import decide_greedy

HEADER = ("algo", "n", "m", "ns", "result", "work")
ORACLE_CELL_CAP = 2 ** 24
ALGORITHMS = ("greedy", "oracle", "query")
BENCH_EPS = 1.0


@dataclass(frozen=True)
class BenchRecord:
    algo: str
    n: int
    m: int
    ns: int
    result: str
    work: int

    def row(self) -> Tuple:
        return (self.algo, self.n, self.m, self.ns, self.result, self.work)


def bench_instance(n: int, seed: int) -> Tuple[PolygonalCurve, PolygonalCurve]:
    """A Yes pair at ``eps = 1``: a walk with edges in [7, 12] and a copy of it
    with every vertex moved by at most ``eps / 2``.  A Yes verdict scans both
    curves to the end, so timings measure the full work."""
    rng = np.random.default_rng(seed)
    walk = random_walk(GenSpec(n=n, d=2, min_edge=7.0, max_edge=12.0, turn_cap=0.5, seed=seed), rng)
    near = walk + sample_in_ball(rng, 2, 0.5 * BENCH_EPS, n)
    return PolygonalCurve(walk), PolygonalCurve(near)


def _timed(fn: Callable[[], Tuple[str, int]], reps: int) -> Tuple[int, str, int]:
    fn()  # warm-up, also triggers any pending compilation
    times = []
    result, work = "", 0
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        result, work = fn()
        times.append(time.perf_counter_ns() - t0)
    return int(median(times)), result, work


def _verdict(flag: bool) -> str:
    return "yes" if flag else "no"


def run_bench(sizes: Sequence[int], reps: int, seed: int,
              algos: Iterable[str] = ("greedy", "oracle")) -> List[BenchRecord]:
    algos = tuple(algos)
    for a in algos:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}")
    if reps < 1:
        raise ValueError("reps must be at least 1")
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    records = []
    for n in sizes:
        P, Q = bench_instance(n, seed)
        m = Q.n
        if "greedy" in algos:
            def run_greedy():
                dec = decide_greedy(P, Q, BENCH_EPS)
                return _verdict(dec.verdict), dec.work

            ns, res, work = _timed(run_greedy, reps)
            records.append(BenchRecord("greedy", n, m, ns, res, work))
        if "oracle" in algos and n * m <= ORACLE_CELL_CAP:
            def run_oracle():
                return _verdict(decide_alt_godau(P, Q, BENCH_EPS)), (n - 1) * (m - 1)

            ns, res, work = _timed(run_oracle, reps)
            records.append(BenchRecord("oracle", n, m, ns, res, work))
        if "query" in algos:
            from fle.query import QueryStats, build_index, decide_query

            ix = build_index(P)

            def run_query():
                st = QueryStats()
                return _verdict(decide_query(ix, Q, BENCH_EPS, st).verdict), st.visits

            ns, res, work = _timed(run_query, reps)
            records.append(BenchRecord("query", n, m, ns, res, work))
    return records


def write_csv(records: Iterable[BenchRecord], out: TextIO = sys.stdout) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(r.row())


def read_csv(text: str) -> List[BenchRecord]:
    rows = list(csv.reader(text.splitlines()))
    if not rows or tuple(rows[0]) != HEADER:
        raise ValueError("missing or unexpected bench CSV header")
    return [BenchRecord(r[0], int(r[1]), int(r[2]), int(r[3]), r[4], int(r[5])) for r in rows[1:]]


def fit_slope(records: Iterable[BenchRecord], algo: str) -> float:
    """Least-squares slope of ``log ns`` against ``log n`` for one algorithm."""
    pts = [(math.log(r.n), math.log(r.ns)) for r in records if r.algo == algo]
    if len(pts) < 2:
        raise ValueError(f"need at least two sizes for {algo!r}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])
