"""Benchmark harness: seeded instances, every applicable planner, one CSV row each."""
from __future__ import annotations

import csv
import math
import os
import time
from typing import Iterable, Optional, Sequence

from .baselines import BRUTE_MAX_LEVELS, BRUTE_MAX_SITES, DFS_MAX_LEAVES, brute_force, naive, tsp_dfs
from .generate import generate
from .mcts import MctsConfig, search
from .model import DEFAULT_LEVELS
from .tsp import solve_auto

COLUMNS = ("N", "trial", "algo", "T_total", "T_run", "feasible", "gap_vs_best")
ALGOS = ("brute", "dfs", "mcts", "naive")


def trial_seed(seed: int, n: int, trial: int) -> int:
    return seed * 1_000_003 + n * 1009 + trial


def applicable(algo: str, n: int, n_levels: int) -> bool:
    if algo == "brute":
        return n <= BRUTE_MAX_SITES and n_levels <= BRUTE_MAX_LEVELS
    if algo == "dfs":
        return n_levels ** n <= DFS_MAX_LEAVES
    return True


def run_trial(n: int, trial: int, seed: int = 0, algos: Sequence[str] = ALGOS,
              iterations: int = 10_000, levels=DEFAULT_LEVELS) -> list[dict]:
    inst = generate(n, seed=trial_seed(seed, n, trial), levels=levels)
    t0 = time.perf_counter()
    tour = solve_auto(inst.start, inst.sites).order
    t_tour = time.perf_counter() - t0
    rows = []
    for algo in algos:
        if not applicable(algo, n, len(levels)):
            continue
        t0 = time.perf_counter()
        if algo == "brute":
            res = brute_force(inst)
            extra = 0.0
        else:
            extra = t_tour
            if algo == "dfs":
                res = tsp_dfs(inst, tour)
            elif algo == "mcts":
                res = search(inst, tour, MctsConfig(iterations=iterations, seed=trial))
            else:
                res = naive(inst, tour)
        t_run = time.perf_counter() - t0 + extra
        feasible = res.status == "OK"
        rows.append({"N": n, "trial": trial, "algo": algo,
                     "T_total": res.total_time if feasible else math.inf,
                     "T_run": t_run, "feasible": feasible})
    best = min((r["T_total"] for r in rows), default=math.inf)
    for r in rows:
        r["gap_vs_best"] = r["T_total"] / best - 1.0 if r["feasible"] else math.inf
    return rows


def run(sites: Iterable[int], trials: int, seed: int = 0, algos: Sequence[str] = ALGOS,
        iterations: int = 10_000, levels=DEFAULT_LEVELS, progress=None) -> list[dict]:
    rows = []
    for n in sites:
        for trial in range(trials):
            rows.extend(run_trial(n, trial, seed, algos, iterations, levels))
            if progress is not None:
                progress(n, trial)
    return rows


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "" if not math.isfinite(v) else repr(v)
    return str(v)


def _key(row: dict):
    return int(row["N"]), int(row["trial"]), row["algo"]


def write_csv(rows: list[dict], path: Optional[str], append: bool = False, stream=None) -> None:
    """Write rows sorted by (N, trial, algo); ``append`` merges with an existing file.

    A row already present for the same (N, trial, algo) is replaced.
    """
    merged = {}
    if append and path is not None and os.path.exists(path):
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                merged[_key(row)] = {k: row[k] for k in COLUMNS}
    for row in rows:
        merged[_key(row)] = {k: _fmt(row[k]) for k in COLUMNS}
    ordered = [merged[k] for k in sorted(merged)]

    def emit(fh):
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(ordered)

    if path is None:
        emit(stream)
    else:
        with open(path, "w", newline="") as fh:
            emit(fh)
