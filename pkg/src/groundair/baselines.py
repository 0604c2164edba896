"""Comparison planners: exhaustive search, fixed-tour DFS and the naive plan.

The exhaustive planners double as ground truth for the tree search. They
score candidates with the same kernels as :mod:`groundair.simulator`, and
every returned plan is re-simulated before it leaves this module.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import MissionInstance, check_tour
from .simulator import (
    Plan,
    advance,
    kernel_params,
    phase_kernel,
    prepare,
    return_kernel,
    simulate,
    simulate_naive,
    site_constants,
)
from .tsp import CapacityError, solve_auto

INF = math.inf
OK = "OK"
NO_PLAN = "NO_PLAN"

BRUTE_MAX_SITES = 6
BRUTE_MAX_LEVELS = 5
DFS_MAX_LEAVES = 10**7


@dataclass
class BaselineStats:
    nodes: int = 0               # phases evaluated
    leaves: int = 0              # complete allocation vectors reached
    pruned_constraint: int = 0
    pruned_optimality: int = 0
    complete: bool = True        # False when a time limit cut the enumeration short
    wall_time: float = 0.0


@dataclass
class BaselineResult:
    status: str
    plan: Optional[Plan]
    stats: BaselineStats

    @property
    def total_time(self) -> float:
        return self.plan.total_time if self.plan is not None and self.status == OK else INF

    @property
    def allocations(self):
        return self.plan.allocations if self.plan is not None else None


def _checked(inst, tour, allocations, expected):
    plan = simulate(inst, tour, allocations)
    if not plan.feasible or plan.total_time != expected:
        raise RuntimeError("re-simulation disagrees with the search kernels")
    return plan


def tsp_dfs(inst: MissionInstance, tour: Optional[Sequence[int]] = None, prune: bool = True,
            time_limit: Optional[float] = None, guard: bool = True) -> BaselineResult:
    """Optimal allocations on a fixed tour by depth-first enumeration.

    Levels are tried largest first. With ``prune`` a prefix is dropped as soon
    as it breaks an energy constraint or its elapsed time reaches the
    incumbent; without it every allocation vector is simulated to the end.
    Both settings return the first optimum in enumeration order.
    """
    t0 = time.perf_counter()
    n = inst.n_sites
    n_levels = len(inst.levels)
    if guard and n_levels ** n > DFS_MAX_LEAVES:
        raise CapacityError(
            f"tsp_dfs enumerates {n_levels}^{n} allocation vectors, above the {DFS_MAX_LEAVES:.0e} guard")
    if tour is None:
        tour = solve_auto(inst.start, inst.sites).order
    check_tour(tour, n)
    tour = tuple(tour)
    ctx = prepare(inst)
    kp = kernel_params(ctx.params)
    sx, sy = ctx.sx, ctx.sy
    centers = [ctx.sites[s] for s in tour]
    anchors = centers[1:] + [(sx, sy)]
    order = range(n_levels - 1, -1, -1)
    consts = [[site_constants(centers[k], ctx.allocs[li], ctx.radii[li], anchors[k]) for li in range(n_levels)]
              for k in range(n)]
    deadline = None if time_limit is None else t0 + time_limit
    stats = BaselineStats()
    best = [INF, None]
    path = [0] * n
    step = advance if prune else _full_step

    def visit(k, px, py, eg, ea, t, ok):
        if k == n:
            stats.leaves += 1
            fin = return_kernel(kp, sx, sy, px, py, eg, ea, t)
            if ok and fin[0] is None and fin[5] < best[0]:
                best[0] = fin[5]
                best[1] = tuple(path)
            return True
        if deadline is not None and time.perf_counter() > deadline:
            stats.complete = False
            return False
        row = consts[k]
        for li in order:
            stats.nodes += 1
            res = step(kp, sx, sy, px, py, eg, ea, t, row[li])
            good = ok and res[0] is None
            if prune:
                if not good:
                    stats.pruned_constraint += 1
                    continue
                if res[5] >= best[0]:
                    stats.pruned_optimality += 1
                    continue
            path[k] = li
            if not visit(k + 1, res[1], res[2], res[3], res[4], res[5], good):
                return False
        return True

    visit(0, sx, sy, ctx.params.ugv_capacity, ctx.params.uav_capacity, 0.0, True)
    stats.wall_time = time.perf_counter() - t0
    if best[1] is None:
        return BaselineResult(NO_PLAN, None, stats)
    allocations = tuple(ctx.levels[i] for i in best[1])
    return BaselineResult(OK, _checked(inst, tour, allocations, best[0]), stats)


def _full_step(kp, sx, sy, px, py, eg, ea, t, sc):
    # like advance(), but a failed phase still yields its end state
    res = phase_kernel(kp, sx, sy, px, py, eg, ea, t, sc)
    return res[0], res[5], res[6], res[16], res[17], res[19]


def brute_force(inst: MissionInstance, upper_bound: float = INF) -> BaselineResult:
    """Best plan over every (tour, allocation vector) pair.

    Tours are enumerated in lexicographic order with shared prefixes, so a
    phase is evaluated once per distinct (tour prefix, next site, levels).
    Ties in mission time go to the lexicographically smallest tour, then to
    the larger allocations. ``upper_bound`` (e.g. a known feasible plan's
    time) only speeds things up; it never changes the answer.
    """
    t0 = time.perf_counter()
    n = inst.n_sites
    n_levels = len(inst.levels)
    if n > BRUTE_MAX_SITES or n_levels > BRUTE_MAX_LEVELS:
        raise CapacityError(
            f"brute_force handles at most {BRUTE_MAX_SITES} sites and {BRUTE_MAX_LEVELS} levels "
            f"(got {n} and {n_levels}); use tsp_dfs or the tree search")
    ctx = prepare(inst)
    kp = kernel_params(ctx.params)
    sx, sy = ctx.sx, ctx.sy
    home = (sx, sy)
    order = range(n_levels - 1, -1, -1)
    # consts[site][next site or n for home][level]
    consts = [[[site_constants(ctx.sites[s], ctx.allocs[li], ctx.radii[li],
                               ctx.sites[j] if j < n else home) for li in range(n_levels)]
               for j in range(n + 1)] for s in range(n)]
    stats = BaselineStats()
    bound = [upper_bound]
    best = [None]          # (T, tour, negated level indices): larger levels win ties
    sites_path = [0] * n
    levels_path = [0] * n

    def consider(total):
        key = (total, tuple(sites_path), tuple(-li for li in levels_path))
        if best[0] is None or key < best[0]:
            best[0] = key
            if total < bound[0]:
                bound[0] = total

    def visit(k, cur, remaining, px, py, eg, ea, t):
        # the phase at position k needs its successor as the chord exit anchor
        nexts = sorted(remaining) if remaining else [n]
        for nxt in nexts:
            row = consts[cur][nxt]
            rest = remaining - {nxt} if nxt < n else remaining
            for li in order:
                stats.nodes += 1
                res = advance(kp, sx, sy, px, py, eg, ea, t, row[li])
                if res[0] is not None:
                    stats.pruned_constraint += 1
                    continue
                if res[5] > bound[0]:
                    stats.pruned_optimality += 1
                    continue
                levels_path[k] = li
                if nxt == n:
                    stats.leaves += 1
                    fin = return_kernel(kp, sx, sy, res[1], res[2], res[3], res[4], res[5])
                    if fin[0] is None and fin[5] <= bound[0]:
                        consider(fin[5])
                else:
                    sites_path[k + 1] = nxt
                    visit(k + 1, nxt, rest, res[1], res[2], res[3], res[4], res[5])

    all_sites = frozenset(range(n))
    for first in range(n):
        sites_path[0] = first
        visit(0, first, all_sites - {first}, sx, sy, ctx.params.ugv_capacity, ctx.params.uav_capacity, 0.0)
    stats.wall_time = time.perf_counter() - t0
    if best[0] is None:
        return BaselineResult(NO_PLAN, None, stats)
    total, tour, neg = best[0]
    allocations = tuple(ctx.levels[-x] for x in neg)
    return BaselineResult(OK, _checked(inst, tour, allocations, total), stats)


def naive(inst: MissionInstance, tour: Optional[Sequence[int]] = None) -> BaselineResult:
    """Carry the UAV through every site centre and dwell there for the survey."""
    t0 = time.perf_counter()
    if tour is None:
        tour = solve_auto(inst.start, inst.sites).order
    plan = simulate_naive(inst, tour)
    stats = BaselineStats(nodes=inst.n_sites, leaves=1, wall_time=time.perf_counter() - t0)
    return BaselineResult(OK if plan.feasible else NO_PLAN, plan, stats)
