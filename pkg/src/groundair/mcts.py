"""Monte-Carlo Tree Search over per-site UAV energy levels along a fixed tour.

Tree depth k holds the level chosen for the k-th site of the tour. Each
node caches the vehicles' state after its phase, so selection and expansion
never re-simulate a prefix. Rollouts draw uniformly among admissible levels
and stop early when a vehicle runs dry; such rollouts only bump visit
counts. Nodes whose elapsed time already reaches the incumbent, or whose
phase breaks an energy constraint, are pruned and never selected again.
"""
from __future__ import annotations

import gc
import math
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .model import MissionInstance, check_tour
from .simulator import (
    Failure,
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

INF = math.inf
NO_PLAN = "NO_PLAN"
OK = "OK"


@dataclass(frozen=True)
class MctsConfig:
    iterations: int = 10_000
    exploration: float = 1.414
    reward_scale: Optional[float] = None   # None: naive plan's mission time on the same tour
    seed: int = 0
    time_limit: Optional[float] = None     # seconds, on top of the iteration budget

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.exploration < 0:
            raise ValueError("exploration constant must be >= 0")
        if self.reward_scale is not None and not self.reward_scale > 0:
            raise ValueError("reward_scale must be > 0")


class SearchNode:
    __slots__ = ("parent", "depth", "level_idx", "px", "py", "eg", "ea", "t",
                 "children", "n", "alpha", "pruned", "total")

    def __init__(self, parent, depth, level_idx, px, py, eg, ea, t):
        self.parent = parent
        self.depth = depth
        self.level_idx = level_idx
        self.px = px
        self.py = py
        self.eg = eg
        self.ea = ea
        self.t = t
        self.children = None        # list once expanded
        self.n = 0
        self.alpha = 0.0
        self.pruned = False
        self.total = None           # mission time, terminal nodes only

    @property
    def expanded(self) -> bool:
        return self.children is not None

    def path_levels(self) -> list[int]:
        out = []
        node = self
        while node.parent is not None:
            out.append(node.level_idx)
            node = node.parent
        out.reverse()
        return out


@dataclass
class SearchStats:
    iterations: int = 0
    nodes: int = 1
    pruned_constraint: int = 0
    pruned_optimality: int = 0
    complete_rollouts: int = 0
    early_rollouts: int = 0
    exhausted: bool = False
    wall_time: float = 0.0
    incumbent_history: list = field(default_factory=list)   # (iteration, mission time)


@dataclass
class SearchResult:
    status: str
    allocations: Optional[tuple]
    plan: Optional[Plan]
    stats: SearchStats
    tree: Optional[SearchNode] = None   # root of the final search tree

    @property
    def total_time(self) -> float:
        return self.plan.total_time if self.plan is not None else INF


def ucb_score(child_reward_sum: float, child_visits: int, parent_visits: int, const: float) -> float:
    if child_visits == 0:
        return INF
    return child_reward_sum / child_visits + const * math.sqrt(2.0 * math.log(parent_visits) / child_visits)


def _prune_up(node: SearchNode) -> None:
    node.pruned = True
    parent = node.parent
    while parent is not None and not parent.pruned:
        if any(not c.pruned for c in parent.children):
            break
        parent.pruned = True
        parent = parent.parent


def _bound(node: SearchNode) -> float:
    return node.total if node.total is not None else node.t


def prune_optimality(node: SearchNode, incumbent_time: float) -> bool:
    """Prune ``node`` when its elapsed time already meets the incumbent.

    Terminal nodes compare their full mission time. Returns the node's
    pruned flag; a parent left with only pruned children is pruned too.
    """
    if node.pruned:
        return True
    if node.parent is None and incumbent_time == INF:
        return False
    if _bound(node) >= incumbent_time:
        _prune_up(node)
    return node.pruned


def prune_constraint(failure: Optional[Failure]) -> bool:
    """A child whose phase reported any failure is created pruned."""
    return failure is not None


def backpropagate(leaf: SearchNode, reward: float, carry_reward: bool) -> None:
    node = leaf
    if carry_reward:
        while node is not None:
            node.n += 1
            node.alpha += reward
            node = node.parent
    else:
        while node is not None:
            node.n += 1
            node = node.parent


def search(inst: MissionInstance, tour: Sequence[int], config: MctsConfig = MctsConfig(),
           trace: Optional[Callable[[dict], None]] = None, trace_every: int = 100) -> SearchResult:
    """Pick one energy level per tour position to minimise mission time."""
    # the tree is freed as a whole afterwards; cycle collection mid-search only costs time
    enabled = gc.isenabled()
    gc.disable()
    try:
        return _search(inst, tour, config, trace, trace_every)
    finally:
        if enabled:
            gc.enable()


def _search(inst, tour, config, trace, trace_every):
    t_start = time.perf_counter()
    n = inst.n_sites
    check_tour(tour, n)
    ctx = prepare(inst)
    p = ctx.params
    kp = kernel_params(p)
    sx, sy = ctx.sx, ctx.sy
    n_levels = len(ctx.allocs)
    centers = [ctx.sites[s] for s in tour]
    anchors = centers[1:] + [(sx, sy)]
    # consts[k][li]: everything about position k at level li that the path cannot change
    consts = [[site_constants(centers[k], ctx.allocs[li], ctx.radii[li], anchors[k])
               for li in range(n_levels)] for k in range(n)]
    const = config.exploration
    scale = config.reward_scale
    if scale is None:
        scale = simulate_naive(inst, tour).total_time
    rng = random.Random(config.seed)
    rand = rng.random
    deadline = None if config.time_limit is None else t_start + config.time_limit

    stats = SearchStats()
    best_time = INF
    best_levels = None
    root = SearchNode(None, 0, -1, sx, sy, p.ugv_capacity, p.uav_capacity, 0.0)
    level_range = range(n_levels)
    sqrt, log = math.sqrt, math.log
    inadmissible = Failure.ALLOC_INADMISSIBLE

    def make_child(parent, li):
        k = parent.depth
        res = phase_kernel(kp, sx, sy, parent.px, parent.py, parent.eg, parent.ea, parent.t,
                           consts[k][li])
        child = SearchNode(parent, k + 1, li, res[5], res[6], res[16], res[17], res[19])
        if prune_constraint(res[0]):
            child.pruned = True
            stats.pruned_constraint += 1
        elif k + 1 == n:
            fin = return_kernel(kp, sx, sy, child.px, child.py, child.eg, child.ea, child.t)
            if prune_constraint(fin[0]):
                child.pruned = True
                stats.pruned_constraint += 1
            else:
                child.total = fin[5]
        if not child.pruned and _bound(child) >= best_time:
            child.pruned = True
            stats.pruned_optimality += 1
        return child

    def select(node):
        best = None
        best_score = -INF
        log_n = log(node.n) if node.n > 0 else 0.0
        for ch in node.children:
            if ch.pruned:
                continue
            bound = ch.t if ch.total is None else ch.total
            if bound >= best_time:
                ch.pruned = True
                stats.pruned_optimality += 1
                continue
            cn = ch.n
            if cn == 0:
                return ch
            score = ch.alpha / cn + const * sqrt(2.0 * log_n / cn)
            if score > best_score:
                best_score = score
                best = ch
        return best

    while stats.iterations < config.iterations:
        if root.pruned:
            stats.exhausted = True
            break
        if deadline is not None and time.perf_counter() > deadline:
            break

        # selection
        node = root
        while node.children is not None and node.depth < n:
            child = select(node)
            if child is None:
                _prune_up(node)
                node = None
                break
            node = child
        if node is None:
            continue

        # expansion
        if node.depth < n and node.children is None:
            node.children = [make_child(node, li) for li in level_range]
            stats.nodes += n_levels
            child = select(node)
            if child is None:
                _prune_up(node)
                backpropagate(node, 0.0, False)
                stats.iterations += 1
                stats.early_rollouts += 1
                continue
            node = child

        # rollout
        complete = False
        rollout_levels = []
        if node.depth == n:
            total = node.total
            complete = True
        else:
            px, py, eg, ea, t = node.px, node.py, node.eg, node.ea, node.t
            k = node.depth
            alive = True
            while k < n:
                row = consts[k]
                li = int(rand() * n_levels)
                res = advance(kp, sx, sy, px, py, eg, ea, t, row[li])
                if res[0] is inadmissible:
                    # redraw among the remaining levels: uniform over admissible ones
                    cand = [j for j in level_range if j != li]
                    while cand:
                        j = int(rand() * len(cand))
                        li = cand[j]
                        res = advance(kp, sx, sy, px, py, eg, ea, t, row[li])
                        if res[0] is not inadmissible:
                            break
                        cand[j] = cand[-1]
                        cand.pop()
                    else:
                        alive = False
                        break
                if res[0] is not None:
                    alive = False
                    break
                rollout_levels.append(li)
                _, px, py, eg, ea, t = res
                k += 1
            if alive:
                fin = return_kernel(kp, sx, sy, px, py, eg, ea, t)
                if fin[0] is None:
                    total = fin[5]
                    complete = True

        stats.iterations += 1
        if complete:
            stats.complete_rollouts += 1
            if total < best_time:
                best_time = total
                best_levels = node.path_levels() + rollout_levels
                stats.incumbent_history.append((stats.iterations, total))
            if node.depth == n:
                # value fully known; revisiting cannot improve on the incumbent
                if not node.pruned:
                    stats.pruned_optimality += 1
                    _prune_up(node)
            backpropagate(node, scale / total, True)
        else:
            stats.early_rollouts += 1
            backpropagate(node, 0.0, False)

        if trace is not None and stats.iterations % trace_every == 0:
            trace(_trace_row(stats, best_time))

    stats.wall_time = time.perf_counter() - t_start
    if trace is not None:
        trace(_trace_row(stats, best_time))
    if best_levels is None:
        return SearchResult(NO_PLAN, None, None, stats, root)
    allocations = tuple(ctx.levels[i] for i in best_levels)
    plan = simulate(inst, tour, allocations)
    return SearchResult(OK, allocations, plan, stats, root)


def _trace_row(stats: SearchStats, best_time: float) -> dict:
    return {
        "iteration": stats.iterations,
        "incumbent": best_time,
        "nodes": stats.nodes,
        "pruned_constraint": stats.pruned_constraint,
        "pruned_optimality": stats.pruned_optimality,
    }


def search_best_of(inst: MissionInstance, tour: Sequence[int], config: MctsConfig,
                   seeds: Sequence[int]) -> SearchResult:
    """Run independent searches and keep the lowest mission time (ties: first seed)."""
    best = None
    for s in seeds:
        cfg = MctsConfig(config.iterations, config.exploration, config.reward_scale, s,
                         config.time_limit)
        res = search(inst, tour, cfg)
        if best is None or res.total_time < best.total_time:
            best = res
    return best
