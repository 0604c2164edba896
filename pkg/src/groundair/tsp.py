"""Closed tours from a fixed depot through every site.

``solve_exact`` is Held-Karp over subsets (vectorised with numpy);
``solve_heuristic`` is nearest neighbour plus 2-opt with seeded restarts.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import Point

EXACT_MAX_SITES = 15


class CapacityError(ValueError):
    pass


@dataclass(frozen=True)
class Tour:
    order: tuple
    length: float


def tour_length(start: Point, sites: Sequence[Point], order: Sequence[int]) -> float:
    total = 0.0
    px, py = start
    for i in order:
        x, y = sites[i]
        total += math.hypot(x - px, y - py)
        px, py = x, y
    return total + math.hypot(start[0] - px, start[1] - py)


def _canonical(start, sites, order) -> Tour:
    # a tour and its reverse have the same length; report the lexicographically smaller
    order = tuple(int(i) for i in order)
    rev = order[::-1]
    if rev < order:
        order = rev
    return Tour(order, tour_length(start, sites, order))


def solve_exact(start: Point, sites: Sequence[Point]) -> Tour:
    n = len(sites)
    if n < 1:
        raise ValueError("need at least one site")
    if n > EXACT_MAX_SITES:
        raise CapacityError(
            f"solve_exact handles at most {EXACT_MAX_SITES} sites (got {n}); use solve_heuristic")
    pts = np.asarray(sites, dtype=float)
    s = np.asarray(start, dtype=float)
    d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    ds = np.hypot(pts[:, 0] - s[0], pts[:, 1] - s[1])

    full = 1 << n
    dp = np.full((full, n), np.inf)
    parent = np.full((full, n), -1, dtype=np.int64)
    for j in range(n):
        dp[1 << j, j] = ds[j]

    masks = np.arange(full, dtype=np.int64)
    popcount = np.zeros(full, dtype=np.int64)
    for j in range(n):
        popcount += (masks >> j) & 1
    for size in range(2, n + 1):
        layer = masks[popcount == size]
        for j in range(n):
            sel = layer[(layer >> j) & 1 == 1]
            prev = sel ^ (1 << j)
            cand = dp[prev] + d[:, j]          # (len(sel), n)
            best = np.argmin(cand, axis=1)     # first minimum -> smallest predecessor index
            dp[sel, j] = cand[np.arange(len(sel)), best]
            parent[sel, j] = best

    last_mask = full - 1
    closing = dp[last_mask] + ds
    j = int(np.argmin(closing))
    order = []
    mask = last_mask
    while j != -1:
        order.append(j)
        pj = int(parent[mask, j])
        mask ^= 1 << j
        j = pj
    order.reverse()
    return _canonical(start, sites, order)


def _nearest_neighbour(start, sites, first=None):
    left = set(range(len(sites)))
    order = []
    px, py = start
    if first is not None:
        order.append(first)
        left.discard(first)
        px, py = sites[first]
    while left:
        nxt = min(left, key=lambda i: (math.hypot(sites[i][0] - px, sites[i][1] - py), i))
        order.append(nxt)
        left.discard(nxt)
        px, py = sites[nxt]
    return order


def two_opt(start: Point, sites: Sequence[Point], order: Sequence[int]) -> list[int]:
    """Apply improving segment reversals until none remains."""
    path = [start] + [sites[i] for i in order] + [start]
    idx = [-1] + list(order) + [-1]
    m = len(path)

    def dist(a, b):
        return math.hypot(a[0] - b[0], a[1] - b[1])

    improved = True
    while improved:
        improved = False
        for i in range(1, m - 2):
            a, b = path[i - 1], path[i]
            dab = dist(a, b)
            for j in range(i + 1, m - 1):
                c, e = path[j], path[j + 1]
                delta = dist(a, c) + dist(b, e) - dab - dist(c, e)
                if delta < -1e-12:
                    path[i:j + 1] = path[i:j + 1][::-1]
                    idx[i:j + 1] = idx[i:j + 1][::-1]
                    improved = True
                    b = path[i]
                    dab = dist(a, b)
    return idx[1:-1]


def solve_heuristic(start: Point, sites: Sequence[Point], seed: int = 0, restarts: int = 4) -> Tour:
    """Nearest neighbour from the depot, 2-opt to a local optimum, then
    ``restarts`` extra 2-opt descents from seeded random first sites."""
    n = len(sites)
    if n < 1:
        raise ValueError("need at least one site")
    rng = random.Random(seed)
    best = _canonical(start, sites, two_opt(start, sites, _nearest_neighbour(start, sites)))
    for _ in range(restarts if n > 3 else 0):
        order = _nearest_neighbour(start, sites, first=rng.randrange(n))
        cand = _canonical(start, sites, two_opt(start, sites, order))
        if cand.length < best.length - 1e-12:
            best = cand
    return best


def solve_auto(start: Point, sites: Sequence[Point], seed: int = 0) -> Tour:
    if len(sites) <= EXACT_MAX_SITES:
        return solve_exact(start, sites)
    return solve_heuristic(start, sites, seed=seed)
