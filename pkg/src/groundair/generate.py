"""Seeded random instances and the default vehicle preset.

The ``desk`` preset models a small survey team (UAV 20 km/h, UGV 5 km/h,
5000 mAh UAV pack, 6 minute surveys). The UGV battery is not a constant:
it is sized per instance so that about half of the single-level plans
(one level at every site, on the instance's shortest tour) are feasible,
which keeps the choice of levels consequential.
"""
from __future__ import annotations

import dataclasses
import math
import random
import statistics

from .model import DEFAULT_LEVELS, MissionInstance, VehicleParams
from .simulator import simulate
from .tsp import solve_auto

PRESETS = {
    "desk": VehicleParams(
        ugv_capacity=1.0,          # placeholder, sized per instance
        uav_capacity=5000.0,
        uav_flight_cost=1000.0,
        uav_survey_cost=5000.0,
        ugv_cost=2000.0,
        ugv_carry_cost=2500.0,
        charge_rate=2000.0,
        uav_speed=20.0,
        ugv_speed=5.0,
        survey_time=0.1,
    ),
}

def random_sites(n: int, box: float, rng: random.Random, start=(0.0, 0.0)) -> list:
    sites = []
    seen = {tuple(start)}
    while len(sites) < n:
        s = (round(rng.uniform(0.0, box), 6), round(rng.uniform(0.0, box), 6))
        if s not in seen:
            seen.add(s)
            sites.append(s)
    return sites


def min_feasible_capacity(inst: MissionInstance, tour, allocations, hi: float = 1e9) -> float:
    """Smallest UGV battery (to 1 mAh) that makes the plan feasible, or inf."""

    def ok(cap):
        params = dataclasses.replace(inst.params, ugv_capacity=cap)
        return simulate(dataclasses.replace(inst, params=params), tour, allocations).feasible

    if not ok(hi):
        return math.inf
    lo = 0.0
    while hi - lo > 1.0:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def size_ugv_battery(inst: MissionInstance) -> float:
    """Median of the smallest feasible batteries over the single-level plans
    (the same level at every site) on the instance's shortest tour."""
    tour = solve_auto(inst.start, inst.sites).order
    caps = [min_feasible_capacity(inst, tour, [f] * len(tour)) for f in inst.levels]
    finite = [c for c in caps if math.isfinite(c)]
    if not finite:
        return 1e9
    cap = statistics.median_high(caps)
    return float(math.ceil(cap if math.isfinite(cap) else max(finite)))


def default_box(n: int) -> float:
    """Side of the square area (km): 30 km for 5 sites, constant site density."""
    return 30.0 * math.sqrt(n / 5.0)


def generate(n: int, box: float = None, seed: int = 0, preset: str = "desk",
             levels=DEFAULT_LEVELS, start=(0.0, 0.0)) -> MissionInstance:
    """Uniform random sites in [0, box]^2 with the preset's UGV battery sized for them."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if box is None:
        box = default_box(n)
    rng = random.Random(seed)
    sites = random_sites(n, box, rng, start)
    params = PRESETS[preset]
    inst = MissionInstance(start, sites, params, tuple(levels))
    cap = size_ugv_battery(inst)
    return dataclasses.replace(inst, params=dataclasses.replace(params, ugv_capacity=cap))
