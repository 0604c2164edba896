"""Domain types for the cooperative UGV/UAV survey problem.

Units are fixed throughout the package: kilometres, hours, mAh and km/h.
Coordinates are planar Euclidean.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence, Tuple

Point = Tuple[float, float]

DEFAULT_LEVELS = (0.2, 0.4, 0.6, 0.8, 1.0)


@dataclass(frozen=True)
class VehicleParams:
    ugv_capacity: float      # mAh
    uav_capacity: float      # mAh
    uav_flight_cost: float   # mAh per km flown
    uav_survey_cost: float   # mAh per hour of surveying
    ugv_cost: float          # mAh per km, driving alone
    ugv_carry_cost: float    # mAh per km, ferrying the UAV
    charge_rate: float       # mAh transferred per km driven while docked
    uav_speed: float         # km/h
    ugv_speed: float         # km/h
    survey_time: float       # h

    @property
    def survey_energy(self) -> float:
        return self.uav_survey_cost * self.survey_time

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class MissionInstance:
    start: Point
    sites: Tuple[Point, ...]
    params: VehicleParams
    levels: Tuple[float, ...] = DEFAULT_LEVELS

    def __post_init__(self):
        # normalise sequences so instances hash and compare by value
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(self, "sites", tuple((float(x), float(y)) for x, y in self.sites))
        object.__setattr__(self, "levels", tuple(float(f) for f in self.levels))

    @property
    def n_sites(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class EnergyState:
    ugv_energy: float
    uav_energy: float
    time: float
    pos: Point

    @classmethod
    def initial(cls, inst: MissionInstance) -> "EnergyState":
        p = inst.params
        return cls(p.ugv_capacity, p.uav_capacity, 0.0, inst.start)


def allocation_energy(level: float, params: VehicleParams) -> float:
    """Energy budget (mAh) handed to the UAV for one site at ``level``."""
    return level * params.uav_capacity


def validate_instance(inst: MissionInstance) -> list[str]:
    """Return every broken invariant of ``inst`` as a readable message.

    An empty list means the instance is well formed.
    """
    out: list[str] = []
    p = inst.params
    for f in fields(p):
        v = getattr(p, f.name)
        if not isinstance(v, (int, float)) or not math.isfinite(v):
            out.append(f"params.{f.name} must be a finite number")
        elif f.name == "survey_time":
            if v < 0:
                out.append("params.survey_time must be >= 0")
        elif v <= 0:
            out.append(f"params.{f.name} must be > 0")
    params_ok = not out
    if not any(m.startswith(("params.ugv_cost ", "params.ugv_carry_cost ")) for m in out) \
            and p.ugv_carry_cost < p.ugv_cost:
        out.append("params.ugv_carry_cost must be >= params.ugv_cost")

    if len(inst.sites) < 1:
        out.append("sites must contain at least one site")
    if len(set(inst.sites)) != len(inst.sites):
        out.append("sites not pairwise distinct")
    for i, s in enumerate(inst.sites):
        if s == inst.start:
            out.append(f"site {i} coincides with start")
        if not all(math.isfinite(c) for c in s):
            out.append(f"site {i} has non-finite coordinates")
    if not all(math.isfinite(c) for c in inst.start):
        out.append("start has non-finite coordinates")

    levels = inst.levels
    if not levels:
        out.append("levels must not be empty")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        out.append("levels must be strictly ascending")
    for f in levels:
        if not 0.0 < f <= 1.0:
            out.append(f"level {f:g} outside (0, 1]")
        elif params_ok and allocation_energy(f, p) <= p.survey_energy:
            out.append(f"level {f:g} cannot cover survey")
    return out


def check_tour(tour: Sequence[int], n: int) -> None:
    if sorted(tour) != list(range(n)):
        raise ValueError(f"tour must be a permutation of 0..{n - 1}, got {list(tour)}")
