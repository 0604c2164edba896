"""Forward simulation of a (tour, allocation) pair.

Every planner and baseline scores candidates through this module, so the
arithmetic lives in two scalar kernels (:func:`phase_kernel` and
:func:`return_kernel`) that the tree search calls directly and that
:func:`simulate` wraps into records.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .geometry import (
    DEGENERATE_CHORD,
    PhaseGeometry,
    RendezvousSolution,
    _boundary_point,
    rendezvous_core,
    survey_radius,
)
from .model import (
    EnergyState,
    MissionInstance,
    Point,
    VehicleParams,
    allocation_energy,
    check_tour,
)

hypot = math.hypot
sqrt = math.sqrt

# energies at or below this count as depleted during the mission
ENERGY_EPS = 1e-9


class Failure(str, enum.Enum):
    UAV_DEPLETED = "UAV_DEPLETED"
    UGV_DEPLETED = "UGV_DEPLETED"
    ALLOC_INADMISSIBLE = "ALLOC_INADMISSIBLE"


_UAV = Failure.UAV_DEPLETED
_UGV = Failure.UGV_DEPLETED
_ALLOC = Failure.ALLOC_INADMISSIBLE


@dataclass(frozen=True)
class PhaseRecord:
    site: int
    level: float
    geometry: PhaseGeometry
    rendezvous: RendezvousSolution
    alloc: float
    carry_dist: float
    ugv_spend_carry: float
    charged: float
    uav_spend: float
    ugv_spend_alone: float
    ugv_energy_takeoff: float
    uav_energy_takeoff: float
    ugv_energy: float          # after landing
    uav_energy: float          # after landing
    t_takeoff: float
    t_survey_start: float
    t_survey_end: float
    t_landing: float
    violation: Optional[Failure] = None


@dataclass(frozen=True)
class ReturnRecord:
    carry_dist: float
    ugv_spend_carry: float
    charged: float
    ugv_energy: float
    uav_energy: float
    t_arrival: float
    violation: Optional[Failure] = None


@dataclass(frozen=True)
class Plan:
    tour: tuple
    allocations: Optional[tuple]   # None for the naive carry-and-wait plan
    phases: tuple
    return_leg: ReturnRecord
    total_time: float
    wait_time: float
    ugv_distance: float
    final_state: EnergyState
    feasible: bool
    violation: Optional[tuple] = None   # (phase position or "return", Failure)
    mode: str = "chord"


def charge_amount(carry_dist: float, uav_energy: float, ugv_available: float,
                  params: VehicleParams) -> float:
    """Energy moved into the UAV over one carry leg.

    The smallest of what the charger can push over the distance, what the
    UAV battery can take, and what the UGV can spare.
    """
    return min(
        params.charge_rate * carry_dist,
        max(params.uav_capacity - uav_energy, 0.0),
        max(ugv_available, 0.0),
    )


def ugv_available(ugv_energy: float, carry_dist: float, leg_end: Point, start: Point,
                  params: VehicleParams) -> float:
    """UGV energy left for charging after paying the leg and a drive-home reserve."""
    reserve = params.ugv_cost * hypot(leg_end[0] - start[0], leg_end[1] - start[1])
    return ugv_energy - params.ugv_carry_cost * carry_dist - reserve


def kernel_params(p: VehicleParams) -> tuple:
    """Vehicle constants unpacked for :func:`phase_kernel`."""
    return (p.ugv_carry_cost, p.ugv_cost, p.charge_rate, p.uav_capacity, p.uav_flight_cost,
            p.uav_survey_cost * p.survey_time, p.uav_speed, p.ugv_speed, p.survey_time)


def site_constants(center: Point, alloc: float, r: float, next_anchor: Point) -> tuple:
    """Per (site, level, successor) constants; the chord exit B depends on nothing else."""
    ox, oy = center
    bx, by = _boundary_point(ox, oy, r, next_anchor[0], next_anchor[1])
    return (ox, oy, r, alloc, bx, by)


def phase_kernel(kp, sx, sy, px, py, eg, ea, t, sc):
    """One cooperative phase starting with the UAV docked at (px, py).

    ``kp`` comes from :func:`kernel_params`, ``sc`` from :func:`site_constants`.
    Returns a flat tuple::

        (failure, ax, ay, bx, by, qx, qy, ao, oq, u, wait,
         dc, charged, spend, eg_takeoff, ea_takeoff, eg_out, ea_out,
         t_takeoff, t_out)

    where Q=(qx, qy) is the rendezvous point and u the UGV's solo distance.
    """
    carry, solo, rate, cap_a, fly, survey_e, va, vg, ts = kp
    ox, oy, r, alloc, bx, by = sc
    dx = px - ox
    dy = py - oy
    d = hypot(dx, dy)
    if d <= r:
        ax, ay = px, py
    else:
        s = r / d
        ax = ox + dx * s
        ay = oy + dy * s

    failure = None
    dc = hypot(ax - px, ay - py)
    eg1 = eg - carry * dc
    if eg1 <= ENERGY_EPS:
        failure = Failure.UGV_DEPLETED
    avail = eg1 - solo * hypot(ax - sx, ay - sy)
    deficit = cap_a - ea
    charged = rate * dc
    if deficit < charged:
        charged = deficit if deficit > 0.0 else 0.0
    if avail < charged:
        charged = avail if avail > 0.0 else 0.0
    eg2 = eg1 - charged
    ea2 = ea + charged
    t1 = t + dc / vg
    if failure is None and alloc > ea2 + ENERGY_EPS:
        failure = Failure.ALLOC_INADMISSIBLE

    qx, qy, ao, oq, u, wait = rendezvous_core(ax, ay, bx, by, ox, oy, va, vg, ts)
    spend = fly * (ao + oq) + survey_e
    ea3 = ea2 - spend
    eg3 = eg2 - solo * u
    if failure is None:
        if ea3 <= ENERGY_EPS:
            failure = Failure.UAV_DEPLETED
        elif eg3 <= ENERGY_EPS:
            failure = Failure.UGV_DEPLETED
    t2 = t1 + u / vg + wait
    return (failure, ax, ay, bx, by, qx, qy, ao, oq, u, wait,
            dc, charged, spend, eg2, ea2, eg3, ea3, t1, t2)


def advance(kp, sx, sy, px, py, eg, ea, t, sc):
    """Lean :func:`phase_kernel` for rollouts: (failure, qx, qy, eg_out, ea_out, t_out).

    Same arithmetic in the same order, so results match bit for bit, but the
    rendezvous is inlined and an inadmissible allocation returns before it.
    """
    carry, solo, rate, cap_a, fly, survey_e, va, vg, ts = kp
    ox, oy, r, alloc, bx, by = sc
    dx = px - ox
    dy = py - oy
    d = hypot(dx, dy)
    if d <= r:
        ax, ay = px, py
    else:
        s = r / d
        ax = ox + dx * s
        ay = oy + dy * s
    dc = hypot(ax - px, ay - py)
    eg1 = eg - carry * dc
    avail = eg1 - solo * hypot(ax - sx, ay - sy)
    deficit = cap_a - ea
    charged = rate * dc
    if deficit < charged:
        charged = deficit if deficit > 0.0 else 0.0
    if avail < charged:
        charged = avail if avail > 0.0 else 0.0
    eg2 = eg1 - charged
    ea2 = ea + charged
    if eg1 <= ENERGY_EPS:
        return _UGV, 0.0, 0.0, eg2, ea2, t
    if alloc > ea2 + ENERGY_EPS:
        return _ALLOC, 0.0, 0.0, eg2, ea2, t
    t1 = t + dc / vg

    # rendezvous_core, inlined
    ao = hypot(ox - ax, oy - ay)
    chord = hypot(bx - ax, by - ay)
    if chord <= DEGENERATE_CHORD:
        qx, qy, oq, u, wait = ax, ay, ao, 0.0, 2.0 * ao / va + ts
    else:
        ux = (bx - ax) / chord
        uy = (by - ay) / chord
        m = (ox - ax) * ux + (oy - ay) * uy
        c = ao / va + ts
        k = va / vg
        vc = va * c
        qa = k * k - 1.0
        qb = 2.0 * (m - k * vc)
        qc = vc * vc - ao * ao
        r1 = r2 = -1.0
        if qa == 0.0:
            if qb != 0.0:
                r1 = -qc / qb
            elif qc == 0.0:
                r1 = vg * c
        else:
            disc = qb * qb - 4.0 * qa * qc
            if disc >= 0.0:
                q = sqrt(disc)
                q = -0.5 * (qb + q) if qb >= 0.0 else -0.5 * (qb - q)
                r1 = q / qa
                r2 = qc / q if q != 0.0 else -qb / (2.0 * qa)
        tol = 1e-12 * (1.0 + chord)
        lim = -1e-12 * (1.0 + c)
        best = -1.0
        for u in (r1, r2):
            if -tol <= u <= chord + tol:
                if u < 0.0:
                    u = 0.0
                elif u > chord:
                    u = chord
                if u / vg - c >= lim and (best < 0.0 or u < best):
                    best = u
        if best < 0.0:
            qx, qy, u = bx, by, chord
            oq = hypot(bx - ox, by - oy)
            wait = (ao + oq) / va + ts - chord / vg
            if not wait > 0.0:
                wait = 0.0
        else:
            u = best
            qx = ax + best * ux
            qy = ay + best * uy
            oq = hypot(qx - ox, qy - oy)
            wait = 0.0

    ea3 = ea2 - (fly * (ao + oq) + survey_e)
    eg3 = eg2 - solo * u
    failure = None
    if ea3 <= ENERGY_EPS:
        failure = _UAV
    elif eg3 <= ENERGY_EPS:
        failure = _UGV
    return failure, qx, qy, eg3, ea3, t1 + u / vg + wait


def return_kernel(kp, sx, sy, px, py, eg, ea, t):
    """Final carry leg home; returns (failure, dc, charged, eg_out, ea_out, t_out)."""
    carry, solo, rate, cap_a, fly, survey_e, va, vg, ts = kp
    dc = hypot(sx - px, sy - py)
    eg1 = eg - carry * dc
    deficit = cap_a - ea
    charged = rate * dc
    if deficit < charged:
        charged = deficit if deficit > 0.0 else 0.0
    if eg1 < charged:
        charged = eg1 if eg1 > 0.0 else 0.0
    eg2 = eg1 - charged
    ea2 = ea + charged
    failure = None
    if eg2 < -ENERGY_EPS:
        failure = Failure.UGV_DEPLETED
    elif ea2 < -ENERGY_EPS:
        failure = Failure.UAV_DEPLETED
    return failure, dc, charged, eg2, ea2, t + dc / vg


def phase_step(state: EnergyState, inst: MissionInstance, site_idx: int, level: float,
               next_anchor: Point) -> tuple[EnergyState, PhaseRecord]:
    """Advance one phase; ``record.violation`` tags the first broken constraint."""
    p = inst.params
    alloc = allocation_energy(level, p)
    r = survey_radius(alloc, p)
    ox, oy = inst.sites[site_idx]
    sx, sy = inst.start
    px, py = state.pos
    (failure, ax, ay, bx, by, qx, qy, ao, oq, u, wait, dc, charged, spend,
     eg_to, ea_to, eg_out, ea_out, t_to, t_out) = phase_kernel(
        kernel_params(p), sx, sy, px, py, state.ugv_energy, state.uav_energy, state.time,
        site_constants((ox, oy), alloc, r, next_anchor))

    geom = PhaseGeometry(
        center=(ox, oy), radius=r, takeoff=(ax, ay), exit=(bx, by),
        midpoint=(0.5 * (ax + bx), 0.5 * (ay + by)), chord_len=hypot(bx - ax, by - ay),
    )
    rv = RendezvousSolution((qx, qy), ao + oq, u, wait, oq)
    rec = PhaseRecord(
        site=site_idx, level=level, geometry=geom, rendezvous=rv, alloc=alloc,
        carry_dist=dc, ugv_spend_carry=p.ugv_carry_cost * dc, charged=charged,
        uav_spend=spend, ugv_spend_alone=p.ugv_cost * u,
        ugv_energy_takeoff=eg_to, uav_energy_takeoff=ea_to,
        ugv_energy=eg_out, uav_energy=ea_out,
        t_takeoff=t_to, t_survey_start=t_to + ao / p.uav_speed,
        t_survey_end=t_to + ao / p.uav_speed + p.survey_time, t_landing=t_out,
        violation=failure,
    )
    return EnergyState(eg_out, ea_out, t_out, (qx, qy)), rec


def _return_home(state: EnergyState, inst: MissionInstance):
    p = inst.params
    sx, sy = inst.start
    failure, dc, charged, eg, ea, t = return_kernel(
        kernel_params(p), sx, sy, state.pos[0], state.pos[1], state.ugv_energy, state.uav_energy, state.time)
    rec = ReturnRecord(dc, p.ugv_carry_cost * dc, charged, eg, ea, t, failure)
    return EnergyState(eg, ea, t, (sx, sy)), rec


def _first_violation(phases, ret):
    for i, ph in enumerate(phases):
        if ph.violation is not None:
            return (i, ph.violation)
    if ret.violation is not None:
        return ("return", ret.violation)
    return None


def simulate(inst: MissionInstance, tour: Sequence[int], allocations: Sequence[float]) -> Plan:
    """Simulate the full mission for a tour and one energy level per tour position.

    Infeasible missions are simulated to the end; the first violation is
    reported on the plan instead of raising.
    """
    n = inst.n_sites
    if n < 1:
        raise ValueError("instance has no sites")
    check_tour(tour, n)
    if len(allocations) != n:
        raise ValueError(f"need {n} allocations, got {len(allocations)}")

    state = EnergyState.initial(inst)
    phases = []
    for k, site in enumerate(tour):
        nxt = inst.sites[tour[k + 1]] if k + 1 < n else inst.start
        state, rec = phase_step(state, inst, site, allocations[k], nxt)
        phases.append(rec)
    state, ret = _return_home(state, inst)

    wait = 0.0
    dist = 0.0
    for ph in phases:
        wait += ph.rendezvous.wait
        dist += ph.carry_dist + ph.rendezvous.ugv_dist
    dist += ret.carry_dist
    violation = _first_violation(phases, ret)
    return Plan(
        tour=tuple(tour), allocations=tuple(float(a) for a in allocations),
        phases=tuple(phases), return_leg=ret, total_time=state.time, wait_time=wait,
        ugv_distance=dist, final_state=state, feasible=violation is None,
        violation=violation, mode="chord",
    )


def simulate_naive(inst: MissionInstance, tour: Sequence[int]) -> Plan:
    """Carry-and-wait mission: the UGV drives through every site centre with
    the UAV docked and idles there while the UAV surveys from its deck."""
    n = inst.n_sites
    check_tour(tour, n)
    p = inst.params
    sx, sy = inst.start
    survey = p.uav_survey_cost * p.survey_time
    eg, ea, t = p.ugv_capacity, p.uav_capacity, 0.0
    px, py = sx, sy
    phases = []
    dist = 0.0
    for site in tour:
        ox, oy = inst.sites[site]
        failure = None
        dc = hypot(ox - px, oy - py)
        eg1 = eg - p.ugv_carry_cost * dc
        if eg1 <= ENERGY_EPS:
            failure = Failure.UGV_DEPLETED
        avail = eg1 - p.ugv_cost * hypot(ox - sx, oy - sy)
        charged = charge_amount(dc, ea, avail, p)
        eg2, ea2 = eg1 - charged, ea + charged
        t1 = t + dc / p.ugv_speed
        if failure is None and survey > ea2 + ENERGY_EPS:
            failure = Failure.ALLOC_INADMISSIBLE
        ea3 = ea2 - survey
        if failure is None and ea3 <= ENERGY_EPS:
            failure = Failure.UAV_DEPLETED
        t2 = t1 + p.survey_time
        geom = PhaseGeometry((ox, oy), 0.0, (ox, oy), (ox, oy), (ox, oy), 0.0)
        rv = RendezvousSolution((ox, oy), 0.0, 0.0, p.survey_time, 0.0)
        phases.append(PhaseRecord(
            site=site, level=survey / p.uav_capacity, geometry=geom, rendezvous=rv,
            alloc=survey, carry_dist=dc, ugv_spend_carry=p.ugv_carry_cost * dc,
            charged=charged, uav_spend=survey, ugv_spend_alone=0.0,
            ugv_energy_takeoff=eg2, uav_energy_takeoff=ea2, ugv_energy=eg2, uav_energy=ea3,
            t_takeoff=t1, t_survey_start=t1, t_survey_end=t2, t_landing=t2,
            violation=failure,
        ))
        dist += dc
        eg, ea, t, px, py = eg2, ea3, t2, ox, oy
    state, ret = _return_home(EnergyState(eg, ea, t, (px, py)), inst)
    dist += ret.carry_dist
    violation = _first_violation(phases, ret)
    return Plan(
        tour=tuple(tour), allocations=None, phases=tuple(phases), return_leg=ret,
        total_time=state.time, wait_time=n * p.survey_time, ugv_distance=dist,
        final_state=state, feasible=violation is None, violation=violation, mode="naive",
    )


def resimulate(inst: MissionInstance, plan: Plan) -> Plan:
    if plan.mode == "naive":
        return simulate_naive(inst, plan.tour)
    return simulate(inst, plan.tour, plan.allocations)


class Prepared:
    """Per-instance constants unpacked to plain floats for the search loops."""

    def __init__(self, inst: MissionInstance):
        p = inst.params
        self.inst = inst
        self.params = p
        self.n = inst.n_sites
        self.sx, self.sy = inst.start
        self.sites = list(inst.sites)
        self.levels = list(inst.levels)
        self.allocs = [allocation_energy(f, p) for f in inst.levels]
        self.radii = [survey_radius(a, p) for a in self.allocs]


@lru_cache(maxsize=64)
def prepare(inst: MissionInstance) -> Prepared:
    return Prepared(inst)
