"""Closed-form geometry for one survey phase.

The UAV leaves the UGV at take-off point A, flies to the site centre O,
surveys, and lands back on the UGV at rendezvous point P somewhere on the
chord AB that the UGV drives across the survey circle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Point, VehicleParams

hypot = math.hypot
sqrt = math.sqrt

# below this chord length the chord is treated as a single point
DEGENERATE_CHORD = 1e-12


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class PhaseGeometry:
    center: Point
    radius: float
    takeoff: Point       # A
    exit: Point          # B
    midpoint: Point      # M
    chord_len: float

    @property
    def degenerate(self) -> bool:
        return self.chord_len <= DEGENERATE_CHORD


@dataclass(frozen=True)
class RendezvousSolution:
    point: Point              # P
    uav_flight_dist: float    # |AO| + |OP|
    ugv_dist: float           # |AP| along the chord
    wait: float               # UGV idle time at P, hours
    center_dist: float        # |OP|


def survey_radius(alloc: float, params: VehicleParams) -> float:
    """Radius of the circle the UAV can reach from the site and still land.

    ``alloc`` must exceed the survey energy; the remainder funds an
    out-and-back flight of ``2 * radius``.
    """
    spare = alloc - params.uav_survey_cost * params.survey_time
    if not spare > 0.0:
        raise GeometryError("allocation cannot cover survey")
    return spare / (2.0 * params.uav_flight_cost)


def segment_circle_intersections(p0: Point, p1: Point, center: Point, r: float) -> list[Point]:
    """Points where segment p0->p1 meets the circle, ordered from p0."""
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    fx, fy = p0[0] - center[0], p0[1] - center[1]
    a = dx * dx + dy * dy
    if a == 0.0:
        raise GeometryError("degenerate segment")
    b = 2.0 * (fx * dx + fy * dy)
    c = fx * fx + fy * fy - r * r
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    if disc == 0.0:
        ts = [-b / (2.0 * a)]
    else:
        s = sqrt(disc)
        # stable pairing of the two roots
        q = -0.5 * (b + math.copysign(s, b))
        ts = sorted({q / a, c / q} if q != 0.0 else {0.0})
    out = []
    for t in ts:
        if -1e-12 <= t <= 1.0 + 1e-12:
            t = min(max(t, 0.0), 1.0)
            out.append((p0[0] + t * dx, p0[1] + t * dy))
    return out


def _boundary_point(ox, oy, r, qx, qy):
    """Point where the ray from O toward q leaves the circle, or q itself if inside."""
    d = hypot(qx - ox, qy - oy)
    if d <= r:
        return qx, qy
    s = r / d
    return ox + (qx - ox) * s, oy + (qy - oy) * s


def chord_for_site(entry_from: Point, center: Point, exit_to: Point, r: float) -> PhaseGeometry:
    """Clip the polyline entry_from -> center -> exit_to to the survey circle.

    A is where the incoming leg crosses the circle and B where the outgoing
    leg leaves it. An endpoint already inside the circle is used as is.
    """
    if not r > 0.0:
        raise GeometryError("radius must be positive")
    ox, oy = center
    ax, ay = _boundary_point(ox, oy, r, entry_from[0], entry_from[1])
    bx, by = _boundary_point(ox, oy, r, exit_to[0], exit_to[1])
    return PhaseGeometry(
        center=(ox, oy),
        radius=r,
        takeoff=(ax, ay),
        exit=(bx, by),
        midpoint=(0.5 * (ax + bx), 0.5 * (ay + by)),
        chord_len=hypot(bx - ax, by - ay),
    )


def rendezvous_core(ax, ay, bx, by, ox, oy, uav_speed, ugv_speed, survey_time):
    """Scalar rendezvous solve; returns (px, py, |AO|, |OP|, |AP|, wait).

    With u = |AP| and m the projection of O onto the chord measured from A,
    |OP| = sqrt(h^2 + (u - m)^2) where h is the distance from O to the
    chord line. Equal arrival times give

        u / V_g = (|AO| + |OP|) / V_a + T_survey

    Squaring yields a quadratic in u. Roots are kept when they lie on the
    chord and the unsquared right-hand side is non-negative; the smallest
    surviving u wins. Without a root the UGV drives to B and waits.
    """
    ao = hypot(ox - ax, oy - ay)
    chord = hypot(bx - ax, by - ay)
    if chord <= DEGENERATE_CHORD:
        return ax, ay, ao, ao, 0.0, 2.0 * ao / uav_speed + survey_time
    ux = (bx - ax) / chord
    uy = (by - ay) / chord
    m = (ox - ax) * ux + (oy - ay) * uy
    c = ao / uav_speed + survey_time
    k = uav_speed / ugv_speed
    vc = uav_speed * c
    qa = k * k - 1.0
    qb = 2.0 * (m - k * vc)
    qc = vc * vc - ao * ao
    r1 = r2 = -1.0
    if qa == 0.0:
        if qb != 0.0:
            r1 = -qc / qb
        elif qc == 0.0:
            # equal speeds with O on the chord line: the UAV shadows the UGV
            # from the first reachable point onward
            r1 = ugv_speed * c
    else:
        disc = qb * qb - 4.0 * qa * qc
        if disc >= 0.0:
            s = sqrt(disc)
            q = -0.5 * (qb + s) if qb >= 0.0 else -0.5 * (qb - s)
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
            if u / ugv_speed - c >= lim and (best < 0.0 or u < best):
                best = u
    if best < 0.0:
        ob = hypot(bx - ox, by - oy)
        wait = (ao + ob) / uav_speed + survey_time - chord / ugv_speed
        return bx, by, ao, ob, chord, (wait if wait > 0.0 else 0.0)
    px = ax + best * ux
    py = ay + best * uy
    return px, py, ao, hypot(px - ox, py - oy), best, 0.0


def solve_rendezvous(geom: PhaseGeometry, params: VehicleParams) -> RendezvousSolution:
    """Earliest point on chord AB where the returning UAV meets the UGV."""
    ax, ay = geom.takeoff
    bx, by = geom.exit
    ox, oy = geom.center
    px, py, ao, op, u, wait = rendezvous_core(
        ax, ay, bx, by, ox, oy, params.uav_speed, params.ugv_speed, params.survey_time
    )
    return RendezvousSolution((px, py), ao + op, u, wait, op)
