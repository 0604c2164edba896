import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from groundair.geometry import (
    GeometryError,
    chord_for_site,
    rendezvous_core,
    segment_circle_intersections,
    solve_rendezvous,
    survey_radius,
)
from groundair.model import VehicleParams

from oracles import branch_roots, rendezvous_bisect


def params(**kw):
    base = dict(ugv_capacity=1e6, uav_capacity=1000.0, uav_flight_cost=10.0, uav_survey_cost=100.0,
                ugv_cost=1.0, ugv_carry_cost=1.0, charge_rate=1.0, uav_speed=1.0, ugv_speed=1.0,
                survey_time=0.1)
    base.update(kw)
    return VehicleParams(**base)


def close(p, q, tol=1e-9):
    return math.hypot(p[0] - q[0], p[1] - q[1]) <= tol


# -- survey radius -------------------------------------------------------------

def test_radius_hand_value():
    # (30 - 100 * 0.1) / (2 * 10)
    assert survey_radius(30.0, params()) == pytest.approx(1.0, abs=1e-12)


def test_radius_identity_and_small_limit():
    p = params(uav_flight_cost=1.0)
    assert survey_radius(2.0 + 10.0, p) == pytest.approx(1.0, abs=1e-12)
    r = survey_radius(10.0 + 1e-9, p)
    assert 0.0 < r < 1e-9


def test_radius_rejects_allocation_below_survey():
    with pytest.raises(GeometryError, match="allocation cannot cover survey"):
        survey_radius(10.0, params())


# -- intersections -------------------------------------------------------------

def test_intersections_examples():
    assert segment_circle_intersections((-2, 0), (2, 0), (0, 0), 1.0) == [(-1.0, 0.0), (1.0, 0.0)]
    assert segment_circle_intersections((0, 2), (2, 2), (0, 0), 1.0) == []
    pts = segment_circle_intersections((-2, 1), (2, 1), (0, 0), 1.0)
    assert len(pts) == 1 and close(pts[0], (0.0, 1.0))


def test_intersections_ordered_from_start():
    pts = segment_circle_intersections((2, 0), (-2, 0), (0, 0), 1.0)
    assert pts == [(1.0, 0.0), (-1.0, 0.0)]


def test_intersections_segment_ending_inside():
    pts = segment_circle_intersections((-3, 0), (0, 0), (0, 0), 1.0)
    assert pts == [(-1.0, 0.0)]


coord = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(coord, coord, coord, coord, coord, coord, st.floats(0.1, 4))
def test_intersections_match_parametric_scan(x0, y0, x1, y1, ox, oy, r):
    assume(math.hypot(x1 - x0, y1 - y0) > 1e-3)
    pts = segment_circle_intersections((x0, y0), (x1, y1), (ox, oy), r)
    for p in pts:
        assert abs(math.hypot(p[0] - ox, p[1] - oy) - r) <= 1e-9
    # brute-force scan: sign changes of |x - O| - r along the segment
    n = 100_000
    vals = [math.hypot(x0 + (x1 - x0) * i / n - ox, y0 + (y1 - y0) * i / n - oy) - r for i in range(n + 1)]
    crossings = []
    for i in range(n):
        if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0:
            t = i / n
            crossings.append((x0 + (x1 - x0) * t, y0 + (y1 - y0) * t))
    if vals[n] == 0.0:
        crossings.append((x1, y1))
    # tangencies can be missed by the scan; only compare clear crossings
    if len(pts) == 2 or (len(pts) == 1 and min(abs(v) for v in vals) > 1e-6):
        assert len(crossings) == len(pts)
        for c, p in zip(crossings, pts):
            assert close(c, p, 1e-4)
    for c in crossings:
        assert any(close(c, p, 1e-4) for p in pts)


# -- chord construction --------------------------------------------------------

def test_chord_collinear():
    g = chord_for_site((0, 0), (2, 0), (4, 0), 1.0)
    assert g.takeoff == (1.0, 0.0) and g.exit == (3.0, 0.0)
    assert g.midpoint == (2.0, 0.0) and g.chord_len == 2.0
    assert not g.degenerate


def test_chord_out_and_back_is_degenerate():
    g = chord_for_site((0, 0), (2, 0), (0, 0), 1.0)
    assert g.takeoff == (1.0, 0.0) and g.exit == (1.0, 0.0)
    assert g.chord_len == 0.0 and g.degenerate


def test_chord_entry_inside_circle():
    g = chord_for_site((2.5, 0.2), (2, 0), (9, 0), 1.0)
    assert g.takeoff == (2.5, 0.2)
    assert g.exit == (3.0, 0.0)


def test_chord_rejects_nonpositive_radius():
    with pytest.raises(GeometryError):
        chord_for_site((0, 0), (2, 0), (4, 0), 0.0)


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord, coord, coord, coord, st.floats(0.05, 3))
def test_chord_invariants(ex, ey, ox, oy, qx, qy, r):
    assume(math.hypot(ex - ox, ey - oy) > r + 1e-6 and math.hypot(qx - ox, qy - oy) > r + 1e-6)
    g = chord_for_site((ex, ey), (ox, oy), (qx, qy), r)
    (ax, ay), (bx, by), (mx, my) = g.takeoff, g.exit, g.midpoint
    assert abs(math.hypot(ax - ox, ay - oy) - r) <= 1e-9
    assert abs(math.hypot(bx - ox, by - oy) - r) <= 1e-9
    assert close(((ax + bx) / 2, (ay + by) / 2), (mx, my), 1e-12)
    om2 = (mx - ox) ** 2 + (my - oy) ** 2
    assert abs(om2 + (g.chord_len / 2) ** 2 - r * r) <= 1e-9
    # A lies on the entry segment, B on the exit segment
    for (px, py), (sx, sy) in (((ax, ay), (ex, ey)), ((bx, by), (qx, qy))):
        cross = (sx - ox) * (py - oy) - (sy - oy) * (px - ox)
        assert abs(cross) <= 1e-9 * (1 + math.hypot(sx - ox, sy - oy))


# -- rendezvous: worked examples -----------------------------------------------

def diameter(r=1.0):
    return chord_for_site((-5.0, 0.0), (0.0, 0.0), (5.0, 0.0), r)


def test_rendezvous_faster_uav():
    g = diameter()
    sol = solve_rendezvous(g, params(uav_speed=2.0, ugv_speed=1.0, survey_time=0.0))
    assert close(sol.point, (-1 / 3, 0.0))
    assert sol.wait == 0.0
    # both arrival times equal 2/3 h
    assert sol.ugv_dist / 1.0 == pytest.approx(2 / 3, abs=1e-9)
    assert sol.uav_flight_dist / 2.0 == pytest.approx(2 / 3, abs=1e-9)


def test_rendezvous_equal_speeds_meets_at_centre():
    sol = solve_rendezvous(diameter(), params(uav_speed=3.0, ugv_speed=3.0, survey_time=0.0))
    assert close(sol.point, (0.0, 0.0))
    assert sol.wait == 0.0


def test_rendezvous_slow_uav_waits_at_exit():
    sol = solve_rendezvous(diameter(), params(uav_speed=1.0, ugv_speed=10.0, survey_time=1.0))
    assert sol.point == (1.0, 0.0)
    assert sol.wait == pytest.approx(2.8, abs=1e-9)


def test_rendezvous_degenerate_chord():
    g = chord_for_site((0, 0), (2, 0), (0, 0), 1.0)
    sol = solve_rendezvous(g, params(uav_speed=2.0, ugv_speed=1.0, survey_time=0.5))
    assert sol.point == (1.0, 0.0)
    assert sol.ugv_dist == 0.0
    assert sol.wait == pytest.approx(2 * 1.0 / 2.0 + 0.5, abs=1e-12)


# -- rendezvous: properties ----------------------------------------------------

def random_case(rng, va_ge_vg=None):
    r = rng.uniform(0.05, 3.0)
    phi = rng.uniform(0, 2 * math.pi)
    span = rng.uniform(0.01, math.pi)       # central angle between A and B
    o = (rng.uniform(-10, 10), rng.uniform(-10, 10))
    a = (o[0] + r * math.cos(phi), o[1] + r * math.sin(phi))
    b = (o[0] + r * math.cos(phi + span), o[1] + r * math.sin(phi + span))
    vg = rng.uniform(1, 20)
    va = rng.uniform(1, 40)
    if va_ge_vg is True:
        va = vg * rng.uniform(1, 5)
    elif va_ge_vg is False:
        va = vg * rng.uniform(0.1, 1)
    ts = rng.choice([0.0, rng.uniform(0, 1)])
    return a, b, o, r, va, vg, ts


def core(a, b, o, va, vg, ts):
    return rendezvous_core(a[0], a[1], b[0], b[1], o[0], o[1], va, vg, ts)


@pytest.mark.parametrize("seed", range(5))
def test_rendezvous_matches_bisection_oracle(seed):
    rng = random.Random(seed)
    for _ in range(400):
        a, b, o, r, va, vg, ts = random_case(rng)
        px, py, ao, op, u, wait = core(a, b, o, va, vg, ts)
        ref, ref_u, ref_wait = rendezvous_bisect(a, b, o, va, vg, ts)
        assert close((px, py), ref, 1e-7)
        assert u == pytest.approx(ref_u, abs=1e-7)
        assert wait == pytest.approx(ref_wait, abs=1e-7)


@pytest.mark.parametrize("seed", range(5))
def test_exactly_one_branch_admits_root_when_uav_is_faster(seed):
    rng = random.Random(100 + seed)
    checked = 0
    for _ in range(400):
        a, b, o, r, va, vg, ts = random_case(rng, va_ge_vg=True)
        px, py, ao, op, u, wait = core(a, b, o, va, vg, ts)
        roots = branch_roots(a, b, o, r, va, vg, ts)
        if wait > 0:
            assert roots == []
            continue
        assert len({br for br, _ in roots}) == 1
        assert min(ap for _, ap in roots) == pytest.approx(u, abs=1e-7)
        checked += 1
    assert checked > 50


def test_slower_uav_takes_earliest_root():
    rng = random.Random(7)
    for _ in range(500):
        a, b, o, r, va, vg, ts = random_case(rng, va_ge_vg=False)
        px, py, ao, op, u, wait = core(a, b, o, va, vg, ts)
        roots = branch_roots(a, b, o, r, va, vg, ts)
        if wait == 0 and roots:
            assert u == pytest.approx(min(ap for _, ap in roots), abs=1e-7)


def rotate(p, ang, shift):
    c, s = math.cos(ang), math.sin(ang)
    return (c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 2 * math.pi), coord, coord)
def test_rendezvous_rigid_motion_invariance(seed, ang, dx, dy):
    a, b, o, r, va, vg, ts = random_case(random.Random(seed))
    px, py, _, _, _, wait = core(a, b, o, va, vg, ts)
    ta, tb, to = (rotate(q, ang, (dx, dy)) for q in (a, b, o))
    qx, qy, _, _, _, wait2 = core(ta, tb, to, va, vg, ts)
    assert close(rotate((px, py), ang, (dx, dy)), (qx, qy), 1e-9)
    assert wait2 == pytest.approx(wait, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6))
def test_rendezvous_invariants(seed):
    a, b, o, r, va, vg, ts = random_case(random.Random(seed))
    px, py, ao, op, u, wait = core(a, b, o, va, vg, ts)
    assert op <= r + 1e-9
    assert ao + op <= 2 * r + 1e-9
    assert wait >= 0.0
    length = math.dist(a, b)
    # P on the segment AB
    assert abs(math.dist(a, (px, py)) + math.dist((px, py), b) - length) <= 1e-9
    if wait == 0.0:
        assert abs((ao + op) / va + ts - u / vg) <= 1e-9
    else:
        assert (px, py) == b
        assert wait == pytest.approx((r + math.dist(o, b)) / va + ts - length / vg, abs=1e-9)


def test_equal_speeds_on_chord_line():
    # O on the chord line and no survey: the quadratic vanishes, the UAV meets at O
    px, py, ao, op, u, wait = rendezvous_core(-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 2.0, 0.0)
    assert (px, py, u, wait) == (0.0, 0.0, 1.0, 0.0)
    # with a survey the UAV can never catch up at equal speed: wait at B
    px, py, ao, op, u, wait = rendezvous_core(-1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 2.0, 0.25)
    assert (px, py) == (1.0, 0.0)
    assert wait == pytest.approx((1.0 + 1.0) / 2.0 + 0.25 - 2.0 / 2.0)
