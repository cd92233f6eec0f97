import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magbilliard.geometry import (
    BirkhoffState,
    CornerHit,
    CornerState,
    MagneticArc,
    NotInward,
    NotOnBoundary,
    Ray,
    Side,
    arc_to_point,
    birkhoff_to_ray,
    circle_boundary_reentry,
    magnetic_circle,
    point_to_arc,
    ray_boundary_exit,
    ray_to_birkhoff,
)

import oracles

R2 = math.sqrt(2) / 2


def approx_vec(v, tol=1e-12):
    return pytest.approx(v, abs=tol)


def random_state(rng, margin=1e-6):
    while True:
        s = rng.uniform(0.0, 4.0)
        if abs(s - round(s)) > margin:
            return BirkhoffState(s, rng.uniform(margin, math.pi - margin))


# --- sides -----------------------------------------------------------------

def test_side_frames():
    assert [s.tangent for s in Side] == [(1, 0), (0, 1), (-1, 0), (0, -1)]
    assert [s.offset for s in Side] == [0, 1, 2, 3]
    for side in Side:
        t, n = side.tangent, side.normal
        # outward normal is the tangent turned clockwise
        assert (t[1], -t[0]) == n


# --- parametrization -------------------------------------------------------

@pytest.mark.parametrize("s, point, side", [
    (0.5, (0.5, 0.0), Side.BOTTOM),
    (1.25, (1.0, 0.25), Side.RIGHT),
    (3.5, (0.0, 0.5), Side.LEFT),
    (2.25, (0.75, 1.0), Side.TOP),
])
def test_arc_to_point(s, point, side):
    p, sd = arc_to_point(s)
    assert p == approx_vec(point)
    assert sd is side


@pytest.mark.parametrize("point, s", [
    ((0.9, 0.0), 0.9),
    ((1.0, 1.0), 2.0),
    ((0.0, 0.25), 3.75),
    ((0.0, 0.0), 0.0),
    ((1.0, 0.0), 1.0),
    ((0.0, 1.0), 3.0),
])
def test_point_to_arc(point, s):
    assert point_to_arc(point) == pytest.approx(s, abs=1e-15)


def test_point_to_arc_rejects_interior_points():
    with pytest.raises(NotOnBoundary):
        point_to_arc((0.5, 0.5))
    with pytest.raises(NotOnBoundary):
        point_to_arc((0.5, 1e-8))
    assert point_to_arc((0.5, 1e-10)) == pytest.approx(0.5)


def test_parametrization_round_trip():
    rng = random.Random(11)
    for _ in range(2000):
        s = rng.uniform(0, 4)
        if abs(s - round(s)) < 1e-9:
            continue
        p, _ = arc_to_point(s)
        assert point_to_arc(p) == pytest.approx(s, abs=1e-12)
        assert arc_to_point(point_to_arc(p))[0] == approx_vec(p, 1e-9)


# --- Birkhoff <-> rays -----------------------------------------------------

@pytest.mark.parametrize("s, theta, origin, direction", [
    (0.5, math.pi / 2, (0.5, 0.0), (0.0, 1.0)),
    (1.25, math.pi / 2, (1.0, 0.25), (-1.0, 0.0)),
    (0.9, math.pi / 4, (0.9, 0.0), (R2, R2)),
])
def test_birkhoff_to_ray(s, theta, origin, direction):
    ray = birkhoff_to_ray(BirkhoffState(s, theta))
    assert ray.origin == approx_vec(origin)
    assert ray.direction == approx_vec(direction)


def test_birkhoff_to_ray_rejects_corners():
    with pytest.raises(CornerState):
        birkhoff_to_ray(BirkhoffState(1.0, 1.0))
    with pytest.raises(CornerState):
        birkhoff_to_ray(BirkhoffState(4.0 - 1e-12, 1.0))


def test_ray_to_birkhoff_examples():
    st_ = ray_to_birkhoff((0.5, 0.0), (0.0, 1.0))
    assert (st_.s, st_.theta) == pytest.approx((0.5, math.pi / 2))
    st_ = ray_to_birkhoff((0.0, 0.5), (1.0, 0.0))
    assert (st_.s, st_.theta) == pytest.approx((3.5, math.pi / 2))

    st_ = ray_to_birkhoff((1.0, 0.5), (-R2, R2))
    # brute-force: rotating the Right tangent (0, 1) by pi/4 gives the direction
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    assert (-s * 1.0, c * 1.0) == approx_vec((-R2, R2))
    assert (st_.s, st_.theta) == pytest.approx((1.5, math.pi / 4))


def test_ray_to_birkhoff_errors():
    with pytest.raises(NotInward):
        ray_to_birkhoff((0.5, 0.0), (0.0, -1.0))
    with pytest.raises(NotInward):
        ray_to_birkhoff((0.5, 0.0), (1.0, 0.0))
    with pytest.raises(CornerState):
        ray_to_birkhoff((1.0, 1.0), (-R2, -R2))


def test_birkhoff_round_trip_10k():
    rng = random.Random(0)
    for _ in range(10_000):
        x = random_state(rng, margin=1e-8)
        ray = birkhoff_to_ray(x)
        assert math.hypot(*ray.direction) == pytest.approx(1.0, abs=1e-12)
        y = ray_to_birkhoff(ray.origin, ray.direction)
        assert abs(y.s - x.s) <= 1e-9 and abs(y.theta - x.theta) <= 1e-9


def test_direction_is_strictly_inward():
    rng = random.Random(1)
    for _ in range(1000):
        x = random_state(rng)
        ray = birkhoff_to_ray(x)
        assert -(ray.direction[0] * x.side.normal[0] + ray.direction[1] * x.side.normal[1]) > 0


# --- straight flight -------------------------------------------------------

def test_ray_exit_vertical():
    p, side, dist = ray_boundary_exit(Ray((0.5, 0.0), (0.0, 1.0)))
    assert p == approx_vec((0.5, 1.0))
    assert side is Side.TOP
    assert dist == pytest.approx(1.0)


def test_ray_exit_diagonal_matches_right_side_formula():
    p, side, dist = ray_boundary_exit(Ray((0.5, 0.0), (R2, R2)))
    assert side is Side.RIGHT
    # height (1 - s) tan(theta) with s = 0.5, theta = pi/4
    assert p == approx_vec((1.0, (1 - 0.5) * math.tan(math.pi / 4)))
    assert dist == pytest.approx(math.sqrt(0.5))


def test_ray_exit_into_corner():
    d = (-1 / math.sqrt(5), 2 / math.sqrt(5))
    # brute force: x = 0.5 + t dx reaches 0 exactly when y = t dy reaches 1
    t = 0.5 / (1 / math.sqrt(5))
    assert t * d[1] == pytest.approx(1.0)
    with pytest.raises(CornerHit):
        ray_boundary_exit(Ray((0.5, 0.0), d))


def test_ray_exit_matches_marching_oracle():
    rng = random.Random(5)
    for _ in range(300):
        x = random_state(rng, margin=1e-3)
        ray = birkhoff_to_ray(x)
        try:
            p, _, _ = ray_boundary_exit(ray)
        except CornerHit:
            continue
        heading = math.atan2(ray.direction[1], ray.direction[0])
        q = oracles.brute_chord(ray.origin[0], ray.origin[1], heading)
        assert p == approx_vec(q, 1e-12)


# --- exterior arc ----------------------------------------------------------

def test_magnetic_circle_examples():
    arc = magnetic_circle((1.0, 0.5), (R2, R2), 0.02)
    assert arc.center == approx_vec((1 - 0.02 * R2, 0.5 + 0.02 * R2))
    assert arc.center == approx_vec((0.98586, 0.51414), 1e-5)
    assert math.dist(arc.center, (1.0, 0.5)) == pytest.approx(0.02)

    assert magnetic_circle((0.5, 1.0), (0.0, 1.0), 1.0).center == approx_vec((-0.5, 1.0))
    assert magnetic_circle((0.5, 0.0), (1.0, 0.0), 0.25).center == approx_vec((0.5, 0.25))


def test_magnetic_circle_is_tangent_and_ccw():
    rng = random.Random(3)
    for _ in range(500):
        phi = rng.uniform(-math.pi, math.pi)
        d = (math.cos(phi), math.sin(phi))
        p = (rng.random(), rng.random())
        arc = magnetic_circle(p, d, rng.uniform(0.01, 2))
        assert arc.point_at(arc.phi_exit) == approx_vec(p, 1e-9)
        v = arc.velocity_at(arc.phi_exit)
        assert v[0] * d[0] + v[1] * d[1] == pytest.approx(1.0, abs=1e-9)


def test_reentry_same_side_chord():
    arc = magnetic_circle((1.0, 0.5), (R2, R2), 0.02)
    re = circle_boundary_reentry(arc, (1.0, 0.5), Side.RIGHT)
    assert re.point == approx_vec((1.0, 0.5 + 0.04 * R2))
    assert re.point[1] == pytest.approx(0.5282843, abs=1e-7)
    assert re.direction == approx_vec((-R2, R2))
    assert re.corners_turned == 0
    assert re.side is Side.RIGHT


def test_reentry_at_corner_is_reported():
    arc = magnetic_circle((0.5, 1.0), (0.0, 1.0), 0.25)
    assert arc.center == approx_vec((0.25, 1.0))
    # the circle passes exactly through the vertex (0, 1)
    assert math.dist(arc.center, (0.0, 1.0)) == pytest.approx(0.25)
    with pytest.raises(CornerHit):
        circle_boundary_reentry(arc, (0.5, 1.0), Side.TOP)


def test_reentry_half_turn_on_top():
    arc = magnetic_circle((0.5, 1.0), (0.0, 1.0), 0.2)
    re = circle_boundary_reentry(arc, (0.5, 1.0), Side.TOP)
    assert re.point == approx_vec((0.1, 1.0))
    assert re.direction == approx_vec((0.0, -1.0))
    assert re.corners_turned == 0
    assert re.sweep == pytest.approx(math.pi)
    # chord 2r = 0.4 equals (2/B) sin(theta) with theta = pi/2
    assert 0.5 - re.point[0] == pytest.approx(2 * 0.2 * math.sin(math.pi / 2))


def _exit_of(state, r):
    ray = birkhoff_to_ray(state)
    p, side, _ = ray_boundary_exit(ray)
    return p, side, magnetic_circle(p, ray.direction, r)


def _sample_cases(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x = random_state(rng, margin=1e-3)
        r = rng.choice([0.02, 0.1, 0.49, 0.85, 1.5, 3.0])
        try:
            p, side, arc = _exit_of(x, r)
            re = circle_boundary_reentry(arc, p, side)
        except (CornerHit,):
            continue
        out.append((x, r, p, side, arc, re))
    return out


def test_reentry_residuals_and_norms():
    for x, r, p, side, arc, re in _sample_cases(1000, 7):
        assert abs(math.dist(re.point, arc.center) - r) <= 1e-9
        point_to_arc(re.point)  # on the boundary within 1e-9
        assert math.hypot(*re.direction) == pytest.approx(1.0, abs=1e-12)
        assert 0 < re.sweep <= 2 * math.pi
        if re.corners_turned == 0:
            assert re.side is side


def test_reentry_is_first_intersection_brute_force():
    """No sample of the arc before the reported sweep lies inside the square."""
    for x, r, p, side, arc, re in _sample_cases(60, 8):
        n = 10_000
        cx, cy = arc.center
        hits = 0
        for k in range(1, n):
            d = re.sweep * k / n
            phi = arc.phi_exit + d
            px, py = cx + r * math.cos(phi), cy + r * math.sin(phi)
            # strict interior with a margin well above rounding
            if 1e-9 < px < 1 - 1e-9 and 1e-9 < py < 1 - 1e-9:
                hits += 1
        assert hits == 0, (x, r)


def test_reentry_matches_sampling_oracle():
    for x, r, p, side, arc, re in _sample_cases(200, 9):
        heading = math.atan2(*reversed(birkhoff_to_ray(x).direction))
        bx, by, bheading, bsweep = oracles.brute_arc(p[0], p[1], heading, r)
        assert re.point == approx_vec((bx, by), 1e-9)
        assert re.sweep == pytest.approx(bsweep, abs=1e-9)
        assert re.direction == approx_vec((math.cos(bheading), math.sin(bheading)), 1e-9)


def test_clockwise_circle_retraces_arc():
    for x, r, p, side, arc, re in _sample_cases(200, 10):
        back = (-re.direction[0], -re.direction[1])
        rarc = magnetic_circle(re.point, back, r, ccw=False)
        assert rarc.center == approx_vec(arc.center, 1e-12)
        rre = circle_boundary_reentry(rarc, re.point, re.side)
        assert rre.point == approx_vec(p, 1e-9)
        assert rre.sweep == pytest.approx(re.sweep, abs=1e-9)
        assert rre.corners_turned == re.corners_turned


def test_arc_entry_angle_consistent():
    arc = MagneticArc((0.0, 0.0), 1.0, 0.5, 1.0)
    assert arc.phi_entry == pytest.approx(1.5)
    assert MagneticArc((0.0, 0.0), 1.0, 0.5, 1.0, ccw=False).phi_entry == pytest.approx(-0.5)


@settings(max_examples=300, deadline=None)
@given(s=st.floats(0.0, 4.0, exclude_max=True), theta=st.floats(1e-6, math.pi - 1e-6))
def test_round_trip_property(s, theta):
    if abs(s - round(s)) <= 1e-6:
        return
    x = BirkhoffState(s, theta)
    ray = birkhoff_to_ray(x)
    y = ray_to_birkhoff(ray.origin, ray.direction)
    assert abs(y.s - x.s) <= 1e-9 and abs(y.theta - x.theta) <= 1e-9
