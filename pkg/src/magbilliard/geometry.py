"""
Boundary geometry of the unit square.

Arc-length ``s`` runs counterclockwise from the corner (0, 0):
Bottom is [0, 1), Right [1, 2), Top [2, 3), Left [3, 4).  A Birkhoff
angle ``theta`` is measured from the counterclockwise tangent of the
side to the inward velocity, so inward vectors have ``0 < theta < pi``.

All intersection queries are closed form (one linear or quadratic
equation per side line, then clipping to the unit segment).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

Vec = Tuple[float, float]

PERIMETER = 4.0
CORNER_TOL = 1e-9
BOUNDARY_TOL = 1e-9
ARC_EPS = 1e-10
RAY_EPS = 1e-12
# on (1 - (d/r)^2), i.e. the discriminant normalised by r^2
TANGENT_TOL = 1e-12


class BilliardError(Exception):
    """Base class for geometric failures that abort an orbit."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class NotOnBoundary(BilliardError, ValueError):
    pass


class CornerState(BilliardError, ValueError):
    pass


class NotInward(BilliardError, ValueError):
    pass


class CornerHit(BilliardError):
    pass


class TangentGraze(BilliardError):
    pass


class Side(Enum):
    BOTTOM = 0
    RIGHT = 1
    TOP = 2
    LEFT = 3

    @property
    def offset(self) -> int:
        return self.value

    @property
    def tangent(self) -> Vec:
        return _TANGENTS[self.value]

    @property
    def normal(self) -> Vec:
        """Outward unit normal."""
        return _NORMALS[self.value]

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_label(cls, label: str) -> "Side":
        return cls[label.upper()]


_TANGENTS = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))
_NORMALS = ((0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0))
# start corner of each side in ccw order
_STARTS = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class BirkhoffState:
    s: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.s < PERIMETER):
            raise ValueError(f"arc-length s={self.s!r} outside [0, 4)")
        if not (0.0 < self.theta < math.pi):
            raise ValueError(f"angle theta={self.theta!r} outside (0, pi)")

    @property
    def side(self) -> Side:
        return side_of(self.s)

    @property
    def u(self) -> float:
        return math.cos(self.theta)


@dataclass(frozen=True)
class Ray:
    origin: Vec
    direction: Vec

    def __post_init__(self):
        if abs(math.hypot(*self.direction) - 1.0) > 1e-12:
            raise ValueError("ray direction must be a unit vector")


@dataclass(frozen=True)
class MagneticArc:
    center: Vec
    radius: float
    phi_exit: float
    sweep: Optional[float] = None
    ccw: bool = True

    def point_at(self, phi: float) -> Vec:
        return (self.center[0] + self.radius * math.cos(phi),
                self.center[1] + self.radius * math.sin(phi))

    def velocity_at(self, phi: float) -> Vec:
        o = 1.0 if self.ccw else -1.0
        return (-o * math.sin(phi), o * math.cos(phi))

    @property
    def phi_entry(self) -> float:
        if self.sweep is None:
            raise ValueError("arc sweep not set")
        o = 1.0 if self.ccw else -1.0
        return self.phi_exit + o * self.sweep


# --- small vector helpers -------------------------------------------------

def rot90ccw(v: Vec) -> Vec:
    return (-v[1], v[0])


def rotate(v: Vec, angle: float) -> Vec:
    c, s = math.cos(angle), math.sin(angle)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def unit(v: Vec) -> Vec:
    n = math.hypot(*v)
    return (v[0] / n, v[1] / n)


# --- boundary parametrization ---------------------------------------------

def side_of(s: float) -> Side:
    return Side(int(math.floor(s)) % 4)


def corner_distance(s: float) -> float:
    """Boundary distance from arc-length ``s`` to the nearest vertex."""
    return abs(s - round(s))


def arc_to_point(s: float) -> Tuple[Vec, Side]:
    if not (0.0 <= s < PERIMETER):
        raise ValueError(f"arc-length s={s!r} outside [0, 4)")
    side = side_of(s)
    t = s - side.offset
    return _local_to_point(side, t), side


def _local_to_point(side: Side, t: float) -> Vec:
    if side is Side.BOTTOM:
        return (t, 0.0)
    if side is Side.RIGHT:
        return (1.0, t)
    if side is Side.TOP:
        return (1.0 - t, 1.0)
    return (0.0, 1.0 - t)


def _local_coord(side: Side, p: Vec) -> float:
    """Position of ``p`` along ``side``, 0 at its start corner, 1 at its end."""
    if side is Side.BOTTOM:
        return p[0]
    if side is Side.RIGHT:
        return p[1]
    if side is Side.TOP:
        return 1.0 - p[0]
    return 1.0 - p[1]


def _line_distance(side: Side, p: Vec) -> float:
    if side is Side.BOTTOM:
        return abs(p[1])
    if side is Side.RIGHT:
        return abs(p[0] - 1.0)
    if side is Side.TOP:
        return abs(p[1] - 1.0)
    return abs(p[0])


def point_to_arc(p: Vec, tol: float = BOUNDARY_TOL) -> float:
    """Arc-length of a boundary point; raises NotOnBoundary if it is off by more than ``tol``."""
    best = None
    for side in Side:
        t = _local_coord(side, p)
        if not (-tol <= t <= 1.0 + tol):
            continue
        d = _line_distance(side, p)
        if best is None or d < best[0]:
            best = (d, side, min(max(t, 0.0), 1.0))
    if best is None or best[0] > tol:
        raise NotOnBoundary(f"point {p!r} is not on the boundary of the unit square")
    _, side, t = best
    return (side.offset + t) % PERIMETER


def birkhoff_to_ray(state: BirkhoffState, corner_tol: float = CORNER_TOL) -> Ray:
    if corner_distance(state.s) <= corner_tol:
        raise CornerState(f"state s={state.s!r} sits on a corner")
    origin, side = arc_to_point(state.s)
    return Ray(origin, rotate(side.tangent, state.theta))


def ray_to_birkhoff(point: Vec, direction: Vec,
                    corner_tol: float = CORNER_TOL,
                    tol: float = BOUNDARY_TOL) -> BirkhoffState:
    s = point_to_arc(point, tol)
    if corner_distance(s) <= corner_tol:
        raise CornerState(f"point {point!r} sits on a corner")
    side = side_of(s)
    t = side.tangent
    theta = math.atan2(cross(t, direction), dot(t, direction))
    if not (0.0 < theta < math.pi):
        raise NotInward(f"direction {direction!r} does not enter the square at s={s!r}")
    return BirkhoffState(s, theta)


def outgoing_angle(side: Side, direction: Vec) -> float:
    """Unsigned angle between the ccw tangent of ``side`` and an outgoing velocity.

    This equals the Birkhoff angle of the specularly reflected velocity.
    """
    t, n = side.tangent, side.normal
    return math.atan2(dot(direction, n), dot(direction, t))


# --- straight flight -------------------------------------------------------

def ray_boundary_exit(ray: Ray, corner_tol: float = CORNER_TOL) -> Tuple[Vec, Side, float]:
    """First boundary point hit by ``ray`` strictly ahead of its origin.

    Returns the hit point, its side and the flight distance.
    """
    (ox, oy), (dx, dy) = ray.origin, ray.direction
    best = None
    for side, (axis, level) in zip(Side, ((1, 0.0), (0, 1.0), (1, 1.0), (0, 0.0))):
        d = dy if axis == 1 else dx
        if d == 0.0:
            continue
        o = oy if axis == 1 else ox
        t = (level - o) / d
        if t > RAY_EPS and (best is None or t < best[0]):
            best = (t, side)
    if best is None:
        raise ValueError(f"ray {ray!r} never reaches the boundary")
    t, side = best
    # snap onto the side line exactly
    if side in (Side.BOTTOM, Side.TOP):
        point = (ox + t * dx, 0.0 if side is Side.BOTTOM else 1.0)
    else:
        point = (1.0 if side is Side.RIGHT else 0.0, oy + t * dy)
    local = _local_coord(side, point)
    if local <= corner_tol or local >= 1.0 - corner_tol:
        raise CornerHit(f"straight flight from {ray.origin!r} ends at a corner near {point!r}")
    return point, side, t


# --- exterior circular flight ---------------------------------------------

def magnetic_circle(point: Vec, direction: Vec, r: float, ccw: bool = True) -> MagneticArc:
    """Circle of radius ``r`` tangent to ``direction`` at ``point``.

    ``ccw=False`` gives the clockwise circle used for time reversal.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    o = 1.0 if ccw else -1.0
    left = rot90ccw(direction)
    center = (point[0] + o * r * left[0], point[1] + o * r * left[1])
    phi = math.atan2(point[1] - center[1], point[0] - center[0])
    return MagneticArc(center, r, phi, None, ccw)


@dataclass(frozen=True)
class Reentry:
    point: Vec
    direction: Vec
    side: Side
    sweep: float
    corners_turned: int


def _sweep_between(a: Vec, b: Vec, o: float) -> float:
    """Angle swept in orientation ``o`` going from radius vector ``a`` to ``b``, in [0, 2pi)."""
    return (o * math.atan2(cross(a, b), dot(a, b))) % (2.0 * math.pi)


def circle_boundary_reentry(arc: MagneticArc, exit_point: Vec, exit_side: Side,
                            corner_tol: float = CORNER_TOL,
                            arc_eps: float = ARC_EPS,
                            tangent_tol: float = TANGENT_TOL) -> Reentry:
    """Follow ``arc`` from ``exit_point`` to its first boundary intersection.

    Every side line contributes up to two roots; roots are clipped to the
    unit segment and ranked by the angle swept from the exit point.
    """
    o = 1.0 if arc.ccw else -1.0
    cx, cy = arc.center
    r = arc.radius
    a = (exit_point[0] - cx, exit_point[1] - cy)
    v = arc.velocity_at(arc.phi_exit)

    # (sweep, point, side, tangential)
    candidates = []

    # The exit line meets the circle at the exit point and at its mirror image
    # across the foot of the perpendicular from the center.  The outer cap
    # between them is swept first.
    t_ex, n_ex = exit_side.tangent, exit_side.normal
    vn = dot(v, n_ex)
    if vn <= 0.0:
        raise NotInward(f"exit velocity {v!r} does not leave through {exit_side.label}")
    shift = 2.0 * o * r * vn
    mirror = (exit_point[0] + shift * t_ex[0], exit_point[1] + shift * t_ex[1])
    cap = 2.0 * math.atan2(vn, o * dot(v, t_ex))
    if cap <= arc_eps:
        raise TangentGraze(f"arc leaves {exit_side.label} tangentially at {exit_point!r}")
    mirror = _snap(exit_side, mirror)
    if -corner_tol <= _local_coord(exit_side, mirror) <= 1.0 + corner_tol:
        candidates.append((cap, mirror, exit_side, False))

    for side, (axis, level) in zip(Side, ((1, 0.0), (0, 1.0), (1, 1.0), (0, 0.0))):
        if side is exit_side:
            continue
        d = level - (cy if axis == 1 else cx)
        disc = 1.0 - (d / r) ** 2
        if disc < 0.0:
            continue
        tangential = disc <= tangent_tol
        h = 0.0 if tangential else r * math.sqrt(disc)
        along = cx if axis == 1 else cy
        for root in ((along,) if tangential else (along - h, along + h)):
            q = (root, level) if axis == 1 else (level, root)
            local = _local_coord(side, q)
            if not (-corner_tol <= local <= 1.0 + corner_tol):
                continue
            b = (q[0] - cx, q[1] - cy)
            candidates.append((_sweep_between(a, b, o), q, side, tangential))

    candidates = [c for c in candidates if c[0] > arc_eps]
    if not candidates:
        raise AssertionError("circle never returns to the boundary")
    sweep, q, side, tangential = min(candidates, key=lambda c: c[0])

    local = _local_coord(side, q)
    if local <= corner_tol or local >= 1.0 - corner_tol:
        raise CornerHit(f"arc re-enters at a corner near {q!r}")
    if tangential:
        raise TangentGraze(f"arc grazes {side.label} at {q!r}")

    b = unit((q[0] - cx, q[1] - cy))
    direction = unit((-o * b[1], o * b[0]))
    # Same-line re-entry always lands on the mirror root, so the arc cannot
    # wrap the whole square and the side-index gap is the corner count.
    turned = (o * (side.value - exit_side.value)) % 4
    return Reentry(q, direction, side, sweep, int(turned))


def _snap(side: Side, p: Vec) -> Vec:
    if side is Side.BOTTOM:
        return (p[0], 0.0)
    if side is Side.RIGHT:
        return (1.0, p[1])
    if side is Side.TOP:
        return (p[0], 1.0)
    return (0.0, p[1])
