"""
The inverse magnetic billiard map on the unit square.

One application of :func:`step_F` takes an entry state, flies straight
across the square, follows the counterclockwise Larmor circle of radius
``r = 1/B`` outside, and returns the next entry state.  The closed-form
same-side bounce formulas below are kept only as independent oracles
for tests; the engine never dispatches on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .geometry import (
    ARC_EPS,
    CORNER_TOL,
    BirkhoffState,
    MagneticArc,
    Ray,
    Side,
    birkhoff_to_ray,
    circle_boundary_reentry,
    magnetic_circle,
    outgoing_angle,
    point_to_arc,
    ray_boundary_exit,
    ray_to_birkhoff,
)


class OutOfRange(ValueError):
    """A closed-form bounce left its side, so the no-corner premise fails."""


@dataclass(frozen=True)
class SimConfig:
    """Field strength and numerical tolerances.

    Give exactly one of ``B`` (field magnitude) or ``r`` (Larmor radius).
    """

    B: Optional[float] = None
    r: Optional[float] = None
    corner_tol: float = CORNER_TOL
    arc_eps: float = ARC_EPS
    period_tol: float = 1e-6
    max_steps: int = 100_000

    def __post_init__(self):
        if (self.B is None) == (self.r is None):
            raise ValueError("give exactly one of B or r")
        if self.B is not None:
            if not self.B > 0:
                raise ValueError("B must be positive")
            object.__setattr__(self, "r", 1.0 / self.B)
        else:
            if not self.r > 0:
                raise ValueError("r must be positive")
            object.__setattr__(self, "B", 1.0 / self.r)
        for name in ("corner_tol", "arc_eps", "period_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True)
class BounceRecord:
    n: int
    start: BirkhoffState
    exit: BirkhoffState
    entry: BirkhoffState
    exit_point: Tuple[float, float]
    entry_point: Tuple[float, float]
    exit_side: Side
    entry_side: Side
    corners_turned: int
    arc: MagneticArc = field(repr=False)
    chord_length: float = 0.0


def step_F(state: BirkhoffState, cfg: SimConfig, n: int = 0) -> Tuple[BirkhoffState, BounceRecord]:
    """Apply the billiard map once.

    Errors raised by the geometry (CornerHit, TangentGraze, ...) carry
    ``step = n``.
    """
    try:
        ray = birkhoff_to_ray(state, cfg.corner_tol)
        p1, exit_side, chord = ray_boundary_exit(ray, cfg.corner_tol)
        arc = magnetic_circle(p1, ray.direction, cfg.r)
        re = circle_boundary_reentry(arc, p1, exit_side, cfg.corner_tol, cfg.arc_eps)
        entry = ray_to_birkhoff(re.point, re.direction, cfg.corner_tol)
    except Exception as err:
        if hasattr(err, "step"):
            err.step = n
        raise
    exit_state = BirkhoffState(point_to_arc(p1), outgoing_angle(exit_side, ray.direction))
    arc = MagneticArc(arc.center, arc.radius, arc.phi_exit, re.sweep, True)
    record = BounceRecord(
        n=n,
        start=state,
        exit=exit_state,
        entry=entry,
        exit_point=p1,
        entry_point=re.point,
        exit_side=exit_side,
        entry_side=re.side,
        corners_turned=re.corners_turned,
        arc=arc,
        chord_length=chord,
    )
    return entry, record


def inverse_F(state: BirkhoffState, cfg: SimConfig) -> BirkhoffState:
    """Time reversal of :func:`step_F`.

    Leave backwards through the entry point, follow the clockwise circle
    back to the previous exit point, then fly the chord backwards.
    """
    ray = birkhoff_to_ray(state, cfg.corner_tol)
    p2 = ray.origin
    back = (-ray.direction[0], -ray.direction[1])
    arc = magnetic_circle(p2, back, cfg.r, ccw=False)
    re = circle_boundary_reentry(arc, p2, state.side, cfg.corner_tol, cfg.arc_eps)
    p0, _, _ = ray_boundary_exit(Ray(re.point, re.direction), cfg.corner_tol)
    return ray_to_birkhoff(p0, (-re.direction[0], -re.direction[1]), cfg.corner_tol)


def classical_step(state: BirkhoffState, corner_tol: float = CORNER_TOL) -> BirkhoffState:
    """Specular reflection: the B -> infinity limit of step_F."""
    ray = birkhoff_to_ray(state, corner_tol)
    p1, side, _ = ray_boundary_exit(ray, corner_tol)
    dx, dy = ray.direction
    reflected = (-dx, dy) if side in (Side.LEFT, Side.RIGHT) else (dx, -dy)
    return ray_to_birkhoff(p1, reflected, corner_tol)


# --- side-local closed forms (test oracles) --------------------------------
#
# Each takes a launch position s_n on the Bottom side and returns
# (s_{n+1}, s_{n+2}, theta_{n+2}) in the local coordinate of the exit side,
# measured counterclockwise from that side's start corner.

def _check_local(*values: float) -> None:
    for v in values:
        if not (0.0 < v < 1.0):
            raise OutOfRange(f"local coordinate {v!r} leaves (0, 1)")


def closed_form_right(s_n: float, theta: float, B: float) -> Tuple[float, float, float]:
    s1 = (1.0 - s_n) * math.tan(theta)
    s2 = s1 + (2.0 / B) * math.cos(theta)
    _check_local(s1, s2)
    return s1, s2, math.pi / 2 - theta


def closed_form_top(s_n: float, theta: float, B: float) -> Tuple[float, float, float]:
    s1 = 1.0 - s_n - 1.0 / math.tan(theta)
    s2 = s1 + (2.0 / B) * math.sin(theta)
    _check_local(s1, s2)
    return s1, s2, math.pi - theta


def closed_form_left(s_n: float, theta: float, B: float,
                     literal: bool = False) -> Tuple[float, float, float]:
    """Left-side bounce for ``pi/2 < theta < pi``.

    The default is the geometrically consistent form: the exit height is
    ``-s_n tan(theta)`` so the ccw local coordinate is ``1 + s_n tan(theta)``,
    and the ccw shift ``-(2/B) cos(theta)`` is positive.
    ``literal=True`` evaluates the commonly quoted ``1 - s_n tan(theta)``
    and ``+(2/B) cos(theta)`` as written, for comparison only.
    """
    if literal:
        s1 = 1.0 - s_n * math.tan(theta)
        s2 = s1 + (2.0 / B) * math.cos(theta)
    else:
        s1 = 1.0 + s_n * math.tan(theta)
        s2 = s1 - (2.0 / B) * math.cos(theta)
    _check_local(s1, s2)
    return s1, s2, 1.5 * math.pi - theta


def to_local(s: float, side: Side) -> float:
    return s - side.offset


def to_global(local: float, side: Side) -> float:
    return local + side.offset
