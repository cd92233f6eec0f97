"""
Orbit-level tools: iteration, period detection, the rational-slope and
small-radius periodicity checks, corner-turn hunting and phase portraits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from .dynamics import BounceRecord, SimConfig, step_F
from .geometry import PERIMETER, BilliardError, BirkhoffState, CornerHit, TangentGraze

logger = logging.getLogger(__name__)


class InvalidSlope(ValueError):
    pass


class Termination(Enum):
    COMPLETED = "completed"
    CORNER_HIT = "corner_hit"
    TANGENT_GRAZE = "tangent_graze"
    ERROR = "error"


@dataclass
class OrbitTrace:
    initial: BirkhoffState
    cfg: SimConfig
    records: List[BounceRecord] = field(default_factory=list)
    termination: Termination = Termination.COMPLETED
    error_step: Optional[int] = None
    message: str = ""

    @property
    def completed(self) -> bool:
        return self.termination is Termination.COMPLETED

    def states(self) -> List[BirkhoffState]:
        """Initial state followed by every entry state."""
        return [self.initial] + [rec.entry for rec in self.records]


@dataclass(frozen=True)
class LemmaVerdict:
    p: int
    q: int
    s0: float
    B: float
    margin: float
    predicted_period: int
    passes: bool


@dataclass(frozen=True)
class PortraitPoint:
    orbit_id: int
    n: int
    s: float
    u: float


def state_deviation(a: BirkhoffState, b: BirkhoffState) -> float:
    """Max of the wrap-aware arc-length gap and the angle gap."""
    ds = abs(a.s - b.s) % PERIMETER
    ds = min(ds, PERIMETER - ds)
    return max(ds, abs(a.theta - b.theta))


def iterate(initial: BirkhoffState, n_steps: int, cfg: SimConfig) -> OrbitTrace:
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    trace = OrbitTrace(initial, cfg)
    state = initial
    for n in range(n_steps):
        try:
            state, rec = step_F(state, cfg, n)
        except BilliardError as err:
            if isinstance(err, CornerHit):
                trace.termination = Termination.CORNER_HIT
            elif isinstance(err, TangentGraze):
                trace.termination = Termination.TANGENT_GRAZE
            else:
                trace.termination = Termination.ERROR
            trace.error_step = n
            trace.message = str(err)
            break
        trace.records.append(rec)
    return trace


def detect_period(trace: OrbitTrace, tol: Optional[float] = None) -> Optional[Tuple[int, float]]:
    """Smallest k with F^k(initial) == initial within ``tol``, and the deviation found."""
    if tol is None:
        tol = trace.cfg.period_tol
    for k, rec in enumerate(trace.records, start=1):
        dev = state_deviation(rec.entry, trace.initial)
        if dev <= tol:
            return k, dev
    return None


def lattice_distance(s0: float, p: int, q: int) -> float:
    """min over integers k of |s0 - k/q| and |s0 p/q - k/p|."""
    a = s0 * q
    b = s0 * p * p / q
    return min(abs(a - round(a)) / q, abs(b - round(b)) / p)


def lemma_gate(s0: float, p: int, q: int, B: float) -> LemmaVerdict:
    """Check the sufficient condition 2/B < lattice distance for slope p/q."""
    if p < 1 or q < 1 or math.gcd(p, q) != 1:
        raise InvalidSlope(f"slope {p}/{q} must be given by coprime positive integers")
    if not (0.0 < s0 < 1.0):
        raise ValueError("s0 must lie strictly inside the bottom side")
    if not B > 0:
        raise ValueError("B must be positive")
    dist = lattice_distance(s0, p, q)
    margin = dist - 2.0 / B
    return LemmaVerdict(p, q, s0, B, margin, 2 * (p + q), dist > 0.0 and margin > 0.0)


def verify_lemma(verdict: LemmaVerdict, cfg: Optional[SimConfig] = None) -> Tuple[bool, float]:
    """Simulate 2(p+q) steps from (s0, arctan(p/q)) and test the return.

    Success needs a completed orbit with no corner turns that comes back
    within ``period_tol``.  The deviation is ``inf`` for aborted orbits.
    """
    if not verdict.passes:
        raise ValueError("verify_lemma needs a verdict that passes the gate")
    if cfg is None:
        cfg = SimConfig(B=verdict.B)
    initial = BirkhoffState(verdict.s0, math.atan2(verdict.p, verdict.q))
    trace = iterate(initial, verdict.predicted_period, cfg)
    if not trace.completed:
        logger.warning("lemma orbit p/q=%d/%d aborted at step %s: %s",
                       verdict.p, verdict.q, trace.error_step, trace.message)
        return False, math.inf
    dev = state_deviation(trace.records[-1].entry, initial)
    turned = [rec.n for rec in trace.records if rec.corners_turned]
    if turned:
        logger.warning("lemma orbit p/q=%d/%d turned corners at steps %s",
                       verdict.p, verdict.q, turned)
    return (not turned and dev <= cfg.period_tol), dev


def check_b_gt_1(r: float, max_period: int = 8, tol: float = 1e-6) -> Tuple[bool, Optional[int]]:
    """Is the orbit launched perpendicularly from (r, pi/2) periodic with period <= max_period?"""
    if not (0.0 < r < 1.0):
        raise ValueError("radius must lie in (0, 1)")
    cfg = SimConfig(r=r, period_tol=tol)
    trace = iterate(BirkhoffState(r, math.pi / 2), max_period, cfg)
    if not trace.completed:
        logger.warning("orbit from (r, pi/2) with r=%g aborted at step %s: %s",
                       r, trace.error_step, trace.message)
    found = detect_period(trace, tol)
    if found is None:
        return False, None
    return True, found[0]


def hunt_corner_turn(initial: BirkhoffState, cfg: SimConfig,
                     max_steps: Optional[int] = None) -> Tuple[Optional[int], Optional[BilliardError]]:
    """First step whose arc turns a corner, or the error that aborted the orbit before one."""
    if max_steps is None:
        max_steps = cfg.max_steps
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    state = initial
    for n in range(max_steps):
        try:
            state, rec = step_F(state, cfg, n)
        except BilliardError as err:
            return None, err
        if rec.corners_turned > 0:
            return n, None
    return None, None


def first_corner_turn(initial: BirkhoffState, cfg: SimConfig,
                      max_steps: Optional[int] = None) -> Optional[int]:
    n, err = hunt_corner_turn(initial, cfg, max_steps)
    if err is not None:
        logger.warning("orbit aborted at step %s before turning a corner: %s", err.step, err)
    return n


def portrait_points(traces: Sequence[OrbitTrace]) -> List[PortraitPoint]:
    points = []
    for orbit_id, trace in enumerate(traces):
        for n, st in enumerate(trace.states()):
            points.append(PortraitPoint(orbit_id, n, st.s, math.cos(st.theta)))
    return points


def phase_portrait(initials: Iterable[BirkhoffState], n_steps: int,
                   cfg: SimConfig) -> List[PortraitPoint]:
    """(s, u = cos theta) of every entry state of every orbit, ordered by (orbit_id, n).

    Orbits that abort are kept up to the failure and logged.
    """
    traces = []
    for orbit_id, init in enumerate(initials):
        trace = iterate(init, n_steps, cfg)
        if not trace.completed:
            logger.warning("orbit %d truncated at step %s (%s)",
                           orbit_id, trace.error_step, trace.termination.value)
        traces.append(trace)
    return portrait_points(traces)
