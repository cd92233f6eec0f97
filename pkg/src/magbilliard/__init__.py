"""Inverse magnetic billiard in the unit square."""

from .analysis import (
    LemmaVerdict,
    OrbitTrace,
    PortraitPoint,
    Termination,
    check_b_gt_1,
    detect_period,
    first_corner_turn,
    iterate,
    lemma_gate,
    phase_portrait,
    verify_lemma,
)
from .dynamics import BounceRecord, SimConfig, classical_step, inverse_F, step_F
from .geometry import BirkhoffState, CornerHit, Side, TangentGraze

__all__ = [
    "BirkhoffState", "BounceRecord", "CornerHit", "LemmaVerdict", "OrbitTrace",
    "PortraitPoint", "Side", "SimConfig", "TangentGraze", "Termination",
    "check_b_gt_1", "classical_step", "detect_period", "first_corner_turn",
    "inverse_F", "iterate", "lemma_gate", "phase_portrait", "step_F", "verify_lemma",
]
