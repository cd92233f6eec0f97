"""
Command-line front end.

Exit codes: 0 success, 1 negative answer (lemma gate not met, no period
found), 2 configuration error, 3 orbit terminated early, 4 lemma
verification failed although the gate passed.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import random
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis import (
    check_b_gt_1,
    detect_period,
    hunt_corner_turn,
    iterate,
    lemma_gate,
    portrait_points,
    verify_lemma,
)
from .dynamics import SimConfig
from .geometry import CORNER_TOL, BirkhoffState
from .output import orbit_csv, portrait_csv, portrait_svg, trajectory_svg

logger = logging.getLogger("magbilliard")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_CONFIG = 2
EXIT_EARLY = 3
EXIT_VERIFY = 4

STEPS_HELP = "number of applications of the boundary map F (one chord plus one exterior arc each)"


class ConfigError(Exception):
    pass


def _add_field(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--b", type=float, help="magnetic field magnitude B (> 0)")
    g.add_argument("--radius", type=float, help="Larmor radius r = 1/B (> 0)")


def _add_initials(p: argparse.ArgumentParser, many: bool) -> None:
    nargs = "+" if many else None
    p.add_argument("--s0", type=float, nargs=nargs, help="initial arc-length(s) in [0, 4)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--theta0", type=float, nargs=nargs, help="initial angle(s) in radians, (0, pi)")
    g.add_argument("--u0", type=float, nargs=nargs, help="initial u = cos(theta), (-1, 1)")
    if many:
        p.add_argument("--init-file", type=Path,
                       help="CSV with columns s and theta (or s and u)")
        p.add_argument("--random", type=int, metavar="N",
                       help="draw N initial conditions on the bottom side")
    p.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magbilliard",
        description="Inverse magnetic billiard in the unit square.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="iterate one orbit, write CSV (and SVG)")
    _add_field(p)
    _add_initials(p, many=False)
    p.add_argument("--steps", type=int, required=True, help=STEPS_HELP)
    p.add_argument("-o", "--output", type=Path, help="orbit CSV path (default: stdout)")
    p.add_argument("--svg", type=Path, help="write a trajectory drawing to this path")

    p = sub.add_parser("portrait", help="phase portrait (s, u=cos theta) of an ensemble")
    _add_field(p)
    _add_initials(p, many=True)
    p.add_argument("--steps", type=int, required=True, help=STEPS_HELP)
    p.add_argument("-o", "--output", type=Path, help="portrait CSV path (default: stdout)")
    p.add_argument("--svg", type=Path, help="write an (s, u) scatter to this path")

    p = sub.add_parser("lemma-check", help="rational-slope periodicity gate and simulation")
    _add_field(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s0", type=float, required=True, help="launch point on the bottom side, (0, 1)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("corner-hunt", help="first step whose exterior arc turns a corner")
    _add_field(p)
    _add_initials(p, many=False)
    p.add_argument("--max-steps", type=int, default=100_000, help=STEPS_HELP + " (cap)")

    p = sub.add_parser("bgt1-check", help="periodicity of the orbit launched from (r, pi/2)")
    _add_field(p)
    p.add_argument("--max-period", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    return ap


def _config(args) -> SimConfig:
    try:
        if args.b is not None:
            return SimConfig(B=args.b)
        return SimConfig(r=args.radius)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _state(s: float, theta: Optional[float], u: Optional[float]) -> BirkhoffState:
    if theta is None and u is None:
        raise ConfigError("give --theta0 or --u0")
    if u is not None:
        if not (-1.0 < u < 1.0):
            raise ConfigError(f"u0={u} outside (-1, 1)")
        theta = math.acos(u)
    try:
        return BirkhoffState(s, theta)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def random_initials(n: int, seed: int) -> List[BirkhoffState]:
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        s, theta = rng.random(), rng.random() * math.pi
        if CORNER_TOL < s < 1.0 - CORNER_TOL and 0.0 < theta < math.pi:
            out.append(BirkhoffState(s, theta))
    return out


def _read_init_file(path: Path) -> List[BirkhoffState]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(ln for ln in fh if not ln.startswith("#")))
    except OSError as err:
        raise ConfigError(str(err)) from err
    out = []
    for row in rows:
        if "s" not in row or not ({"theta", "u"} & row.keys()):
            raise ConfigError(f"{path}: need columns s and theta (or u)")
        theta = float(row["theta"]) if row.get("theta") not in (None, "") else None
        u = float(row["u"]) if theta is None else None
        out.append(_state(float(row["s"]), theta, u))
    return out


def _initials(args, many: bool) -> List[BirkhoffState]:
    if not many:
        if args.s0 is None:
            raise ConfigError("give --s0")
        return [_state(args.s0, args.theta0, args.u0)]
    out = []
    if args.s0 is not None:
        angles = args.theta0 if args.theta0 is not None else args.u0
        if angles is None or len(angles) != len(args.s0):
            raise ConfigError("--s0 needs the same number of --theta0 or --u0 values")
        for s, a in zip(args.s0, angles):
            out.append(_state(s, a if args.theta0 is not None else None,
                              a if args.u0 is not None else None))
    if args.init_file is not None:
        out.extend(_read_init_file(args.init_file))
    if args.random is not None:
        if args.random < 1:
            raise ConfigError("--random needs N >= 1")
        out.extend(random_initials(args.random, args.seed))
    if not out:
        raise ConfigError("no initial conditions given")
    return out


def _metadata(cfg: SimConfig, args, extra: Sequence[str] = ()) -> List[str]:
    meta = [f"radius={cfg.r!r} B={cfg.B!r}", f"seed={args.seed}"]
    steps = getattr(args, "steps", None)
    if steps is not None:
        meta.append(f"steps={steps}")
    return meta + list(extra)


def _emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _check_steps(n: int) -> None:
    if n < 1:
        raise ConfigError("--steps must be >= 1")


def run_simulate(args) -> int:
    cfg = _config(args)
    _check_steps(args.steps)
    (init,) = _initials(args, many=False)
    trace = iterate(init, args.steps, cfg)
    meta = _metadata(cfg, args, [f"s0={init.s!r} theta0={init.theta!r}"])
    _emit(orbit_csv(trace, meta), args.output)
    if args.svg is not None:
        _emit(trajectory_svg(trace, comment="; ".join(meta)), args.svg)
    if not trace.completed:
        logger.error("orbit terminated at step %s: %s", trace.error_step, trace.message)
        return EXIT_EARLY
    return EXIT_OK


def run_portrait(args) -> int:
    cfg = _config(args)
    _check_steps(args.steps)
    initials = _initials(args, many=True)
    traces = [iterate(init, args.steps, cfg) for init in initials]
    points = portrait_points(traces)
    meta = _metadata(cfg, args, [f"orbits={len(traces)}"])
    _emit(portrait_csv(points, traces, meta), args.output)
    if args.svg is not None:
        _emit(portrait_svg(points, comment="; ".join(meta)), args.svg)
    early = [i for i, tr in enumerate(traces) if not tr.completed]
    if early:
        logger.error("orbits %s terminated early", early)
        return EXIT_EARLY
    return EXIT_OK


def run_lemma_check(args) -> int:
    cfg = _config(args)
    try:
        verdict = lemma_gate(args.s0, args.p, args.q, cfg.B)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    print(f"slope p/q = {args.p}/{args.q}, s0 = {args.s0!r}, B = {cfg.B!r}")
    print(f"margin = {verdict.margin!r}")
    print(f"predicted period = {verdict.predicted_period}")
    if not verdict.passes:
        print("gate: fails (2/B is not below the lattice distance)")
        return EXIT_NEGATIVE
    print("gate: passes")
    ok, dev = verify_lemma(verdict, cfg)
    trace = iterate(BirkhoffState(args.s0, math.atan2(args.p, args.q)),
                    verdict.predicted_period, cfg)
    found = detect_period(trace, cfg.period_tol)
    print(f"simulated minimal period = {found[0] if found else 'none'}")
    print(f"max deviation = {dev!r}")
    print(f"verified: {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_VERIFY


def run_corner_hunt(args) -> int:
    cfg = _config(args)
    if args.max_steps < 1:
        raise ConfigError("--max-steps must be >= 1")
    (init,) = _initials(args, many=False)
    n, err = hunt_corner_turn(init, cfg, args.max_steps)
    if n is not None:
        print(f"first corner turn at step {n}")
        return EXIT_OK
    if err is not None:
        print(f"orbit aborted at step {err.step} before turning a corner: {err}")
        return EXIT_EARLY
    print(f"none within {args.max_steps}")
    return EXIT_OK


def run_bgt1_check(args) -> int:
    cfg = _config(args)
    if not (0.0 < cfg.r < 1.0):
        raise ConfigError("bgt1-check needs 0 < r < 1 (B > 1)")
    ok, period = check_b_gt_1(cfg.r, args.max_period, cfg.period_tol)
    print(f"radius = {cfg.r!r}, initial state = (s={cfg.r!r}, theta=pi/2)")
    if ok:
        print(f"periodic: yes (period {period})")
        return EXIT_OK
    print(f"periodic: no (no period <= {args.max_period})")
    return EXIT_NEGATIVE


COMMANDS = {
    "simulate": run_simulate,
    "portrait": run_portrait,
    "lemma-check": run_lemma_check,
    "corner-hunt": run_corner_hunt,
    "bgt1-check": run_bgt1_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as err:
        print(f"magbilliard: error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
