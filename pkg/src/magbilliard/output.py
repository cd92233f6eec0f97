"""
CSV and SVG writers for orbits and phase portraits.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, List, Sequence, Tuple
from xml.sax.saxutils import escape

from .analysis import OrbitTrace, PortraitPoint
from .geometry import arc_to_point

ORBIT_HEADER = [
    "n", "s_exit", "theta_exit", "x_exit", "y_exit", "side_exit",
    "s_entry", "theta_entry", "x_entry", "y_entry", "side_entry",
    "corners_turned", "sweep", "chord_length",
]
PORTRAIT_HEADER = ["orbit_id", "n", "s", "u"]

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"]


def fmt(x: float) -> str:
    return format(x, ".17g")


def _num(x: float) -> str:
    return format(x, ".12g")


def orbit_rows(trace: OrbitTrace) -> List[list]:
    rows = []
    for rec in trace.records:
        rows.append([
            rec.n,
            fmt(rec.exit.s), fmt(rec.exit.theta),
            fmt(rec.exit_point[0]), fmt(rec.exit_point[1]), rec.exit_side.label,
            fmt(rec.entry.s), fmt(rec.entry.theta),
            fmt(rec.entry_point[0]), fmt(rec.entry_point[1]), rec.entry_side.label,
            rec.corners_turned, fmt(rec.arc.sweep), fmt(rec.chord_length),
        ])
    return rows


def _write_csv(header: Sequence[str], rows: Iterable[list], comments: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def termination_comment(trace: OrbitTrace) -> str:
    if trace.completed:
        return "termination=completed"
    return f"termination={trace.termination.value} step={trace.error_step} reason={trace.message}"


def orbit_csv(trace: OrbitTrace, metadata: Sequence[str] = ()) -> str:
    return _write_csv(ORBIT_HEADER, orbit_rows(trace),
                      list(metadata) + [termination_comment(trace)])


def portrait_csv(points: Sequence[PortraitPoint], traces: Sequence[OrbitTrace] = (),
                 metadata: Sequence[str] = ()) -> str:
    rows = ([p.orbit_id, p.n, fmt(p.s), fmt(p.u)] for p in points)
    comments = list(metadata)
    for i, tr in enumerate(traces):
        comments.append(f"orbit {i} {termination_comment(tr)}")
    return _write_csv(PORTRAIT_HEADER, rows, comments)


def read_csv_rows(text: str) -> List[dict]:
    """Parse CSV text produced above, skipping ``#`` comment lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


# --- SVG ------------------------------------------------------------------

def _svg_open(xmin: float, ymin: float, xmax: float, ymax: float, width: int,
              comment: str) -> List[str]:
    w, h = xmax - xmin, ymax - ymin
    height = max(1, round(width * h / w))
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="{_num(xmin)} {_num(-ymax)} {_num(w)} {_num(h)}">',
        f"<!-- {escape(comment)} -->",
    ]


def arc_path(start: Tuple[float, float], end: Tuple[float, float], r: float,
             sweep: float, ccw: bool = True) -> str:
    large = 1 if sweep > 3.141592653589793 else 0
    flag = 1 if ccw else 0
    return (f"M {_num(start[0])} {_num(start[1])} "
            f"A {_num(r)} {_num(r)} 0 {large} {flag} {_num(end[0])} {_num(end[1])}")


def trajectory_svg(trace: OrbitTrace, width: int = 800, comment: str = "") -> str:
    """Square outline, interior chords, exterior arcs and boundary dots (y axis up)."""
    xmin, ymin, xmax, ymax = 0.0, 0.0, 1.0, 1.0
    for rec in trace.records:
        (cx, cy), r = rec.arc.center, rec.arc.radius
        xmin, ymin = min(xmin, cx - r), min(ymin, cy - r)
        xmax, ymax = max(xmax, cx + r), max(ymax, cy + r)
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    out = _svg_open(xmin - pad, ymin - pad, xmax + pad, ymax + pad, width, comment)
    out.append('<g transform="scale(1,-1)" fill="none" stroke-linecap="round">')
    out.append('<rect id="square" x="0" y="0" width="1" height="1" stroke="black" '
               'stroke-width="2" vector-effect="non-scaling-stroke"/>')
    for rec in trace.records:
        p0, _ = arc_to_point(rec.start.s)
        p1, p2 = rec.exit_point, rec.entry_point
        out.append(f'<line class="chord" x1="{_num(p0[0])}" y1="{_num(p0[1])}" '
                   f'x2="{_num(p1[0])}" y2="{_num(p1[1])}" stroke="#1f77b4" '
                   f'stroke-width="1" vector-effect="non-scaling-stroke"/>')
        out.append(f'<path class="arc" data-n="{rec.n}" d="{arc_path(p1, p2, rec.arc.radius, rec.arc.sweep)}" '
                   f'stroke="#d62728" stroke-width="1" vector-effect="non-scaling-stroke"/>')
    dot = 0.004 * (xmax - xmin + 2 * pad)
    for rec in trace.records:
        for cls, p, colour in (("exit", rec.exit_point, "#d62728"), ("entry", rec.entry_point, "#2ca02c")):
            out.append(f'<circle class="{cls}" cx="{_num(p[0])}" cy="{_num(p[1])}" '
                       f'r="{_num(dot)}" fill="{colour}" stroke="none"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def portrait_svg(points: Sequence[PortraitPoint], width: int = 1000, comment: str = "") -> str:
    """Scatter of (s, u) over [0, 4] x [-1, 1] with labelled axes."""
    out = _svg_open(-0.3, -1.3, 4.15, 1.15, width, comment)
    out.append('<g transform="scale(1,-1)">')
    out.append('<rect id="frame" x="0" y="-1" width="4" height="2" fill="none" stroke="black" '
               'stroke-width="1" vector-effect="non-scaling-stroke"/>')
    for k in (1, 2, 3):
        out.append(f'<line x1="{k}" y1="-1" x2="{k}" y2="1" stroke="#bbbbbb" '
                   'stroke-width="1" vector-effect="non-scaling-stroke"/>')
    out.append('<line x1="0" y1="0" x2="4" y2="0" stroke="#bbbbbb" '
               'stroke-width="1" vector-effect="non-scaling-stroke"/>')
    for p in points:
        colour = PALETTE[p.orbit_id % len(PALETTE)]
        out.append(f'<circle cx="{_num(p.s)}" cy="{_num(p.u)}" r="0.006" fill="{colour}"/>')
    out.append("</g>")
    style = 'font-family="sans-serif" font-size="0.07" text-anchor="middle"'
    for k in range(5):
        out.append(f'<text x="{k}" y="1.12" {style}>{k}</text>')
    for v in (-1, 0, 1):
        out.append(f'<text x="-0.1" y="{_num(-v + 0.02)}" {style}>{v}</text>')
    out.append(f'<text x="2" y="1.25" {style}>s (arc-length, ccw from (0,0))</text>')
    out.append(f'<text x="-0.22" y="0" {style} transform="rotate(-90 -0.22 0)">u = cos(theta)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
