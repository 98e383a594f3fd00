"""Trajectory CSV files and SVG plots."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from pathlib import Path

import numpy as np

from .dynamics import SwarmState
from .scenario import PLOT_STYLES, Trajectory

CSV_HEADER = ("t", "agent", "x", "y")
ZOOM_FRAMES = 5
MARGIN = 0.05


def _num(x) -> str:
    return format(float(x), ".17g")


def _time(t) -> str:
    return str(t) if isinstance(t, (int, np.integer)) else _num(t)


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for frame in traj.frames:
        t = _time(frame.time)
        for k, p in enumerate(frame.positions):
            writer.writerow((t, k, _num(p.real), _num(p.imag)))
    return buf.getvalue()


def write_trajectory(traj: Trajectory, path) -> None:
    Path(path).write_text(trajectory_csv(traj), encoding="utf-8")


def read_trajectory(path) -> Trajectory:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        frames = defaultdict(dict)
        order = []
        for row in reader:
            if not row:
                continue
            t_raw, k, x, y = row
            t = float(t_raw)
            if t.is_integer() and "." not in t_raw and "e" not in t_raw.lower():
                t = int(t_raw)
            if t not in frames:
                order.append(t)
            frames[t][int(k)] = complex(float(x), float(y))
    states = []
    for t in order:
        agents = frames[t]
        pos = [agents[k] for k in range(len(agents))]
        states.append(SwarmState(pos, t))
    return Trajectory(states)


# -- SVG ----------------------------------------------------------------------

def _bounds(points: np.ndarray):
    xmin, xmax = points.real.min(), points.real.max()
    ymin, ymax = points.imag.min(), points.imag.max()
    span = max(xmax - xmin, ymax - ymin)
    if span == 0:
        span = max(abs(xmin), abs(ymin), 1.0)
    pad = MARGIN * span
    # pad each side relative to the larger extent so thin boxes stay visible
    return xmin - pad, ymin - pad, (xmax - xmin) + 2 * pad, (ymax - ymin) + 2 * pad


def _frame_svg(positions: np.ndarray, colour: str, opacity: float, radius: float) -> list[str]:
    out = []
    if positions.size >= 2:
        pts = " ".join(f"{_num(p.real)},{_num(-p.imag)}" for p in positions)
        out.append(
            f'<polygon points="{pts}" fill="none" stroke="{colour}" stroke-opacity="{opacity}" '
            'stroke-width="1" vector-effect="non-scaling-stroke"/>'
        )
    for p in positions:
        out.append(
            f'<circle cx="{_num(p.real)}" cy="{_num(-p.imag)}" r="{_num(radius)}" '
            f'fill="{colour}" fill-opacity="{opacity}"/>'
        )
    return out


def plot_svg(traj: Trajectory, style: str) -> str:
    if style not in PLOT_STYLES:
        raise ValueError(f"unknown plot style {style!r}; expected one of {list(PLOT_STYLES)}")
    frames = traj.frames
    if style == "overlay_first_step":
        layers = [(frames[0], "red", 1.0)]
        if len(frames) > 1:
            layers.append((frames[1], "blue", 1.0))
    elif style == "full_evolution":
        layers = [(f, "grey", 0.5) for f in frames[1:-1]]
        layers.insert(0, (frames[0], "red", 1.0))
        if len(frames) > 1:
            layers.append((frames[-1], "blue", 1.0))
    else:
        tail = frames[-ZOOM_FRAMES:]
        layers = [(f, "grey", 0.6) for f in tail[:-1]] + [(tail[-1], "blue", 1.0)]

    drawn = np.concatenate([f.positions for f, _, _ in layers])
    x0, y0, w, h = _bounds(drawn)
    # y is flipped so the plot shows the usual orientation
    view = f"{_num(x0)} {_num(-(y0 + h))} {_num(w)} {_num(h)}"
    radius = 0.006 * max(w, h)
    body = []
    for frame, colour, opacity in layers:
        body.append(f'<g data-t="{_time(frame.time)}">')
        body.extend("  " + line for line in _frame_svg(frame.positions, colour, opacity, radius))
        body.append("</g>")
    return "\n".join(
        [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" '
            f'viewBox="{view}" preserveAspectRatio="xMidYMid meet" data-style="{style}">',
            f'<rect x="{_num(x0)}" y="{_num(-(y0 + h))}" width="{_num(w)}" height="{_num(h)}" fill="white"/>',
            *body,
            "</svg>",
            "",
        ]
    )


def render_plot(traj: Trajectory, style: str, path) -> None:
    Path(path).write_text(plot_svg(traj, style), encoding="utf-8")
