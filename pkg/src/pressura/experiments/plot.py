"""Standalone SVG line charts of stats or aggregate files.

Every polyline vertex is an affine image of its data point:
``px = left + (x - x0) * sx`` and ``py = bottom - (y - y0) * sy``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from .stats import read_stats

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 80, 180, 30, 60
DASHES = ("", "8,4", "2,3", "10,3,2,3", "4,4", "12,6")
COLORS = ("#1f4e9c", "#c0392b", "#1e8449", "#7d3c98", "#b9770e", "#117a65")


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]


@dataclass(frozen=True)
class Axes:
    x0: float
    x1: float
    y0: float
    y1: float

    @property
    def sx(self) -> float:
        return (WIDTH - LEFT - RIGHT) / (self.x1 - self.x0)

    @property
    def sy(self) -> float:
        return (HEIGHT - TOP - BOTTOM) / (self.y1 - self.y0)

    def px(self, x: float) -> float:
        return LEFT + (x - self.x0) * self.sx

    def py(self, y: float) -> float:
        return HEIGHT - BOTTOM - (y - self.y0) * self.sy


def _span(lo: float, hi: float) -> tuple[float, float]:
    if hi > lo:
        return lo, hi
    pad = abs(lo) * 0.05 or 1.0
    return lo - pad, hi + pad


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    out = []
    k = 0
    while first + k * step <= hi + step * 1e-9:
        out.append(first + k * step)
        k += 1
    return out


def collect_series(paths: Sequence[str], columns: Sequence[str]) -> list[Series]:
    """One series per (file, column); empty cells are skipped."""
    if not columns:
        raise ValueError("no columns requested")
    series = []
    for path in paths:
        header, rows = read_stats(path)
        missing = [c for c in columns if c not in header]
        if missing:
            raise KeyError(f"{path}: unknown column {missing[0]!r}; have {', '.join(header)}")
        tag = _tag(path) if len(paths) > 1 else ""
        for col in columns:
            pts = [(r["update"], r[col]) for r in rows if r[col] is not None and r["update"] is not None]
            label = f"{tag}:{col}" if tag and len(columns) > 1 else (tag or col)
            series.append(Series(label, tuple(float(x) for x, _ in pts),
                                 tuple(float(y) for _, y in pts)))
    if not any(s.xs for s in series):
        raise ValueError("no data to plot")
    return series


def _tag(path: str) -> str:
    stem = os.path.splitext(os.path.basename(path))[0]
    parent = os.path.basename(os.path.dirname(os.path.abspath(path)))
    return f"{parent}/{stem}" if parent else stem


def axes_for(series: Sequence[Series]) -> Axes:
    xs = [x for s in series for x in s.xs]
    ys = [y for s in series for y in s.ys]
    x0, x1 = _span(min(xs), max(xs))
    y0, y1 = _span(min(ys), max(ys))
    return Axes(x0, x1, y0, y1)


def _num(v: float) -> str:
    return f"{v:.6g}"


def svg_document(series: Sequence[Series], xlabel: str, ylabel: str, title: str = "") -> str:
    ax = axes_for(series)
    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for t in _ticks(ax.x0, ax.x1):
        x = ax.px(t)
        out.append(f'<line x1="{x:.3f}" y1="{HEIGHT - BOTTOM}" x2="{x:.3f}" '
                   f'y2="{HEIGHT - BOTTOM + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.3f}" y="{HEIGHT - BOTTOM + 18}" '
                   f'text-anchor="middle">{_num(t)}</text>')
    for t in _ticks(ax.y0, ax.y1):
        y = ax.py(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.3f}" x2="{LEFT}" y2="{y:.3f}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.3f}" text-anchor="end">{_num(t)}</text>')
    out.append(f'<text x="{LEFT + plot_w / 2}" y="{HEIGHT - 15}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{TOP + plot_h / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {TOP + plot_h / 2})">{escape(ylabel)}</text>')
    for k, s in enumerate(series):
        color = COLORS[k % len(COLORS)]
        dash = DASHES[k % len(DASHES)]
        pts = " ".join(f"{ax.px(x):.4f},{ax.py(y):.4f}" for x, y in zip(s.xs, s.ys))
        style = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(f'<polyline class="series" data-label="{escape(s.label)}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"{style} points="{pts}"/>')
        ly = TOP + 16 + 18 * k
        lx = WIDTH - RIGHT + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.5"{style}/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_timeseries(paths: str | Sequence[str], columns: str | Sequence[str], out_path: str,
                      title: str = "") -> str:
    """Plot ``columns`` of one or more stats/aggregate files against update."""
    if isinstance(paths, str):
        paths = [paths]
    if isinstance(columns, str):
        columns = [c for c in columns.split(",") if c]
    series = collect_series(list(paths), list(columns))
    doc = svg_document(series, "update", ", ".join(columns), title)
    with open(out_path, "w") as fh:
        fh.write(doc)
    return out_path
