"""Log-log convergence plot as a standalone SVG.

The output is hand-written markup with fixed formatting, so the bytes
depend only on the result.  The plot has one ``circle`` per grid size, one
``line`` for the fitted regression and the slope in the title; the frame
is a ``rect`` so that the element counts stay easy to check.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import DataError
from .statistics import ExperimentResult

WIDTH, HEIGHT = 480, 360
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 40, 50


def _coords(result: ExperimentResult):
    n = np.array([p[0] for p in result.per_n], dtype=float)
    m = np.array([p[1] for p in result.per_n], dtype=float)
    if len(n) < 2:
        raise DataError("plot needs at least two grid sizes")
    if not (np.all(np.isfinite(m)) and np.all(m > 0) and math.isfinite(result.slope)):
        raise DataError("plot needs finite positive means and a fitted slope")
    return np.log(np.log(n) / n), np.log(m)


def svg_text(result: ExperimentResult) -> str:
    x, y = _coords(result)
    line_x = np.array([x.min(), x.max()])
    line_y = result.slope * line_x + result.intercept
    ys = np.concatenate([y, line_y])
    x0, x1 = x.min(), x.max()
    y0, y1 = ys.min(), ys.max()
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(v):
        return LEFT + (v - x0) / (x1 - x0) * pw

    def py(v):
        return TOP + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">slope = {result.slope:.4f}</text>',
        f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">log(log(n)/n)</text>',
        f'<text x="16" y="{TOP + ph / 2:.2f}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {TOP + ph / 2:.2f})">log(mean bottleneck)</text>',
        f'<text x="{LEFT}" y="{TOP + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">{x0:.3f}</text>',
        f'<text x="{LEFT + pw}" y="{TOP + ph + 16}" text-anchor="middle" font-family="sans-serif" font-size="10">{x1:.3f}</text>',
        f'<text x="{LEFT - 6}" y="{TOP + ph:.2f}" text-anchor="end" font-family="sans-serif" font-size="10">{y0:.3f}</text>',
        f'<text x="{LEFT - 6}" y="{TOP + 10}" text-anchor="end" font-family="sans-serif" font-size="10">{y1:.3f}</text>',
        f'<line x1="{px(line_x[0]):.2f}" y1="{py(line_y[0]):.2f}" x2="{px(line_x[1]):.2f}" y2="{py(line_y[1]):.2f}" stroke="#c33" stroke-width="1.5"/>',
    ]
    for a, b in zip(x, y):
        out.append(f'<circle cx="{px(a):.2f}" cy="{py(b):.2f}" r="3.5" fill="#236"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_svg(result: ExperimentResult, out) -> None:
    """Write the log-log scatter of (log(log n / n), log mean_db) with the
    fitted line to ``out``."""
    Path(out).write_text(svg_text(result))
