"""Minimal self-contained SVG charts for report bundles.

Hand-rolled rather than delegating to a plotting stack: the output must
be byte-identical across runs and machines, and the two figures a
report needs (a log-x cumulative line and a sorted bar chart) fit in a
few dozen lines of SVG.
"""

from __future__ import annotations

import math
from typing import Sequence

__all__ = ["cdf_chart", "bar_chart"]

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _svg_header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{title}</text>',
    ]


def _axes(x_label: str, y_label: str) -> list[str]:
    x0, y0 = _ML, _H - _MB
    x1, y1 = _W - _MR, _MT
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{x_label}</text>',
        f'<text x="16" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {(y0 + y1) / 2:.1f})">{y_label}</text>',
    ]


def cdf_chart(table: Sequence[tuple[float, float]], title: str, x_label: str) -> str:
    """Cumulative fraction vs threshold on a log-scaled x axis."""
    parts = _svg_header(title) + _axes(x_label + " (log scale)", "fraction of sequences")
    pts = [(t, f) for t, f in table if t > 0.0]
    if pts:
        lo = math.log10(pts[0][0])
        hi = math.log10(pts[-1][0])
        span = hi - lo if hi > lo else 1.0

        def sx(t: float) -> float:
            return _ML + (math.log10(t) - lo) / span * (_W - _ML - _MR)

        def sy(f: float) -> float:
            return (_H - _MB) - f * (_H - _MT - _MB)

        coords = " ".join(f"{sx(t):.2f},{sy(f):.2f}" for t, f in pts)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="#1f6fb2" stroke-width="2"/>')
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            y = sy(frac)
            parts.append(
                f'<text x="{_ML - 8}" y="{y + 4:.2f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="10">{frac:.2f}</text>'
            )
        for t, _ in (pts[0], pts[len(pts) // 2], pts[-1]):
            parts.append(
                f'<text x="{sx(t):.2f}" y="{_H - _MB + 16}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="10">{t:.3g}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_chart(values: Sequence[float], title: str, y_label: str) -> str:
    """Sorted per-sequence values as vertical bars."""
    parts = _svg_header(title) + _axes("sequences (sorted)", y_label)
    vals = list(values)
    if vals:
        top = max(vals) or 1.0
        n = len(vals)
        width = (_W - _ML - _MR) / n
        for i, v in enumerate(vals):
            h = v / top * (_H - _MT - _MB)
            x = _ML + i * width
            y = (_H - _MB) - h
            parts.append(
                f'<rect x="{x + 0.5:.2f}" y="{y:.2f}" width="{max(width - 1.0, 0.5):.2f}" '
                f'height="{h:.2f}" fill="#7098c7"/>'
            )
        parts.append(
            f'<text x="{_ML - 8}" y="{_MT + 4}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{top:.3g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
