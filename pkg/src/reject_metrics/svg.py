"""Static SVG line charts, written directly with no renderer dependency."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

__all__ = ["line_chart_svg"]

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"]

_PANEL_W = 320
_PANEL_H = 300
_MARGIN = {"left": 52, "right": 14, "top": 34, "bottom": 40}


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _fmt(value: float) -> str:
    text = f"{value:.3g}"
    return "0" if text == "-0" else text


def line_chart_svg(panels: list[dict], title: str = "") -> str:
    """Render side-by-side panels of line series.

    Each panel is a dict with keys ``title``, ``x_label``, ``y_label``,
    ``series`` (list of (name, xs, ys)) and optional ``y_range``.
    Non-finite y values split the polyline instead of plotting.
    """
    width = _PANEL_W * len(panels)
    height = _PANEL_H + (24 if title else 0)
    top_off = 24 if title else 0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2}" y="16" text-anchor="middle" font-size="14">{escape(title)}</text>'
        )
    for idx, panel in enumerate(panels):
        parts.append(_panel(panel, idx * _PANEL_W, top_off))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _panel(panel: dict, x_off: float, y_off: float) -> str:
    series = panel["series"]
    left = x_off + _MARGIN["left"]
    top = y_off + _MARGIN["top"]
    plot_w = _PANEL_W - _MARGIN["left"] - _MARGIN["right"]
    plot_h = _PANEL_H - _MARGIN["top"] - _MARGIN["bottom"]

    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if math.isfinite(y)]
    x_lo, x_hi = (min(xs_all), max(xs_all)) if xs_all else (0.0, 1.0)
    if panel.get("y_range"):
        y_lo, y_hi = panel["y_range"]
    elif ys_all:
        y_lo, y_hi = min(ys_all), max(ys_all)
        if y_lo == y_hi:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    else:
        y_lo, y_hi = 0.0, 1.0
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5

    def px(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#999"/>',
        f'<text x="{left + plot_w / 2}" y="{top - 10}" text-anchor="middle" '
        f'font-size="12">{escape(panel.get("title", ""))}</text>',
        f'<text x="{left + plot_w / 2}" y="{top + plot_h + 30}" '
        f'text-anchor="middle">{escape(panel.get("x_label", ""))}</text>',
    ]
    for tx in _ticks(x_lo, x_hi):
        out.append(
            f'<line x1="{px(tx):.1f}" y1="{top + plot_h}" x2="{px(tx):.1f}" '
            f'y2="{top + plot_h + 4}" stroke="#333"/>'
            f'<text x="{px(tx):.1f}" y="{top + plot_h + 16}" '
            f'text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        out.append(
            f'<line x1="{left - 4}" y1="{py(ty):.1f}" x2="{left}" y2="{py(ty):.1f}" '
            'stroke="#333"/>'
            f'<text x="{left - 7}" y="{py(ty):.1f}" text-anchor="end" '
            f'dominant-baseline="middle">{_fmt(ty)}</text>'
        )
    if panel.get("y_label"):
        cy = top + plot_h / 2
        out.append(
            f'<text x="{x_off + 13}" y="{cy}" text-anchor="middle" '
            f'transform="rotate(-90 {x_off + 13} {cy})">{escape(panel["y_label"])}</text>'
        )

    for s_idx, (name, xs, ys) in enumerate(series):
        color = _COLORS[s_idx % len(_COLORS)]
        segment: list[str] = []
        segments: list[list[str]] = []
        for x, y in zip(xs, ys):
            if math.isfinite(y):
                segment.append(f"{px(x):.2f},{py(y):.2f}")
            elif segment:
                segments.append(segment)
                segment = []
        if segment:
            segments.append(segment)
        for seg in segments:
            if len(seg) == 1:
                cx, cy = seg[0].split(",")
                out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="{color}"/>')
            else:
                out.append(
                    f'<polyline points="{" ".join(seg)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
        if name:
            ly = top + 14 + 14 * s_idx
            out.append(
                f'<line x1="{left + plot_w - 58}" y1="{ly - 4}" x2="{left + plot_w - 42}" '
                f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
                f'<text x="{left + plot_w - 38}" y="{ly}">{escape(name)}</text>'
            )
    return "\n".join(out)
