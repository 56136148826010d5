"""Standalone SVG line charts of regret curves, written without a plotting library."""
import math
from dataclasses import dataclass
from typing import List, Sequence
from xml.sax.saxutils import escape

from models.errors import InvalidParameterError

COLORS = ["#007AFF", "#FF9500", "#34C759", "#AF52DE", "#FF2D55", "#5AC8FA", "#8E8E93", "#FFCC00"]


@dataclass
class ChartSeries:
    label: str
    x: Sequence[float]
    y: Sequence[float]


def _nice_ticks(low: float, high: float, count: int = 5) -> List[float]:
    if high <= low:
        return [low]
    raw = (high - low) / count
    magnitude = 10 ** math.floor(math.log10(raw))
    step = min((s * magnitude for s in (1, 2, 5, 10) if s * magnitude >= raw), default=raw)
    start = math.ceil(low / step) * step
    ticks = []
    value = start
    while value <= high + step * 1e-9:
        ticks.append(round(value, 10))
        value += step
    return ticks


def _fmt_tick(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 1e4 or abs(value) < 1e-2:
        return f"{value:.0e}"
    return f"{value:g}"


def render_line_chart(series: List[ChartSeries], title: str = "Cumulative regret",
                      x_label: str = "round t", y_label: str = "mean cumulative regret",
                      log_x: bool = False, width: int = 900, height: int = 560) -> str:
    """Render one polyline per series with axes, tick labels and a legend"""
    if not series:
        raise InvalidParameterError("A chart needs at least one series")
    for s in series:
        if len(s.x) != len(s.y) or len(s.x) == 0:
            raise InvalidParameterError(f"Series {s.label!r} has mismatched or empty coordinates")
        if log_x and min(s.x) <= 0:
            raise InvalidParameterError(f"Series {s.label!r} has non-positive x values; log scale impossible")

    margin = {"top": 50, "right": 200, "bottom": 60, "left": 80}
    chart_width = width - margin["left"] - margin["right"]
    chart_height = height - margin["top"] - margin["bottom"]

    tx = (lambda v: math.log10(v)) if log_x else (lambda v: float(v))
    x_min = min(tx(min(s.x)) for s in series)
    x_max = max(tx(max(s.x)) for s in series)
    y_min = 0.0
    y_max = max(max(s.y) for s in series)
    if x_max == x_min:
        x_max = x_min + 1.0
    if y_max <= y_min:
        y_max = y_min + 1.0

    def px(v: float) -> float:
        return margin["left"] + (tx(v) - x_min) / (x_max - x_min) * chart_width

    def py(v: float) -> float:
        return margin["top"] + chart_height - (v - y_min) / (y_max - y_min) * chart_height

    svg = f'<svg width="{width}" height="{height}" xmlns="http://www.w3.org/2000/svg">\n'
    svg += f'  <rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
    svg += f'  <text x="{width / 2:.1f}" y="28" text-anchor="middle" font-size="18" font-weight="bold">{escape(title)}</text>\n'

    # Grid lines and y ticks
    for tick in _nice_ticks(y_min, y_max):
        y = py(tick)
        svg += f'  <line x1="{margin["left"]}" y1="{y:.2f}" x2="{margin["left"] + chart_width}" y2="{y:.2f}" stroke="#eee" stroke-width="1"/>\n'
        svg += f'  <text x="{margin["left"] - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="12" fill="#666">{_fmt_tick(tick)}</text>\n'

    # x ticks
    if log_x:
        x_ticks = [10.0 ** e for e in range(math.ceil(x_min), math.floor(x_max) + 1)]
    else:
        x_ticks = _nice_ticks(x_min, x_max)
    for tick in x_ticks:
        x = px(tick)
        svg += f'  <line x1="{x:.2f}" y1="{margin["top"]}" x2="{x:.2f}" y2="{margin["top"] + chart_height}" stroke="#eee" stroke-width="1"/>\n'
        svg += f'  <text x="{x:.2f}" y="{margin["top"] + chart_height + 20}" text-anchor="middle" font-size="12" fill="#666">{_fmt_tick(tick)}</text>\n'

    # Axes
    svg += f'  <line x1="{margin["left"]}" y1="{margin["top"] + chart_height}" x2="{margin["left"] + chart_width}" y2="{margin["top"] + chart_height}" stroke="#333" stroke-width="1"/>\n'
    svg += f'  <line x1="{margin["left"]}" y1="{margin["top"]}" x2="{margin["left"]}" y2="{margin["top"] + chart_height}" stroke="#333" stroke-width="1"/>\n'
    x_caption = f"{x_label} (log scale)" if log_x else x_label
    svg += f'  <text x="{margin["left"] + chart_width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="14" fill="#333">{escape(x_caption)}</text>\n'
    svg += f'  <text x="20" y="{margin["top"] + chart_height / 2:.1f}" text-anchor="middle" font-size="14" fill="#333" transform="rotate(-90 20 {margin["top"] + chart_height / 2:.1f})">{escape(y_label)}</text>\n'

    # Curves
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(s.x, s.y))
        svg += f'  <polyline points="{points}" fill="none" stroke="{color}" stroke-width="2"/>\n'

    # Legend
    legend_x = width - margin["right"] + 20
    legend_y = margin["top"]
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        y = legend_y + i * 22
        svg += f'  <rect x="{legend_x}" y="{y}" width="14" height="14" fill="{color}"/>\n'
        svg += f'  <text x="{legend_x + 20}" y="{y + 12}" font-size="12" fill="#333">{escape(s.label)}</text>\n'

    svg += '</svg>\n'
    return svg
