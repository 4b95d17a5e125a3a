"""Deterministic SVG figures in reciprocal and direct space.

Output depends only on the :class:`PlotSpec`: coordinates are printed with
six significant digits, nothing reads the clock, locale or environment.
The data-to-pixel mapping of the plot area is embedded as JSON in a
``<metadata id="axes">`` element so drawn coordinates can be read back.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import NothingToPlotError, ValidationError
from .hyperbolic import FitLike, HyperbolicFit, LinearFit
from .series import TimeSeries, YearRange, window

RECIPROCAL = "reciprocal"
DIRECT = "direct"

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 90, 770, 50, 430
SAMPLE_STEP = 2.0

_COLOURS = ("#c0392b", "#2471a3", "#229954", "#7d3c98", "#b9770e")


@dataclass(frozen=True)
class Overlay:
    """A fitted line to draw; ``start``/``end`` default to the fit's own span."""

    fit: FitLike
    label: str = ""
    start: float | None = None
    end: float | None = None

    @property
    def line(self) -> LinearFit:
        return self.fit.line if isinstance(self.fit, HyperbolicFit) else self.fit

    def extent(self) -> tuple[float, float]:
        line = self.line
        return (
            line.span.start if self.start is None else self.start,
            line.span.end if self.end is None else self.end,
        )


@dataclass(frozen=True)
class PlotSpec:
    space: str
    series: TimeSeries
    year_range: YearRange
    overlays: Sequence[Overlay] = ()
    annotations: Sequence[tuple[int, str]] = ()
    title: str = ""
    x_label: str = "Year"
    y_label: str = ""
    log_value: bool = False

    def __post_init__(self):
        if self.space not in (RECIPROCAL, DIRECT):
            raise ValidationError(f"space must be {RECIPROCAL!r} or {DIRECT!r}, got {self.space!r}")
        if self.log_value and self.space != DIRECT:
            raise ValidationError("log_value applies to direct space only")
        for ov in self.overlays:
            lo, hi = ov.extent()
            if hi < self.year_range.start or lo > self.year_range.end:
                raise ValidationError(
                    f"overlay {ov.label or '(unlabelled)'} [{lo}, {hi}] lies outside {self.year_range}"
                )


def _num(v: float) -> str:
    if v == 0:
        return "0"
    return format(v, ".6g")


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    if hi <= lo:
        return [lo]
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9)
    out = []
    i = first
    while i * step <= hi + step * 1e-9:
        out.append(round(i * step, 12))
        i += 1
    return out


def _samples(lo: float, hi: float) -> list[float]:
    n = max(1, math.ceil((hi - lo) / SAMPLE_STEP))
    step = (hi - lo) / n
    return [lo + i * step for i in range(n)] + [hi]


def _curve(ov: Overlay, spec: PlotSpec) -> list[tuple[float, float]]:
    lo, hi = ov.extent()
    lo, hi = max(lo, spec.year_range.start), min(hi, spec.year_range.end)
    if hi <= lo:
        return []
    line = ov.line
    ts = _samples(lo, hi)
    if spec.space == RECIPROCAL:
        return [(t, line.a - line.k * t) for t in ts]
    step = ts[1] - ts[0] if len(ts) > 1 else SAMPLE_STEP
    if line.k > 0:
        # stop one sample step short of the blow-up
        cutoff = line.a / line.k - step
        ts = [t for t in ts if t <= cutoff]
    return [(t, 1.0 / (line.a - line.k * t)) for t in ts if line.a - line.k * t > 0]


def render_plot(spec: PlotSpec) -> str:
    """Render ``spec`` to a self-contained SVG 1.1 document."""
    sub = window(spec.series, spec.year_range)
    if len(sub) == 0:
        raise NothingToPlotError(f"no observations of {spec.series.name!r} in {spec.year_range}")

    if spec.space == RECIPROCAL:
        points = [(o.year, 1.0 / o.value) for o in sub]
    else:
        points = [(o.year, o.value) for o in sub]

    curves = [(ov, _curve(ov, spec)) for ov in spec.overlays]
    x_min, x_max = float(spec.year_range.start), float(spec.year_range.end)
    if x_max == x_min:
        x_min, x_max = x_min - 1, x_max + 1

    ys = [y for _, y in points]
    if spec.log_value:
        y_lo = math.floor(math.log10(min(ys)))
        y_hi = math.ceil(math.log10(max(ys)))
        if y_hi == y_lo:
            y_hi += 1
        to_axis = math.log10
    else:
        y_lo, y_hi = 0.0, max(ys) * 1.1
        to_axis = float

    def px(t):
        return LEFT + (t - x_min) / (x_max - x_min) * (RIGHT - LEFT)

    def py(v):
        return BOTTOM - (to_axis(v) - y_lo) / (y_hi - y_lo) * (BOTTOM - TOP)

    axes_meta = {
        "space": spec.space,
        "log_value": spec.log_value,
        "x": [x_min, x_max, LEFT, RIGHT],
        "y": [y_lo, y_hi, BOTTOM, TOP],
    }

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        f"<title>{escape(spec.title)}</title>",
        f'<metadata id="axes">{escape(json.dumps(axes_meta))}</metadata>',
        "<defs>",
        f'<clipPath id="plot-area"><rect x="{LEFT}" y="{TOP}" '
        f'width="{RIGHT - LEFT}" height="{BOTTOM - TOP}"/></clipPath>',
        "</defs>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:g}" y="28" text-anchor="middle" font-size="16">{escape(spec.title)}</text>',
    ]

    # axes and ticks
    out.append('<g class="axes" stroke="black" fill="none">')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{RIGHT - LEFT}" height="{BOTTOM - TOP}"/>')
    out.append("</g>")
    out.append('<g class="ticks" font-size="11">')
    for t in _ticks(x_min, x_max):
        x = _num(px(t))
        out.append(f'<line x1="{x}" y1="{BOTTOM}" x2="{x}" y2="{BOTTOM + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{BOTTOM + 18}" text-anchor="middle">{_num(t)}</text>')
    y_ticks = range(int(y_lo), int(y_hi) + 1) if spec.log_value else _ticks(y_lo, y_hi)
    for v in y_ticks:
        value = 10**v if spec.log_value else v
        y = _num(py(value))
        label = _num(value)
        out.append(f'<line x1="{LEFT - 5}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" dy="4">{label}</text>')
    out.append("</g>")
    out.append(
        f'<text x="{(LEFT + RIGHT) / 2:g}" y="{HEIGHT - 25}" text-anchor="middle" '
        f'font-size="13">{escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="20" y="{(TOP + BOTTOM) / 2:g}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 20 {(TOP + BOTTOM) / 2:g})">{escape(spec.y_label)}</text>'
    )

    out.append('<g class="plot" clip-path="url(#plot-area)">')
    shown = [(y, lab) for y, lab in sorted(spec.annotations) if x_min <= y <= x_max]
    for i, (year, label) in enumerate(shown):
        x = _num(px(year))
        label_y = TOP + 12 + 12 * (i % 3)
        out.append(
            f'<line class="annotation" x1="{x}" y1="{TOP}" x2="{x}" y2="{BOTTOM}" '
            'stroke="grey" stroke-dasharray="4 3"/>'
        )
        out.append(
            f'<text x="{x}" y="{label_y}" font-size="10" fill="grey" dx="3">{escape(label)}</text>'
        )
    for i, (ov, pts) in enumerate(curves):
        if len(pts) < 2:
            continue
        colour = _COLOURS[i % len(_COLOURS)]
        coords = " ".join(f"{_num(px(t))},{_num(py(v))}" for t, v in pts)
        out.append(
            f"<polyline class=\"fit\" data-label={quoteattr(ov.label)} fill=\"none\" "
            f'stroke="{colour}" stroke-width="1.5" points="{coords}"/>'
        )
    for t, v in points:
        out.append(f'<circle class="obs" cx="{_num(px(t))}" cy="{_num(py(v))}" r="3" fill="black"/>')
    out.append("</g>")

    legend_y = TOP + 60
    for i, (ov, pts) in enumerate(curves):
        if not ov.label or len(pts) < 2:
            continue
        colour = _COLOURS[i % len(_COLOURS)]
        out.append(
            f'<line x1="{RIGHT - 200}" y1="{legend_y}" x2="{RIGHT - 180}" y2="{legend_y}" '
            f'stroke="{colour}" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{RIGHT - 175}" y="{legend_y}" dy="4" font-size="11">{escape(ov.label)}</text>'
        )
        legend_y += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"


def read_axes(svg_text: str) -> dict:
    """Recover the embedded axis mapping of a rendered document."""
    import xml.etree.ElementTree as ET

    root = ET.fromstring(svg_text)
    meta = root.find("{http://www.w3.org/2000/svg}metadata")
    return json.loads(meta.text)


def pixel_to_data(axes: dict, x: float, y: float) -> tuple[float, float]:
    x_min, x_max, left, right = axes["x"]
    y_lo, y_hi, bottom, top = axes["y"]
    t = x_min + (x - left) / (right - left) * (x_max - x_min)
    v = y_lo + (bottom - y) / (bottom - top) * (y_hi - y_lo)
    return t, (10**v if axes["log_value"] else v)
