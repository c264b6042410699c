"""CSV rows and a hand-written SVG scatter of ``(c2, c1^2)`` points.

The chart draws the lines ``c1^2 = 3 c2`` (BMY), ``c1^2 = 2 c2`` (zero
signature) and ``5 c1^2 = c2 - 36`` (Noether). Output is byte-for-byte
deterministic for a fixed list of points.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .params import FamilyParams

WIDTH, HEIGHT = 1000, 800
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 90, 40, 40, 70
COLORS = {"spin": "#1f77b4", "nonspin": "#d62728"}
CSV_HEADER = ["variant", "alpha", "beta", "d", "p", "c2", "c1sq", "slope"]


@dataclass(frozen=True)
class GeographyPoint:
    params: FamilyParams
    c1sq: int
    c2: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.c1sq, self.c2)


def format_decimal(x: Fraction, digits: int) -> str:
    """``x`` rounded half-to-even at ``digits`` places after the point."""
    x = Fraction(x)
    scaled = round(x * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def csv_text(points: Iterable[GeographyPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for pt in points:
        pr = pt.params
        w.writerow([pr.variant, pr.alpha, pr.beta, pr.d, pr.p, pt.c2, pt.c1sq, format_decimal(pt.slope, 12)])
    return buf.getvalue()


class _Axes:
    def __init__(self, xmin, xmax, ymin, ymax, log):
        self.log = log
        f = math.log10 if log else float
        self.x0, self.x1 = f(xmin), f(xmax)
        self.y0, self.y1 = f(ymin), f(ymax)

    def _t(self, v):
        return math.log10(v) if self.log else float(v)

    def px(self, x) -> float:
        w = WIDTH - MARGIN_L - MARGIN_R
        return MARGIN_L + (self._t(x) - self.x0) / (self.x1 - self.x0) * w

    def py(self, y) -> float:
        h = HEIGHT - MARGIN_T - MARGIN_B
        return HEIGHT - MARGIN_B - (self._t(y) - self.y0) / (self.y1 - self.y0) * h


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-2:
        return f"{v:.1e}"
    return f"{v:g}"


def _ranges(points: Sequence[GeographyPoint], log: bool) -> Tuple[float, float, float, float]:
    if not points:
        return (1.0, 1000.0, 1.0, 3000.0) if log else (0.0, 100.0, 0.0, 300.0)
    xs = [pt.c2 for pt in points]
    ys = [pt.c1sq for pt in points]
    if log:
        xmin = min(min(xs), min(ys) / 3) / 2
        xmax = max(xs) * 2
        return xmin, xmax, xmin / 5, 3 * xmax
    xmax = max(xs) * 1.1
    return 0.0, xmax, 0.0, max(3 * xmax, max(ys) * 1.1)


def _line_samples(fn, xmin, xmax, log, n=64) -> List[Tuple[float, float]]:
    out = []
    for k in range(n + 1):
        if log:
            x = 10 ** (math.log10(xmin) + (math.log10(xmax) - math.log10(xmin)) * k / n)
        else:
            x = xmin + (xmax - xmin) * k / n
        y = fn(x)
        out.append((x, y))
    return out


def svg_text(points: Sequence[GeographyPoint], log: bool = False) -> str:
    xmin, xmax, ymin, ymax = _ranges(points, log)
    ax = _Axes(xmin, xmax, ymin, ymax, log)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect x="0" y="0" width="1000" height="800" fill="white"/>',
        f'<defs><clipPath id="plot"><rect x="{MARGIN_L}" y="{MARGIN_T}" '
        f'width="{WIDTH - MARGIN_L - MARGIN_R}" height="{HEIGHT - MARGIN_T - MARGIN_B}"/></clipPath></defs>',
    ]
    bx0, by0 = MARGIN_L, HEIGHT - MARGIN_B
    bx1, by1 = WIDTH - MARGIN_R, MARGIN_T
    out.append(f'<line x1="{bx0}" y1="{by0}" x2="{bx1}" y2="{by0}" stroke="black"/>')
    out.append(f'<line x1="{bx0}" y1="{by0}" x2="{bx0}" y2="{by1}" stroke="black"/>')

    for k in range(6):
        if log:
            xv = 10 ** (ax.x0 + (ax.x1 - ax.x0) * k / 5)
            yv = 10 ** (ax.y0 + (ax.y1 - ax.y0) * k / 5)
        else:
            xv = xmin + (xmax - xmin) * k / 5
            yv = ymin + (ymax - ymin) * k / 5
        x, y = ax.px(xv), ax.py(yv)
        out.append(f'<line x1="{_fmt(x)}" y1="{by0}" x2="{_fmt(x)}" y2="{by0 + 6}" stroke="black"/>')
        out.append(f'<text x="{_fmt(x)}" y="{by0 + 22}" font-size="12" text-anchor="middle">{_tick_label(xv)}</text>')
        out.append(f'<line x1="{bx0 - 6}" y1="{_fmt(y)}" x2="{bx0}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{bx0 - 10}" y="{_fmt(y + 4)}" font-size="12" text-anchor="end">{_tick_label(yv)}</text>')
    scale = " (log-log)" if log else ""
    out.append(f'<text x="{(bx0 + bx1) // 2}" y="{HEIGHT - 20}" font-size="14" text-anchor="middle">c2{scale}</text>')
    out.append(
        f'<text x="22" y="{(by0 + by1) // 2}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 22 {(by0 + by1) // 2})">c1^2</text>'
    )

    lines = [
        ("BMY c1^2 = 3 c2", lambda x: 3 * x, "#555555", "none"),
        ("c1^2 = 2 c2", lambda x: 2 * x, "#888888", "6,4"),
        ("Noether 5 c1^2 = c2 - 36", lambda x: (x - 36) / 5, "#2ca02c", "2,3"),
    ]
    legend_y = MARGIN_T + 18
    for label, fn, color, dash in lines:
        pts = [(x, y) for x, y in _line_samples(fn, xmin if not log else xmin, xmax, log) if not log or y > 0]
        if len(pts) >= 2:
            path = " ".join(f"{_fmt(ax.px(x))},{_fmt(ax.py(y))}" for x, y in pts)
            out.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-dasharray="{dash}" clip-path="url(#plot)"/>'
            )
        out.append(f'<line x1="{bx0 + 12}" y1="{legend_y}" x2="{bx0 + 42}" y2="{legend_y}" stroke="{color}" stroke-dasharray="{dash}"/>')
        out.append(f'<text x="{bx0 + 50}" y="{legend_y + 4}" font-size="12">{label}</text>')
        legend_y += 18
    for variant, color in COLORS.items():
        out.append(f'<circle cx="{bx0 + 27}" cy="{legend_y}" r="4" fill="{color}"/>')
        out.append(f'<text x="{bx0 + 50}" y="{legend_y + 4}" font-size="12">{variant}</text>')
        legend_y += 18

    for pt in points:
        pr = pt.params
        out.append(
            f'<circle cx="{_fmt(ax.px(pt.c2))}" cy="{_fmt(ax.py(pt.c1sq))}" r="4" '
            f'fill="{COLORS[pr.variant]}" clip-path="url(#plot)">'
            f"<title>{pr.variant} ({pr.alpha},{pr.beta},{pr.d},{pr.p}) slope {format_decimal(pt.slope, 6)}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
