"""CSV and SVG renderings of type diagrams.

The SVG is written by hand with fixed number formatting so that identical
inputs give byte-identical files.
"""

import csv
import io
from fractions import Fraction

SIZE = 800
MARGIN = 80
SIDE = SIZE - 2 * MARGIN


def _frac(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def region_csv(region):
    """RFC 4180 table with one row per grid point."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(["inv_p", "inv_q", "bounded", "compact", "clause"])
    for inv_p, inv_q, v in region.grid:
        writer.writerow([_frac(inv_p), _frac(inv_q), str(v.bounded).lower(),
                         str(v.compact).lower(), v.clause])
    return buf.getvalue()


def _pt(x, y):
    # 1/p runs left to right, 1/q bottom to top
    return MARGIN + float(x) * SIDE, MARGIN + (1.0 - float(y)) * SIDE


def _fmt(v):
    return f"{v:.3f}"


def _path(polygon):
    pts = [_pt(*vx[0]) for vx in polygon.vertices]
    body = " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in pts)
    return f"M {body} Z"


def _edges(polygon, cls):
    out = []
    for e in polygon.edges:
        (x1, y1), (x2, y2) = _pt(*e.start), _pt(*e.end)
        dash = "" if e.closed else ' stroke-dasharray="8 6"'
        out.append(f'<line class="{cls}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
                   f'y2="{_fmt(y2)}" stroke="#1f3a5f" stroke-width="2"{dash}/>')
    return out


def region_svg(region):
    """Square E with the bounded region shaded, the compact part hatched, and l_E dashed."""
    p = region.params
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="10" height="10">',
        '<path d="M 0 10 L 10 0" stroke="#1f3a5f" stroke-width="1"/>',
        "</pattern>",
        "</defs>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if not region.bounded.empty:
        lines.append(f'<path class="bounded" d="{_path(region.bounded)}" fill="#9ec5e8" '
                     'stroke="none"/>')
    if not region.compact.empty:
        lines.append(f'<path class="compact" d="{_path(region.compact)}" fill="url(#hatch)" '
                     'stroke="none"/>')
    if not region.bounded.empty:
        lines.extend(_edges(region.bounded, "edge"))
    x0, y0 = _pt(0, 0)
    x1, y1 = _pt(1, 1)
    lines.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" width="{_fmt(SIDE)}" height="{_fmt(SIDE)}" '
                 'fill="none" stroke="black" stroke-width="2"/>')
    # l_E: the fixed line x + y = 1 of (x, y) -> (1 - y, 1 - x)
    ax, ay = _pt(0, 1)
    bx, by = _pt(1, 0)
    lines.append(f'<line class="axis-of-symmetry" x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" '
                 f'y2="{_fmt(by)}" stroke="#888888" stroke-width="1.5" stroke-dasharray="4 4"/>')
    for t in (0, Fraction(1, 2), 1):
        tx, ty = _pt(t, 0)
        lines.append(f'<text x="{_fmt(tx)}" y="{_fmt(ty + 24)}" font-size="16" '
                     f'text-anchor="middle">{_frac(t)}</text>')
        sx, sy = _pt(0, t)
        lines.append(f'<text x="{_fmt(sx - 12)}" y="{_fmt(sy + 5)}" font-size="16" '
                     f'text-anchor="end">{_frac(t)}</text>')
    lines.append(f'<text x="{SIZE // 2}" y="{SIZE - 20}" font-size="20" '
                 'text-anchor="middle">1/p</text>')
    lines.append(f'<text x="24" y="{SIZE // 2}" font-size="20" text-anchor="middle" '
                 f'transform="rotate(-90 24 {SIZE // 2})">1/q</text>')
    lines.append(f'<text x="{SIZE // 2}" y="40" font-size="20" text-anchor="middle">'
                 f'd = {p.d}, alpha = {_frac(p.exact_alpha)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


__all__ = ["region_csv", "region_svg", "SIZE"]
