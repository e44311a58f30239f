"""Deterministic SVG pictures of shadow packings.

Rendering never feeds back into any computation.  Coordinates are exact
rationals scaled by one factor and printed with a fixed number of
significant digits, so equal inputs give identical bytes.
"""
from __future__ import annotations

import decimal
from fractions import Fraction
from xml.sax.saxutils import escape

from .constructions import ShadowPacking
from .geometry import format_rational

CANVAS = 400
MARGIN = 10
SIGNIFICANT_DIGITS = 12

_PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5")


def _num(q: Fraction) -> str:
    ctx = decimal.Context(prec=SIGNIFICANT_DIGITS, rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    s = format(d.normalize(ctx), "f")
    return "0" if s in ("-0", "0") else s


def render_svg(packing: ShadowPacking) -> str:
    outline = packing.container.polygon
    xs = [v[0] for v in outline.vertices]
    ys = [v[1] for v in outline.vertices]
    x0, y1 = min(xs), max(ys)
    extent = max(max(xs) - x0, y1 - min(ys))
    scale = Fraction(CANVAS - 2 * MARGIN) / extent

    def path(poly) -> str:
        pts = [
            f"{_num(MARGIN + (x - x0) * scale)},{_num(MARGIN + (y1 - y) * scale)}"
            for x, y in poly.vertices
        ]
        return "M" + " L".join(pts) + " Z"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" '
        f'viewBox="0 0 {CANVAS} {CANVAS}">',
        f'  <path class="container" d="{path(outline)}" fill="none" stroke="#000000" stroke-width="1.5"/>',
    ]
    for i, piece in enumerate(packing.pieces):
        colour = _PALETTE[i % len(_PALETTE)]
        title = escape(f"ball {i + 1}: capacity {format_rational(piece.capacity)} ({piece.certificate.tag})")
        lines.append(
            f'  <path class="piece" d="{path(piece.poly)}" fill="{colour}" stroke="#333333" '
            f'stroke-width="0.75"><title>{title}</title></path>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(packing: ShadowPacking, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(packing))
