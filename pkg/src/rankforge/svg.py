"""Deterministic SVG rendering of signed barcodes.

Bars are drawn as rectangle diagonals in the plane (or stacked lanes for
one axis), blue for positive and red for negative, with endpoint dots,
multiplicity thickening, and orange outlines around decoration groups.
All coordinates are printed with 9 significant digits so output bytes
are stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .barcode import SignedBar
from .grids import Grid

WIDTH = 800
HEIGHT = 800
MARGIN = 70.0
POS_COLOR = "#1a5fb4"
NEG_COLOR = "#c01c28"
GROUP_COLOR = "#e66100"
AXIS_COLOR = "#1c1c1c"


def _f(x: float) -> str:
    return f"{float(x):.9g}"


@dataclass
class SvgDocument:
    width: int = WIDTH
    height: int = HEIGHT
    elements: list[str] = field(default_factory=list)

    def add(self, element: str):
        self.elements.append(element)

    def to_xml(self) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([head, *self.elements, "</svg>"]) + "\n"

    def to_bytes(self) -> bytes:
        return self.to_xml().encode("utf-8")


class _Frame:
    """Linear map from data coordinates to the viewport, y pointing up."""

    def __init__(self, x_range, y_range):
        self.x0, x1 = x_range
        self.y0, y1 = y_range
        self.sx = (WIDTH - 2 * MARGIN) / ((x1 - self.x0) or 1.0)
        self.sy = (HEIGHT - 2 * MARGIN) / ((y1 - self.y0) or 1.0)

    def x(self, v: float) -> float:
        return MARGIN + (v - self.x0) * self.sx

    def y(self, v: float) -> float:
        return HEIGHT - MARGIN - (v - self.y0) * self.sy


def _axes(doc: SvgDocument, frame: _Frame, x_ticks, y_ticks):
    left, bottom = frame.x(frame.x0), frame.y(frame.y0)
    doc.add(
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>'
    )
    doc.add(
        f'<line x1="{_f(left)}" y1="{_f(MARGIN)}" x2="{_f(left)}" '
        f'y2="{_f(bottom)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    doc.add(
        f'<line x1="{_f(left)}" y1="{_f(bottom)}" x2="{_f(WIDTH - MARGIN)}" '
        f'y2="{_f(bottom)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    for v in x_ticks:
        x = frame.x(v)
        doc.add(
            f'<line x1="{_f(x)}" y1="{_f(bottom)}" x2="{_f(x)}" '
            f'y2="{_f(bottom + 6)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        doc.add(
            f'<text x="{_f(x)}" y="{_f(bottom + 22)}" font-size="11" '
            f'text-anchor="middle" fill="{AXIS_COLOR}">{_f(v)}</text>'
        )
    for v in y_ticks:
        y = frame.y(v)
        doc.add(
            f'<line x1="{_f(left - 6)}" y1="{_f(y)}" x2="{_f(left)}" '
            f'y2="{_f(y)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        doc.add(
            f'<text x="{_f(left - 10)}" y="{_f(y + 4)}" font-size="11" '
            f'text-anchor="end" fill="{AXIS_COLOR}">{_f(v)}</text>'
        )


def _bar_segment(bar: SignedBar, frame: _Frame, lane: float | None):
    if lane is None:
        return (
            frame.x(bar.lo[0]),
            frame.y(bar.lo[1]),
            frame.x(bar.hi[0]),
            frame.y(bar.hi[1]),
        )
    y = frame.y(lane)
    return frame.x(bar.lo[0]), y, frame.x(bar.hi[0]), y


def emit_svg_barcode(bars: list[SignedBar], grid: Grid) -> SvgDocument:
    """Render bars over the grid window; axes alone when bars is empty."""
    if grid.dim not in (1, 2):
        raise ValueError("SVG rendering covers 1- and 2-axis grids")
    doc = SvgDocument()
    xs = grid.real_coords[0]
    if grid.dim == 2:
        ys = grid.real_coords[1]
        frame = _Frame((xs[0], xs[-1]), (ys[0], ys[-1]))
        _axes(doc, frame, xs, ys)
        lanes = [None] * len(bars)
    else:
        # one axis: bars stack on horizontal lanes, newest at the top
        n = max(len(bars), 1)
        frame = _Frame((xs[0], xs[-1]), (0.0, float(n + 1)))
        _axes(doc, frame, xs, [])
        lanes = [float(k + 1) for k in range(len(bars))]

    segments = [_bar_segment(bar, frame, lane) for bar, lane in zip(bars, lanes)]

    groups: dict[int, list[int]] = {}
    for k, bar in enumerate(bars):
        if bar.group is not None:
            groups.setdefault(bar.group, []).append(k)
    for gid in sorted(groups):
        members = groups[gid]
        gx = [c for k in members for c in (segments[k][0], segments[k][2])]
        gy = [c for k in members for c in (segments[k][1], segments[k][3])]
        pad = 8.0
        doc.add(
            f'<rect x="{_f(min(gx) - pad)}" y="{_f(min(gy) - pad)}" '
            f'width="{_f(max(gx) - min(gx) + 2 * pad)}" '
            f'height="{_f(max(gy) - min(gy) + 2 * pad)}" fill="none" '
            f'stroke="{GROUP_COLOR}" stroke-width="1.5"/>'
        )

    for bar, (x1, y1, x2, y2) in zip(bars, segments):
        color = POS_COLOR if bar.sign > 0 else NEG_COLOR
        width = min(2.0 + 2.0 * (bar.mult - 1), 12.0)
        doc.add(
            f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke="{color}" stroke-width="{_f(width)}" class="bar"/>'
        )
        for cx, cy in ((x1, y1), (x2, y2)):
            doc.add(
                f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="3" fill="{color}"/>'
            )
        if bar.mult > 1:
            mx, my = (x1 + x2) / 2 + 7, (y1 + y2) / 2 - 7
            doc.add(
                f'<text x="{_f(mx)}" y="{_f(my)}" font-size="12" '
                f'fill="{color}">x{bar.mult}</text>'
            )
    return doc
