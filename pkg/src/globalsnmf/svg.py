"""Static SVG scatter plots of coefficient coordinates, hand written.

Three-dimensional coordinates are drawn with an orthographic projection looking
down the ``(1, 1, 1)`` diagonal: screen x is ``(h1 - h2) / sqrt(2)`` and screen
y is ``(h1 + h2 - 2 h3) / sqrt(6)``, so the three coefficient axes appear 120
degrees apart.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN = 60
GLYPHS = ("circle", "square", "triangle")
COLORS = ("#1f77b4", "#d62728", "#2ca02c")
MARKER_SIZE = 4.0

_VIEW = np.array([
    [1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0), 0.0],
    [1.0 / np.sqrt(6.0), 1.0 / np.sqrt(6.0), -2.0 / np.sqrt(6.0)],
])


def project(coords) -> np.ndarray:
    """Map (n, 2) or (n, 3) coordinates to (n, 2) plane coordinates."""
    C = np.asarray(coords, dtype=np.float64)
    if C.ndim != 2 or C.shape[1] not in (2, 3):
        raise ValueError("scatter plots need 2 or 3 coordinates per sample")
    return C if C.shape[1] == 2 else C @ _VIEW.T


def _fmt(v):
    return f"{v:.2f}"


def _glyph(kind, x, y, color, cls):
    r = MARKER_SIZE
    if kind == "circle":
        return (f'<circle class="marker {cls}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" '
                f'fill="{color}" fill-opacity="0.8"/>')
    if kind == "square":
        return (f'<rect class="marker {cls}" x="{_fmt(x - r)}" y="{_fmt(y - r)}" '
                f'width="{_fmt(2 * r)}" height="{_fmt(2 * r)}" fill="{color}" fill-opacity="0.8"/>')
    pts = [(x, y - 1.2 * r), (x - 1.1 * r, y + 0.8 * r), (x + 1.1 * r, y + 0.8 * r)]
    ptxt = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in pts)
    return f'<polygon class="marker {cls}" points="{ptxt}" fill="{color}" fill-opacity="0.8"/>'


def scatter_svg(coords, labels, title="") -> str:
    """Return an SVG 1.1 document with one marker per sample, one glyph per class."""
    C = np.asarray(coords, dtype=np.float64)
    P = project(C)
    labels = np.asarray(labels)
    if labels.shape[0] != P.shape[0]:
        raise ValueError("one label per sample is required")
    classes = sorted(np.unique(labels).tolist())
    if len(classes) > len(GLYPHS):
        raise ValueError(f"at most {len(GLYPHS)} classes can be drawn")

    if C.shape[1] == 3:
        axis_tips = _VIEW @ np.diag(np.maximum(C.max(axis=0), 0.0))  # columns: projected axis ends
        extent = np.column_stack([P.T, axis_tips])
    else:
        axis_tips = None
        extent = P.T
    # the origin is always in view so the axes are meaningful
    lo = np.minimum(extent.min(axis=1), 0.0)
    hi = np.maximum(extent.max(axis=1), 0.0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    sx = (WIDTH - 2 * MARGIN) / span[0]
    sy = (HEIGHT - 2 * MARGIN) / span[1]

    def to_screen(p):
        return MARGIN + (p[0] - lo[0]) * sx, HEIGHT - MARGIN - (p[1] - lo[1]) * sy

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH // 2}" y="30" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="16">{escape(title)}</text>')

    ox, oy = to_screen((0.0, 0.0))
    out.append('<g class="axes" stroke="black" stroke-width="1">')
    if C.shape[1] == 2:
        out.append(f'<line x1="{_fmt(MARGIN)}" y1="{_fmt(oy)}" x2="{_fmt(WIDTH - MARGIN)}" y2="{_fmt(oy)}"/>')
        out.append(f'<line x1="{_fmt(ox)}" y1="{_fmt(MARGIN)}" x2="{_fmt(ox)}" y2="{_fmt(HEIGHT - MARGIN)}"/>')
        axis_ends = [((WIDTH - MARGIN, oy + 20), "h1"), ((ox - 20, MARGIN), "h2")]
    else:
        axis_ends = []
        for i in range(3):
            ex, ey = to_screen(axis_tips[:, i])
            out.append(f'<line x1="{_fmt(ox)}" y1="{_fmt(oy)}" x2="{_fmt(ex)}" y2="{_fmt(ey)}"/>')
            axis_ends.append(((ex, ey), f"h{i + 1}"))
    out.append("</g>")
    for (x, y), name in axis_ends:
        out.append(f'<text class="axis-label" x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
                   f'font-size="12">{name}</text>')

    for ci, cls in enumerate(classes):
        kind, color = GLYPHS[ci], COLORS[ci]
        out.append(f'<g class="class-group" data-label="{escape(str(cls))}" data-glyph="{kind}">')
        for idx in np.flatnonzero(labels == cls):
            x, y = to_screen(P[idx])
            out.append(_glyph(kind, x, y, color, f"class-{cls}"))
        out.append("</g>")

    for ci, cls in enumerate(classes):
        lx, ly = WIDTH - MARGIN - 80, MARGIN + 18 * ci
        out.append(f'<text class="legend" x="{lx + 12}" y="{ly + 4}" font-family="sans-serif" '
                   f'font-size="12">class {escape(str(cls))} ({GLYPHS[ci]})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
