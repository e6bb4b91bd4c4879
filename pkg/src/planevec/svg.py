"""SVG rendering of Newton polygons.

Presentation only: a lattice grid, the support dots, the hull polyline,
highlighted Demazure points and an origin marker when the Euler part is
nonzero.  Vertex labels carry the exact lattice coordinates.
"""

from __future__ import annotations

from .vecfield import GradedForm, NewtonPolygon, is_demazure, newton_polygon

_CELL = 40
_PAD = 60


def newton_svg(g: GradedForm) -> str:
    polygon = newton_polygon(g)
    points = set(polygon.support) | {(0, 0)}
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    min_x, max_x = min(xs) - 1, max(xs) + 1
    min_y, max_y = min(ys) - 1, max(ys) + 1
    width = (max_x - min_x) * _CELL + 2 * _PAD
    height = (max_y - min_y) * _CELL + 2 * _PAD

    def sx(a: int) -> int:
        return _PAD + (a - min_x) * _CELL

    def sy(b: int) -> int:
        return height - _PAD - (b - min_y) * _CELL

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for a in range(min_x, max_x + 1):
        stroke = "#888" if a == 0 else "#ddd"
        lines.append(f'<line x1="{sx(a)}" y1="{sy(min_y)}" x2="{sx(a)}" '
                     f'y2="{sy(max_y)}" stroke="{stroke}"/>')
    for b in range(min_y, max_y + 1):
        stroke = "#888" if b == 0 else "#ddd"
        lines.append(f'<line x1="{sx(min_x)}" y1="{sy(b)}" x2="{sx(max_x)}" '
                     f'y2="{sy(b)}" stroke="{stroke}"/>')

    verts = polygon.vertices
    if len(verts) >= 2:
        pts = " ".join(f"{sx(a)},{sy(b)}" for a, b in verts)
        if len(verts) >= 3:
            lines.append(f'<polygon points="{pts}" fill="#cde4ff" '
                         f'fill-opacity="0.5" stroke="#1a5fb4" stroke-width="2"/>')
        else:
            lines.append(f'<polyline points="{pts}" fill="none" stroke="#1a5fb4" '
                         f'stroke-width="2"/>')

    for a, b in sorted(polygon.support):
        color = "#2ec27e" if is_demazure((a, b)) else "#241f31"
        lines.append(f'<circle cx="{sx(a)}" cy="{sy(b)}" r="5" fill="{color}"/>')
    if g.euler:
        lines.append(f'<circle cx="{sx(0)}" cy="{sy(0)}" r="7" fill="none" '
                     f'stroke="#c01c28" stroke-width="2"/>')
    for a, b in verts:
        lines.append(f'<text x="{sx(a) + 8}" y="{sy(b) - 8}" font-size="13" '
                     f'font-family="monospace">({a},{b})</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
