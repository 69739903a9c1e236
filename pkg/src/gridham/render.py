"""Text and SVG pictures of a cover with its height labels."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .cover import CycleCover
from .height import height_of, render_ascii

UNIT = 40
MARGIN = 20

__all__ = ["render_ascii", "render_svg"]


def render_svg(h: CycleCover, labels: bool = True) -> str:
    """Graph edges in grey, cover edges in black, tau centred in each square."""
    g = h.g
    xs = [p.x for p in g.points]
    ys = [p.y for p in g.points]
    x0, y1 = min(xs), max(ys)
    w = (max(xs) - x0) * UNIT + 2 * MARGIN
    ht = (y1 - min(ys)) * UNIT + 2 * MARGIN

    def px(x: float, y: float) -> tuple[float, float]:
        return MARGIN + (x - x0) * UNIT, MARGIN + (y1 - y) * UNIT

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{ht}" viewBox="0 0 {w} {ht}">',
        f'<rect width="{w}" height="{ht}" fill="white"/>',
    ]
    for eid, (a, b) in enumerate(g.edges):
        (ax, ay), (bx, by) = px(*g.points[a]), px(*g.points[b])
        style = 'stroke="black" stroke-width="4"' if eid in h.edges else 'stroke="#ccc" stroke-width="1"'
        out.append(f'<line x1="{ax:g}" y1="{ay:g}" x2="{bx:g}" y2="{by:g}" {style} stroke-linecap="round"/>')
    for p in g.points:
        cx, cy = px(*p)
        out.append(f'<circle cx="{cx:g}" cy="{cy:g}" r="3" fill="black"/>')
    if labels:
        fld = height_of(h)
        tab = g.squares
        for s, (x, y) in enumerate(tab.cells):
            cx, cy = px(x + 0.5, y + 0.5)
            text = escape(str(fld.nodes[s]))
            out.append(
                f'<text x="{cx:g}" y="{cy:g}" font-family="monospace" font-size="14" '
                f'text-anchor="middle" dominant-baseline="central">{text}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
