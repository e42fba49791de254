"""Static SVG drawings of marked subdivisions.

Output depends only on the subdivision data, so drawings are byte-stable
and can be compared against stored files.
"""
from __future__ import annotations

from typing import Sequence

from .subdivision import MarkedSubdivision

UNIT = 48
PAD = 24
GAP = 36

_SHADE = ["#f4c095", "#a8d5ba", "#9ec5e8", "#e8b4d8", "#d8d39e", "#c8b8e8"]


def _bbox(s: MarkedSubdivision):
    pts = [v for c in s.cells for v in c.vertices]
    pts += [v for e in s.rag_rug for v in e.vertices]
    if not pts:
        return (0, 0, 0, 0)
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return (min(xs), min(ys), max(xs), max(ys))


def _panel(s: MarkedSubdivision, ox: int, label: str | None) -> tuple[list[str], int, int]:
    x0, y0, x1, y1 = _bbox(s)
    w = (x1 - x0) * UNIT
    h = (y1 - y0) * UNIT

    def xy(p):
        return (ox + PAD + (p[0] - x0) * UNIT, PAD + (y1 - p[1]) * UNIT)

    def poly(vs):
        return " ".join(f"{a},{b}" for a, b in map(xy, vs))

    out = ['<g class="subdivision">']
    if label:
        out.append(f'<text x="{ox + PAD}" y="{PAD - 8}" font-size="12">{label}</text>')
    for c in sorted(s.cells, key=lambda c: c.vertices):
        out.append(f'<polygon points="{poly(c.vertices)}" fill="none" stroke="#333" stroke-width="1.5"/>')
        cx = sum(v[0] for v in c.vertices) / len(c.vertices)
        cy = sum(v[1] for v in c.vertices) / len(c.vertices)
        tx, ty = xy((cx, cy))
        mu = "" if c.cls.mu is None else str(c.cls.mu)
        tag = c.cls.tag[0]
        out.append(f'<text x="{tx:g}" y="{ty:g}" font-size="9" text-anchor="middle" fill="#555">{tag}{mu}</text>')
    for i, e in enumerate(s.rag_rug):
        shade = _SHADE[i % len(_SHADE)]
        if e.is_segment:
            (a, b) = xy(e.lo), xy(e.hi)
            out.append(
                f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="{shade}" stroke-width="5"/>'
            )
        else:
            out.append(
                f'<polygon points="{poly(e.vertices)}" fill="{shade}" stroke="#000" stroke-width="2"/>'
            )
        for a, b, parts in e.edges:
            if len(parts) < 2:
                continue
            mx, my = xy(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
            txt = "+".join(str(q) for q in parts)
            out.append(f'<text x="{mx + 4:g}" y="{my + 10:g}" font-size="9" fill="#a00">{txt}</text>')
        cx = sum(v[0] for v in e.vertices) / len(e.vertices)
        cy = sum(v[1] for v in e.vertices) / len(e.vertices)
        tx, ty = xy((cx, cy))
        if e.is_segment:
            ty -= 6
        out.append(f'<text x="{tx:g}" y="{ty:g}" font-size="11" text-anchor="middle">k={e.k}</text>')
    pts = sorted({v for c in s.cells for v in c.vertices} | {v for e in s.rag_rug for v in e.vertices})
    for p in pts:
        a, b = xy(p)
        out.append(f'<circle cx="{a}" cy="{b}" r="2" fill="#000"/>')
    out.append("</g>")
    return out, w + 2 * PAD, h + 2 * PAD


def render_svg(subdivisions: MarkedSubdivision | Sequence[MarkedSubdivision], labels: Sequence[str] | None = None) -> str:
    """One panel per subdivision, left to right.  An empty list gives an empty drawing."""
    if isinstance(subdivisions, MarkedSubdivision):
        subdivisions = [subdivisions]
    body: list[str] = []
    ox = 0
    height = 0
    for i, s in enumerate(subdivisions):
        label = labels[i] if labels is not None else None
        lines, w, h = _panel(s, ox, label)
        body.extend(lines)
        ox += w + GAP
        height = max(height, h)
    width = max(0, ox - GAP)
    head = f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    return "\n".join([head, *body, "</svg>"]) + "\n"
