"""SVG rendering of a mesh and a walk trace."""

from __future__ import annotations

from typing import Sequence

from .mesh import Mesh, precompute_obtuse_bits
from .walks import Action, WalkTrace

WIDTH = 800.0
MARGIN = 10.0


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def render_svg(m: Mesh, trace: WalkTrace | None = None,
               query: Sequence[float] | None = None) -> str:
    """Mesh edges in gray, obtuse corners as orange dots, the walk as a red
    polyline through face centroids and crossed-edge midpoints, the query as
    a black disk.  Element order is fixed so output is reproducible."""
    x0, y0, x1, y1 = m.bbox()
    span = max(x1 - x0, y1 - y0) or 1.0
    s = (WIDTH - 2 * MARGIN) / span
    w = (x1 - x0) * s + 2 * MARGIN
    h = (y1 - y0) * s + 2 * MARGIN

    def tx(p):
        return _fmt(MARGIN + (p[0] - x0) * s), _fmt(MARGIN + (y1 - p[1]) * s)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(w)}" height="{_fmt(h)}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        '<g id="mesh" stroke="gray" stroke-width="0.5px" fill="none">',
    ]
    for e in range(m.n_halfedges):
        t = m.twin[e]
        if e < t:
            (ax, ay), (bx, by) = (tx(q) for q in m.segment(e))
            out.append(f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}"/>')
    out.append("</g>")
    out.append('<g id="obtuse" fill="orange">')
    for e, bit in enumerate(precompute_obtuse_bits(m)):
        if bit:
            cx, cy = tx(m.points[m.target(e)])
            out.append(f'<circle cx="{cx}" cy="{cy}" r="2"/>')
    out.append("</g>")
    if trace is not None:
        pts = [m.centroid(m.face[trace.start])]
        for e, action in trace.steps:
            if action is Action.CROSS_TWIN:
                a, b = m.segment(e)
                pts.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
                if not m.is_outer(m.face[e]):
                    pts.append(m.centroid(m.face[e]))
        coords = " ".join(",".join(tx(p)) for p in pts)
        out.append(f'<polyline id="walk" points="{coords}" stroke="red" '
                   f'stroke-width="1.5px" fill="none"/>')
    if query is not None:
        qx, qy = tx(query)
        out.append(f'<circle id="query" cx="{qx}" cy="{qy}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
