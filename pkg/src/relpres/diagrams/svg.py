"""SVG drawing of a diagram: t-cells shaded, band bottoms in bold."""
from __future__ import annotations

from html import escape

import networkx as nx

from ..words import render_letter
from .core import OUTER, Diagram

_FILL = {"T": "#c8d8f0", "R": "#f3e3c3", "Q": "#e0c8f0", "L": "#d8f0c8"}


def _layout(d: Diagram, seed: int):
    vm = d.vertex_map()
    g = nx.Graph()
    g.add_nodes_from(set(vm.values()))
    for x in d.twin:
        u, v = vm[x], vm[d.twin[x]]
        if u != v:
            g.add_edge(u, v)
    pos = nx.spring_layout(g, seed=seed)
    return vm, pos


def to_svg(d: Diagram, p=None, size: int = 480, seed: int = 0) -> str:
    if not d.twin:
        return f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}"></svg>\n'
    vm, pos = _layout(d, seed)
    xs = [c[0] for c in pos.values()]
    ys = [c[1] for c in pos.values()]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    pad = 40

    def pt(v):
        x, y = pos[v]
        return (pad + (x - lo_x) / span * (size - 2 * pad), pad + (y - lo_y) / span * (size - 2 * pad))

    bottoms = set()
    if p is not None and p.hnn is not None:
        from .bands import find_t_bands
        for b in find_t_bands(d, p):
            bottoms.update(b.bottom)
            bottoms.update(d.twin[x] for x in b.bottom)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'font-family="sans-serif" font-size="11">']
    for f in d.cells():
        tag = d.faces[f].tag
        fill = _FILL.get(tag, "#eeeeee" if tag.startswith("S:") else "#ffffff")
        pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in (pt(vm[x]) for x in d.face_darts(f)))
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="none"><title>{escape(tag)}</title></polygon>')
    done = set()
    for x in sorted(d.twin):
        if d.twin[x] in done:
            continue
        done.add(x)
        (x1, y1), (x2, y2) = pt(vm[x]), pt(vm[d.twin[x]])
        width = 3 if x in bottoms else 1
        out.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                   f'stroke="black" stroke-width="{width}"/>')
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        out.append(f'<text x="{mx:.1f}" y="{my:.1f}">{escape(render_letter(d.label[x]))}</text>')
    for v in sorted(set(vm.values())):
        a, b = pt(v)
        out.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="2.5" fill="black"/>')
    if d.base is not None and d.face[d.base] == OUTER:
        a, b = pt(vm[d.base])
        out.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="5" fill="none" stroke="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
