"""SVG route plot of a plan document (as produced by :mod:`groundair.fileio`).

UGV legs with the UAV docked use the ``carry`` stroke, legs the UGV drives
alone use ``solo``, and UAV flights A -> O -> P are dashed (``uav``).
"""
from __future__ import annotations

from xml.sax.saxutils import escape

STYLE = """
.carry { stroke: #7b2cbf; stroke-width: 2.5; fill: none; }
.solo { stroke: #00b4d8; stroke-width: 2.5; fill: none; }
.uav { stroke: #e9c46a; stroke-width: 1.8; stroke-dasharray: 6 4; fill: none; }
.survey { stroke: #999999; stroke-width: 1; fill: #f1f1f1; fill-opacity: 0.5; }
.site { fill: #333333; }
.rendezvous { fill: #e63946; }
.depot { fill: #2a9d8f; }
text { font-family: sans-serif; font-size: 12px; fill: #333333; }
"""


def _bounds(doc):
    xs, ys = [doc["start"][0]], [doc["start"][1]]
    for ph in doc["phases"]:
        (ox, oy), r = ph["O"], ph["r"]
        xs += [ox - r, ox + r]
        ys += [oy - r, oy + r]
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(doc: dict, width: int = 800, margin: int = 30) -> str:
    x0, y0, x1, y1 = _bounds(doc)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (width - 2 * margin) / span
    height = int(round((y1 - y0) * scale)) + 2 * margin

    def X(p):
        return f"{margin + (p[0] - x0) * scale:.3f}"

    def Y(p):
        # SVG y grows downwards
        return f"{height - margin - (p[1] - y0) * scale:.3f}"

    def line(a, b, cls):
        return f'<line class="{cls}" x1="{X(a)}" y1="{Y(a)}" x2="{X(b)}" y2="{Y(b)}"/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<style>{STYLE}</style>",
        f"<title>T_total = {doc['T_total']:.4f} h</title>",
    ]
    start = doc["start"]
    for ph in doc["phases"]:
        if ph["r"] > 0:
            out.append(f'<circle class="survey" cx="{X(ph["O"])}" cy="{Y(ph["O"])}" r="{ph["r"] * scale:.3f}"/>')
    prev = start
    for ph in doc["phases"]:
        a, o, p = ph["A"], ph["O"], ph["P"]
        if a != prev:
            out.append(line(prev, a, "carry"))
        if p != a:
            out.append(line(a, p, "solo"))
        if a != o:
            pts = " ".join(f"{X(q)},{Y(q)}" for q in (a, o, p))
            out.append(f'<polyline class="uav" points="{pts}"/>')
        prev = p
    if prev != start:
        out.append(line(prev, start, "carry"))
    for k, ph in enumerate(doc["phases"]):
        o, p = ph["O"], ph["P"]
        out.append(f'<circle class="site" cx="{X(o)}" cy="{Y(o)}" r="3"/>')
        out.append(f'<text x="{float(X(o)) + 5:.3f}" y="{float(Y(o)) - 5:.3f}">{escape(str(ph["site"]))}</text>')
        if p != o:
            out.append(f'<circle class="rendezvous" cx="{X(p)}" cy="{Y(p)}" r="2.5"/>')
    out.append(f'<rect class="depot" x="{float(X(start)) - 4:.3f}" y="{float(Y(start)) - 4:.3f}" width="8" height="8"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
