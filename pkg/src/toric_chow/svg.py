"""Static SVG pictures of rank-2 fans with traced chains drawn on top.

Coordinates stay exact until the final string formatting.
"""
from __future__ import annotations

from fractions import Fraction
from math import hypot

from .errors import ToricError

PALETTE = ["#dbe9f6", "#fde2c8", "#d9f0d3", "#eadcf2", "#fbe3e8", "#fff4c2", "#d7eeee", "#ececec"]
SIZE = 480


class RenderError(ToricError):
    pass


def _num(x) -> str:
    s = f"{float(x):.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render(doc: dict) -> str:
    """SVG for a strata report or a single chain document (source fan of rank 2)."""
    fan = doc.get("fan")
    if fan is None or fan.get("rank") != 2:
        raise RenderError(f"rendering needs a rank-2 fan, got rank {None if fan is None else fan.get('rank')}")
    if doc.get("kind") == "chain":
        chains = [doc]
    else:
        chains = [s["chain"] for s in doc.get("strata", [])]
    rays = [tuple(Fraction(c) for c in r) for r in fan["rays"]]
    points = [tuple(Fraction(c) for c in v["position"]) for ch in chains for v in ch["vertices"]]
    extent = max([Fraction(2)] + [abs(c) for p in points for c in p]) * Fraction(3, 2) + 1
    scale = Fraction(SIZE // 2 - 20) / extent
    reach = extent * 3

    def xy(p):
        return _num(SIZE / 2 + p[0] * scale), _num(SIZE / 2 - p[1] * scale)

    def far(v):
        n = hypot(float(v[0]), float(v[1]))
        return (Fraction(float(v[0]) / n) * reach, Fraction(float(v[1]) / n) * reach)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<defs><clipPath id="frame"><rect x="0" y="0" width="{0}" height="{0}"/></clipPath></defs>'.format(SIZE),
        '<rect x="0" y="0" width="{0}" height="{0}" fill="white"/>'.format(SIZE),
        '<g clip-path="url(#frame)">',
    ]
    for k, cone in enumerate(fan["cones"]):
        corners = [(0, 0)] + [far(rays[i]) for i in _angular(cone, rays)]
        pts = " ".join(",".join(xy(c)) for c in corners)
        out.append(f'<polygon class="sector" points="{pts}" fill="{PALETTE[k % len(PALETTE)]}" '
                   f'stroke="none"/>')
    for r in rays:
        x0, y0 = xy((0, 0))
        x1, y1 = xy(far(r))
        out.append(f'<line class="ray" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="#333" stroke-width="1.5"/>')
        mx, my = xy(r)
        out.append(f'<circle class="ray-marker" cx="{mx}" cy="{my}" r="3" fill="#333"/>')
    for ch in chains:
        n0 = tuple(Fraction(c) for c in ch["direction"])
        verts = [tuple(Fraction(c) for c in v["position"]) for v in ch["vertices"]]
        first, last = verts[0], verts[-1]
        span = reach / max(abs(n0[0]), abs(n0[1]))
        a = (first[0] - n0[0] * span, first[1] - n0[1] * span)
        b = (last[0] + n0[0] * span, last[1] + n0[1] * span)
        x0, y0 = xy(a)
        x1, y1 = xy(b)
        out.append(f'<line class="trace" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" '
                   f'stroke="#c0392b" stroke-width="1.2" stroke-dasharray="4 3"/>')
        for v in verts:
            cx, cy = xy(v)
            out.append(f'<circle class="vertex" cx="{cx}" cy="{cy}" r="4" fill="#c0392b"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _angular(cone, rays):
    """Ray indices of a 2-dimensional cone ordered counterclockwise."""
    idx = list(cone)
    if len(idx) != 2:
        return idx
    a, b = rays[idx[0]], rays[idx[1]]
    return idx if a[0] * b[1] - a[1] * b[0] > 0 else idx[::-1]
