"""SVG drawings of FPLs in red/blue line-art style."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List
from xml.sax.saxutils import escape

from .fpl_core import Fpl

_OFFSETS = {"N": (-1, 0), "S": (1, 0), "W": (0, -1), "E": (0, 1)}


@dataclass(frozen=True)
class RenderSpec:
    path_color: str = "#d62728"
    converse_color: str = "#1f77b4"
    highlight_color: str = "#f2c200"
    labels: bool = True
    scale: int = 40

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.path_color == self.converse_color:
            raise ValueError("path and converse colours must differ")


def _line(x1, y1, x2, y2, color, width, cls) -> str:
    return (f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="{escape(color)}" stroke-width="{width}" stroke-linecap="round"/>')


def render_svg(f: Fpl, spec: RenderSpec = RenderSpec(), highlight_mask: int = 0) -> str:
    """Interior path edges, converse edges, occupied stubs and their labels.

    ``highlight_mask`` (a bitmask over the interior edges, e.g. an
    alternating cycle) is drawn as a wide underlay.
    """
    n = f.n
    s = spec.scale
    lat = f.lattice
    pos = lambda v: (v[1] * s, v[0] * s)
    size = (n + 1) * s
    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for k, (u, w) in enumerate(lat.edges):
        if highlight_mask >> k & 1:
            out.append(_line(*pos(u), *pos(w), spec.highlight_color, max(1, s // 4), "highlight"))
    for k, (u, w) in enumerate(lat.edges):
        on = f.mask >> k & 1
        cls, color = ("path", spec.path_color) if on else ("converse", spec.converse_color)
        out.append(_line(*pos(u), *pos(w), color, max(1, s // 10), cls))
    for label, (r, c, side) in enumerate(lat.labels, 1):
        dr, dc = _OFFSETS[side]
        x0, y0 = pos((r, c))
        x1, y1 = x0 + dc * s // 2, y0 + dr * s // 2
        out.append(_line(x0, y0, x1, y1, spec.path_color, max(1, s // 10), "stub"))
        if spec.labels:
            tx, ty = x0 + dc * (3 * s) // 4, y0 + dr * (3 * s) // 4
            out.append(f'<text class="label" x="{tx}" y="{ty}" font-size="{max(6, s // 3)}" '
                       f'text-anchor="middle" dominant-baseline="middle">{label}</text>')
    for r, c in lat.vertices:
        x, y = pos((r, c))
        out.append(f'<circle cx="{x}" cy="{y}" r="{max(1, s // 16)}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def edge_colours(svg: str) -> List[str]:
    """Classes of the interior edge lines, in lattice edge order (for tests)."""
    return [line.split('"')[1] for line in svg.splitlines()
            if line.startswith('<line class="path"') or line.startswith('<line class="converse"')]
