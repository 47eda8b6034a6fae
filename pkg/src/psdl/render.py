"""Top-down orthographic SVG rendering of layouts.

One rectangle per object with a facing arrow and a name label, plus the
scene boundary. Objects flagged by a loss report get the violation
style. Output bytes are deterministic for a given input: coordinates are
formatted with fixed precision and colors derive from a stable hash of
the object name.
"""
from __future__ import annotations

import colorsys
import zlib

from .interp import Layout
from .loss import LossReport

SCALE = 60.0      # pixels per meter
MARGIN = 30.0

_STYLE = """\
    .scene { fill: #fbfaf7; stroke: #333333; stroke-width: 2; }
    .obj { stroke: #444444; stroke-width: 1; fill-opacity: 0.85; }
    .violating { stroke: #cc1111; stroke-width: 2.5; stroke-dasharray: 6 3; }
    .arrow { stroke: #222222; stroke-width: 1.2; fill: #222222; }
    .label { font: 10px sans-serif; fill: #111111; text-anchor: middle; }
"""


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _fill_color(name: str) -> str:
    hue = (zlib.crc32(name.encode("utf-8")) % 360) / 360.0
    r, g, b = colorsys.hls_to_rgb(hue, 0.72, 0.55)
    return f"#{round(r * 255):02x}{round(g * 255):02x}{round(b * 255):02x}"


def svg_document(layout: Layout, report: LossReport | None = None) -> str:
    width_px = layout.width * SCALE + 2 * MARGIN
    depth_px = layout.depth * SCALE + 2 * MARGIN

    def sx(x: float) -> float:
        return MARGIN + (x + layout.width / 2.0) * SCALE

    def sy(y: float) -> float:
        # World +y is up; SVG +y is down.
        return MARGIN + (layout.depth / 2.0 - y) * SCALE

    violating = report.violating_ids() if report else set()
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width_px)}" height="{_fmt(depth_px)}" '
        f'viewBox="0 0 {_fmt(width_px)} {_fmt(depth_px)}">',
        f"  <style>\n{_STYLE}  </style>",
        f'  <rect class="scene" x="{_fmt(sx(-layout.width / 2.0))}" y="{_fmt(sy(layout.depth / 2.0))}" '
        f'width="{_fmt(layout.width * SCALE)}" height="{_fmt(layout.depth * SCALE)}"/>',
    ]
    for obj in layout.objects:
        box = obj.world_aabb()
        cls = "obj violating" if obj.id in violating else "obj"
        parts.append(
            f'  <g id="{obj.id}">'
        )
        parts.append(
            f'    <rect class="{cls}" fill="{_fill_color(obj.name)}" '
            f'x="{_fmt(sx(box.min.x))}" y="{_fmt(sy(box.max.y))}" '
            f'width="{_fmt((box.max.x - box.min.x) * SCALE)}" '
            f'height="{_fmt((box.max.y - box.min.y) * SCALE)}"/>'
        )
        parts.append(_arrow(obj, sx, sy))
        parts.append(
            f'    <text class="label" x="{_fmt(sx(obj.center.x))}" '
            f'y="{_fmt(sy(obj.center.y) - 4.0)}">{_escape(obj.name)}</text>'
        )
        parts.append("  </g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _arrow(obj, sx, sy) -> str:
    from .geometry import facing_vector

    dx, dy = facing_vector(obj.facing)
    length = 0.45 * obj.depth
    x0, y0 = obj.center.x, obj.center.y
    x1, y1 = x0 + dx * length, y0 + dy * length
    # Arrowhead: two short back-swept segments.
    px, py = -dy, dx
    hx, hy = x1 - dx * 0.12 * obj.depth, y1 - dy * 0.12 * obj.depth
    head = (
        f"{_fmt(sx(x1))},{_fmt(sy(y1))} "
        f"{_fmt(sx(hx + px * 0.06 * obj.depth))},{_fmt(sy(hy + py * 0.06 * obj.depth))} "
        f"{_fmt(sx(hx - px * 0.06 * obj.depth))},{_fmt(sy(hy - py * 0.06 * obj.depth))}"
    )
    return (
        f'    <line class="arrow" x1="{_fmt(sx(x0))}" y1="{_fmt(sy(y0))}" '
        f'x2="{_fmt(sx(x1))}" y2="{_fmt(sy(y1))}"/>\n'
        f'    <polygon class="arrow" points="{head}"/>'
    )


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(layout: Layout, out_path, report: LossReport | None = None) -> None:
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(svg_document(layout, report))
