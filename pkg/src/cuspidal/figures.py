"""Deterministic, self-contained SVG emission for the two figure kinds.

No external assets: styling is an inline <style> block, coordinates are
fixed-precision decimals, and identical inputs produce byte-identical
output.  The workspace-topology palette is fixed so partition figures stay
comparable across runs:

    WT1 #a6cee3   WT2 #1f78b4   WT3 #b2df8a
    WT4 #33a02c   WT5 #fb9a99   WT6 #e31a1c
    WT7 #fdbf6f   WT8 #ff7f00   WT9 #cab2d6
"""

from __future__ import annotations

import numpy as np

from .kinematics import Geometry
from .sweep import PartitionRaster
from .tracing import CuspPoint, NodePoint, SingularCurve, isolated_singular_points

WT_PALETTE = {
    "WT1": "#a6cee3", "WT2": "#1f78b4", "WT3": "#b2df8a",
    "WT4": "#33a02c", "WT5": "#fb9a99", "WT6": "#e31a1c",
    "WT7": "#fdbf6f", "WT8": "#ff7f00", "WT9": "#cab2d6",
}

_STYLE = """
    .ws1 { fill: none; stroke: #1f78b4; stroke-width: 1.2; }
    .ws2 { fill: none; stroke: #333333; stroke-width: 1.2; }
    .axis { stroke: #999999; stroke-width: 0.6; stroke-dasharray: 4 3; }
    .cusp { fill: #ffffff; stroke: #d62728; stroke-width: 1.2; }
    .node { stroke: #2ca02c; stroke-width: 1.4; }
    .iso { fill: #9467bd; }
    .overlay { fill: none; stroke: #222222; stroke-width: 0.8; }
    .legend-label { font: 10px sans-serif; fill: #222222; }
    .title { font: 12px sans-serif; fill: #222222; }
"""


def _f(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


class _Canvas:
    """Affine data-to-pixel map with the y axis flipped for SVG."""

    def __init__(self, xmin, xmax, ymin, ymax, width=640.0, margin=40.0):
        self.xmin, self.ymin = xmin, ymin
        span_x = max(xmax - xmin, 1e-9)
        span_y = max(ymax - ymin, 1e-9)
        self.scale = (width - 2 * margin) / span_x
        self.margin = margin
        self.width = width
        self.height = span_y * self.scale + 2 * margin
        self.ymax = ymax

    def x(self, v: float) -> float:
        return self.margin + (v - self.xmin) * self.scale

    def y(self, v: float) -> float:
        return self.margin + (self.ymax - v) * self.scale

    def pt(self, v, w) -> str:
        return f"{_f(self.x(v))},{_f(self.y(w))}"


def _document(width: float, height: float, body: list[str], title: str) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_f(width)} {_f(height)}">',
        f"<style>{_STYLE}</style>",
        f'<text class="title" x="8" y="14">{title}</text>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def boundary_figure(geom: Geometry, curves: list[SingularCurve],
                    cusps: list[CuspPoint], nodes: list[NodePoint]) -> str:
    """Workspace half cross-section: boundary polylines plus feature markers.

    Cusps are circles, nodes are crosses, isolated singular points are small
    squares; the rho axis runs horizontally.
    """
    images = [c.image for c in curves if not c.is_line]
    allpts = np.vstack(images) if images else np.zeros((1, 2))
    xmin, xmax = float(np.min(allpts[:, 0])), float(np.max(allpts[:, 0]))
    ymin, ymax = float(np.min(allpts[:, 1])), float(np.max(allpts[:, 1]))
    pad = 0.06 * max(xmax - xmin, ymax - ymin, 1e-6)
    cv = _Canvas(min(xmin, 0.0) - pad, xmax + pad, ymin - pad, ymax + pad)

    body: list[str] = []
    body.append(f'<line class="axis" x1="{_f(cv.x(cv.xmin))}" y1="{_f(cv.y(0.0))}" '
                f'x2="{_f(cv.x(xmax + pad))}" y2="{_f(cv.y(0.0))}"/>')
    for c in curves:
        if c.is_line:
            continue
        cls = "ws1" if c.label == "S1" else "ws2"
        pts = " ".join(cv.pt(p[0], p[1]) for p in c.image)
        body.append(f'<polygon class="{cls}" points="{pts}"/>')
    for p in isolated_singular_points(geom):
        x, y = cv.x(p.rho), cv.y(p.z)
        body.append(f'<rect class="iso" x="{_f(x - 2.2)}" y="{_f(y - 2.2)}" '
                    f'width="4.4" height="4.4"/>')
    for c in cusps:
        body.append(f'<circle class="cusp" cx="{_f(cv.x(c.point.rho))}" '
                    f'cy="{_f(cv.y(c.point.z))}" r="3.2"/>')
    r = 3.4
    for n in nodes:
        x, y = cv.x(n.point.rho), cv.y(n.point.z)
        body.append(f'<path class="node" d="M {_f(x - r)} {_f(y - r)} L {_f(x + r)} {_f(y + r)} '
                    f'M {_f(x - r)} {_f(y + r)} L {_f(x + r)} {_f(y - r)}"/>')
    title = (f"workspace section d2={_f(geom.d2)} d3={_f(geom.d3)} "
             f"d4={_f(geom.d4)} r2={_f(geom.r2)}")
    return _document(cv.width, cv.height, body, title)


def sweep_figure(raster: PartitionRaster,
                 overlays: list | None = None) -> str:
    """Partition raster coloured by workspace topology with curve overlays."""
    d3lo, d3hi = raster.d3_range
    d4lo, d4hi = raster.d4_range
    cv = _Canvas(d3lo, d3hi, d4lo, d4hi, width=560.0, margin=46.0)
    n3, n4 = raster.resolution
    cw = (d3hi - d3lo) / n3
    ch = (d4hi - d4lo) / n4

    body: list[str] = []
    d3s = raster.d3_centers
    # vertical run-length merge inside each d3 column
    for i in range(n3):
        x0 = cv.x(d3s[i] - 0.5 * cw)
        wpx = cw * cv.scale
        j = 0
        col = raster.wt[i]
        while j < n4:
            k = j
            while k + 1 < n4 and col[k + 1] == col[j]:
                k += 1
            lo = d4lo + j * ch
            hi = d4lo + (k + 1) * ch
            body.append(
                f'<rect x="{_f(x0)}" y="{_f(cv.y(hi))}" width="{_f(wpx)}" '
                f'height="{_f((hi - lo) * cv.scale)}" '
                f'fill="{WT_PALETTE[f"WT{col[j]}"]}"/>')
            j = k + 1

    clip = (f'<clipPath id="plot"><rect x="{_f(cv.x(d3lo))}" y="{_f(cv.y(d4hi))}" '
            f'width="{_f((d3hi - d3lo) * cv.scale)}" '
            f'height="{_f((d4hi - d4lo) * cv.scale)}"/></clipPath>')
    body.insert(0, clip)
    for sid, line in overlays or []:
        keep = line[:, 1] <= d4hi * 4.0
        pts = " ".join(cv.pt(p[0], p[1]) for p in line[keep])
        if pts:
            body.append(f'<polyline class="overlay" clip-path="url(#plot)" '
                        f'points="{pts}"/>')
            anchor = line[keep][min(len(line[keep]) - 1, 8)]
            ax = cv.x(float(anchor[0]))
            ay = max(cv.y(min(float(anchor[1]), d4hi)), cv.margin + 10)
            body.append(f'<text class="legend-label" x="{_f(ax + 2)}" '
                        f'y="{_f(ay)}">{sid.value}</text>')

    lx = cv.width + 6
    body.append(f'<rect x="{_f(cv.width)}" y="0" width="84" '
                f'height="{_f(cv.height)}" fill="#ffffff"/>')
    for k in range(1, 10):
        name = f"WT{k}"
        y0 = 20 + 16 * k
        body.append(f'<rect x="{_f(lx)}" y="{_f(y0)}" width="12" height="12" '
                    f'fill="{WT_PALETTE[name]}"/>')
        body.append(f'<text class="legend-label" x="{_f(lx + 16)}" '
                    f'y="{_f(y0 + 10)}">{name}</text>')

    title = f"partition r2={_f(raster.r2)} ({n3}x{n4}, {raster.mode})"
    doc = _document(cv.width + 90, cv.height, body, title)
    return doc
