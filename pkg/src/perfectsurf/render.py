"""Deterministic SVG drawings of surfaces, cylinders, trajectories and sheared edges."""
from __future__ import annotations

from .automorphisms import sheared_edge_segments
from .cylinders import decompose
from .flow import CuttingSequence, point_after
from .geometry import EPS, Surface, SurfacePoint

PALETTE = ("#cfe3f7", "#f7dccf", "#d8f0d2", "#efe0f5", "#f5f0c8", "#d5eeee", "#f2d0dc", "#e2e2e2")


def _num(x: float) -> str:
    v = round(x, 6)
    if v == 0:
        v = 0.0
    return f"{v:.6f}".rstrip("0").rstrip(".")


class _Canvas:
    def __init__(self, s: Surface, scale: float = 120.0, margin: float = 0.3):
        xs = [x for p in s.polygons for x, _ in p.vertices]
        ys = [y for p in s.polygons for _, y in p.vertices]
        self.x0, self.y1 = min(xs) - margin, max(ys) + margin
        self.scale = scale
        self.width = (max(xs) - min(xs) + 2 * margin) * scale
        self.height = (max(ys) - min(ys) + 2 * margin) * scale
        self.items: list[str] = []

    def pt(self, x: float, y: float) -> str:
        return f"{_num((x - self.x0) * self.scale)},{_num((self.y1 - y) * self.scale)}"

    def polygon(self, pts, **attrs):
        self.items.append(f'<polygon points="{" ".join(self.pt(*p) for p in pts)}"{_attrs(attrs)}/>')

    def line(self, a, b, **attrs):
        (x1, y1), (x2, y2) = self.pt(*a).split(","), self.pt(*b).split(",")
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{_attrs(attrs)}/>')

    def text(self, p, body: str, **attrs):
        x, y = self.pt(*p).split(",")
        self.items.append(f'<text x="{x}" y="{y}"{_attrs(attrs)}>{body}</text>')

    def svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(self.width)}" '
                f'height="{_num(self.height)}" viewBox="0 0 {_num(self.width)} {_num(self.height)}">')
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _attrs(attrs: dict) -> str:
    return "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())


def render_svg(s: Surface, cylinders: bool = False, trajectory: tuple[SurfacePoint, CuttingSequence] | None = None,
               sheared: bool = False, scale: float = 120.0) -> str:
    """SVG text for the surface with optional overlays."""
    c = _Canvas(s, scale)
    if cylinders:
        for idx, cyl in enumerate(decompose(s)):
            colour = PALETTE[idx % len(PALETTE)]
            for t in cyl.trapezoids:
                c.polygon(t.corners, fill=colour, stroke="none")
    for poly in s.polygons:
        c.polygon(poly.vertices, fill="none", stroke="black", stroke_width="1.5")
    for k, poly in enumerate(s.polygons):
        cx = sum(x for x, _ in poly.vertices) / poly.n_edges
        cy = sum(y for _, y in poly.vertices) / poly.n_edges
        for i in range(poly.n_edges):
            mx, my = poly.edge_midpoint(i)
            # nudge labels slightly inside the polygon
            lx, ly = mx + 0.12 * (cx - mx), my + 0.12 * (cy - my)
            c.text((lx, ly), str(poly.edge_labels[i]), font_size="12", text_anchor="middle",
                   dominant_baseline="middle")
    if sheared:
        for k, poly in enumerate(s.polygons):
            for i in range(poly.n_edges):
                (_, ay), (_, by) = poly.edge(i)
                if abs(ay - by) <= EPS or s.partner((k, i)) < (k, i):
                    continue
                for _, a, b in sheared_edge_segments(s, (k, i)):
                    c.line(a, b, stroke="#1f4e9c", stroke_width="1.2", stroke_dasharray="3,3")
    if trajectory is not None:
        start, seq = trajectory
        here = start
        for j, x in enumerate(seq.crossings):
            c.line(here.xy, x.point, stroke="#c0392b", stroke_width="1.2")
            here = point_after(s, seq, j)
    return c.svg()
