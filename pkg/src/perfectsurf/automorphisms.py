"""The vertical flip, the cylinder shear and their composite as point and direction maps.

The shear acts cylinder by cylinder.  Each horizontal cylinder is unrolled
into a strip: its trapezoids are translated side by side so that the right
edge of one meets the left edge of the next.  In strip coordinates
``(u, v)``, with ``v`` the height above the cylinder bottom, the shear is
``(u, v) -> (u + M*v, v)`` taken modulo the circumference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cylinders import Trapezoid, all_bands, band_of, decompose, locate, perfectness
from .geometry import EPS, Point, SurfaceError, Surface, SurfacePoint


class NotPerfect(SurfaceError):
    pass


@dataclass(frozen=True)
class CylinderChart:
    """Unrolled strip of one cylinder.

    ``shifts[i]`` is added to polygon x-coordinates of trapezoid ``i`` to get
    the strip coordinate ``u``.  The strip has period ``width``.
    """

    cylinder: int
    trapezoids: tuple[Trapezoid, ...]
    shifts: tuple[float, ...]
    width: float
    height: float

    def left(self, i: int, v: float) -> float:
        t = self.trapezoids[i]
        return t.x_bounds(t.bottom + v)[0] + self.shifts[i]

    def right(self, i: int, v: float) -> float:
        t = self.trapezoids[i]
        return t.x_bounds(t.bottom + v)[1] + self.shifts[i]

    def to_chart(self, i: int, x: float, y: float) -> Point:
        t = self.trapezoids[i]
        return (x + self.shifts[i], y - t.bottom)

    def reduce(self, u: float, v: float, tol: float = 1e3 * EPS) -> tuple[int, float]:
        """(piece, u reduced into the fundamental strip) for a strip point.

        A point on a gluing edge goes to the piece on the left of that edge.
        """
        w = (u - self.left(0, v)) % self.width
        if w <= tol or self.width - w <= tol:
            w = self.width
        u = self.left(0, v) + w
        for i in range(len(self.trapezoids)):
            if u <= self.right(i, v) + tol:
                return i, u
        raise SurfaceError(f"strip coordinate {u} escapes cylinder {self.cylinder}")

    def from_chart(self, u: float, v: float) -> SurfacePoint:
        i, u = self.reduce(u, v)
        t = self.trapezoids[i]
        return SurfacePoint(t.polygon, u - self.shifts[i], v + t.bottom)


def _chart(index: int, cyl) -> CylinderChart:
    traps = cyl.trapezoids
    shifts = [-traps[0].bl[0]]
    for prev, nxt in zip(traps, traps[1:]):
        shifts.append(shifts[-1] + prev.br[0] - nxt.bl[0])
    return CylinderChart(index, traps, tuple(shifts), cyl.width, cyl.height)


def charts(s: Surface) -> list[CylinderChart]:
    return s.cached("charts", lambda: [_chart(c, cyl) for c, cyl in enumerate(decompose(s))])


def common_modulus(s: Surface) -> float:
    def build() -> float:
        rep = perfectness(s)
        if not rep.is_perfect:
            raise NotPerfect("; ".join(rep.problems))
        return rep.common_modulus
    return s.cached("common-modulus", build)


def flip_point(s: Surface, p: SurfacePoint) -> SurfacePoint:
    """Reflect through the vertical axis of the point's own polygon."""
    return SurfacePoint(p.polygon, s.polygons[p.polygon].reflect_x(p.x), p.y)


def shear_point(s: Surface, p: SurfacePoint) -> SurfacePoint:
    m = common_modulus(s)
    c, i = locate(s, p.polygon, p.y)
    chart = charts(s)[c]
    u, v = chart.to_chart(i, p.x, p.y)
    return chart.from_chart(u + m * v, v)


def flip_shear_point(s: Surface, p: SurfacePoint) -> SurfacePoint:
    return shear_point(s, flip_point(s, p))


def flip_shear_vector(dx: float, dy: float, modulus: float) -> Point:
    return (-dx + modulus * dy, dy)


def flip_shear_direction(theta: float, modulus: float) -> float:
    """Angle in [0, 2*pi) of the image of (cos theta, sin theta)."""
    x, y = flip_shear_vector(math.cos(theta), math.sin(theta), modulus)
    return math.atan2(y, x) % (2 * math.pi)


def same_point(s: Surface, p: SurfacePoint, q: SurfacePoint, tol: float = 1e-9) -> bool:
    """Whether ``p`` and ``q`` agree on the surface, allowing for edge identifications.

    Vertices are not handled; they are outside the domain of the maps here.
    """
    if p.polygon == q.polygon and math.hypot(p.x - q.x, p.y - q.y) <= tol:
        return True
    poly = s.polygons[p.polygon]
    for i in range(poly.n_edges):
        (ax, ay), (bx, by) = poly.edge(i)
        ex, ey = bx - ax, by - ay
        dist = abs(ex * (p.y - ay) - ey * (p.x - ax)) / math.hypot(ex, ey)
        if dist > tol:
            continue
        k2, _ = s.partner((p.polygon, i))
        tx, ty = s.translation((p.polygon, i))
        if k2 == q.polygon and math.hypot(p.x + tx - q.x, p.y + ty - q.y) <= tol:
            return True
    return False


def sheared_edge_segments(s: Surface, ref: tuple[int, int]) -> list[tuple[int, Point, Point]]:
    """Image of a gluing edge under the flip-shear, cut into polygon pieces.

    Returns ``(polygon, start, end)`` triples in polygon coordinates.
    """
    m = common_modulus(s)
    k, i = ref
    (ax, ay), (bx, by) = s.polygons[k].edge(i)
    if abs(ay - by) <= EPS:
        raise ValueError(f"edge {ref} is horizontal")
    if ay > by:
        (ax, ay), (bx, by) = (bx, by), (ax, ay)
    a = flip_point(s, SurfacePoint(k, ax, ay))
    b = flip_point(s, SurfacePoint(k, bx, by))
    c, j = locate(s, k, (ay + by) / 2)
    chart = charts(s)[c]
    u0, v0 = chart.to_chart(j, a.x, a.y)
    u1, v1 = chart.to_chart(j, b.x, b.y)
    u0, u1 = u0 + m * v0, u1 + m * v1

    def at(t: float) -> Point:
        return (u0 + t * (u1 - u0), v0 + t * (v1 - v0))

    # parameters where the sheared segment meets a piece boundary
    cuts = {0.0, 1.0}
    wraps = int(math.ceil(abs(u1 - u0) / chart.width)) + 2
    for piece in range(len(chart.trapezoids)):
        l0, l1 = chart.left(piece, v0), chart.left(piece, v1)
        for period in range(-wraps, wraps + 1):
            off = period * chart.width
            f0 = u0 - l0 - off
            f1 = u1 - l1 - off
            if f0 != f1:
                t = f0 / (f0 - f1)
                if 1e-12 < t < 1 - 1e-12:
                    cuts.add(t)
    ts = sorted(cuts)
    out = []
    for t0, t1 in zip(ts, ts[1:]):
        um, vm = at((t0 + t1) / 2)
        piece, reduced = chart.reduce(um, vm)
        off = um - reduced + chart.shifts[piece]
        tr = chart.trapezoids[piece]
        pts = []
        for tt in (t0, t1):
            u, v = at(tt)
            pts.append((u - off, v + tr.bottom))
        out.append((tr.polygon, pts[0], pts[1]))
    return out


def _meets(p1: Point, p2: Point, q1: Point, q2: Point, interior: bool, tol: float = 1e-9) -> bool:
    """Whether segment p1p2 meets q1q2.

    With ``interior`` the meeting point must avoid q1 and q2, unless the two
    segments overlap along a stretch of positive length.
    """
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    den = rx * sy - ry * sx
    wx, wy = q1[0] - p1[0], q1[1] - p1[1]
    slen = math.hypot(sx, sy)
    if abs(den) <= 1e-15:
        # parallel: only a collinear overlap counts
        if abs(wx * sy - wy * sx) / slen > tol:
            return False
        a = ((p1[0] - q1[0]) * sx + (p1[1] - q1[1]) * sy) / slen ** 2
        b = ((p2[0] - q1[0]) * sx + (p2[1] - q1[1]) * sy) / slen ** 2
        overlap = min(max(a, b), 1.0) - max(min(a, b), 0.0)
        return overlap > tol if interior else overlap >= -tol
    t = (wx * sy - wy * sx) / den
    u = (wx * ry - wy * rx) / den
    margin = tol if interior else -tol
    return -tol <= t <= 1 + tol and margin < u < 1 - margin


def sheared_edge_meets_edge(s: Surface, ref: tuple[int, int], interior: bool = True) -> bool:
    """Whether the flip-shear image of gluing edge ``ref`` meets the edge.

    With ``interior`` (the default) a meeting only at an endpoint of the edge,
    that is at a cone point, does not count.
    """
    partner = s.partner(ref)
    for poly, a, b in sheared_edge_segments(s, ref):
        for k, i in (ref, partner):
            if k == poly and _meets(a, b, *s.polygons[k].edge(i), interior=interior):
                return True
    return False


def touches_apex(s: Surface, ref: tuple[int, int]) -> bool:
    """Whether the edge ends at the apex of a triangular band of either polygon it bounds."""
    for k, i in (ref, s.partner(ref)):
        for t in all_bands(s)[k]:
            if i not in (t.left_edge, t.right_edge):
                continue
            if t.bottom_width <= EPS or t.top_width <= EPS:
                return True
    return False


def point_band(s: Surface, p: SurfacePoint) -> Trapezoid:
    return band_of(s, p.polygon, p.y)
