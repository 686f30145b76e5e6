"""Exact planar unfolding tracer, kept independent of the flow kernel.

Instead of moving the point across each gluing, the line stays fixed in
the plane and translated copies of the polygons are laid along it.  All
arithmetic is done on :class:`fractions.Fraction` values built from the
exact binary value of each float, so there is no accumulated rounding.
"""
from __future__ import annotations

from fractions import Fraction

from .geometry import Surface, SurfacePoint


class UnfoldingVertexHit(Exception):
    pass


def _q(x: float) -> Fraction:
    return Fraction(x)


def unfold_labels(s: Surface, start: SurfacePoint, dx: float, dy: float, n: int,
                  vertex_tol: Fraction = Fraction(1, 10 ** 12)) -> list:
    """Labels of the first ``n`` edges met by the ray from ``start`` along (dx, dy)."""
    px, py = _q(start.x), _q(start.y)
    vx, vy = _q(dx), _q(dy)
    polys = [[(_q(x), _q(y)) for x, y in p.vertices] for p in s.polygons]
    k = start.polygon
    ox, oy = Fraction(0), Fraction(0)
    t_now = Fraction(0)
    entry = None
    labels = []
    while len(labels) < n:
        verts = polys[k]
        best = None
        for i in range(len(verts)):
            if i == entry:
                continue
            ax, ay = verts[i][0] + ox, verts[i][1] + oy
            bx, by = verts[(i + 1) % len(verts)][0] + ox, verts[(i + 1) % len(verts)][1] + oy
            ex, ey = bx - ax, by - ay
            den = vx * ey - vy * ex
            if den == 0:
                continue
            wx, wy = ax - px, ay - py
            t = (wx * ey - wy * ex) / den
            u = (wx * vy - wy * vx) / den
            if t <= t_now or u < 0 or u > 1:
                continue
            if best is None or t < best[0]:
                best = (t, i, u)
        if best is None:
            raise UnfoldingVertexHit(f"ray leaves polygon {k} through no edge")
        t, i, u = best
        if u <= vertex_tol or u >= 1 - vertex_tol:
            raise UnfoldingVertexHit(f"ray passes through a vertex of polygon {k}")
        labels.append(s.label((k, i)))
        k2, i2 = s.partner((k, i))
        # the partner edge C -> D is glued with D onto A
        ax, ay = verts[i]
        dxk, dyk = polys[k2][(i2 + 1) % len(polys[k2])]
        ox, oy = ox + ax - dxk, oy + ay - dyk
        k, entry, t_now = k2, i2, t
    return labels
