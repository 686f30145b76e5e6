"""Straight-line flow on a translation surface and its cutting sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable

import numpy as np

from .geometry import EPS, Surface, SurfacePoint

EPS_HIT = 1e-9


@dataclass(frozen=True)
class Trajectory:
    start: SurfacePoint
    theta: float

    @property
    def direction(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))


@dataclass(frozen=True)
class Crossing:
    polygon: int
    edge: int
    label: Hashable
    point: tuple[float, float]
    param: float


@dataclass
class CuttingSequence:
    labels: list
    crossings: list[Crossing] = field(default_factory=list)
    family: str | None = None
    # positions in the source sequence, for derived sequences
    indices: list[int] | None = None

    @property
    def window_len(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.labels)


class VertexHit(Exception):
    """The trajectory ran into a vertex before completing the requested crossings."""

    def __init__(self, k: int, partial: CuttingSequence):
        super().__init__(f"trajectory hits a vertex before crossing {k}")
        self.k = k
        self.partial = partial


class _Kernel:
    """Per-surface edge tables for the flow loop."""

    def __init__(self, s: Surface):
        self.edges = []
        for k, poly in enumerate(s.polygons):
            rows = []
            for i in range(poly.n_edges):
                (ax, ay), (bx, by) = poly.edge(i)
                ex, ey = bx - ax, by - ay
                length = math.hypot(ex, ey)
                nx, ny = ey / length, -ex / length  # outward for ccw polygons
                tx, ty = s.translation((k, i))
                k2, i2 = s.partner((k, i))
                rows.append((ax, ay, bx, by, nx, ny, ax * nx + ay * ny, length,
                             tx, ty, k2, i2, poly.edge_labels[i]))
            self.edges.append(rows)


def _kernel(s: Surface) -> _Kernel:
    return s.cached("flow-kernel", lambda: _Kernel(s))


def trace(s: Surface, start: SurfacePoint, dx: float, dy: float,
          max_crossings: int | None = None, max_length: float | None = None) -> CuttingSequence:
    """Follow the ray from ``start`` along (dx, dy) (normalised here).

    Stops after ``max_crossings`` crossings or once the next crossing lies
    beyond arclength ``max_length``.  Raises :class:`VertexHit` carrying the
    partial sequence if the ray passes within ``EPS_HIT`` of a vertex.
    """
    if max_crossings is None and max_length is None:
        raise ValueError("need a crossing count or a length bound")
    norm = math.hypot(dx, dy)
    dx, dy = dx / norm, dy / norm
    tables = _kernel(s).edges
    k = start.polygon
    px, py = start.x, start.y
    entry = -1
    travelled = 0.0
    out = CuttingSequence([], [], s.family)
    while max_crossings is None or len(out.labels) < max_crossings:
        best_t = math.inf
        best = -1
        for i, row in enumerate(tables[k]):
            if i == entry:
                continue
            dn = dx * row[4] + dy * row[5]
            if dn <= 1e-15:
                continue
            t = (row[6] - (px * row[4] + py * row[5])) / dn
            if t < best_t:
                best_t, best = t, i
        if best < 0:
            raise VertexHit(len(out.labels), out)
        best_t = max(best_t, 0.0)
        if max_length is not None and travelled + best_t > max_length:
            break
        ax, ay, bx, by, _, _, _, length, tx, ty, k2, i2, label = tables[k][best]
        qx, qy = px + best_t * dx, py + best_t * dy
        if (math.hypot(qx - ax, qy - ay) <= EPS_HIT or math.hypot(qx - bx, qy - by) <= EPS_HIT):
            raise VertexHit(len(out.labels), out)
        travelled += best_t
        out.labels.append(label)
        out.crossings.append(Crossing(k, best, label, (qx, qy), travelled))
        k, entry = k2, i2
        px, py = qx + tx, qy + ty
    return out


def flow(s: Surface, t: Trajectory, n: int) -> CuttingSequence:
    """First ``n`` crossings of the trajectory, forward from its start."""
    if n < 1:
        raise ValueError("need at least one crossing")
    poly = s.polygons[t.start.polygon]
    if not poly.contains(t.start.x, t.start.y, EPS):
        raise ValueError(f"start {t.start} is not in polygon {t.start.polygon}")
    for vx, vy in poly.vertices:
        if math.hypot(vx - t.start.x, vy - t.start.y) <= EPS_HIT:
            raise ValueError("start point is a vertex")
    if math.sin(t.theta) == 0.0:
        for i in range(poly.n_edges):
            (_, ay), (_, by) = poly.edge(i)
            if abs(ay - by) <= EPS and abs(t.start.y - ay) <= EPS:
                raise ValueError("horizontal trajectory started on a horizontal boundary")
    return trace(s, t.start, *t.direction, max_crossings=n)


def point_after(s: Surface, seq: CuttingSequence, k: int) -> SurfacePoint:
    """Point just past crossing ``k``, transported into the polygon being entered."""
    c = seq.crossings[k]
    tx, ty = s.translation((c.polygon, c.edge))
    k2, _ = s.partner((c.polygon, c.edge))
    return SurfacePoint(k2, c.point[0] + tx, c.point[1] + ty)


def random_point(s: Surface, rng: np.random.Generator, margin: float = 1e-6) -> SurfacePoint:
    """Uniform point of the surface at distance > ``margin`` from polygon edges."""
    areas = np.array([p.area for p in s.polygons])
    k = int(rng.choice(len(areas), p=areas / areas.sum()))
    poly = s.polygons[k]
    x0, y0, x1, y1 = poly.bbox
    while True:
        x, y = rng.uniform(x0, x1), rng.uniform(y0, y1)
        if poly.boundary_distance(x, y) > margin:
            return SurfacePoint(k, float(x), float(y))


def random_trajectory(s: Surface, rng: np.random.Generator, theta_max: float,
                      delta: float = 1e-4) -> Trajectory:
    return Trajectory(random_point(s, rng), float(rng.uniform(delta, theta_max - delta)))
