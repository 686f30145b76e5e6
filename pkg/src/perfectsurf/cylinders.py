"""Horizontal cylinder decomposition, moduli and the critical angle."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import EPS, NotLevel, Point, Polygon, Surface


@dataclass(frozen=True)
class Trapezoid:
    """The part of a polygon between two consecutive vertex levels."""

    polygon: int
    band: int
    bottom: float
    top: float
    bl: Point
    br: Point
    tr: Point
    tl: Point
    left_edge: int
    right_edge: int

    @property
    def height(self) -> float:
        return self.top - self.bottom

    @property
    def bottom_width(self) -> float:
        return self.br[0] - self.bl[0]

    @property
    def top_width(self) -> float:
        return self.tr[0] - self.tl[0]

    @property
    def area(self) -> float:
        return (self.bottom_width + self.top_width) * self.height / 2

    @property
    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (self.bl, self.br, self.tr, self.tl)

    @property
    def slanted_edge(self) -> tuple[Point, Point]:
        """Positive diagonal, bottom-left corner to top-right corner."""
        return (self.bl, self.tr)

    @property
    def slant_angle(self) -> float:
        return math.atan2(self.tr[1] - self.bl[1], self.tr[0] - self.bl[0])

    def x_bounds(self, y: float) -> tuple[float, float]:
        f = (y - self.bottom) / self.height
        return (self.bl[0] + f * (self.tl[0] - self.bl[0]),
                self.br[0] + f * (self.tr[0] - self.br[0]))

    def is_isosceles(self, axis: float) -> bool:
        return (abs((self.bl[0] + self.br[0]) / 2 - axis) <= 1e3 * EPS
                and abs((self.tl[0] + self.tr[0]) / 2 - axis) <= 1e3 * EPS)


@dataclass(frozen=True)
class Cylinder:
    trapezoids: tuple[Trapezoid, ...]
    width: float
    height: float
    gluing_labels: tuple
    top_labels: tuple
    bottom_labels: tuple

    @property
    def modulus(self) -> float:
        return self.width / self.height

    @property
    def kind(self) -> str:
        return "exceptional" if len(self.trapezoids) == 1 else "typical"

    @property
    def slanted_edges(self) -> list[tuple[int, Point, Point]]:
        return [(t.polygon, *t.slanted_edge) for t in self.trapezoids]

    @property
    def area(self) -> float:
        return sum(t.area for t in self.trapezoids)

    def to_json(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "modulus": self.modulus,
            "kind": self.kind,
            "gluing_labels": list(self.gluing_labels),
            "trapezoids": [{"polygon": t.polygon, "band": t.band,
                            "corners": [list(c) for c in t.corners]} for t in self.trapezoids],
        }


def polygon_bands(poly: Polygon, index: int = 0) -> list[Trapezoid]:
    """Cut a level polygon along horizontals through its vertices."""
    levels = poly.levels()
    lefts: dict[int, int] = {}
    rights: dict[int, int] = {}
    for i in range(poly.n_edges):
        pos = poly.edge_position(i)
        if pos.horizontal:
            continue
        table = rights if pos.side == "right" else lefts
        if pos.level in table:
            raise NotLevel(f"band {pos.level} of polygon {index} has two {pos.side} edges")
        table[pos.level] = i
    bands = []
    for j in range(len(levels) - 1):
        if j not in lefts or j not in rights:
            raise NotLevel(f"band {j} of polygon {index} is not bounded by single edges")
        tl, bl = poly.edge(lefts[j])
        br, tr = poly.edge(rights[j])
        bands.append(Trapezoid(index, j, levels[j], levels[j + 1], bl, br, tr, tl,
                               lefts[j], rights[j]))
    return bands


def all_bands(s: Surface) -> list[list[Trapezoid]]:
    return s.cached("bands", lambda: [polygon_bands(p, k) for k, p in enumerate(s.polygons)])


def band_of(s: Surface, polygon: int, y: float) -> Trapezoid:
    """Band containing height y; bottom-inclusive, top-exclusive except at the very top."""
    bands = all_bands(s)[polygon]
    for t in bands:
        if t.bottom - EPS <= y < t.top - EPS:
            return t
    if abs(y - bands[-1].top) <= EPS:
        return bands[-1]
    raise ValueError(f"height {y} outside polygon {polygon}")


def decompose(s: Surface) -> list[Cylinder]:
    """Chain trapezoids across non-horizontal gluings into closed cylinders."""
    return s.cached("cylinders", lambda: _decompose(s))


def _decompose(s: Surface) -> list[Cylinder]:
    bands = all_bands(s)
    by_left = {(t.polygon, t.left_edge): t for row in bands for t in row}
    seen: set[tuple[int, int]] = set()
    cylinders = []
    for row in bands:
        for start in row:
            if (start.polygon, start.band) in seen:
                continue
            chain = []
            t = start
            while (t.polygon, t.band) not in seen:
                seen.add((t.polygon, t.band))
                chain.append(t)
                t = by_left[s.partner((t.polygon, t.right_edge))]
            if t is not start:
                raise NotLevel("trapezoid chain does not close up")
            width = sum(t.bottom_width for t in chain)
            gl = tuple(s.label((t.polygon, t.right_edge)) for t in chain)
            tops, bottoms = [], []
            for t in chain:
                poly = s.polygons[t.polygon]
                for i in range(poly.n_edges):
                    pos = poly.edge_position(i)
                    if pos.side == "top" and t.band == pos.level - 1:
                        tops.append(s.label((t.polygon, i)))
                    if pos.side == "bottom" and t.band == 0:
                        bottoms.append(s.label((t.polygon, i)))
            cylinders.append(Cylinder(tuple(chain), width, chain[0].height, gl,
                                      tuple(tops), tuple(bottoms)))
    return cylinders


def locate(s: Surface, polygon: int, y: float) -> tuple[int, int]:
    """(cylinder index, position in its trapezoid chain) for a point's band."""
    t = band_of(s, polygon, y)
    index = s.cached("trapezoid-index", lambda: {
        (tr.polygon, tr.band): (c, j)
        for c, cyl in enumerate(decompose(s)) for j, tr in enumerate(cyl.trapezoids)})
    return index[(t.polygon, t.band)]


@dataclass
class PerfectnessReport:
    is_perfect: bool
    common_modulus: float
    cylinders: list[tuple[float, str]]
    problems: list[str]


def perfectness(s: Surface, tol: float | None = None) -> PerfectnessReport:
    tol = EPS if tol is None else tol
    cyls = decompose(s)
    rows = [(c.modulus, c.kind) for c in cyls]
    problems = []
    typical = [mod for mod, kind in rows if kind == "typical"]
    if typical:
        m = typical[0]
    else:
        m = 2 * rows[0][0]
    for k, c in enumerate(cyls):
        if len(c.trapezoids) > 2:
            problems.append(f"cylinder {k} has {len(c.trapezoids)} trapezoids")
        target = m if c.kind == "typical" else m / 2
        if abs(c.modulus - target) > tol:
            problems.append(f"cylinder {k} ({c.kind}) has modulus {c.modulus!r}, expected {target!r}")
        axis_ok = all(t.is_isosceles(s.polygons[t.polygon].axis_x) for t in c.trapezoids)
        if not axis_ok:
            problems.append(f"cylinder {k} has a non-isosceles trapezoid")
    return PerfectnessReport(not problems, m, rows, problems)


def theta_s(s: Surface) -> float:
    """Smallest angle between a slanted edge and the positive horizontal."""
    return min(t.slant_angle for row in all_bands(s) for t in row)


def regular_modulus(n: int) -> float:
    return 2 / math.tan(math.pi / n)


def bouw_moller_modulus(m: int, n: int) -> float:
    return 2 / math.tan(math.pi / n) + 2 * math.cos(math.pi / m) / math.sin(math.pi / n)


def dirichlet_sum(theta: float, k: int) -> float:
    """1 + 2cos(theta) + ... + 2cos(k*theta)."""
    return 1 + 2 * sum(math.cos(j * theta) for j in range(1, k + 1))


def dirichlet_closed_form(theta: float, k: int) -> float:
    return math.sin((k + 0.5) * theta) / math.sin(theta / 2)


def level_width(theta: float, k: int) -> float:
    """Width of a unit regular polygon at its k-th vertex level (k = 0 is the bottom edge)."""
    return 1 + 2 * sum(math.cos(j * theta) for j in range(1, k + 1))


def double_ngon_cylinder_width(theta: float, k: int) -> float:
    """Circumference of the k-th cylinder of a unit double regular polygon."""
    return level_width(theta, k) + level_width(theta, k + 1)


def cot_width_closed_form(theta: float, k: int) -> float:
    return 2 / math.tan(theta / 2) * math.sin((k + 1) * theta)
