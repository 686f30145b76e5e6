"""Special polygons and the translation surfaces glued from them.

A :class:`Polygon` is a counterclockwise vertex loop; edge ``i`` runs from
``vertices[i]`` to ``vertices[i + 1]``.  A :class:`Surface` is a tuple of
polygons plus an involution on ``(polygon, edge)`` references pairing each
edge with an oppositely oriented parallel edge of the same length.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

EPS = float(os.environ.get("FLATSURF_EPS", "1e-9"))

FAMILIES = ("regular-single", "regular-double", "bouw-moller", "custom")

Point = tuple[float, float]
EdgeRef = tuple[int, int]


class SurfaceError(Exception):
    """Base class for construction and analysis failures."""


class InvalidParams(SurfaceError, ValueError):
    pass


class OddSingle(InvalidParams):
    """A single regular n-gon only glues up to a surface when n is even."""


class NotLevel(SurfaceError):
    pass


def _close(a: float, b: float, tol: float | None = None) -> bool:
    return abs(a - b) <= (EPS if tol is None else tol)


@dataclass(frozen=True)
class EdgePosition:
    """Where an edge sits in its polygon's level structure.

    ``side`` is one of ``bottom``, ``top``, ``left``, ``right``.  ``level`` is
    the band index for side edges, ``-1`` for the bottom edge and the band
    count for the top edge, so a crossing from ``e_in`` to ``e_out`` has
    transition type ``out.level - in.level``.
    """

    side: str
    level: int

    @property
    def horizontal(self) -> bool:
        return self.side in ("bottom", "top")

    @property
    def entry(self) -> bool:
        return self.side in ("left", "bottom")

    def sort_key(self) -> tuple[int, int]:
        return (2 * self.level + 1, 1 if self.side == "left" else 0)


@dataclass(frozen=True)
class SurfacePoint:
    """A point given by polygon index and coordinates in that polygon's placement."""

    polygon: int
    x: float
    y: float

    @property
    def xy(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Point, ...]
    edge_labels: tuple[Hashable, ...] = ()

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        labels = tuple(self.edge_labels) or tuple(range(len(verts)))
        if len(labels) != len(verts):
            raise ValueError("need one label per edge")
        object.__setattr__(self, "edge_labels", labels)

    @property
    def n_edges(self) -> int:
        return len(self.vertices)

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % self.n_edges]

    def edge_vector(self, i: int) -> Point:
        (ax, ay), (bx, by) = self.edge(i)
        return (bx - ax, by - ay)

    @property
    def edge_vectors(self) -> tuple[Point, ...]:
        return tuple(self.edge_vector(i) for i in range(self.n_edges))

    def edge_midpoint(self, i: int) -> Point:
        (ax, ay), (bx, by) = self.edge(i)
        return ((ax + bx) / 2, (ay + by) / 2)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    @property
    def axis_x(self) -> float:
        """x-coordinate of the vertical symmetry axis (bounding-box centre)."""
        x0, _, x1, _ = self.bbox
        return (x0 + x1) / 2

    @property
    def area(self) -> float:
        total = 0.0
        for i in range(self.n_edges):
            (ax, ay), (bx, by) = self.edge(i)
            total += ax * by - bx * ay
        return total / 2

    def translated(self, dx: float, dy: float) -> Polygon:
        return Polygon(tuple((x + dx, y + dy) for x, y in self.vertices), self.edge_labels)

    def relabeled(self, labels: Sequence[Hashable]) -> Polygon:
        return Polygon(self.vertices, tuple(labels))

    def reflect_x(self, x: float) -> float:
        return 2 * self.axis_x - x

    def contains(self, x: float, y: float, tol: float = 0.0) -> bool:
        """True if (x, y) is inside or within ``tol`` of the boundary."""
        return self.boundary_distance(x, y) >= -tol

    def boundary_distance(self, x: float, y: float) -> float:
        """Signed distance to the boundary; positive inside (convex polygons only)."""
        best = math.inf
        for i in range(self.n_edges):
            (ax, ay), (bx, by) = self.edge(i)
            ex, ey = bx - ax, by - ay
            length = math.hypot(ex, ey)
            best = min(best, (ex * (y - ay) - ey * (x - ax)) / length)
        return best

    def levels(self) -> list[float]:
        """Distinct vertex heights, bottom to top, merged within EPS."""
        out: list[float] = []
        for y in sorted(v[1] for v in self.vertices):
            if not out or y - out[-1] > EPS:
                out.append(y)
        return out

    def level_index(self, y: float) -> int:
        for j, ly in enumerate(self.levels()):
            if _close(y, ly):
                return j
        raise NotLevel(f"height {y} is not a vertex level")

    def edge_position(self, i: int) -> EdgePosition:
        (ax, ay), (bx, by) = self.edge(i)
        levels = self.levels()
        if _close(ay, by):
            if _close(ay, levels[0]):
                return EdgePosition("bottom", -1)
            if _close(ay, levels[-1]):
                return EdgePosition("top", len(levels) - 1)
            raise NotLevel(f"horizontal edge {i} is neither top nor bottom")
        lo, hi = sorted((self.level_index(ay), self.level_index(by)))
        if hi != lo + 1:
            raise NotLevel(f"edge {i} spans levels {lo}..{hi}")
        return EdgePosition("right" if by > ay else "left", lo)

    def mirror_edge(self, i: int) -> int:
        """Index of the image of edge ``i`` under the vertical reflection."""
        mx, my = self.edge_midpoint(i)
        rx = self.reflect_x(mx)
        for j in range(self.n_edges):
            jx, jy = self.edge_midpoint(j)
            if _close(jx, rx, 1e3 * EPS) and _close(jy, my, 1e3 * EPS):
                return j
        raise NotLevel(f"edge {i} has no mirror image")


def polygon_from_edge_vectors(vectors: Iterable[Point], labels: Sequence[Hashable] = ()) -> Polygon:
    """Chain edge vectors (already in counterclockwise order) from the origin."""
    verts = [(0.0, 0.0)]
    vecs = list(vectors)
    for vx, vy in vecs[:-1]:
        x, y = verts[-1]
        verts.append((x + vx, y + vy))
    sx = verts[-1][0] + vecs[-1][0]
    sy = verts[-1][1] + vecs[-1][1]
    if math.hypot(sx, sy) > 1e3 * EPS:
        raise InvalidParams("edge vectors do not close up")
    return Polygon(tuple(verts), tuple(labels))


def semi_regular_polygon(n: int, a: float, b: float) -> Polygon:
    """The (a, b) semi-regular 2n-gon.

    Edge ``i`` has direction ``i*pi/n`` and length ``a`` (even ``i``) or
    ``b`` (odd ``i``).  Zero-length edges are dropped, so ``a == 0`` or
    ``b == 0`` yields a regular n-gon.  Surviving edges keep their original
    index ``i`` as label.
    """
    if n < 3:
        raise InvalidParams(f"n must be >= 3, got {n}")
    if a < 0 or b < 0 or (a <= EPS and b <= EPS):
        raise InvalidParams("need a, b >= 0, not both zero")
    vecs, labels = [], []
    for i in range(2 * n):
        length = a if i % 2 == 0 else b
        if length <= EPS:
            continue
        ang = i * math.pi / n
        vecs.append((length * math.cos(ang), length * math.sin(ang)))
        labels.append(i)
    return polygon_from_edge_vectors(vecs, labels)


def regular_polygon(n_sides: int, side: float = 1.0, inverted: bool = False) -> Polygon:
    """Regular polygon with a horizontal bottom edge, or its point reflection."""
    if n_sides < 3:
        raise InvalidParams(f"polygon needs >= 3 sides, got {n_sides}")
    shift = math.pi if inverted else 0.0
    angles = sorted((2 * math.pi * i / n_sides + shift) % (2 * math.pi) for i in range(n_sides))
    vecs = [(side * math.cos(t), side * math.sin(t)) for t in angles]
    return polygon_from_edge_vectors(vecs)


@dataclass(frozen=True, eq=False)
class Surface:
    polygons: tuple[Polygon, ...]
    gluing: dict
    family: str = "custom"
    params: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "polygons", tuple(self.polygons))
        if self.family not in FAMILIES:
            raise InvalidParams(f"unknown family {self.family!r}")

    def edges(self) -> list[EdgeRef]:
        return [(k, i) for k, p in enumerate(self.polygons) for i in range(p.n_edges)]

    def partner(self, ref: EdgeRef) -> EdgeRef:
        return self.gluing[ref]

    def label(self, ref: EdgeRef) -> Hashable:
        k, i = ref
        return self.polygons[k].edge_labels[i]

    @property
    def labels(self) -> list:
        seen = []
        for ref in self.edges():
            lab = self.label(ref)
            if lab not in seen:
                seen.append(lab)
        return seen

    @property
    def label_map(self) -> dict:
        """label -> (edge, partner edge), edge being the first in polygon order."""
        out = {}
        for ref in self.edges():
            lab = self.label(ref)
            if lab not in out:
                out[lab] = (ref, self.gluing[ref])
        return out

    def translation(self, ref: EdgeRef) -> Point:
        """Vector carrying points of edge ``ref`` onto its partner edge."""
        k, i = ref
        k2, i2 = self.gluing[ref]
        a, _ = self.polygons[k].edge(i)
        _, d = self.polygons[k2].edge(i2)
        return (d[0] - a[0], d[1] - a[1])

    def polygon_at(self, x: float, y: float) -> int | None:
        for k, p in enumerate(self.polygons):
            if p.contains(x, y, EPS):
                return k
        return None

    @property
    def total_area(self) -> float:
        return sum(p.area for p in self.polygons)

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]


def check_gluing(polygons: Sequence[Polygon], gluing: dict) -> list[str]:
    """Problems with a candidate gluing; empty when it is a valid translation gluing."""
    problems = []
    refs = [(k, i) for k, p in enumerate(polygons) for i in range(p.n_edges)]
    for ref in refs:
        if ref not in gluing:
            problems.append(f"edge {ref} is unglued")
            continue
        other = gluing[ref]
        if other == ref:
            problems.append(f"edge {ref} is glued to itself")
        elif gluing.get(other) != ref:
            problems.append(f"gluing is not an involution at {ref}")
            continue
        vx, vy = polygons[ref[0]].edge_vector(ref[1])
        wx, wy = polygons[other[0]].edge_vector(other[1])
        if math.hypot(vx + wx, vy + wy) > 1e3 * EPS:
            problems.append(f"edges {ref} and {other} are not opposite translates")
        if polygons[ref[0]].edge_labels[ref[1]] != polygons[other[0]].edge_labels[other[1]]:
            problems.append(f"edges {ref} and {other} carry different labels")
    for ref in gluing:
        if ref not in refs:
            problems.append(f"gluing mentions unknown edge {ref}")
    return problems


def canonical_labels(polygons: Sequence[Polygon], gluing: dict, start: int = 1) -> dict:
    """Number glued pairs in order of first appearance.

    Polygons are scanned in index order; within a polygon edges are sorted
    bottom to top with the right edge of a band before the left one.  The
    first time a pair is met it receives the next integer.
    """
    labels: dict[EdgeRef, int] = {}
    nxt = start
    for k, poly in enumerate(polygons):
        order = sorted(range(poly.n_edges), key=lambda i: poly.edge_position(i).sort_key())
        for i in order:
            if (k, i) in labels:
                continue
            labels[(k, i)] = labels[gluing[(k, i)]] = nxt
            nxt += 1
    return labels


def make_surface(polygons: Sequence[Polygon], gluing: dict, family: str = "custom",
                 params: dict | None = None, labels: dict | None = None) -> Surface:
    """Validate a gluing, attach labels (canonical unless given) and build the surface."""
    polygons = list(polygons)
    gl = dict(gluing)
    for a, b in list(gl.items()):
        gl.setdefault(b, a)
    if labels is None:
        labels = canonical_labels(polygons, gl)
    polys = tuple(p.relabeled([labels[(k, i)] for i in range(p.n_edges)])
                  for k, p in enumerate(polygons))
    problems = check_gluing(polys, gl)
    if problems:
        raise InvalidParams("; ".join(problems))
    return Surface(polys, gl, family, dict(params or {}))


def match_opposite_edges(polygons: Sequence[Polygon], candidates) -> dict:
    """Glue each edge to the unique edge with the opposite vector.

    ``candidates(k, label)`` lists the polygons searched for the partner of
    the edge carrying ``label`` in polygon ``k``.
    """
    gluing = {}
    for k, poly in enumerate(polygons):
        for i in range(poly.n_edges):
            vx, vy = poly.edge_vector(i)
            hits = []
            for k2 in candidates(k, poly.edge_labels[i]):
                other = polygons[k2]
                for i2 in range(other.n_edges):
                    if (k2, i2) == (k, i):
                        continue
                    wx, wy = other.edge_vector(i2)
                    if math.hypot(vx + wx, vy + wy) <= 1e3 * EPS:
                        hits.append((k2, i2))
            if len(hits) != 1:
                raise InvalidParams(f"edge {(k, i)} has {len(hits)} candidate partners")
            gluing[(k, i)] = hits[0]
    return gluing


def lay_out(polygons: Sequence[Polygon], gap: float = 0.25) -> list[Polygon]:
    """Place polygons left to right, bottoms on y = 0, separated by a small gap."""
    out = []
    cursor = 0.0
    size = max(max(p.bbox[2] - p.bbox[0], p.bbox[3] - p.bbox[1]) for p in polygons)
    for p in polygons:
        x0, y0, x1, _ = p.bbox
        out.append(p.translated(cursor - x0, -y0))
        cursor += (x1 - x0) + gap * size
    return out


def build_regular_surface(n: int, doubled: bool) -> Surface:
    """Regular n-gon surface with a horizontal edge, single or doubled."""
    if n < 3:
        raise InvalidParams(f"n must be >= 3, got {n}")
    if not doubled:
        if n % 2:
            raise OddSingle(f"a single regular {n}-gon has no opposite parallel edges")
        poly = regular_polygon(n)
        gluing = {(0, i): (0, (i + n // 2) % n) for i in range(n)}
        return make_surface([poly], gluing, "regular-single", {"n": n})
    polys = lay_out([regular_polygon(n), regular_polygon(n, inverted=True)])
    gluing = match_opposite_edges(polys, lambda k, _: [1 - k])
    return make_surface(polys, gluing, "regular-double", {"n": n})


def bouw_moller_parameters(m: int, n: int) -> list[tuple[float, float]]:
    """(a, b) for P(0), ..., P(m-1); sin(j*pi/m) is snapped to 0 at j = 0, m."""
    def s(j: int) -> float:
        return 0.0 if j % m == 0 else math.sin(j * math.pi / m)

    params = []
    for k in range(m):
        if n % 2 == 1 or k % 2 == 1:
            params.append((s(k + 1), s(k)))
        else:
            params.append((s(k), s(k + 1)))
    return params


def build_bouw_moller(m: int, n: int) -> Surface:
    """The (m, n) Bouw-Moller surface glued from m semi-regular 2n-gons.

    Even edges (even slot index) of P(k) glue to P(k + 1) and odd edges to
    P(k - 1), except for even k when n is even, where the roles swap.  The
    partner is the edge with the opposite edge vector.
    """
    if m < 2 or n < 3:
        raise InvalidParams(f"need m >= 2 and n >= 3, got m={m}, n={n}")
    polys = lay_out([semi_regular_polygon(n, a, b) for a, b in bouw_moller_parameters(m, n)])

    def neighbour(k: int, slot: int) -> list[int]:
        up = slot % 2 == 0
        if n % 2 == 0 and k % 2 == 0:
            up = not up
        j = k + 1 if up else k - 1
        return [j] if 0 <= j < m else []

    gluing = match_opposite_edges(polys, neighbour)
    return make_surface(polys, gluing, "bouw-moller", {"m": m, "n": n})


def square_torus(side: float = 1.0) -> Surface:
    sq = polygon_from_edge_vectors([(side, 0.0), (0.0, side), (-side, 0.0), (0.0, -side)])
    return make_surface([sq], {(0, 0): (0, 2), (0, 1): (0, 3)})


def build_surface(family: str, n: int, m: int | None = None, doubled: bool = False) -> Surface:
    """Dispatch on the CLI family names ``regular`` and ``bm``."""
    if family in ("regular", "regular-single", "regular-double"):
        return build_regular_surface(n, doubled or family == "regular-double")
    if family in ("bm", "bouw-moller"):
        if m is None:
            raise InvalidParams("Bouw-Moller surfaces need m")
        return build_bouw_moller(m, n)
    raise InvalidParams(f"unknown family {family!r}")


@dataclass
class ValidationReport:
    polygons: list[dict]
    gluing_problems: list[str]
    symmetric_gluing: bool

    @property
    def ok(self) -> bool:
        return (all(all(r.values()) for r in self.polygons)
                and not self.gluing_problems and self.symmetric_gluing)

    def failures(self) -> list[str]:
        out = [f"polygon {k}: not {name}" for k, r in enumerate(self.polygons)
               for name, good in r.items() if not good]
        out.extend(self.gluing_problems)
        if not self.symmetric_gluing:
            out.append("gluing is not compatible with the vertical reflections")
        return out


def is_convex(p: Polygon) -> bool:
    vecs = p.edge_vectors
    for i, (ax, ay) in enumerate(vecs):
        bx, by = vecs[(i + 1) % len(vecs)]
        if ax * by - ay * bx < -EPS:
            return False
    return True


def is_level(p: Polygon) -> bool:
    for _, vy in p.vertices:
        for i in range(p.n_edges):
            (_, ay), (_, by) = p.edge(i)
            lo, hi = min(ay, by), max(ay, by)
            if lo + EPS < vy < hi - EPS:
                return False
    return True


def is_vertically_symmetric(p: Polygon) -> bool:
    remaining = list(p.vertices)
    for x, y in p.vertices:
        rx = p.reflect_x(x)
        for j, (qx, qy) in enumerate(remaining):
            if _close(qx, rx) and _close(qy, y):
                del remaining[j]
                break
        else:
            return False
    return True


def validate_special(s: Surface) -> ValidationReport:
    rows = [{"convex": is_convex(p), "level": is_level(p), "vertically symmetric": is_vertically_symmetric(p)}
            for p in s.polygons]
    problems = check_gluing(s.polygons, s.gluing)
    symmetric = True
    if all(r["vertically symmetric"] for r in rows) and not problems:
        for (k, i), (k2, i2) in s.gluing.items():
            try:
                mi = s.polygons[k].mirror_edge(i)
                mi2 = s.polygons[k2].mirror_edge(i2)
            except NotLevel:
                symmetric = False
                break
            if s.gluing.get((k, mi)) != (k2, mi2):
                symmetric = False
                break
    else:
        symmetric = False
    return ValidationReport(rows, problems, symmetric)


def surface_to_json(s: Surface) -> dict:
    pairs = sorted({tuple(sorted((a, b))) for a, b in s.gluing.items()})
    return {
        "format": "flatsurf-v1",
        "family": s.family,
        "params": dict(s.params),
        "polygons": [{"vertices": [[round(x, 12), round(y, 12)] for x, y in p.vertices]}
                     for p in s.polygons],
        "edges": [{"polygon": k, "edge": i, "label": s.label((k, i))} for k, i in s.edges()],
        "gluing": [[list(a), list(b)] for a, b in pairs],
    }


def surface_from_json(data: dict) -> Surface:
    if data.get("format") != "flatsurf-v1":
        raise InvalidParams(f"unsupported surface format {data.get('format')!r}")
    polys = [Polygon(tuple(tuple(v) for v in p["vertices"])) for p in data["polygons"]]
    labels = {(e["polygon"], e["edge"]): e["label"] for e in data["edges"]}
    gluing = {}
    for a, b in data["gluing"]:
        gluing[tuple(a)] = tuple(b)
        gluing[tuple(b)] = tuple(a)
    return make_surface(polys, gluing, data.get("family", "custom"), data.get("params"), labels)
