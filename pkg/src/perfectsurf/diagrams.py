"""Transition diagrams: which edge can follow which for directions in the admissible sector."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Hashable

from .cylinders import theta_s
from .geometry import EPS, Surface, SurfaceError


@dataclass(frozen=True)
class Arrow:
    source: Hashable
    target: Hashable
    polygon: int
    entry_edge: int
    exit_edge: int
    # 0 when the exit edge is on the entry level, 1 when it is one level up
    kind: int


@dataclass
class TransitionDiagram:
    nodes: list
    arrows: dict = field(default_factory=dict)  # (source, target) -> Arrow

    def successors(self, label) -> list:
        return [b for (a, b) in self.arrows if a == label]

    def predecessors(self, label) -> list:
        return [a for (a, b) in self.arrows if b == label]

    def has(self, a, b) -> bool:
        return (a, b) in self.arrows

    def edge_set(self) -> set:
        return set(self.arrows)

    def paths2(self) -> list[tuple]:
        return [(a, b, c) for (a, b) in sorted(self.arrows) for c in sorted(self.successors(b))]

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "arrows": [{"from": a.source, "to": a.target, "polygon": a.polygon, "type": a.kind}
                       for _, a in sorted(self.arrows.items())],
        }

    def to_dot(self, rows: list[list] | None = None, name: str = "transitions") -> str:
        """Graphviz source; ``rows`` become ``rank=same`` groups stacked top to bottom."""
        return "\n".join(_dot_lines(self, rows, name)) + "\n"


def _dot_lines(d: TransitionDiagram, rows, name):
    yield f"digraph {name} {{"
    yield "  node [shape=circle];"
    for v in d.nodes:
        yield f'  "{v}";'
    if rows:
        for r, row in enumerate(rows):
            yield "  { rank=same; " + " ".join(f'"{v}";' for v in row) + " }"
            for a, b in zip(row, row[1:]):
                yield f'  "{a}" -> "{b}" [style=invis, weight=10];'
    for (a, b), arrow in sorted(d.arrows.items()):
        yield f'  "{a}" -> "{b}" [label="{arrow.kind}"];'
    yield "}"


def _angle_range(vectors) -> tuple[float, float]:
    angles = [math.atan2(y, x) for x, y in vectors if math.hypot(x, y) > EPS]
    if max(angles) - min(angles) > math.pi:
        angles = [a + 2 * math.pi if a < 0 else a for a in angles]
    return min(angles), max(angles)


def sector_overlaps(e_in, e_out, theta_max: float, tol: float = 1e-12) -> bool:
    """Whether some segment from ``e_in`` to ``e_out`` has direction strictly inside (0, theta_max).

    The difference vectors form the parallelogram ``e_out - e_in``; its
    directions make up the cone over its corners.
    """
    (a0, a1), (b0, b1) = e_in, e_out
    corners = [(q[0] - p[0], q[1] - p[1]) for p in (a0, a1) for q in (b0, b1)]
    lo, hi = _angle_range(corners)
    for shift in (0.0, 2 * math.pi):
        if hi > shift + tol and lo < shift + theta_max - tol:
            return True
    return False


def transition_diagram(s: Surface) -> TransitionDiagram:
    """Arrows by exact visibility inside each polygon (convex, so any chord is interior)."""
    return s.cached("diagram", lambda: _build(s))


def _build(s: Surface) -> TransitionDiagram:
    limit = theta_s(s)
    d = TransitionDiagram(sorted(s.labels, key=lambda v: (str(type(v)), v)))
    for k, poly in enumerate(s.polygons):
        pos = [poly.edge_position(i) for i in range(poly.n_edges)]
        for i in range(poly.n_edges):
            if not pos[i].entry:
                continue
            for j in range(poly.n_edges):
                if pos[j].entry or j == i:
                    continue
                if not sector_overlaps(poly.edge(i), poly.edge(j), limit):
                    continue
                kind = pos[j].level - pos[i].level
                if kind not in (0, 1):
                    raise SurfaceError(f"polygon {k}: edge {i} sees edge {j} {kind} levels up")
                arrow = Arrow(poly.edge_labels[i], poly.edge_labels[j], k, i, j, kind)
                key = (arrow.source, arrow.target)
                old = d.arrows.get(key)
                if old is not None and old.kind != kind:
                    raise SurfaceError(f"transition {key} has types {old.kind} and {kind}")
                d.arrows.setdefault(key, arrow)
    return d


def diagram_json(d: TransitionDiagram) -> str:
    return json.dumps(d.to_json(), indent=2, sort_keys=True)


def grid_position(label: int, n: int) -> tuple[int, int]:
    """(row, column) of a canonical Bouw-Moller label in the snaking layout.

    Row ``r`` holds the ``n`` labels first met in polygon ``r``; even rows run
    left to right and odd rows right to left.
    """
    r, c = divmod(label - 1, n)
    return (r, c if r % 2 == 0 else n - 1 - c)


def grid_rows(m: int, n: int) -> list[list[int]]:
    rows = [[0] * n for _ in range(m - 1)]
    for label in range(1, (m - 1) * n + 1):
        r, c = grid_position(label, n)
        rows[r][c] = label
    return rows


def grid_template(m: int, n: int) -> set[tuple[tuple[int, int], tuple[int, int]]]:
    """Expected arrows between grid cells for the (m, n) surface.

    Horizontal neighbours in row ``r`` are joined both ways when ``r + c + n``
    is even.  Otherwise the first row has an arrow to the right, the last row
    one to the right on odd rows and to the left on even rows, and middle
    rows have none.  Vertical neighbours are joined downwards in columns with
    ``c + n`` even and upwards in the others.
    """
    last = m - 2
    arrows = set()
    for r in range(m - 1):
        for c in range(n - 1):
            a, b = (r, c), (r, c + 1)
            if (r + c + n) % 2 == 0:
                arrows |= {(a, b), (b, a)}
                continue
            if r == 0:
                arrows.add((a, b))
            if r == last:
                arrows.add((a, b) if r % 2 else (b, a))
        if r < last:
            for c in range(n):
                a, b = (r, c), (r + 1, c)
                arrows.add((a, b) if (c + n) % 2 == 0 else (b, a))
    return arrows


@dataclass
class ShapeReport:
    ok: bool
    identity: bool
    witness: dict | None
    missing: list = field(default_factory=list)
    extra: list = field(default_factory=list)


def check_grid_shape(d: TransitionDiagram, m: int, n: int) -> ShapeReport:
    """Compare a diagram with the snaking grid template.

    First tries the canonical numbering directly; failing that, searches for
    any relabeling that makes the two graphs isomorphic.
    """
    template = grid_template(m, n)
    cells = [(r, c) for r in range(m - 1) for c in range(n)]
    if sorted(d.nodes, key=str) == sorted(range(1, len(cells) + 1), key=str):
        mapped = {(grid_position(a, n), grid_position(b, n)) for a, b in d.arrows}
        if mapped == template:
            return ShapeReport(True, True, {v: grid_position(v, n) for v in d.nodes})
        missing = sorted(template - mapped)
        extra = sorted(mapped - template)
    else:
        missing, extra = [], []
    witness = find_isomorphism(d.nodes, d.edge_set(), cells, template)
    return ShapeReport(witness is not None, False, witness, missing, extra)


def find_isomorphism(nodes_a, arrows_a, nodes_b, arrows_b) -> dict | None:
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    ga, gb = nx.DiGraph(), nx.DiGraph()
    ga.add_nodes_from(nodes_a)
    ga.add_edges_from(arrows_a)
    gb.add_nodes_from(nodes_b)
    gb.add_edges_from(arrows_b)
    matcher = DiGraphMatcher(ga, gb)
    if matcher.is_isomorphic():
        return dict(matcher.mapping)
    return None


def diagrams_isomorphic(d1: TransitionDiagram, d2: TransitionDiagram) -> dict | None:
    return find_isomorphism(d1.nodes, d1.edge_set(), d2.nodes, d2.edge_set())
