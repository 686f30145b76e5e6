from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perfectsurf.cylinders import decompose
from perfectsurf.geometry import (InvalidParams, OddSingle, Polygon, bouw_moller_parameters, build_bouw_moller,
                                  build_regular_surface, build_surface, Surface, check_gluing,
                                  semi_regular_polygon, square_torus, surface_from_json, surface_to_json,
                                  validate_special)

from conftest import bouw_moller, regular


def test_semi_regular_edge_vectors():
    p = semi_regular_polygon(3, 2.0, 1.0)
    (x0, y0), (x1, y1) = p.edge_vectors[:2]
    assert (x0, y0) == pytest.approx((2.0, 0.0))
    assert (x1, y1) == pytest.approx((0.5, math.sqrt(3) / 2))


def test_semi_regular_degenerates():
    oct_ = semi_regular_polygon(4, 1.0, 1.0)
    assert oct_.n_edges == 8
    lengths = [math.hypot(*v) for v in oct_.edge_vectors]
    assert lengths == pytest.approx([1.0] * 8)
    sq = semi_regular_polygon(4, 1.0, 0.0)
    assert sq.n_edges == 4
    assert [math.hypot(*v) for v in sq.edge_vectors] == pytest.approx([1.0] * 4)


def test_semi_regular_rejects_bad_lengths():
    with pytest.raises(InvalidParams):
        semi_regular_polygon(4, 0.0, 0.0)
    with pytest.raises(InvalidParams):
        semi_regular_polygon(4, -1.0, 1.0)
    with pytest.raises(InvalidParams):
        semi_regular_polygon(2, 1.0, 1.0)


@given(st.integers(3, 9), st.floats(0.05, 3.0), st.floats(0.0, 3.0))
def test_semi_regular_polygons_close_and_are_convex(n, a, b):
    p = semi_regular_polygon(n, a, b)
    sx = sum(v[0] for v in p.edge_vectors)
    sy = sum(v[1] for v in p.edge_vectors)
    assert abs(sx) < 1e-9 and abs(sy) < 1e-9
    assert p.area > 0


def test_octagon_surface_labels(octagon):
    assert sorted(octagon.labels) == [1, 2, 3, 4]
    assert len(octagon.gluing) == 8
    poly = octagon.polygons[0]
    # bottom and top carry label 1; the vertical sides carry label 4
    assert poly.edge_labels[0] == poly.edge_labels[4] == 1
    assert poly.edge_labels[2] == poly.edge_labels[6] == 4


def test_double_pentagon(double_pentagon):
    assert len(double_pentagon.labels) == 5
    assert len(double_pentagon.gluing) == 10
    assert validate_special(double_pentagon).ok


def test_odd_single_polygon_is_rejected():
    with pytest.raises(OddSingle):
        build_regular_surface(3, False)


def test_bouw_moller_34_polygons(bm34):
    sizes = [p.n_edges for p in bm34.polygons]
    assert sizes == [4, 8, 4]
    diamond, _, square = bm34.polygons
    # P(0) stands on a vertex, P(2) on an edge
    assert min(y for _, y in diamond.vertices) == pytest.approx(0.0)
    assert sum(1 for _, y in diamond.vertices if abs(y) < 1e-12) == 1
    assert sum(1 for _, y in square.vertices if abs(y) < 1e-12) == 2


def test_bouw_moller_2n_is_double_ngon():
    params = bouw_moller_parameters(2, 5)
    assert params == [pytest.approx((1.0, 0.0)), pytest.approx((0.0, 1.0))]
    bm = build_bouw_moller(2, 5)
    dp = regular(5, True)
    for p, q in zip(bm.polygons, dp.polygons):
        assert sorted(p.edge_vectors) == pytest.approx(sorted(q.edge_vectors))
    assert len(bm.gluing) == len(dp.gluing) == 10


def test_bouw_moller_needs_two_polygons():
    with pytest.raises(InvalidParams):
        build_bouw_moller(1, 4)
    with pytest.raises(InvalidParams):
        build_surface("bm", 4)
    with pytest.raises(InvalidParams):
        build_surface("hexagonal", 4)


@pytest.mark.parametrize("m", range(2, 9))
@pytest.mark.parametrize("n", range(3, 9))
def test_bouw_moller_surfaces_are_special(m, n):
    s = bouw_moller(m, n)
    rep = validate_special(s)
    assert rep.ok, rep.failures()
    assert len(s.labels) == (m - 1) * n


def test_bm34_labels_follow_cylinders(bm34):
    gluing = sorted(sorted(c.gluing_labels) for c in decompose(bm34))
    assert gluing == [[1, 2], [3, 4], [6, 7]]
    horizontal = set(bm34.labels) - {x for g in gluing for x in g}
    assert horizontal == {5, 8}


def test_square_torus_validates(torus):
    assert validate_special(torus).ok


def test_perturbed_vertex_breaks_symmetry():
    verts = list(regular(8, False).polygons[0].vertices)
    x, y = verts[1]
    verts[1] = (x + 0.1, y)
    # built directly: the constructor that checks gluings would refuse it
    s = Surface((Polygon(tuple(verts)),), {(0, i): (0, (i + 4) % 8) for i in range(8)})
    rep = validate_special(s)
    assert not rep.ok
    assert any("vertically symmetric" in f for f in rep.failures())


def test_gluing_mismatch_reported():
    sq = square_torus().polygons[0]
    problems = check_gluing([sq], {(0, 0): (0, 1), (0, 1): (0, 0), (0, 2): (0, 3), (0, 3): (0, 2)})
    assert problems


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([("regular", 5, True), ("regular", 8, False), ("bm", 3, 4), ("bm", 5, 3)]))
def test_json_round_trip(args):
    kind, a, b = args
    s = regular(a, b) if kind == "regular" else bouw_moller(a, b)
    back = surface_from_json(surface_to_json(s))
    assert back.labels == s.labels
    assert back.gluing == s.gluing
    for p, q in zip(back.polygons, s.polygons):
        flat = [c for v in p.vertices for c in v]
        assert flat == pytest.approx([c for v in q.vertices for c in v], abs=1e-11)
    assert validate_special(back).ok
