from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from perfectsurf.flow import Trajectory, VertexHit, flow, point_after, random_point, random_trajectory, trace
from perfectsurf.geometry import SurfacePoint
from perfectsurf.unfolding import UnfoldingVertexHit, unfold_labels

from conftest import bouw_moller, regular


def test_horizontal_flow_on_torus(torus):
    seq = flow(torus, Trajectory(SurfacePoint(0, 0.3, 0.5), 0.0), 6)
    vertical = torus.polygons[0].edge_labels[1]
    assert seq.labels == [vertical] * 6


def test_trajectory_into_a_vertex(octagon):
    poly = octagon.polygons[0]
    x0, y0 = 0.5, 0.4
    vx, vy = poly.vertices[2]
    with pytest.raises(VertexHit) as info:
        flow(octagon, Trajectory(SurfacePoint(0, x0, y0), math.atan2(vy - y0, vx - x0)), 10)
    assert info.value.partial.labels == []


def test_vertex_hit_keeps_the_partial_sequence(torus):
    # along (1, 2): through the top at x = 0.5, then from (0.5, 0) into the corner (1, 1)
    with pytest.raises(VertexHit) as info:
        flow(torus, Trajectory(SurfacePoint(0, 0.25, 0.5), math.atan2(2, 1)), 10)
    assert len(info.value.partial.labels) == 1


def test_rejected_starts(octagon):
    poly = octagon.polygons[0]
    with pytest.raises(ValueError):
        flow(octagon, Trajectory(SurfacePoint(0, *poly.vertices[3]), 0.1), 5)
    with pytest.raises(ValueError):
        flow(octagon, Trajectory(SurfacePoint(0, 50.0, 50.0), 0.1), 5)
    with pytest.raises(ValueError):
        flow(octagon, Trajectory(SurfacePoint(0, 0.5, 0.0), 0.0), 5)
    with pytest.raises(ValueError):
        flow(octagon, Trajectory(SurfacePoint(0, 0.5, 0.5), 0.1), 0)


def test_trace_needs_a_bound(octagon):
    with pytest.raises(ValueError):
        trace(octagon, SurfacePoint(0, 0.5, 0.5), 1.0, 0.1)


@pytest.mark.parametrize("args", [("regular", 8, False), ("regular", 5, True), ("bm", 3, 4), ("bm", 6, 5)])
def test_crossings_are_consistent(args):
    kind, a, b = args
    s = regular(a, b) if kind == "regular" else bouw_moller(a, b)
    rng = np.random.default_rng(1)
    t = random_trajectory(s, rng, 2 * math.pi)
    seq = flow(s, t, 60)
    params = [c.param for c in seq.crossings]
    assert all(q > p for p, q in zip(params, params[1:]))
    for j, c in enumerate(seq.crossings):
        (ax, ay), (bx, by) = s.polygons[c.polygon].edge(c.edge)
        cross = (bx - ax) * (c.point[1] - ay) - (by - ay) * (c.point[0] - ax)
        assert abs(cross) < 1e-9
        nxt = point_after(s, seq, j)
        k2, i2 = s.partner((c.polygon, c.edge))
        assert nxt.polygon == k2
        (cx, cy), (dx, dy) = s.polygons[k2].edge(i2)
        assert abs((dx - cx) * (nxt.y - cy) - (dy - cy) * (nxt.x - cx)) < 1e-9
        assert s.label((k2, i2)) == c.label


def test_reversed_trajectory_reads_backwards(double_pentagon):
    s = double_pentagon
    rng = np.random.default_rng(4)
    t = random_trajectory(s, rng, math.pi / 5)
    seq = flow(s, t, 30)
    j = 20
    here = point_after(s, seq, j)
    step = (seq.crossings[j + 1].param - seq.crossings[j].param) / 2
    dx, dy = t.direction
    mid = SurfacePoint(here.polygon, here.x + step * dx, here.y + step * dy)
    back = flow(s, Trajectory(mid, t.theta + math.pi), j + 1)
    assert back.labels == seq.labels[j::-1]


def test_random_points_keep_their_distance(bm34):
    rng = np.random.default_rng(0)
    for _ in range(100):
        p = random_point(bm34, rng, margin=0.01)
        assert bm34.polygons[p.polygon].boundary_distance(p.x, p.y) > 0.01


def test_double_pentagon_matches_unfolding(double_pentagon):
    rng = np.random.default_rng(20)
    s = double_pentagon
    p = random_point(s, rng)
    t = Trajectory(p, math.pi / 20)
    assert unfold_labels(s, p, *t.direction, 50) == flow(s, t, 50).labels


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("regular", 5, True), ("regular", 8, False), ("bm", 4, 3), ("bm", 5, 4)]),
       st.integers(0, 10 ** 6), st.floats(0, 2 * math.pi))
def test_flow_matches_unfolding_in_any_direction(args, seed, theta):
    kind, a, b = args
    s = regular(a, b) if kind == "regular" else bouw_moller(a, b)
    p = random_point(s, np.random.default_rng(seed))
    t = Trajectory(p, theta)
    try:
        seq = flow(s, t, 30)
        exact = unfold_labels(s, p, *t.direction, 30)
    except (VertexHit, UnfoldingVertexHit, ValueError):
        assume(False)
    assert exact == seq.labels
