from __future__ import annotations

import numpy as np
import pytest

from perfectsurf.cylinders import theta_s
from perfectsurf.derivation import enumerate_words
from perfectsurf.diagrams import (TransitionDiagram, check_grid_shape, diagram_json, diagrams_isomorphic,
                                  grid_rows, grid_template, transition_diagram)
from perfectsurf.flow import Trajectory, VertexHit, flow, random_point
from perfectsurf.geometry import build_bouw_moller, build_regular_surface

from conftest import bouw_moller, regular

BM34_WORDS = ["212", "121", "434", "343", "767", "676", "723", "236", "654", "365", "872", "187",
              "218", "123", "721", "436", "234", "543", "765", "367", "672", "876"]


def test_octagon_arrows(octagon):
    d = transition_diagram(octagon)
    assert d.edge_set() == {(1, 2), (2, 1), (2, 3), (3, 2), (3, 4), (4, 3), (4, 4)}
    assert sorted(d.successors(2)) == [1, 3]


def test_bm34_arrows_are_the_word_pairs(bm34):
    pairs = {(int(w[0]), int(w[1])) for w in BM34_WORDS} | {(int(w[1]), int(w[2])) for w in BM34_WORDS}
    assert transition_diagram(bm34).edge_set() == pairs
    assert len(pairs) == 13


def test_grid_rows():
    assert grid_rows(3, 4) == [[1, 2, 3, 4], [8, 7, 6, 5]]
    assert len(grid_rows(6, 5)) == 5 and all(len(r) == 5 for r in grid_rows(6, 5))


@pytest.mark.parametrize("mn", [(3, 4), (6, 5)])
def test_grid_shape_identity(mn):
    m, n = mn
    rep = check_grid_shape(transition_diagram(bouw_moller(m, n)), m, n)
    assert rep.ok and rep.identity


@pytest.mark.parametrize("mn", [(9, 3), (9, 10), (10, 7), (3, 10), (10, 10)])
def test_grid_shape_beyond_the_fitted_range(mn):
    m, n = mn
    rep = check_grid_shape(transition_diagram(build_bouw_moller(m, n)), m, n)
    assert rep.ok and rep.identity, (rep.missing, rep.extra)


def test_grid_shape_detects_a_missing_arrow(bm34):
    d = transition_diagram(bm34)
    broken = TransitionDiagram(list(d.nodes), dict(d.arrows))
    del broken.arrows[(1, 2)]
    assert not check_grid_shape(broken, 3, 4).ok


def test_template_has_as_many_arrows(bm34):
    d = transition_diagram(bm34)
    assert len(grid_template(3, 4)) == len(d.arrows)


@pytest.mark.parametrize("n", range(3, 9))
def test_two_row_surfaces_match_double_polygons(n):
    assert diagrams_isomorphic(transition_diagram(bouw_moller(2, n)),
                               transition_diagram(regular(n, True))) is not None


def test_different_diagrams_are_not_isomorphic():
    assert diagrams_isomorphic(transition_diagram(regular(8, False)), transition_diagram(regular(5, True))) is None


def test_words_are_the_length_two_paths(bm34):
    d = transition_diagram(bm34)
    assert len(enumerate_words(bm34)) == len(d.paths2()) == 22


def observed_pairs(s, grid=100, length=60):
    """Consecutive label pairs over a grid of start points and sector angles."""
    rng = np.random.default_rng(0)
    starts = [random_point(s, rng) for _ in range(grid)]
    limit = theta_s(s)
    seen = set()
    for j in range(grid):
        theta = limit * (j + 0.5) / grid
        for p in starts[::10]:
            try:
                seq = flow(s, Trajectory(p, theta), length)
            except VertexHit:
                continue
            seen |= set(zip(seq.labels, seq.labels[1:]))
    return seen


@pytest.mark.parametrize("args", [("regular", 8, False), ("regular", 5, True), ("bm", 3, 4), ("bm", 5, 4)])
def test_diagram_is_sound_and_complete(args):
    kind, a, b = args
    s = regular(a, b) if kind == "regular" else bouw_moller(a, b)
    seen = observed_pairs(s)
    assert seen == transition_diagram(s).edge_set()


def test_output_is_deterministic():
    first = build_bouw_moller(4, 5)
    second = build_bouw_moller(4, 5)
    rows = grid_rows(4, 5)
    assert transition_diagram(first).to_dot(rows) == transition_diagram(second).to_dot(rows)
    assert diagram_json(transition_diagram(first)) == diagram_json(transition_diagram(second))
    dot = transition_diagram(first).to_dot(rows)
    assert dot.count("rank=same") == 3
    assert dot.startswith("digraph transitions {")


def test_arrow_types_are_zero_or_one():
    for s in (build_regular_surface(12, False), build_bouw_moller(7, 6)):
        assert {a.kind for a in transition_diagram(s).arrows.values()} <= {0, 1}
