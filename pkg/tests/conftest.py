from __future__ import annotations

import functools

import pytest

from perfectsurf.geometry import build_bouw_moller, build_regular_surface, square_torus


@functools.lru_cache(maxsize=None)
def regular(n: int, doubled: bool):
    return build_regular_surface(n, doubled)


@functools.lru_cache(maxsize=None)
def bouw_moller(m: int, n: int):
    return build_bouw_moller(m, n)


@pytest.fixture
def octagon():
    return regular(8, False)


@pytest.fixture
def double_pentagon():
    return regular(5, True)


@pytest.fixture
def bm34():
    return bouw_moller(3, 4)


@pytest.fixture
def torus():
    return square_torus()
