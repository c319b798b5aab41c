import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capkit.gf3 import (
    AffineMap,
    Direction,
    agl_order,
    enumerate_directions,
    enumerate_lines,
    enumerate_linear_maps,
    gl_order,
    rank,
    space,
)
from helpers import affine_maps


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_index_round_trip(n):
    sp = space(n)
    for i in range(sp.size):
        assert sp.index(sp.coords_of(i)) == i


def test_first_digit_is_x1():
    sp = space(3)
    assert sp.coords_of(1) == (1, 0, 0)
    assert sp.coords_of(3) == (0, 1, 0)
    assert sp.index((2, 0, 0)) == 2


@pytest.mark.parametrize("n", [1, 2, 3])
def test_third_point_completes_a_line(n):
    sp = space(n)
    for p in range(sp.size):
        for q in range(sp.size):
            r = sp.third[p, q]
            s = (sp.coords[p] + sp.coords[q] + sp.coords[r]) % 3
            assert not s.any()
            if p == q:
                assert r == p


@pytest.mark.parametrize("n, lines", [(1, 1), (2, 12), (3, 117)])
def test_line_counts(n, lines):
    assert len(enumerate_lines(n)) == lines


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_direction_count(n):
    assert len(enumerate_directions(n)) == (3**n - 1) // 2
    with pytest.raises(ValueError):
        Direction((2,) + (0,) * (n - 1))


def test_group_orders():
    assert gl_order(1) == 2 and gl_order(2) == 48
    assert agl_order(2) == 432
    assert agl_order(5) == 3**5 * 242 * 240 * 234 * 216 * 162
    assert sum(1 for _ in enumerate_linear_maps(2)) == 48
    assert sum(1 for _ in enumerate_linear_maps(3)) == gl_order(3)


def test_rank():
    assert rank([(1, 0), (0, 1)]) == 2
    assert rank([(1, 2), (2, 1)]) == 1
    with pytest.raises(ValueError):
        AffineMap(((1, 2), (2, 1)), (0, 0))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_compose_and_inverse(data):
    n = data.draw(st.integers(1, 4))
    f = data.draw(affine_maps(n))
    g = data.draw(affine_maps(n))
    pf, pg = f.permutation(), g.permutation()
    assert np.array_equal(f.compose(g).permutation(), pf[pg])
    assert np.array_equal(f.compose(f.inverse()).permutation(), np.arange(3**n))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_affine_maps_preserve_lines(data):
    n = data.draw(st.integers(1, 3))
    f = data.draw(affine_maps(n))
    perm = f.permutation()
    sp = space(n)
    for p, q in itertools.combinations(range(sp.size), 2):
        assert perm[sp.third[p, q]] == sp.third[perm[p], perm[q]]
