import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capkit.caps import (
    CapSet,
    MatrixPattern,
    addable_mask,
    all_point_count_grids,
    apply_map,
    direction_counts,
    direction_triples,
    is_cap,
    is_complete,
    layers,
    matches_pattern,
    midpoint_counts,
    midpoint_multiplicity,
    point_count_matrix,
    point_reflect,
    reflection_centres,
    restrict,
    spectrum,
    stack,
)
from capkit.gf3 import enumerate_directions, space
from helpers import affine_maps, caps


def brute_is_cap(S):
    sp = space(S.n)
    pts = S.points
    return all(sp.third[p, q] not in S for p, q in itertools.combinations(pts, 2))


@settings(max_examples=80, deadline=None)
@given(caps(1, 4))
def test_greedy_caps_are_caps(S):
    assert is_cap(S) and brute_is_cap(S)


def test_not_a_cap():
    sp = space(2)
    line = CapSet.from_indices(2, [0, 1, 2])
    assert not is_cap(line)
    assert is_cap(CapSet.from_indices(2, [0, 1, 3, 4]))
    assert sp.size == 9


@settings(max_examples=60, deadline=None)
@given(caps(1, 4))
def test_addable_mask_matches_definition(S):
    sp = space(S.n)
    m = addable_mask(S)
    for p in range(sp.size):
        if p in S:
            assert not (m >> p) & 1
        else:
            assert bool((m >> p) & 1) == brute_is_cap(S.add(p))
    assert is_complete(S) == (m == 0)


@settings(max_examples=100, deadline=None)
@given(caps(2, 5))
def test_pair_and_triple_identities(S):
    n, s = S.n, S.size
    dc = direction_counts(S)
    x = sum(comb(int(c), 2) for row in dc for c in row)
    y = sum(comb(int(c), 3) for row in dc for c in row)
    assert 2 * x == comb(s, 2) * (3 ** (n - 1) - 1)
    assert 2 * y == comb(s, 3) * (3 ** (n - 2) - 1)


@settings(max_examples=60, deadline=None)
@given(caps(2, 4))
def test_direction_counts_sum_to_size(S):
    assert all(sum(t) == S.size for t in direction_triples(S))
    assert sum(spectrum(S).values()) == (3**S.n - 1) // 2


@settings(max_examples=40, deadline=None)
@given(caps(2, 4))
def test_midpoints_double_count(S):
    mc = midpoint_counts(S)
    assert sum(mc.values()) == comb(S.size, 2)
    sp = space(S.n)
    p = next(iter(set(range(sp.size)) - set(S.points)), None)
    if p is not None:
        want = sum(1 for a, b in itertools.combinations(S.points, 2) if sp.third[a, b] == p)
        assert midpoint_multiplicity(S, p) == want


@settings(max_examples=40, deadline=None)
@given(caps(2, 4))
def test_layers_round_trip(S):
    assert stack(*layers(S)) == S


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_spectrum_is_invariant(data):
    S = data.draw(caps(2, 4))
    g = data.draw(affine_maps(S.n))
    assert spectrum(apply_map(g, S)) == spectrum(S)


@settings(max_examples=30, deadline=None)
@given(caps(2, 4))
def test_restrict_counts(S):
    for d in enumerate_directions(S.n)[:6]:
        vals = space(S.n).direction_values[enumerate_directions(S.n).index(d)]
        for t in (0, 1, 2):
            R = restrict(S, d, t)
            assert R.n == S.n - 1 and is_cap(R)
            assert R.size == sum(1 for p in S.points if vals[p] == t)


@settings(max_examples=30, deadline=None)
@given(caps(2, 4))
def test_point_count_grids_match_matrices(S):
    dirs = enumerate_directions(S.n)
    grids = all_point_count_grids(S)
    i1, i2 = np.triu_indices(len(dirs), k=1)
    for k in range(0, len(i1), max(1, len(i1) // 5)):
        M = point_count_matrix(S, dirs[i1[k]], dirs[i2[k]])
        raw = grids[k]
        for x1 in (-1, 0, 1):
            for x2 in (-1, 0, 1):
                assert M.at(x1, x2) == raw[x1 % 3, x2 % 3]
        assert M.total == S.size


def test_pattern_matching_uses_row_col_perms_and_transpose():
    pat = MatrixPattern.parse("9 8 2 / * 6 * / * 6 *")
    assert matches_pattern([[9, 8, 2], [0, 6, 0], [0, 6, 0]], pat)
    assert matches_pattern([[0, 6, 0], [2, 8, 9], [0, 6, 0]], pat)
    assert matches_pattern([[9, 0, 0], [8, 6, 6], [2, 0, 0]], pat)
    assert not matches_pattern([[9, 8, 2], [0, 5, 0], [0, 6, 0]], pat)
    fixed = MatrixPattern.parse("9 8 2 / * 6 * / * 6 *", transpose=False, row_perms=False, col_perms=False)
    assert not matches_pattern([[2, 8, 9], [0, 6, 0], [0, 6, 0]], fixed)
    with pytest.raises(ValueError):
        MatrixPattern.parse("* * * / * * * / * * *")


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_point_reflection(data):
    S = data.draw(caps(1, 4))
    o = data.draw(st.integers(0, 3**S.n - 1))
    T = point_reflect(S, o)
    assert point_reflect(T, o) == S
    assert o in reflection_centres(S, T)
    assert is_cap(T)
