import random

import pytest

from capkit.caps import all_point_count_grids
from capkit.classify import grow_classes
from capkit.threelayer import InconsistentMatrix, ThreeLayerTask, grid_images, scan_three_layer


def display(raw):
    """Raw grid [x1 value, x2 value] -> display rows x2 = 1, 0, -1 and columns x1 = -1, 0, 1."""
    return [[int(raw[x1 % 3, x2 % 3]) for x1 in (-1, 0, 1)] for x2 in (1, 0, -1)]


def realizing(reps, matrix):
    imgs = {tuple(map(tuple, g)) for g in grid_images(tuple(map(tuple, matrix)))}
    out = []
    for S in reps:
        if any(tuple(map(tuple, display(g))) in imgs for g in all_point_count_grids(S)):
            out.append(S.points)
    return sorted(out)


def test_all_zero_matrix_gives_empty_cap():
    res = scan_three_layer(ThreeLayerTask([[0] * 3] * 3, grow_classes(2)))
    assert [S.size for S in res.caps] == [0]


def test_needs_full_row_and_column():
    with pytest.raises(InconsistentMatrix):
        scan_three_layer(ThreeLayerTask([[1, None, 1], [None, 1, None], [1, None, 1]], grow_classes(2)))


@pytest.mark.parametrize("seed", range(6))
def test_dimension_three_matches_grid_oracle(seed):
    rng = random.Random(seed)
    grown = grow_classes(3)
    size = rng.choice([5, 6, 7, 8, 9])
    S = rng.choice(grown[size])
    grids = all_point_count_grids(S)
    M = display(grids[rng.randrange(len(grids))])
    res = scan_three_layer(ThreeLayerTask(M, grow_classes(2)))
    assert sorted(T.points for T in res.caps) == realizing(grown[size], M)


def test_wildcards_cover_every_completion():
    grown = grow_classes(3)
    S = grown[8][0]
    raw = all_point_count_grids(S)[3]
    M = display(raw)
    loose = [row[:] for row in M]
    loose[0][2] = None  # (x1, x2) = (1, 1)
    res = scan_three_layer(ThreeLayerTask(loose, grow_classes(2)))
    sizes = {T.size for T in res.caps}
    assert S.size in sizes
    assert all(T.size >= sum(sum(r) for r in M) - M[0][2] for T in res.caps)


def test_dimension_four_large_caps(reps4):
    lower = grow_classes(3)
    for name in ("20-cap", "19-cap"):
        S = reps4[name]
        grids = all_point_count_grids(S)
        M = display(grids[len(grids) // 2])
        res = scan_three_layer(ThreeLayerTask(M, lower))
        assert [T.points for T in res.caps] == [S.points]
