import random

from hypothesis import strategies as st

from capkit.caps import CapSet, addable_mask
from capkit.gf3 import random_affine_map, space


def greedy_cap(n: int, order, limit: int | None = None) -> CapSet:
    """Add points in the given order whenever they keep the set a cap."""
    S = CapSet.empty(n)
    for p in order:
        if limit is not None and S.size >= limit:
            break
        if (addable_mask(S) >> p) & 1:
            S = S.add(p)
    return S


@st.composite
def caps(draw, n_min=1, n_max=4, max_size=None):
    n = draw(st.integers(n_min, n_max))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    order = list(range(space(n).size))
    rng.shuffle(order)
    limit = draw(st.integers(0, max_size)) if max_size is not None else None
    return greedy_cap(n, order, limit)


@st.composite
def affine_maps(draw, n):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_affine_map(n, random.Random(seed))
