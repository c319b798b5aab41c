import random

from hypothesis import given, settings
from hypothesis import strategies as st

from capkit.canon import are_isomorphic, canonical_form, canonical_key, dedupe, symmetry_group
from capkit.caps import apply_map
from capkit.classify import grow_classes
from capkit.gf3 import AffineMap, agl_order, enumerate_linear_maps, space
from helpers import affine_maps, caps


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_canonical_form_is_orbit_constant(data):
    S = data.draw(caps(1, 4))
    g = data.draw(affine_maps(S.n))
    assert canonical_form(apply_map(g, S)).canonical == canonical_form(S).canonical


@settings(max_examples=40, deadline=None)
@given(caps(1, 4))
def test_canonical_form_idempotent_and_witnessed(S):
    cf = canonical_form(S)
    assert canonical_form(cf.canonical).canonical == cf.canonical
    assert apply_map(cf.to_canonical, S) == cf.canonical
    assert cf.canonical.size == S.size


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_isomorphism_witness(data):
    S = data.draw(caps(1, 4))
    g = data.draw(affine_maps(S.n))
    T = apply_map(g, S)
    ok, h = are_isomorphic(S, T)
    assert ok and apply_map(h, S) == T


def _brute_symmetry_order(S):
    sp = space(S.n)
    count = 0
    for g in enumerate_linear_maps(S.n):
        perm = g.permutation()
        for t in range(sp.size):
            if all(sp.add[int(perm[p]), t] in S for p in S.points):
                count += 1
    return count


@settings(max_examples=30, deadline=None)
@given(caps(1, 2))
def test_symmetry_order_matches_brute_force(S):
    G = symmetry_group(S)
    assert G.order == _brute_symmetry_order(S)
    assert agl_order(S.n) % G.order == 0
    for g in G.generators:
        assert apply_map(g, S) == S
    assert sorted(p for o in G.orbits for p in o) == list(S.points)


def test_symmetry_group_of_the_nine_cap():
    nine = grow_classes(3)[9][0]
    G = symmetry_group(nine, keep_elements=True)
    assert len(G.elements) == G.order
    assert all(apply_map(g, nine) == nine for g in G.elements)
    assert G.order == _brute_symmetry_order(nine)


def test_distinct_classes_have_distinct_forms():
    grown = grow_classes(3)
    assert [len(grown[s]) for s in (9, 8, 7)] == [1, 3, 2]
    for s, reps in grown.items():
        assert len({canonical_form(S).canonical for S in reps}) == len(reps)
        for i, A in enumerate(reps):
            for B in reps[i + 1 :]:
                assert not are_isomorphic(A, B)[0]


def test_dedupe():
    rng = random.Random(1)
    S = grow_classes(3)[8][0]
    imgs = [apply_map(AffineMap.identity(3), S)]
    from capkit.gf3 import random_affine_map

    imgs += [apply_map(random_affine_map(3, rng), S) for _ in range(5)]
    assert len(dedupe(imgs)) == 1
    assert canonical_key(imgs[0]) == canonical_key(imgs[-1])
