import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capkit.caps import CapSet, addable_mask
from capkit.classify import grow_classes
from helpers import caps
from capkit.derive import ROUTES, DerivationError, classify_42, deletion_stable, derive_representatives, min_multiplicity


def test_small_values():
    nine = grow_classes(3)[9][0]
    assert min_multiplicity(nine) == 2
    assert [deletion_stable(nine, k) for k in range(4)] == [True, True, False, False]
    four = grow_classes(2)[4][0]
    assert min_multiplicity(four) == 1
    assert [deletion_stable(four, k) for k in range(3)] == [True, False, False]


@settings(max_examples=40, deadline=None)
@given(caps(2, 3), st.integers(0, 2))
def test_multiplicity_bounds_deletion(S, k):
    # an outside point on more than k cap segments stays blocked after k deletions
    if S.size and S.size < 3 ** S.n and min_multiplicity(S) > k:
        assert deletion_stable(S, k)
    assert deletion_stable(S, 0) == (addable_mask(S) == 0)


def test_classify_42_rejects_other_sizes(catalog):
    with pytest.raises(ValueError):
        classify_42(catalog.find("41A").rep, catalog.find("D686").rep)


def test_classify_42_cases(catalog):
    big = catalog.find("45-cap").rep
    D = catalog.find("D686").rep
    pts = big.points
    S = CapSet.from_indices(5, pts[3:])
    assert classify_42(S, D) == "45-3"
    assert classify_42(D, D) == "D686"


def test_unknown_target():
    with pytest.raises(KeyError):
        derive_representatives(["46"], {})


def test_routes_use_distinct_pairs():
    for name, routes in ROUTES.items():
        assert len({(r.left, r.right) for r in routes}) == len(routes)


def test_route_disagreement_is_an_error(reps4, monkeypatch):
    import capkit.derive as d

    fake = {"X": (d.Route("990A1", "990A1", 41, 41, True), d.Route("963B", "963B", 42, 42))}
    monkeypatch.setattr(d, "ROUTES", fake)
    with pytest.raises(DerivationError):
        d.derive_representatives(["X"], reps4)
