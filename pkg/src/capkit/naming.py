"""Attach the traditional class names to classified caps.

Names are pinned by structural anchors (which classes appear in hyperplanes of
the large 4-dimensional caps) and by two-layer scan values against already
pinned classes.  Every anchor is recomputed; contradictory evidence raises.
"""

from __future__ import annotations

from typing import Callable

from .canon import canonical_key
from .caps import CapSet, direction_triples, directions_with_triple, extremal_triple, restrict
from .classify import CapClass
from .gf3 import space


class AnchorError(RuntimeError):
    pass


def flats_in_direction(S: CapSet, triple) -> list[list[CapSet]]:
    """For each direction with the given sorted triple, its three hyperplane caps."""
    return [[restrict(S, d, t) for t in (2, 0, 1)] for d in directions_with_triple(S, triple)]


def _class_of(S: CapSet, index: dict) -> CapClass:
    return index[canonical_key(S)]


def _set(c: CapClass, name: str, evidence: str, pinned: bool = True) -> None:
    if c.label.name and c.label.name != name:
        raise AnchorError(f"{c.label.internal_id} pinned as both {c.label.name} and {name}")
    c.label.name = name
    c.label.evidence = evidence
    c.label.pinned = pinned


def _anchored(big: CapSet, triple, size: int, index: dict) -> set[int]:
    """Ids of the classes of ``size``-caps inside hyperplanes of ``triple`` directions."""
    out = set()
    for flats in flats_in_direction(big, triple):
        for F in flats:
            if F.size == size:
                out.add(id(_class_of(F, index)))
    return out


def _only(found: set[int], by_id: dict, what: str) -> CapClass:
    if len(found) != 1:
        raise AnchorError(f"{what}: expected one class, found {len(found)}")
    return by_id[next(iter(found))]


def name_dim3(classes3: list[CapClass], big20: CapSet, big19: CapSet, d18: list[CapSet] | None = None) -> None:
    index = {canonical_key(c.rep): c for c in classes3}
    by_id = {id(c): c for c in classes3}
    nine = [c for c in classes3 if c.rep.size == 9]
    if len(nine) != 1:
        raise AnchorError("expected a unique 9-cap class")
    _set(nine[0], "square antiprism plus centre", "unique 9-cap class in dimension 3")
    a = _anchored(big20, (9, 9, 2), 9, index) | _anchored(big19, (9, 9, 1), 9, index)
    if a != {id(nine[0])}:
        raise AnchorError("9-caps in {9,9,x} directions are not the 9-cap class")
    sa = _only(_anchored(big19, (9, 8, 2), 8, index), by_id, "8-cap in a {9,8,2} direction")
    _set(sa, "square antiprism", "8-cap in the {9,8,2} directions of the 19-cap")
    cube = _only(_anchored(big20, (8, 6, 6), 8, index), by_id, "8-cap in an {8,6,6} direction")
    _set(cube, "cube", "8-cap in the {8,6,6} directions of the 20-cap")
    eights = [c for c in classes3 if c.rep.size == 8 and c is not sa and c is not cube]
    if len(eights) != 1:
        raise AnchorError("expected exactly one remaining 8-cap class")
    _set(eights[0], "saddled cube", "the 8-cap class that is neither cube nor square antiprism")
    cmp_ = _only(_anchored(big19, (8, 6, 5), 7, index) | _anchored(big19, (7, 6, 6), 7, index), by_id, "7-cap")
    _set(cmp_, "cube minus point", "7-cap in the {8,6,5}/{7,6,6} directions of the 19-cap")
    cld = _only(_anchored(big20, (8, 6, 6), 6, index), by_id, "6-cap in {8,6,6}")
    _set(cld, "cube minus long diagonal", "6-cap in the {8,6,6} directions of the 20-cap")
    sp = _only(_anchored(big19, (8, 6, 5), 5, index), by_id, "5-cap in {8,6,5}")
    _set(sp, "square pyramid", "5-cap in the {8,6,5} directions of the 19-cap")
    fives = [c for c in classes3 if c.rep.size == 5 and c is not sp]
    if len(fives) != 1 or list(direction_triples(fives[0].rep)).count((2, 2, 1)) != 3:
        raise AnchorError("the other 5-cap class should have three {2,2,1} directions")
    _set(fives[0], "tetrahedron plus centre", "5-cap class with three {2,2,1} directions")
    fours = [c for c in classes3 if c.rep.size == 4]
    for name, coords in PROTOTYPES.items():
        k = _class_of(CapSet.from_coords(3, coords), index)
        if name in ("cube minus face diagonal", "cube minus edge"):
            _set(k, name, "matches the literal prototype coordinates")
        elif k.label.name != name:
            raise AnchorError(f"prototype {name} lands in class {k.label}")
    flat = [c for c in fours if _affine_dim(c.rep) == 2]
    if len(flat) != 1:
        raise AnchorError("expected one planar 4-cap class")
    _set(flat[0], "square", "the planar 4-cap class")


_CUBE = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]


def _minus(pts, *drop):
    return [p for p in pts if p not in drop]


# coordinates use field elements; 2 stands for -1
PROTOTYPES = {
    "cube": _CUBE,
    "cube minus point": _minus(_CUBE, (0, 0, 0)),
    "cube minus long diagonal": _minus(_CUBE, (0, 0, 0), (1, 1, 1)),
    "cube minus face diagonal": _minus(_CUBE, (0, 0, 0), (1, 1, 0)),
    "cube minus edge": _minus(_CUBE, (0, 0, 0), (1, 0, 0)),
    "square pyramid": [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 2, 1)],
    "tetrahedron plus centre": [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1), (2, 2, 2)],
}


def _affine_dim(S: CapSet) -> int:
    sp = space(S.n)
    pts = S.points
    if not pts:
        return -1
    span = sp.span_mask([int(sp.sub[p][pts[0]]) for p in pts[1:]])
    d, size = 0, span.bit_count()
    while 3**d < size:
        d += 1
    return d


# cell values used to separate classes that share an extremal triple
_981_KEYS = {  # (990A2, 990A3, 990B, 954A)
    "981B": (4, 4, 4, 4),
    "981C": (3, 3, 4, 3),
    "981D": (3, 4, 4, 3),
    "981E": (3, 3, 4, 4),
    "981F": (4, 3, 4, 3),
    "981G": (3, 3, 3, 4),
    "981H": (4, 3, 4, 4),
}


def name_dim4(
    classes4: list[CapClass],
    cell: Callable[[CapSet, CapSet], int],
    classes3: list[CapClass] | None = None,
) -> dict:
    """Name the 18-, 19- and 20-cap classes; returns the cell values consulted."""
    used: dict = {}

    def c(x: CapClass, y: CapClass) -> int:
        key = tuple(sorted((x.label.internal_id, y.label.internal_id)))
        if key not in used:
            used[key] = cell(x.rep, y.rep)
        return used[key]

    by_size = {s: [k for k in classes4 if k.rep.size == s] for s in (18, 19, 20)}
    if len(by_size[20]) != 1 or len(by_size[19]) != 1:
        raise AnchorError("naming expects unique 19- and 20-cap classes")
    c20, c19 = by_size[20][0], by_size[19][0]
    _set(c20, "20-cap", "unique 20-cap class")
    _set(c19, "19-cap", "unique 19-cap class")
    groups: dict[tuple, list[CapClass]] = {}
    for k in by_size[18]:
        groups.setdefault(extremal_triple(k.rep), []).append(k)
    expect = {(9, 9, 0): 4, (9, 8, 1): 10, (9, 7, 2): 1, (9, 6, 3): 2, (9, 5, 4): 1, (8, 8, 2): 2}
    got = {t: len(v) for t, v in groups.items()}
    if got != expect:
        raise AnchorError(f"unexpected extremal-triple groups {got}")

    def pick(cands, pred, what):
        hits = [k for k in cands if pred(k)]
        if len(hits) != 1:
            raise AnchorError(f"{what}: {len(hits)} candidates")
        return hits[0]

    single = {(9, 7, 2): "972A", (9, 5, 4): "954A"}
    for t, name in single.items():
        _set(groups[t][0], name, f"unique class with extremal triple {t}")

    g = groups[(8, 8, 2)]
    a1 = pick(g, lambda k: c(k, c19) == 2, "882 class with 19-cap value 2")
    _set(a1, "882A1", "882 class whose 19-cap scan maximum is 2")
    a2 = pick(g, lambda k: k is not a1 and c(k, c19) == 3, "882 class with 19-cap value 3")
    _set(a2, "882A2", "882 class whose 19-cap scan maximum is 3")

    g = groups[(9, 6, 3)]
    if classes3 is not None:
        idx = {canonical_key(k.rep): k for k in classes3}
        for k in g:
            sixes = {str(_class_of(F, idx).label) for fl in flats_in_direction(k.rep, (9, 6, 3)) for F in fl if F.size == 6}
            if sixes == {"cube minus face diagonal"}:
                _set(k, "963A", "{9,6,3} directions hold cubes minus face diagonal")
            elif sixes == {"cube minus edge"}:
                _set(k, "963B", "{9,6,3} directions hold cubes minus edge")
            else:
                raise AnchorError(f"963 class with 6-caps {sixes}")
        for k in g:
            want = 1 if k.label.name == "963B" else 2
            if c(k, c20) != want:
                raise AnchorError("963 names disagree with the 20-cap scan")
    else:
        b = pick(g, lambda k: c(k, c20) == 1, "963 class with 20-cap value 1")
        _set(b, "963B", "963 class whose 20-cap scan maximum is 1")
        _set(next(k for k in g if k is not b), "963A", "the other 963 class")

    g = groups[(9, 9, 0)]
    a3 = pick(g, lambda k: c(k, c20) == 1, "990 class with 20-cap value 1")
    _set(a3, "990A3", "990 class whose 20-cap scan maximum is 1")
    rest = [k for k in g if k is not a3]
    a1_ = pick(rest, lambda k: c(k, c19) == 2, "990 class with 19-cap value 2")
    _set(a1_, "990A1", "990 class with 19- and 20-cap scan maxima 2")
    rest = [k for k in rest if k is not a1_]
    a2_ = pick(rest, lambda k: c(k, a1_) == 2, "990 class with 990A1 value 2")
    _set(a2_, "990A2", "990 class whose 990A1 scan maximum is 2")
    b_ = pick(rest, lambda k: c(k, a1_) == 4, "990 class with 990A1 value 4")
    _set(b_, "990B", "990 class whose 990A1 scan maximum is 4")

    g = groups[(9, 8, 1)]
    with972 = [k for k in g if (9, 7, 2) in set(direction_triples(k.rep))]
    if len(with972) != 3:
        raise AnchorError("expected three 981 classes with a {9,7,2} direction")
    i_ = pick(with972, lambda k: c(k, a3) == 3, "981 class with {9,7,2} and 990A3 value 3")
    _set(i_, "981I", "has a {9,7,2} direction; 990A3 scan maximum 3")
    bd = [k for k in with972 if k is not i_]
    _set(pick(bd, lambda k: c(k, a2_) == 4, "981B"), "981B", "has a {9,7,2} direction; 990A2 scan maximum 4")
    _set(pick(bd, lambda k: c(k, a2_) == 3, "981D"), "981D", "has a {9,7,2} direction; 990A2 scan maximum 3")
    rest = [k for k in g if k not in with972]
    a_ = pick(rest, lambda k: c(k, a1) == 4, "981 class with 882A1 value 4")
    _set(a_, "981A", "981 class whose 882A1 scan maximum is 4")
    rest = [k for k in rest if k is not a_]
    j_ = pick(rest, lambda k: c(k, a1_) == 3, "981 class with 990A1 value 3")
    _set(j_, "981J", "981 class without {9,7,2} whose 990A1 scan maximum is 3")
    rest = [k for k in rest if k is not j_]
    e954 = groups[(9, 5, 4)][0]
    for k in rest:
        key = (c(k, a2_), c(k, a3), c(k, b_), c(k, e954))
        names = [n for n, v in _981_KEYS.items() if v == key and n not in ("981B", "981D")]
        if len(names) != 1:
            raise AnchorError(f"981 class with scan values {key} matches {names}")
        _set(k, names[0], f"scan maxima against 990A2, 990A3, 990B, 954A = {key}")
    return used


def name_classes(classes3: list[CapClass], classes4: list[CapClass], cell=None) -> dict:
    """Attach names to dimension-3 and dimension-4 classes in place."""
    from .search import table_cell

    cell = cell or table_cell
    c20 = next(k.rep for k in classes4 if k.rep.size == 20)
    c19 = next(k.rep for k in classes4 if k.rep.size == 19)
    name_dim3(classes3, c20, c19)
    return name_dim4(classes4, cell, classes3)
