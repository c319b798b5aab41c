"""Verification suites run against a catalog.

Each suite returns a :class:`VerificationReport` of claims; a failing claim
carries the object that breaks it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .canon import canonical_form, symmetry_group
from .caps import (
    CapSet,
    MatrixPattern,
    all_point_count_grids,
    direction_triples,
    directions_with_triple,
    is_cap,
    is_complete,
    midpoint_counts,
    point_reflect,
    reflection_centres,
    spectrum,
)
from .catalog import Catalog
from .gf3 import space


@dataclass
class Claim:
    id: str
    statement: str
    passed: bool
    detail: str = ""
    counterexample: Any = None

    def __post_init__(self):
        if not self.passed and self.counterexample is None:
            raise ValueError(f"failing claim {self.id} needs a counterexample")


@dataclass
class VerificationReport:
    suite: str
    claims: list[Claim] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def add(self, cid: str, statement: str, passed: bool, detail: str = "", counterexample=None) -> bool:
        self.claims.append(Claim(f"{self.suite}/{cid}", statement, bool(passed), detail, counterexample))
        return passed

    def summary(self) -> dict:
        return {
            "suite": self.suite,
            "claims": len(self.claims),
            "failed": sum(not c.passed for c in self.claims),
            "skipped": len(self.skipped),
            "passed": self.passed,
        }

    def tsv(self) -> str:
        lines = ["suite\tclaim\tresult\tstatement\tdetail"]
        for c in sorted(self.claims, key=lambda c: c.id):
            lines.append(f"{self.suite}\t{c.id}\t{'PASS' if c.passed else 'FAIL'}\t{c.statement}\t{c.detail}")
        for s in self.skipped:
            lines.append(f"{self.suite}\t{self.suite}/{s}\tSKIP\t\t")
        return "\n".join(lines) + "\n"

    def log(self) -> str:
        out = []
        for c in sorted(self.claims, key=lambda c: c.id):
            out.append(f"{'PASS' if c.passed else 'FAIL'} {c.id}: {c.statement}" + (f" [{c.detail}]" if c.detail else ""))
            if not c.passed:
                out.append(f"    counterexample: {c.counterexample!r}")
        out += [f"SKIP {self.suite}/{s}" for s in self.skipped]
        out.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} ({len(self.claims)} claims)")
        return "\n".join(out)


# --------------------------------------------------------------------------
# helpers


def _hyperplane_caps(S: CapSet, direction) -> list[CapSet]:
    """The caps in the hyperplanes ``w.x = -1, 0, 1`` as subsets of the ambient space."""
    vals = space(S.n).direction_values
    dirs = space(S.n).directions
    row = vals[dirs.index(direction)]
    return [CapSet.from_indices(S.n, (p for p in S.points if row[p] == t)) for t in (2, 0, 1)]


def _flat_cap(S: CapSet, direction, t: int) -> CapSet:
    from .caps import restrict

    return restrict(S, direction, t)


class _Names:
    """Look up dimension-3 class labels by canonical form."""

    def __init__(self, cat: Catalog):
        self.by = {e.rep.points: e.label for e in cat.dim(3)}

    def __call__(self, F: CapSet) -> str:
        return self.by[canonical_form(F).canonical.points]


# --------------------------------------------------------------------------
# suites


def suite_dim3(cat: Catalog) -> VerificationReport:
    from .classify import brute_force_classes

    r = VerificationReport("dim3")
    for n, want in ((1, 2), (2, 4), (3, 9)):
        top = max(e.size for e in cat.dim(n))
        r.add(f"max-size-n{n}", f"largest cap in dimension {n} has {want} points", top == want, str(top), top)
    counts = Counter(e.size for e in cat.dim(3))
    got = (counts[9], counts[8], counts[7])
    r.add("counts-9-8-7", "dimension 3 has 1/3/2 classes of 9-/8-/7-caps", got == (1, 3, 2), str(got), got)
    for n in (1, 2):
        bf = brute_force_classes(n)
        mine = dict(sorted(Counter(e.size for e in cat.dim(n)).items()))
        r.add(f"brute-force-n{n}", f"class counts in dimension {n} agree with subset brute force", bf == mine, str(mine), (bf, mine))
    return r


def suite_dim4(cat: Catalog) -> VerificationReport:
    from .catalog import table1_order
    from .classify import extend_classes

    cat.require("T1")
    r = VerificationReport("dim4")
    by = {s: [e for e in cat.dim(4, s)] for s in (18, 19, 20)}
    got = tuple(len(by[s]) for s in (18, 19, 20))
    r.add("counts", "20 classes of 18-caps, one of 19-caps, one of 20-caps", got == (20, 1, 1), str(got), got)
    labels = [e.label for e in cat.dim(4)]
    order = table1_order(labels)
    r.add("names", "every class carries a distinct traditional name", len(set(labels)) == 22 and order[:22] == table1_order(order[:22]) and all(e.pinned for e in cat.dim(4)), ", ".join(order), labels)
    for s in (19, 20):
        ext = {T.points for T in extend_classes([e.rep for e in by[s - 1]])}
        mine = {e.rep.points for e in by[s]}
        r.add(f"extend-{s}", f"{s}-cap classes equal one-point extensions of {s - 1}-caps", ext == mine, f"{len(ext)} classes", (len(ext), len(mine)))
    return r


def suite_structure(cat: Catalog) -> VerificationReport:
    cat.require("T0")
    cat.require("T1")
    r = VerificationReport("structure-lemmas")
    name = _Names(cat)
    rules = {
        (9, 9, 2): {9: "square antiprism plus centre", 8: "square antiprism"},
        (9, 9, 1): {9: "square antiprism plus centre", 8: "square antiprism"},
        (9, 8, 2): {9: "square antiprism plus centre", 8: "square antiprism"},
        (8, 6, 6): {8: "cube", 7: "cube minus point", 6: "cube minus long diagonal", 5: "square pyramid"},
        (8, 6, 5): {8: "cube", 7: "cube minus point", 6: "cube minus long diagonal", 5: "square pyramid"},
        (7, 6, 6): {8: "cube", 7: "cube minus point", 6: "cube minus long diagonal", 5: "square pyramid"},
    }
    for e in cat.dim(4):
        S = e.rep
        trips = set(direction_triples(S))
        if e.size >= 19:
            ok = (9, 9, 2) in trips or (9, 9, 1) in trips
            r.add(f"{e.label}/nine-nine", "every 19- or 20-cap has a {9,9,2} or {9,9,1} direction", ok, "", sorted(trips))
        if e.size == 18 and (9, 9, 0) not in trips and (9, 8, 1) not in trips:
            hit = False
            for d in directions_with_triple(S, (8, 8, 2)):
                if any(F.size == 8 and name(F) == "saddled cube" for F in (_flat_cap(S, d, t) for t in (2, 0, 1))):
                    hit = True
            r.add(f"{e.label}/saddled", "an 18-cap without {9,9,0}/{9,8,1} has an {8,8,2} direction holding a saddled cube", hit, "", e.label)
        for t, want in list(rules.items()) + [((9, 6, 3), {9: "square antiprism plus centre", 6: "cube minus face diagonal" if e.label == "963A" else "cube minus edge"})]:
            for d in directions_with_triple(S, t):
                for v in (2, 0, 1):
                    F = _flat_cap(S, d, v)
                    if F.size in want:
                        got = name(F)
                        r.claims.append(
                            Claim(
                                f"structure-lemmas/{e.label}/{''.join(map(str, t))}/{d.covector}/{v}",
                                f"{F.size}-caps in {set(t)} directions are {want[F.size]}",
                                got == want[F.size],
                                got,
                                None if got == want[F.size] else (e.label, d.covector, v, got),
                            )
                        )
    return r


POINT_COUNT_BOUNDS = {(9, 9): 2, (9, 8): 2, (9, 7): 2, (8, 8): 2, (9, 6): 3, (8, 7): 3, (9, 5): 4, (7, 7): 4, (9, 4): 5}


def suite_point_counts(cat: Catalog) -> VerificationReport:
    from .search import ScanTask, scan_pair

    cat.require("T0")
    r = VerificationReport("point-count-caps")
    by3: dict[int, list[CapSet]] = {}
    for e in cat.dim(3):
        by3.setdefault(e.size, []).append(e.rep)
    for (a, b), bound in POINT_COUNT_BOUNDS.items():
        best = 0
        for A in by3[a]:
            for B in by3[b]:
                best = max(best, scan_pair(ScanTask(A, B)).max_middle)
        r.add(f"scan-{a}{b}", f"hyperplanes with {a} and {b} points leave at most {bound} for the third", best <= bound, f"max {best}", (a, b, best))
    if "T1" in cat.tiers:
        for e in cat.dim(4):
            bad = []
            for t in direction_triples(e.rep):
                for a, b, c in set(itertools.permutations(t)):
                    if (a, b) in POINT_COUNT_BOUNDS and c > POINT_COUNT_BOUNDS[(a, b)]:
                        bad.append((a, b, c))
            r.add(f"{e.label}/directions", "catalogued 4-dimensional caps respect the bounds", not bad, "", bad or None)
    else:
        r.skipped.append("catalogued-directions (needs T1)")
    return r


def suite_reflection(cat: Catalog) -> VerificationReport:
    cat.require("T1")
    r = VerificationReport("reflection")
    for e in cat.dim(4, 19):
        S = e.rep
        for d in directions_with_triple(S, (9, 9, 1)):
            H = [F for F in _hyperplane_caps(S, d) if F.size == 9]
            ok = bool(reflection_centres(H[0], H[1]))
            r.add(f"{e.label}/991/{d.covector}", "the two 9-caps of a {9,9,1} direction are point reflections", ok, "", None if ok else d.covector)
            selfref = [o for o in range(space(S.n).size) if point_reflect(H[0], o) == H[0]]
            r.add(f"{e.label}/991/{d.covector}/self", "a 9-cap is not a point reflection of itself", not selfref, "", selfref or None)
        for d in directions_with_triple(S, (9, 8, 2)):
            H = _hyperplane_caps(S, d)
            nine = next(F for F in H if F.size == 9)
            eight = next(F for F in H if F.size == 8)
            vals = space(S.n).direction_values[space(S.n).directions.index(d)]
            level = vals[eight.points[0]]
            inside = [p for p in range(space(S.n).size) if vals[p] == level and not (eight.mask >> p) & 1]
            ext = [p for p in inside if is_cap(eight.add(p))]
            ok = len(ext) == 1
            r.add(f"{e.label}/982/{d.covector}/unique", "the 8-cap of a {9,8,2} direction has a unique 9-cap completion", ok, str(len(ext)), None if ok else ext)
            if ok:
                full = eight.add(ext[0])
                ok2 = bool(reflection_centres(full, nine))
                r.add(f"{e.label}/982/{d.covector}/reflect", "that completion is a point reflection of the 9-cap", ok2, "", None if ok2 else d.covector)
    return r


TABLE1_CELLS = {
    ("20-cap", "20-cap"): 1,
    ("19-cap", "19-cap"): 2,
    ("20-cap", "19-cap"): 1,
    ("882A1", "882A1"): 9,
    ("882A2", "882A2"): 9,
    ("963B", "963B"): 6,
    ("990A1", "990A1"): 5,
    ("981A", "981A"): 5,
    ("972A", "972A"): 5,
    ("882A2", "990A2"): 5,
    ("882A2", "981I"): 5,
    ("882A1", "954A"): 5,
}


def suite_table1_cells(cat: Catalog) -> VerificationReport:
    from .search import table_cell

    cat.require("T1")
    r = VerificationReport("table1-cells")
    reps = cat.reps(4)
    for (a, b), want in TABLE1_CELLS.items():
        got = table_cell(reps[a], reps[b])
        r.add(f"{a}/{b}", f"two-layer maximum for ({a}, {b}) is {want}", got == want, str(got), got)
    for a, b in (("882A1", "954A"), ("990A2", "882A2")):
        x, y = table_cell(reps[a], reps[b]), table_cell(reps[b], reps[a])
        r.add(f"swap/{a}/{b}", "cell value does not depend on which layer is fixed", x == y, f"{x} {y}", (x, y))
    return r


def suite_tallies(cat: Catalog) -> VerificationReport:
    from .search import ScanTask, linear_maps_reaching, right_classes, scan_pair

    cat.require("T1")
    r = VerificationReport("scan-tallies")
    reps = cat.reps(4)
    for name, k, want, classes in (("882A1", 5, 144, [72, 72]), ("882A2", 6, 32, [16, 16])):
        res = scan_pair(ScanTask(reps[name], reps[name], tallies=(k,)))
        got = res.tallies[k]
        r.add(f"{name}/tally", f"{name} self-scan: {want} linear maps allow at least {k} middle points", got == want, str(got), got)
        maps = linear_maps_reaching(res, k)
        r.add(f"{name}/expanded", "expanding recorded orbits gives the same number of maps", len(maps) == want, str(len(maps)), len(maps))
        cl = right_classes(res, maps)
        r.add(f"{name}/classes", f"those maps split into classes {classes} under right symmetries", cl == classes, str(cl), cl)
        wit = res.witnesses(k)
        ok = all(is_cap(W) and len(W.points) == 36 + res.max_middle for W in wit)
        r.add(f"{name}/witnesses", "witnesses are caps with the expected layer counts", ok and bool(wit), str(len(wit)), None if ok else wit)
    return r


def cell_scans(reps: dict[str, CapSet], pairs=None) -> dict[tuple[str, str], tuple[int, int, int]]:
    """(max middle, weight with >= 7 allowed middle points, weight of those not a
    9-point cap) for every table cell, keyed ``(row, col)`` as in the table."""
    from .catalog import table1_order
    from .search import ScanTask, scan_pair

    order = table1_order(list(reps))
    if pairs is None:
        pairs = [(order[j], order[i]) for i in range(len(order)) for j in range(i, len(order))]
    out = {}
    for a, b in pairs:
        A, B = reps[a], reps[b]
        if symmetry_group(B).order > symmetry_group(A).order:
            A, B = B, A
        res = scan_pair(ScanTask(A, B, probe=7))
        out[(a, b)] = (res.max_middle, res.probe_weight, res.probe_violations)
    return out


def suite_probe(cat: Catalog) -> VerificationReport:
    cat.require("T1")
    r = VerificationReport("nine-point-probe")
    for (a, b), (_, w, v) in cell_scans(cat.reps(4)).items():
        r.add(f"{a}/{b}", "whenever 7 or more middle points are allowed, exactly 9 are and they form a cap", v == 0, f"weight {w}", (a, b, v))
    return r


def _derived(cat: Catalog, label: str):
    cat.require("T2")
    return cat.find(label)


def suite_45(cat: Catalog) -> VerificationReport:
    from .derive import ROUTES, route_classes

    e = _derived(cat, "45-cap")
    S = e.rep
    r = VerificationReport("45-cap")
    reps = cat.reps(4)
    for route in ROUTES["45"]:
        classes, raw = route_classes(route, reps)
        ok = len(classes) == 1 and classes[0] == S
        r.add(f"unique/{route.left}", f"{route.left} self-scan gives a single 45-cap class, the catalogued one", ok, f"{raw} caps", None if ok else classes)
    G = symmetry_group(S)
    r.add("order", "symmetry group order 720", G.order == 720, str(G.order), G.order)
    r.add("transitive", "symmetry group is transitive on cap points", G.transitive, str(len(G.orbits)), G.orbits)
    mc = midpoint_counts(S)
    outside = [p for p in range(3**5) if not (S.mask >> p) & 1]
    bad = [p for p in outside if mc.get(p, 0) != 5]
    r.add("multiplicity", "every non-cap point is the midpoint of exactly 5 cap pairs", not bad, f"{len(outside)} points", bad[:5] or None)
    r.add("double-count", "198 * 5 = C(45, 2)", len(outside) * 5 == math.comb(45, 2), f"{len(outside)}*5", len(outside))
    sp = spectrum(S)
    want = {(18, 18, 9): 55, (15, 15, 15): 66}
    r.add("spectrum", "hyperplane spectrum is 55 x {18,18,9} and 66 x {15,15,15}", dict(sp) == want, str(dict(sp)), dict(sp))
    r.add("complete", "the 45-cap is complete", is_complete(S), "", S.points)
    return r


def suite_delta686(cat: Catalog) -> VerificationReport:
    from .derive import deletion_stable, min_multiplicity
    from .search import ScanTask, scan_pair
    from .threelayer import ThreeLayerTask, scan_three_layer

    e = _derived(cat, "D686")
    D = e.rep
    r = VerificationReport("delta686")
    reps = cat.reps(4)
    res = scan_pair(ScanTask(reps["963B"], reps["963B"]))
    r.add("scan-max", "two 963B layers allow at most 6 middle points", res.max_middle == 6, str(res.max_middle), res.max_middle)
    wit = {canonical_form(W).canonical.points for W in res.witnesses()}
    ok = wit == {D.points}
    r.add("scan-witnesses", "every maximal (963B, 963B) cap is the catalogued 42-cap", ok, f"{len(wit)} class(es)", None if ok else wit)
    by = {}
    for x in cat.dim(4):
        by.setdefault(x.size, []).append(x.rep)
    tl = scan_three_layer(ThreeLayerTask([[6, 8, 6], [8, 8, None], [6, None, None]], by))
    ok = [T.points for T in tl.caps] == [D.points]
    r.add("forced", "the (6 8 6 / 8 8 * / 6 * *) point-count matrix forces one cap, isomorphic to the scan maximum", ok, f"{len(tl.caps)} class(es), {tl.starts} starts", None if ok else [T.size for T in tl.caps])
    r.add("size", "size 42", D.size == 42, str(D.size), D.size)
    m = min_multiplicity(D)
    r.add("multiplicity", "every non-cap point is the midpoint of at least 3 cap pairs", m >= 3, f"min {m}", m)
    r.add("deletion", "after deleting at most 2 points every completion stays inside", deletion_stable(D, 2), "", D.points)
    return r


TABLE2 = {  # {18,18,5}, {18,17,6}, {18,16,7}
    "41A": (4, 0, 4),
    "41B": (2, 7, 2),
    "41C": (2, 4, 6),
    "41D": (1, 1, 8),
    "41E": (1, 1, 6),
}


def suite_table2(cat: Catalog) -> VerificationReport:
    cat.require("T2")
    r = VerificationReport("table2")
    ents = [cat.find(n) for n in TABLE2]
    certs = [canonical_form(e.rep).certificate for e in ents]
    r.add("distinct", "41A-41E are pairwise non-isomorphic", len(set(certs)) == len(certs), "", certs)
    for e in ents:
        S = e.rep
        r.add(f"{e.label}/complete", f"{e.label} is complete", is_complete(S) and S.size == 41, "", e.label)
        top = max(t[0] for t in direction_triples(S))
        r.add(f"{e.label}/4-flats", f"every 4-flat of {e.label} holds at most 18 points", top <= 18, f"max {top}", top)
        sp = spectrum(S)
        got = tuple(sp.get(t, 0) for t in ((18, 18, 5), (18, 17, 6), (18, 16, 7)))
        r.add(f"{e.label}/counts", f"{e.label} direction counts {TABLE2[e.label]}", got == TABLE2[e.label], str(got), got)
    r.skipped += ["41F", "41G", "41H", "41I"]
    return r


FORBIDDEN = [
    MatrixPattern.parse("9 8 2 / * 6 * / * 6 *", "982/866"),
    MatrixPattern.parse("9 8 2 / * 6 * / * 5 *", "982/865"),
    MatrixPattern.parse("* 8 * / 9 6 3 / * 6 *", "963/866"),
    MatrixPattern.parse("* 8 * / 9 6 3 / * 5 *", "963/865"),
    MatrixPattern.parse("* 7 * / 9 6 3 / * 6 *", "963/766"),
    MatrixPattern.parse("8 * 5 / 1 6 * / 8 * 5", "865/865 a"),
    MatrixPattern.parse("8 * 6 / 1 5 * / 8 * 6", "865/865 b"),
    MatrixPattern.parse("9 1 9 / 1 1 * / 9 * *", "919 triangle"),
    MatrixPattern.parse("9 1 9 / 2 2 * / 8 * *", "919/928 triangle"),
]


def pattern_hits(grids: np.ndarray, pat: MatrixPattern) -> np.ndarray:
    """Indices of raw grids matching ``pat`` under row/column permutations and transposition."""
    from .threelayer import grid_images

    hit = np.zeros(len(grids), dtype=bool)
    for img in set(grid_images(pat.grid)):
        ok = np.ones(len(grids), dtype=bool)
        for rr in range(3):
            for cc in range(3):
                v = img[rr][cc]
                if v is not None:
                    ok &= grids[:, rr, cc] == v
        hit |= ok
    return np.nonzero(hit)[0]


def suite_patterns(cat: Catalog) -> VerificationReport:
    cat.require("T2")
    r = VerificationReport("patterns")
    for e in cat.dim(5):
        grids = all_point_count_grids(e.rep)
        for pat in FORBIDDEN:
            hits = pattern_hits(grids, pat)
            r.add(f"{e.label}/{pat.name}", f"no coordinate pair of {e.label} shows the {pat.name} pattern", len(hits) == 0, f"{len(grids)} pairs", None if not len(hits) else grids[hits[0]].tolist())
    return r


def suite_partition42(cat: Catalog) -> VerificationReport:
    from .derive import classify_42, scan_42_caps

    cat.require("T2")
    r = VerificationReport("partition-42")
    D = cat.find("D686").rep
    caps = scan_42_caps([("882A1", "882A1"), ("882A2", "882A2"), ("963B", "963B")], cat.reps(4))
    kinds = Counter()
    bad = None
    for S in caps:
        k = classify_42(S, D)
        kinds[k] += 1
        if k == "other" and bad is None:
            bad = S.points
    r.add("42-caps", "every 42-cap from the scans is a 45-cap minus three points or a D686", bad is None and bool(caps), str(dict(kinds)), bad)
    return r


def suite_table1(cat: Catalog) -> VerificationReport:
    from .catalog import table1_order

    cat.require("T3")
    r = VerificationReport("table1")
    t = cat.table1 or {}
    order = table1_order([e.label for e in cat.dim(4)])
    want = {(order[j], order[i]) for i in range(len(order)) for j in range(i, len(order))}
    r.add("complete", "every cell of the lower triangle is present", set(t) == want, f"{len(t)} cells", sorted(want - set(t))[:3] or None)
    size = {e.label: e.size for e in cat.dim(4)}
    big = {("882A1", "882A1"): 45, ("882A2", "882A2"): 45, ("963B", "963B"): 42}
    for pair in (("990A1", "990A1"), ("882A2", "990A2"), ("981A", "981A"), ("972A", "972A"), ("954A", "882A1"), ("882A2", "981I")):
        big[pair] = 41
        big[pair[::-1]] = 41
    over = []
    for (a, b), v in t.items():
        total = size[a] + size[b] + v
        if size[a] == 18 and size[b] == 18:
            cap = big.get((a, b), 40)
            if total > cap or ((a, b) in big and total != cap):
                over.append((a, b, total))
        elif total > (41 if size[a] == size[b] == 20 else 40):
            over.append((a, b, total))
    r.add("ceilings", "layer totals respect the 5-dimensional size ceilings", not over, "", over or None)
    return r


SUITES: dict[str, Callable[[Catalog], VerificationReport]] = {
    "dim3": suite_dim3,
    "dim4": suite_dim4,
    "structure-lemmas": suite_structure,
    "point-count-caps": suite_point_counts,
    "reflection": suite_reflection,
    "table1-cells": suite_table1_cells,
    "scan-tallies": suite_tallies,
    "nine-point-probe": suite_probe,
    "45-cap": suite_45,
    "delta686": suite_delta686,
    "table2": suite_table2,
    "patterns": suite_patterns,
    "partition-42": suite_partition42,
    "table1": suite_table1,
}


def verify(suite: str, cat: Catalog) -> VerificationReport:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; known: {', '.join(SUITES)}")
    return SUITES[suite](cat)
