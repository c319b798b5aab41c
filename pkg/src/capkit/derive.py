"""Named 5-dimensional caps obtained from two-layer scans of 18-cap classes.

Each target lists one or more routes: a pair of 18-cap classes for the
hyperplanes ``x1 = -1, 1`` and the size window of the caps to keep.  Every
route must produce exactly one isomorphism class, and all routes for a target
must agree.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .canon import canonical_form, symmetry_group
from .caps import CapSet, addable_mask, is_cap, is_complete, midpoint_counts, spectrum
from .search import layered_caps


@dataclass(frozen=True)
class Route:
    left: str
    right: str
    min_size: int
    max_size: int | None = None
    complete: bool | None = None


ROUTES: dict[str, tuple[Route, ...]] = {
    "45": (Route("882A1", "882A1", 45), Route("882A2", "882A2", 45)),
    "D686": (Route("963B", "963B", 42, 42),),
    "41A": (Route("882A2", "882A2", 41, 44, True), Route("990A1", "990A1", 41, 44, True)),
    "41B": (Route("981A", "981A", 41, 44, True),),
    "41C": (Route("990A2", "882A2", 41, 44, True), Route("972A", "972A", 41, 44, True)),
    "41D": (Route("954A", "882A1", 41, 44, True),),
    "41E": (Route("981I", "882A2", 41, 44, True),),
}
TARGETS = tuple(ROUTES)


class DerivationError(RuntimeError):
    pass


@dataclass
class Derived:
    name: str
    cap: CapSet  # canonical representative
    certificate: str
    symmetry_order: int
    orbits: tuple[int, ...]
    complete: bool
    spectrum: dict[tuple[int, int, int], int]
    provenance: str
    routes: list[tuple[Route, int, float]] = field(default_factory=list)  # (route, caps seen, seconds)


def route_classes(route: Route, reps: dict[str, CapSet]) -> tuple[list[CapSet], int]:
    """Canonical classes produced by one route, and the number of raw caps it saw."""
    caps, _ = layered_caps(reps[route.left], reps[route.right], route.min_size, route.max_size, route.complete)
    classes = {}
    for S in caps:
        T = canonical_form(S).canonical
        classes.setdefault(T.points, T)
    return [classes[k] for k in sorted(classes)], len(caps)


def derive_representatives(targets, reps: dict[str, CapSet]) -> dict[str, Derived]:
    """``reps`` maps 18-cap names to representatives."""
    out = {}
    for name in targets:
        if name not in ROUTES:
            raise KeyError(f"unknown target {name!r}; known: {', '.join(TARGETS)}")
        found = None
        log = []
        for route in ROUTES[name]:
            t0 = time.time()
            classes, raw = route_classes(route, reps)
            log.append((route, raw, time.time() - t0))
            if len(classes) != 1:
                raise DerivationError(f"{name}: route {route.left}/{route.right} gave {len(classes)} classes")
            if found is None:
                found = classes[0]
            elif classes[0] != found:
                raise DerivationError(f"{name}: routes disagree")
        G = symmetry_group(found)
        sp = spectrum(found)
        prov = "; ".join(f"scan {r.left}/{r.right} sizes {r.min_size}-{r.max_size or r.min_size}" for r, _, _ in log)
        out[name] = Derived(
            name,
            found,
            canonical_form(found).certificate,
            G.order,
            tuple(sorted(len(o) for o in G.orbits)),
            is_complete(found),
            dict(sorted(sp.items(), reverse=True)),
            prov,
            log,
        )
    return out


# --------------------------------------------------------------------------
# properties of derived caps


def min_multiplicity(S: CapSet) -> int:
    """Smallest number of cap pairs having a given non-cap point as midpoint."""
    mc = midpoint_counts(S)
    outside = [p for p in range(3**S.n) if not (S.mask >> p) & 1]
    return min(mc.get(p, 0) for p in outside)


def deletion_stable(S: CapSet, k: int) -> bool:
    """After deleting any ``k`` or fewer points, only deleted points can be added back."""
    pts = S.points
    for r in range(k + 1):
        for X in itertools.combinations(pts, r):
            xm = sum(1 << p for p in X)
            if addable_mask(CapSet(S.n, S.mask & ~xm)) & ~xm:
                return False
    return True


def classify_42(S: CapSet, d686: CapSet) -> str:
    """'45-3' when ``S`` plus its addable points is a 45-cap, 'D686' when
    isomorphic to ``d686`` (a canonical representative), else 'other'."""
    if S.size != 42:
        raise ValueError("expected a 42-cap")
    add = addable_mask(S)
    if add.bit_count() == 3 and is_cap(CapSet(S.n, S.mask | add)):
        return "45-3"
    if canonical_form(S).canonical == d686:
        return "D686"
    return "other"


def scan_42_caps(pairs, reps: dict[str, CapSet]) -> list[CapSet]:
    """Every 42-cap seen in the given two-layer scans (deduplicated by mask)."""
    out = {}
    for a, b in pairs:
        caps, _ = layered_caps(reps[a], reps[b], 42, 42)
        for S in caps:
            out.setdefault(S.mask, S)
    return [out[k] for k in sorted(out)]

