"""Classification of caps up to affine equivalence.

Small dimensions are handled by growing caps one point at a time from the
empty cap and keeping one representative per canonical form.  Large caps in
AG(4, 3) use the layer method: every s-cap has a hyperplane direction whose
point count ``{a, b, c}`` has ``x = C(a,2)+C(b,2)+C(c,2)`` at least the average
over all directions, so it suffices to place a class representative of size
``a`` and an embedded class representative of size ``b`` in the outer layers
and enumerate the ``c`` middle points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .canon import canonical_form
from .caps import CapSet, addable_mask, bits, direction_triples, is_cap, stack
from .gf3 import agl_order, enumerate_linear_maps, space
from .layers import MAXCAP, Embedder, caps_in, normalize_translation


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ClassLabel:
    n: int
    size: int
    ordinal: int
    name: str | None = None
    evidence: str = ""
    pinned: bool = True

    @property
    def internal_id(self) -> str:
        return f"n{self.n}s{self.size}c{self.ordinal:02d}"

    def __str__(self) -> str:
        return self.name or self.internal_id


@dataclass
class CapClass:
    label: ClassLabel
    rep: CapSet

    @property
    def name(self) -> str:
        return str(self.label)


def _labelled(n: int, reps: Iterable[CapSet]) -> list[CapClass]:
    by_size: dict[int, list[CapSet]] = {}
    for S in reps:
        by_size.setdefault(S.size, []).append(S)
    out = []
    for s in sorted(by_size, reverse=True):
        group = sorted(by_size[s], key=lambda S: S.points)
        for i, S in enumerate(group):
            out.append(CapClass(ClassLabel(n, s, i), S))
    return out


# --------------------------------------------------------------------------
# growth from the empty cap


def grow_classes(n: int, max_size: int | None = None) -> dict[int, list[CapSet]]:
    """Canonical representatives of every cap class in AG(n, 3), keyed by size."""
    if n > 3:
        raise BudgetExceeded("growth from the empty cap is limited to n <= 3")
    level = [canonical_form(CapSet.empty(n)).canonical]
    out = {0: level}
    size = 0
    while level and (max_size is None or size < max_size):
        nxt = {}
        for S in level:
            for p in bits(addable_mask(S)):
                T = canonical_form(S.add(p)).canonical
                nxt.setdefault(T.mask, T)
        size += 1
        level = sorted(nxt.values(), key=lambda S: S.points)
        if level:
            out[size] = level
    return out


def brute_force_classes(n: int) -> dict[int, int]:
    """Class counts per size by orbit minima over all subsets (n <= 2 only)."""
    if n > 2:
        raise BudgetExceeded("subset brute force is limited to n <= 2")
    sp = space(n)
    perms = []
    for g in enumerate_linear_maps(n):
        for t in range(sp.size):
            perms.append([sp.add[int(g.permutation()[p]), t] for p in range(sp.size)])
    seen: dict[int, set[int]] = {}
    for mask in range(1 << sp.size):
        S = CapSet(n, mask)
        if not is_cap(S):
            continue
        pts = S.points
        key = min(sum(1 << perm[p] for p in pts) for perm in perms)
        seen.setdefault(S.size, set()).add(key)
    assert len(perms) == agl_order(n)
    return {s: len(v) for s, v in sorted(seen.items())}


# --------------------------------------------------------------------------
# layered classification of large 4-dimensional caps


def diagram_x(triple) -> int:
    return sum(math.comb(t, 2) for t in triple)


def average_x(n: int, s: int) -> tuple[int, int]:
    """Average of ``x`` over all directions, as a fraction (num, den)."""
    num = math.comb(s, 2) * (3 ** (n - 1) - 1) // 2
    den = (3**n - 1) // 2
    return num, den


def heavy_triples(n: int, s: int) -> list[tuple[int, int, int]]:
    """Sorted triples of sum ``s`` whose ``x`` reaches the directional average."""
    num, den = average_x(n, s)
    lo = -(-num // den)
    top = MAXCAP[n - 1]
    out = []
    for a in range(top, -1, -1):
        for b in range(a, -1, -1):
            c = s - a - b
            if 0 <= c <= b and diagram_x((a, b, c)) >= lo:
                out.append((a, b, c))
    return out


@dataclass
class LayeredStats:
    triple: tuple[int, int, int]
    pairs: int = 0
    embeddings: int = 0
    candidates: int = 0
    classes: int = 0


@dataclass
class LayeredClassifier:
    """Classify s-caps in AG(n, 3) from the classes of dimension n - 1."""

    n: int
    lower: dict[int, list[CapSet]]
    stats: list[LayeredStats] = field(default_factory=list)

    def _owner(self, S: CapSet, heavy: list[tuple[int, int, int]]) -> tuple[int, int, int]:
        present = set(direction_triples(S))
        for t in heavy:
            if t in present:
                return t
        raise AssertionError("cap without a heavy direction")

    def classify_size(self, s: int) -> list[CapSet]:
        m = self.n - 1
        heavy = heavy_triples(self.n, s)
        found: dict[tuple, CapSet] = {}
        for triple in heavy:
            a, b, c = triple
            st = LayeredStats(triple)
            seen_masks: set[int] = set()
            for A in self.lower.get(a, []):
                for B0 in self.lower.get(b, []):
                    st.pairs += 1
                    for e in Embedder(A, B0, threshold=c):
                        st.embeddings += 1
                        allowed = e.allowed(m)
                        for mid in caps_in(allowed, m, c, c):
                            r, mm = normalize_translation(e.right, mid, m)
                            key = (A.mask, r, mm)
                            if key in seen_masks:
                                continue
                            seen_masks.add(key)
                            S = stack(A, CapSet(m, mm), CapSet(m, r))
                            st.candidates += 1
                            if self._owner(S, heavy) != triple:
                                continue
                            T = canonical_form(S).canonical
                            found.setdefault(T.points, T)
            st.classes = len(found)
            self.stats.append(st)
        return [found[k] for k in sorted(found)]


def classify_dim4(min_size: int = 18, lower: dict[int, list[CapSet]] | None = None) -> dict[int, list[CapSet]]:
    if min_size < 18:
        raise BudgetExceeded("dimension-4 classification supports min_size >= 18")
    lower = lower or grow_classes(3)
    lc = LayeredClassifier(4, lower)
    return {s: lc.classify_size(s) for s in range(MAXCAP[4], min_size - 1, -1)}


def extend_classes(caps: Iterable[CapSet]) -> list[CapSet]:
    """Classes of caps obtained by adding one point to any of the given caps."""
    out = {}
    for S in caps:
        for p in bits(addable_mask(S)):
            T = canonical_form(S.add(p)).canonical
            out.setdefault(T.points, T)
    return [out[k] for k in sorted(out)]


def classify(n: int, min_size: int, lower: dict[int, list[CapSet]] | None = None) -> list[CapClass]:
    """One representative per class of caps of size >= ``min_size`` in AG(n, 3)."""
    if n <= 3:
        grown = grow_classes(n)
        reps = [S for s, caps in grown.items() if s >= min_size for S in caps]
    elif n == 4:
        by = classify_dim4(min_size, lower)
        reps = [S for caps in by.values() for S in caps]
    else:
        raise BudgetExceeded(f"classification of dimension {n} is out of budget")
    return _labelled(n, reps)
