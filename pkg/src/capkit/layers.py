"""Two-layer machinery shared by the classifier and the searches.

An n-dimensional cap is viewed along ``x_1``: a cap ``A`` in ``x_1 = -1``, a cap
``B`` in ``x_1 = 1`` (both in AG(n-1, 3)) and a middle layer ``x_1 = 0``.  A
line meeting all three layers through ``(-1, a)`` and ``(1, b)`` has its third
point at ``(0, -(a + b))``, so the middle layer may only use points outside
``-(A + B)``.

Embeddings of a class representative ``B0`` into the right layer are
enumerated as affine maps ``g`` with ``g(b0) = 0`` for a fixed frame point
``b0``: translating the right layer by ``u`` is undone by the shear
``(x_1, y) -> (x_1, y - x_1 u)`` followed by a translation, so it never
changes the middle-layer problem.  Linear parts are enumerated by the images
``v_1..v_k`` of a frame of ``B0``; the linear symmetries of ``A`` act on those
tuples, and orbit representatives of the first two images are used with
their orbit sizes as weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .caps import CapSet, bits
from .gf3 import gl_order, space


def exclusion_masks(A: CapSet) -> list[int]:
    """``out[v]`` = mask of ``-(A + v)``, i.e. the middle points killed by a right point ``v``."""
    sp = space(A.n)
    third = sp.third_list
    out = []
    for v in range(sp.size):
        row = third[v]
        m = 0
        for a in A.points:
            m |= 1 << row[a]
        out.append(m)
    return out


def middle_allowed(A: CapSet, B: CapSet) -> int:
    """Mask of middle-layer points that are not the midpoint of an (a, b) segment."""
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    sp = space(A.n)
    third = sp.third_list
    excl = 0
    for b in B.points:
        row = third[b]
        for a in A.points:
            excl |= 1 << row[a]
    return sp.full_mask & ~excl


def _blocked_by(third, chosen: list[int], p: int) -> int:
    row = third[p]
    m = 0
    for q in chosen:
        m |= 1 << row[q]
    return m


def caps_in(allowed: int, m: int, min_size: int = 0, max_size: int | None = None) -> Iterator[int]:
    """Every cap (as a mask) contained in ``allowed`` with size in the given range."""
    third = space(m).third_list
    hi = max_size if max_size is not None else allowed.bit_count()

    def rec(chosen, cand, blocked):
        if len(chosen) >= min_size:
            yield sum(1 << q for q in chosen)
        if len(chosen) == hi:
            return
        c = cand & ~blocked
        if len(chosen) + c.bit_count() < min_size:
            return
        while c:
            low = c & -c
            p = low.bit_length() - 1
            c ^= low
            nb = blocked | _blocked_by(third, chosen, p)
            chosen.append(p)
            # later candidates only: keeps each subset unique
            yield from rec(chosen, c, nb)
            chosen.pop()

    yield from rec([], allowed, 0)


def max_cap(allowed: int, m: int, all_witnesses: bool = False) -> tuple[int, list[int]]:
    """Largest cap inside ``allowed``; with ``all_witnesses`` every maximum cap."""
    third = space(m).third_list
    best = 0
    wit = [0]

    def rec(chosen, cand, blocked):
        nonlocal best
        size = len(chosen)
        if size > best:
            best = size
            wit.clear()
            wit.append(sum(1 << q for q in chosen))
        elif size == best and all_witnesses and size:
            wit.append(sum(1 << q for q in chosen))
        c = cand & ~blocked
        while c:
            low = c & -c
            p = low.bit_length() - 1
            c ^= low
            bound = size + 1 + c.bit_count()
            if bound < best or (bound == best and not all_witnesses):
                return
            nb = blocked | _blocked_by(third, chosen, p)
            chosen.append(p)
            rec(chosen, c, nb)
            chosen.pop()

    rec([], allowed, 0)
    return best, sorted(wit)


# known maximum cap sizes in AG(n, 3)
MAXCAP = {0: 1, 1: 2, 2: 4, 3: 9, 4: 20, 5: 45, 6: 112}


def max_middle(allowed: int, m: int, all_witnesses: bool = False) -> tuple[int, list[int]]:
    """Maximum cap in the allowed middle set; the whole space uses the known constant."""
    sp = space(m)
    if allowed == sp.full_mask and sp.size > 27:
        return MAXCAP[m], []
    return max_cap(allowed, m, all_witnesses)


# --------------------------------------------------------------------------
# embeddings


def _frame(B: CapSet) -> tuple[list[int], list[list[int]], list[int]]:
    """Frame ``b0, b1..bk`` of ``B`` chosen greedily so early spans hold many cap points.

    Returns ``(frame, coeffs, level)``: the coefficients of every cap point on
    ``b_i - b0`` and the 1-based index of its last nonzero coefficient (0 for b0).
    """
    sp = space(B.n)
    add, neg = sp.add_list, sp.neg_list
    pts = list(B.points)
    b0 = pts[0]
    frame = [b0]
    flat: dict[int, tuple[int, ...]] = {b0: ()}
    while True:
        outside = [p for p in pts if p not in flat]
        if not outside:
            break
        best = None
        for p in outside:
            d = add[p][neg[b0]]
            cnt = sum(
                ((B.mask >> add[q][d]) & 1) + ((B.mask >> add[q][neg[d]]) & 1) for q in flat
            )
            if best is None or cnt > best[0]:
                best = (cnt, p, d)
        _, p, d = best
        frame.append(p)
        nflat = {q: c + (0,) for q, c in flat.items()}
        for q, c in flat.items():
            nflat[add[q][d]] = c + (1,)
            nflat[add[q][neg[d]]] = c + (2,)
        flat = nflat
    coeffs, level = [], []
    for p in pts:
        c = list(flat[p])
        coeffs.append(c)
        nz = [i for i, x in enumerate(c) if x]
        level.append(nz[-1] + 1 if nz else 0)
    return frame, coeffs, level


@dataclass
class Embedding:
    weight: int
    images: tuple[int, ...]  # v_1..v_k
    right: int  # mask of g(B0) with g(b0) = 0
    excluded: int  # mask of -(A + g(B0))

    def allowed(self, m: int) -> int:
        return space(m).full_mask & ~self.excluded


@dataclass
class Embedder:
    """Enumerate embeddings of ``B0`` against a fixed left cap ``A``.

    ``threshold`` (a minimum allowed-middle count) may be raised by the caller
    while iterating; subtrees that cannot reach it are skipped.  ``weight``
    counts linear maps of the whole layer, so summing weights over all leaves
    gives ``|GL(m, 3)|``.
    """

    A: CapSet
    B0: CapSet
    threshold: int = 0
    reduce_left: bool = True
    nodes: int = field(default=0, init=False)

    def __post_init__(self):
        if self.A.n != self.B0.n:
            raise ValueError("dimension mismatch")
        self.m = self.A.n
        sp = space(self.m)
        self.sp = sp
        self.na = exclusion_masks(self.A)
        if self.B0.size:
            self.frame, self.coeffs, self.level = _frame(self.B0)
        else:
            self.frame, self.coeffs, self.level = [], [], []
        self.k = max(0, len(self.frame) - 1)
        self.extra = gl_order(self.m) // _tuple_count(self.m, self.k)
        self.group = self._left_group() if self.reduce_left else None

    def _left_group(self):
        from .canon import symmetry_group, linear_parts

        A = self.A
        if A.size < self.m + 1:
            return None
        G = symmetry_group(A, keep_elements=True)
        if G.elements is None or len(G.elements) * 1 != G.order:
            return None
        return linear_parts(G)

    # -- orbit helpers
    def _orbit_reps(self, group, candidates: list[int]):
        if not group:
            return [(v, 1) for v in candidates]
        cand = set(candidates)
        seen = set()
        out = []
        for v in candidates:
            if v in seen:
                continue
            orb = {int(g[v]) for g in group}
            seen |= orb
            out.append((v, len(orb & cand)))
        return out

    def __iter__(self) -> Iterator[Embedding]:
        return self.walk(self.k)

    def walk(self, stop: int) -> Iterator[Embedding]:
        """Embeddings truncated after frame level ``stop``; weights already include
        every completion of the remaining levels."""
        stop = min(stop, self.k)
        sp = self.sp
        if not self.B0.size:
            excl = 0
            if self.sp.size - excl.bit_count() >= self.threshold:
                yield Embedding(gl_order(self.m), (), 0, 0)
            return
        add = sp.add_list
        neg = sp.neg_list
        na = self.na
        k = self.k
        by_level: list[list[list[int]]] = [[] for _ in range(k + 1)]
        for c, lv in zip(self.coeffs, self.level):
            by_level[lv].append(c)
        full = sp.size
        base_excl = na[0]
        if full - base_excl.bit_count() < self.threshold:
            return
        if k == 0:
            yield Embedding(self.extra, (), 1, base_excl)
            return

        vectors = list(range(1, sp.size))
        group = self.group

        def image(c, vs):
            out = 0
            for ci, v in zip(c, vs):
                if ci == 1:
                    out = add[out][v]
                elif ci == 2:
                    out = add[out][neg[v]]
            return out

        def rec(level, vs, span, excl, right, weight, grp):
            for v, w in self._orbit_reps(grp, [u for u in vectors if not (span >> u) & 1]) if level <= 2 else ((u, 1) for u in vectors if not (span >> u) & 1):
                self.nodes += 1
                nvs = vs + [v]
                e = excl
                r = right
                for c in by_level[level]:
                    img = image(c, nvs)
                    e |= na[img]
                    r |= 1 << img
                if full - e.bit_count() < self.threshold:
                    continue
                if level == stop:
                    yield Embedding(weight * w * self.extra, tuple(nvs), r, e)
                else:
                    ngrp = [g for g in grp if int(g[v]) == v] if (grp and level < 2) else None
                    yield from rec(level + 1, nvs, sp.span_mask(nvs), e, r, weight * w, ngrp)

        yield from rec(1, [], 1, base_excl, 1, 1, group)


def _tuple_count(m: int, k: int) -> int:
    """Number of ordered independent k-tuples in GF(3)^m."""
    out = 1
    for i in range(k):
        out *= 3**m - 3**i
    return out


def normalize_translation(right: int, middle: int, m: int) -> tuple[int, int]:
    """Move the right layer to its smallest translate, shifting the middle to match.

    ``(A, M, B) ~ (A, M - u, B + u)`` for every vector ``u``.
    """
    sp = space(m)
    add = sp.add_list
    rpts = bits(right)
    mpts = bits(middle)
    best = None
    for u in range(sp.size):
        r = 0
        for p in rpts:
            r |= 1 << add[p][u]
        if best is None or r < best[0]:
            best = (r, u)
    r, u = best
    nu = sp.neg_list[u]
    mm = 0
    for p in mpts:
        mm |= 1 << add[p][nu]
    return r, mm
