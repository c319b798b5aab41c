"""Canonical forms, isomorphism tests and symmetry groups under AGL(n, 3).

A canonical form is found by searching over ordered affine frames made of cap
points.  A frame ``(p0, p1, ..., pk)`` defines the affine map sending ``p0`` to
the origin and ``p_i - p0`` to the i-th unit vector; the canonical cap is the
frame image whose sorted index list is lexicographically smallest.  Because
the points of the cap that lie in the span of the first ``k`` frame vectors
map exactly onto indices below ``3**k``, every partial frame fixes a prefix of
the sorted list, which lets the search discard frames early.

The first two frame points are restricted to an isomorphism-invariant subset
(minimal midpoint-multiplicity profile) before the search starts.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .caps import CapSet, bits, midpoint_counts, multiplicity_profile, spectrum_key
from .gf3 import AffineMap, agl_order, identity, space

_INF = 1 << 30


@dataclass(frozen=True)
class CanonicalForm:
    canonical: CapSet
    certificate: str
    invariants: tuple
    to_canonical: AffineMap = field(compare=False, repr=False)

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)


@dataclass
class SymmetryGroup:
    generators: list[AffineMap]
    order: int
    orbits: list[tuple[int, ...]]
    elements: list[AffineMap] | None = None

    @property
    def transitive(self) -> bool:
        return len(self.orbits) == 1


def invariant_vector(S: CapSet) -> tuple:
    return (S.size, spectrum_key(S), multiplicity_profile(S))


def certificate(S: CapSet) -> str:
    return hashlib.sha256(f"{S.n}:{S.mask:x}".encode()).hexdigest()[:16]


def _selection(S: CapSet):
    """Isomorphism-invariant candidate sets for the first two frame points."""
    sp = space(S.n)
    pts = S.points
    third = sp.third_list
    mult = midpoint_counts(S)
    prof = {
        p: tuple(sorted(mult[third[p][q]] for q in pts if q != p)) for p in pts
    }
    classes: dict = {}
    for p in pts:
        classes.setdefault(prof[p], []).append(p)
    # smallest class first, ties by profile
    key = min(classes, key=lambda k: (len(classes[k]), k))
    first = classes[key]

    def second(p0):
        cands = [q for q in pts if q != p0]
        if not cands:
            return []
        keyed = {q: (mult[third[p0][q]], prof[q]) for q in cands}
        best = min(keyed.values())
        return [q for q in cands if keyed[q] == best]

    return first, second


def _frame_search(S: CapSet):
    """Return ``(best_images, leaves)``; leaves are ``(p0, ds)`` frames."""
    sp = space(S.n)
    add, neg, sub = sp.add_list, sp.neg_list, sp.sub.tolist()
    mask = S.mask
    if not S.points:
        return [], [(None, ())]
    first, second = _selection(S)
    best: list[tuple] = []
    leaves: list[tuple[int, tuple[int, ...]]] = []

    def rec(depth, p0, ds, flat, flat_mask, cands):
        outside = mask & ~flat_mask
        if not outside:
            leaves.append((p0, tuple(ds)))
            return
        step = 3 ** (depth - 1)
        for p in cands if cands is not None else bits(outside):
            d = sub[p][p0]
            nd = neg[d]
            new_flat = []
            new_imgs = []
            new_mask = flat_mask
            for q, im in flat:
                q1 = add[q][d]
                q2 = add[q][nd]
                new_flat.append((q1, im + step))
                new_flat.append((q2, im + 2 * step))
                new_mask |= (1 << q1) | (1 << q2)
                if (mask >> q1) & 1:
                    new_imgs.append(im + step)
                if (mask >> q2) & 1:
                    new_imgs.append(im + 2 * step)
            new_imgs.sort()
            key = tuple(new_imgs) + (_INF,)
            if len(best) > depth:
                if key > best[depth]:
                    continue
                if key < best[depth]:
                    del best[depth:]
                    best.append(key)
                    leaves.clear()
            else:
                best.append(key)
            rec(depth + 1, p0, ds + [d], flat + new_flat, new_mask, None)

    for p0 in first:
        if len(best) == 0:
            best.append((0, _INF))
        rec(1, p0, [], [(p0, 0)], 1 << p0, second(p0))
    images = [0]
    for key in best[1:]:
        images.extend(key[:-1])
    return images, leaves


def _frame_map(n: int, p0: int, ds: tuple[int, ...]) -> AffineMap:
    """Affine map sending ``p0`` to 0 and ``ds[i]`` to ``e_i``."""
    sp = space(n)
    cols = [sp.coords_of(d) for d in ds]
    span = sp.span_mask(list(ds))
    for i in range(n):
        if len(cols) == n:
            break
        e = sp.powers[i]
        if not (span >> e) & 1:
            cols.append(sp.coords_of(e))
            span = sp.span_mask([sp.index(c) for c in cols])
    inv_map = AffineMap.from_columns(cols, sp.coords_of(p0))
    return inv_map.inverse()


def canonical_form(S: CapSet) -> CanonicalForm:
    if S.n > 6:
        raise ValueError("dimension too large")
    images, leaves = _frame_search(S)
    canon = CapSet.from_indices(S.n, images) if S.points else CapSet.empty(S.n)
    p0, ds = leaves[0]
    g = _frame_map(S.n, p0, ds) if p0 is not None else AffineMap.identity(S.n)
    return CanonicalForm(canon, certificate(canon), invariant_vector(S), g)


def canonical_key(S: CapSet) -> tuple[int, ...]:
    """Sorted point list of the canonical cap; the order used everywhere for sorting."""
    return canonical_form(S).canonical.points


def are_isomorphic(S1: CapSet, S2: CapSet) -> tuple[bool, AffineMap | None]:
    """Whether some affine map carries ``S1`` onto ``S2``, with a witness."""
    if S1.n != S2.n or S1.size != S2.size:
        return False, None
    if invariant_vector(S1) != invariant_vector(S2):
        return False, None
    f1, f2 = canonical_form(S1), canonical_form(S2)
    if f1.canonical != f2.canonical:
        return False, None
    return True, f2.to_canonical.inverse().compose(f1.to_canonical)


def _pointwise_stabilizer_order(n: int, k: int) -> int:
    out = 1
    for i in range(k, n):
        out *= 3**n - 3**i
    return out


def _pointwise_stabilizer_gens(n: int, k: int) -> list[AffineMap]:
    """Generators of the linear maps fixing ``e_1..e_k`` (the span's frame)."""
    gens = []
    for j in range(k, n):
        # scale e_j by -1
        m = [list(r) for r in identity(n)]
        m[j][j] = 2
        gens.append(AffineMap.linear(m))
        for i in range(n):
            if i != j:
                m = [list(r) for r in identity(n)]
                m[i][j] = 1  # e_j -> e_j + e_i
                gens.append(AffineMap.linear(m))
    return gens


def _agl_gens(n: int) -> list[AffineMap]:
    sp = space(n)
    gens = [AffineMap(identity(n), sp.coords_of(1))]
    return gens + _pointwise_stabilizer_gens(n, 0)


def _closure(perms: list[tuple[int, ...]], limit: int) -> set[tuple[int, ...]] | None:
    if not perms:
        return {tuple(range(0))}
    size = len(perms[0])
    ident = tuple(range(size))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in perms:
                gh = tuple(h[i] for i in g)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
                    if len(seen) > limit:
                        return None
        frontier = nxt
    return seen


def symmetry_group(S: CapSet, keep_elements: bool = False) -> SymmetryGroup:
    n = S.n
    if not S.points:
        return SymmetryGroup(_agl_gens(n), agl_order(n), [])
    images, leaves = _frame_search(S)
    k = len(leaves[0][1])
    g0 = _frame_map(n, *leaves[0])
    g0_perm = g0.permutation()
    autos = []
    for p0, ds in leaves:
        g = _frame_map(n, p0, ds)
        autos.append(g.inverse().compose(g0))
    order = len(leaves) * _pointwise_stabilizer_order(n, k)

    # greedy generating set from the automorphisms found
    gens: list[AffineMap] = []
    gen_perms: list[tuple[int, ...]] = []
    group: set | None = {tuple(range(space(n).size))}
    for a in autos:
        p = tuple(int(x) for x in a.permutation())
        if group is not None and p in group:
            continue
        gens.append(a)
        gen_perms.append(p)
        group = _closure(gen_perms, 20000) if len(leaves) <= 20000 else None
        if group is not None and len(group) == len(leaves):
            break
    if k < n:
        # conjugate the pointwise stabilizer of the standard k-flat back to S
        g0_inv = g0.inverse()
        gens += [g0_inv.compose(h).compose(g0) for h in _pointwise_stabilizer_gens(n, k)]
    del g0_perm

    # orbits on cap points
    parent = {p: p for p in S.points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in gens:
        perm = a.permutation()
        for p in S.points:
            q = int(perm[p])
            ra, rb = find(p), find(q)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    orbits: dict[int, list[int]] = {}
    for p in S.points:
        orbits.setdefault(find(p), []).append(p)
    orb = sorted(tuple(v) for v in orbits.values())
    return SymmetryGroup(gens, order, orb, autos if keep_elements else None)


def linear_parts(G: SymmetryGroup) -> list[np.ndarray]:
    """Distinct linear parts of the group elements, as permutations of vectors."""
    if G.elements is None:
        raise ValueError("group built without elements")
    seen = {}
    for a in G.elements:
        lin = AffineMap(a.matrix, (0,) * a.n)
        perm = lin.permutation()
        seen.setdefault(perm.tobytes(), perm)
    return list(seen.values())


def dedupe(caps, key=canonical_key):
    """Keep one cap per isomorphism class, sorted by canonical key."""
    out = {}
    for S in caps:
        out.setdefault(key(S), S)
    return [out[k] for k in sorted(out)]


def orbit_counter(S: CapSet) -> Counter:
    return Counter(len(o) for o in symmetry_group(S).orbits)
