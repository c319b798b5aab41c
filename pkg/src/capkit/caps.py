"""Cap sets in AG(n, 3) and their statistics."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf3 import AffineMap, Direction, Point, enumerate_directions, space


class NotACapError(ValueError):
    pass


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class CapSet:
    """A set of points of AG(n, 3) held as a ``3**n``-bit membership mask.

    The name follows usage: nothing forces the set to be a cap, see :func:`is_cap`.
    """

    n: int
    mask: int
    _pts: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sp = space(self.n)
        if self.mask < 0 or self.mask >> sp.size:
            raise ValueError("mask has bits outside the space")
        object.__setattr__(self, "_pts", tuple(bits(self.mask)))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "CapSet":
        return cls(n, mask_of(indices))

    @classmethod
    def from_coords(cls, n: int, coords: Iterable[Sequence[int]]) -> "CapSet":
        sp = space(n)
        return cls(n, mask_of(sp.index(c) for c in coords))

    @classmethod
    def empty(cls, n: int) -> "CapSet":
        return cls(n, 0)

    @property
    def size(self) -> int:
        return len(self._pts)

    def __len__(self) -> int:
        return len(self._pts)

    @property
    def points(self) -> tuple[int, ...]:
        return self._pts

    def coords(self) -> list[tuple[int, ...]]:
        sp = space(self.n)
        return [sp.coords_of(p) for p in self._pts]

    def __contains__(self, p) -> bool:
        idx = p.index if isinstance(p, Point) else int(p)
        return bool((self.mask >> idx) & 1)

    def __or__(self, other: "CapSet") -> "CapSet":
        return CapSet(self.n, self.mask | other.mask)

    def add(self, p: int) -> "CapSet":
        return CapSet(self.n, self.mask | (1 << p))

    def remove(self, p: int) -> "CapSet":
        return CapSet(self.n, self.mask & ~(1 << p))

    def __repr__(self) -> str:
        return f"CapSet(n={self.n}, size={self.size})"


def _require_cap(S: CapSet) -> None:
    if not is_cap(S):
        raise NotACapError("set is not a cap")


def is_cap(S: CapSet) -> bool:
    third = space(S.n).third_list
    pts = S.points
    m = S.mask
    for i, p in enumerate(pts):
        row = third[p]
        for q in pts[i + 1 :]:
            if (m >> row[q]) & 1:
                return False
    return True


def thirds_mask(S: CapSet) -> int:
    """Mask of all third points of pairs of ``S``."""
    third = space(S.n).third_list
    pts = S.points
    out = 0
    for i, p in enumerate(pts):
        row = third[p]
        for q in pts[i + 1 :]:
            out |= 1 << row[q]
    return out


def addable_mask(S: CapSet) -> int:
    return space(S.n).full_mask & ~S.mask & ~thirds_mask(S)


def addable_points(S: CapSet) -> set[Point]:
    _require_cap(S)
    return {Point(S.n, i) for i in bits(addable_mask(S))}


def is_complete(S: CapSet) -> bool:
    _require_cap(S)
    return addable_mask(S) == 0


def midpoint_counts(S: CapSet) -> Counter:
    """For every point outside ``S``: how many pairs of ``S`` it is the midpoint of."""
    third = space(S.n).third_list
    pts = S.points
    c: Counter = Counter()
    for i, p in enumerate(pts):
        row = third[p]
        for q in pts[i + 1 :]:
            c[row[q]] += 1
    return c


def midpoint_multiplicity(S: CapSet, P: Point | int) -> int:
    idx = P.index if isinstance(P, Point) else int(P)
    if idx in S:
        raise ValueError("point lies in the cap")
    row = space(S.n).third_list[idx]
    # pairs {p, q} with third(p, q) = P  <=>  q = third(p, P)
    return sum(1 for p in S.points if (S.mask >> row[p]) & 1) // 2


def multiplicity_profile(S: CapSet) -> tuple[tuple[int, int], ...]:
    """Sorted histogram ``(multiplicity, number of outside points)``."""
    c = midpoint_counts(S)
    outside = space(S.n).size - S.size
    hist = Counter(c.values())
    hist[0] += outside - len(c)
    return tuple(sorted((k, v) for k, v in hist.items() if v))


# --------------------------------------------------------------------------
# layer counts and spectra


@dataclass(frozen=True)
class LayerCounts:
    c_minus: int
    c_zero: int
    c_plus: int

    @property
    def total(self) -> int:
        return self.c_minus + self.c_zero + self.c_plus

    def sorted(self) -> tuple[int, int, int]:
        return tuple(sorted((self.c_minus, self.c_zero, self.c_plus), reverse=True))


def _covector(w) -> tuple[int, ...]:
    return tuple(w.covector) if isinstance(w, Direction) else tuple(int(x) % 3 for x in w)


def _values(S: CapSet, w) -> np.ndarray:
    sp = space(S.n)
    cv = np.array(_covector(w), dtype=np.int64)
    if len(cv) != S.n or not cv.any():
        raise ValueError("bad covector")
    pts = np.array(S.points, dtype=np.int64)
    if not len(pts):
        return pts
    return (sp.coords[pts] @ cv) % 3


def layer_counts(S: CapSet, w) -> LayerCounts:
    """Counts in the hyperplanes ``w.x = 2 (-1), 0, 1``; ``w`` may be unnormalized."""
    v = _values(S, w)
    return LayerCounts(int((v == 2).sum()), int((v == 0).sum()), int((v == 1).sum()))


PointCountTriple = tuple[int, int, int]


def point_count_triple(S: CapSet, D) -> PointCountTriple:
    return layer_counts(S, D).sorted()


def direction_counts(S: CapSet) -> np.ndarray:
    """Array ``(num_directions, 3)`` of layer counts for t = 0, 1, 2."""
    vals = space(S.n).direction_values
    pts = list(S.points)
    nd = vals.shape[0]
    if not pts:
        return np.zeros((nd, 3), dtype=np.int64)
    sub = vals[:, pts]
    return np.stack([(sub == t).sum(axis=1) for t in range(3)], axis=1)


def direction_triples(S: CapSet) -> list[PointCountTriple]:
    """Sorted triple for every direction, in :func:`enumerate_directions` order."""
    dc = -np.sort(-direction_counts(S), axis=1)
    return [tuple(int(x) for x in r) for r in dc]


def spectrum(S: CapSet) -> Counter:
    return Counter(direction_triples(S))


def spectrum_key(S: CapSet) -> tuple:
    return tuple(sorted(spectrum(S).items(), reverse=True))


def extremal_triple(S: CapSet) -> PointCountTriple:
    """Lexicographically largest point-count triple of ``S``."""
    return max(direction_triples(S))


# --------------------------------------------------------------------------
# point-count matrices


@dataclass(frozen=True)
class PointCountMatrix:
    """Counts in the nine flats ``(x1, x2) = (i, j)``, stored in display layout.

    ``grid[r][c]`` is the count at ``x1 = c - 1``, ``x2 = 1 - r``: rows run
    ``x2 = 1, 0, -1`` top to bottom and columns ``x1 = -1, 0, 1`` left to right.
    """

    grid: tuple[tuple[int, int, int], ...]

    def at(self, x1: int, x2: int) -> int:
        return self.grid[1 - _signed(x2)][_signed(x1) + 1]

    @property
    def total(self) -> int:
        return sum(map(sum, self.grid))

    def column(self, x1: int) -> tuple[int, int, int]:
        """Counts at ``x2 = -1, 0, 1`` in the column ``x1``."""
        return tuple(self.at(x1, j) for j in (-1, 0, 1))

    def row(self, x2: int) -> tuple[int, int, int]:
        """Counts at ``x1 = -1, 0, 1`` in the row ``x2``."""
        return tuple(self.at(i, x2) for i in (-1, 0, 1))


def _signed(v: int) -> int:
    v %= 3
    return -1 if v == 2 else v


def point_count_matrix(S: CapSet, w1, w2) -> PointCountMatrix:
    from .gf3 import rank

    c1, c2 = _covector(w1), _covector(w2)
    if rank([c1, c2]) != 2:
        raise ValueError("dependent covectors")
    v1, v2 = _values(S, c1), _values(S, c2)
    cnt = Counter(zip(v1.tolist(), v2.tolist()))
    grid = tuple(
        tuple(cnt.get((x1 % 3, x2 % 3), 0) for x1 in (-1, 0, 1)) for x2 in (1, 0, -1)
    )
    return PointCountMatrix(grid)


def all_point_count_grids(S: CapSet) -> np.ndarray:
    """Raw grids ``(pairs, 3, 3)`` indexed ``[x1 value, x2 value]`` for every
    unordered pair of distinct directions."""
    vals = space(S.n).direction_values[:, list(S.points)]
    nd = vals.shape[0]
    i1, i2 = np.triu_indices(nd, k=1)
    code = vals[i1] * 3 + vals[i2]
    out = np.zeros((len(i1), 9), dtype=np.int64)
    for k in range(9):
        out[:, k] = (code == k).sum(axis=1)
    return out.reshape(len(i1), 3, 3)


@dataclass(frozen=True)
class MatrixPattern:
    """3x3 display-layout constraints; ``None`` is a wildcard."""

    grid: tuple[tuple[int | None, ...], ...]
    row_perms: bool = True
    col_perms: bool = True
    transpose: bool = True
    name: str = ""

    def __post_init__(self):
        if all(x is None for r in self.grid for x in r):
            raise ValueError("pattern needs at least one fixed entry")

    @classmethod
    def parse(cls, text: str, name: str = "", **flags) -> "MatrixPattern":
        """Parse ``"9 8 2 / * 6 * / * 6 *"`` (rows top to bottom)."""
        rows = [r.split() for r in text.split("/")]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError(f"bad pattern {text!r}")
        g = tuple(tuple(None if x == "*" else int(x) for x in r) for r in rows)
        return cls(g, name=name, **flags)


def _grid_images(grid, pat: MatrixPattern):
    perms = list(itertools.permutations(range(3)))
    rps = perms if pat.row_perms else [(0, 1, 2)]
    cps = perms if pat.col_perms else [(0, 1, 2)]
    bases = [grid]
    if pat.transpose:
        bases.append(tuple(zip(*grid)))
    for g in bases:
        for rp in rps:
            for cp in cps:
                yield tuple(tuple(g[rp[r]][cp[c]] for c in range(3)) for r in range(3))


def matches_pattern(M: PointCountMatrix | Sequence[Sequence[int]], pat: MatrixPattern) -> bool:
    grid = M.grid if isinstance(M, PointCountMatrix) else tuple(tuple(r) for r in M)
    fixed = [(r, c, v) for r, row in enumerate(pat.grid) for c, v in enumerate(row) if v is not None]
    for g in _grid_images(grid, pat):
        if all(g[r][c] == v for r, c, v in fixed):
            return True
    return False


# --------------------------------------------------------------------------
# point reflections and restriction to hyperplanes


def point_reflect(S: CapSet, O: Point | int) -> CapSet:
    """Image of ``S`` under ``P -> 2O - P`` (equivalently ``third_point(O, P)``)."""
    o = O.index if isinstance(O, Point) else int(O)
    row = space(S.n).third_list[o]
    return CapSet.from_indices(S.n, (row[p] for p in S.points))


def reflection_centres(S1: CapSet, S2: CapSet) -> list[int]:
    if S1.n != S2.n:
        raise ValueError("dimension mismatch")
    if S1.size != S2.size:
        return []
    if S1.size == 0:
        return list(range(space(S1.n).size))
    sp = space(S1.n)
    p = S1.points[0]
    out = []
    for q in S2.points:
        # P -> -O - P sends p to q  <=>  O = -(p + q)
        o = sp.neg_list[sp.add_list[p][q]]
        if point_reflect(S1, o).mask == S2.mask:
            out.append(o)
    return out


def is_point_reflection_pair(S1: CapSet, S2: CapSet) -> bool:
    return bool(reflection_centres(S1, S2))


def hyperplane_frame(n: int, w, t: int) -> AffineMap:
    """Affine map of AG(n,3) carrying ``{w.x = t}`` onto ``{x_1 = 0}``.

    The remaining coordinates keep their order, so the restricted cap lives in
    AG(n-1, 3) with coordinates ``x_2..x_n`` minus the pivot coordinate of ``w``.
    """
    cv = _covector(w)
    pivot = next(i for i, c in enumerate(cv) if c)
    inv = 1 if cv[pivot] == 1 else 2
    # new x_1 = inv * (w.x - t); others: the non-pivot coordinates in order
    rows = [tuple((inv * c) % 3 for c in cv)]
    others = [i for i in range(n) if i != pivot]
    for i in others:
        rows.append(tuple(int(j == i) for j in range(n)))
    trans = [(-inv * t) % 3] + [0] * (n - 1)
    return AffineMap(tuple(rows), tuple(trans))


def restrict(S: CapSet, w, t: int, frame: AffineMap | None = None) -> CapSet:
    """The cap induced in the hyperplane ``w.x = t`` as a cap of AG(n-1, 3)."""
    if S.n < 2:
        raise ValueError("restriction needs n >= 2")
    if frame is None:
        frame = hyperplane_frame(S.n, w, t)
    sp = space(S.n)
    cv = np.array(_covector(w), dtype=np.int64)
    hyper = [i for i in range(sp.size) if int(sp.coords[i] @ cv) % 3 == t % 3]
    perm = frame.permutation()
    if any(perm[i] % 3 != 0 for i in hyper):
        raise ValueError("frame does not carry the hyperplane onto x_1 = 0")
    keep = [int(perm[p]) // 3 for p in S.points if int(sp.coords[p] @ cv) % 3 == t % 3]
    return CapSet.from_indices(S.n - 1, keep)


def layers(S: CapSet) -> tuple[CapSet, CapSet, CapSet]:
    """Split along ``x_1``: caps of AG(n-1,3) in ``x_1 = -1, 0, 1``."""
    out = {0: [], 1: [], 2: []}
    for p in S.points:
        out[p % 3].append(p // 3)
    m = S.n - 1
    return tuple(CapSet.from_indices(m, out[t]) for t in (2, 0, 1))


def stack(minus: CapSet, zero: CapSet, plus: CapSet) -> CapSet:
    """Inverse of :func:`layers`."""
    n = minus.n + 1
    idx = [3 * p + 2 for p in minus.points]
    idx += [3 * p for p in zero.points]
    idx += [3 * p + 1 for p in plus.points]
    return CapSet.from_indices(n, idx)


def apply_map(g: AffineMap, S: CapSet) -> CapSet:
    if g.n != S.n:
        raise ValueError("dimension mismatch")
    perm = g.permutation()
    return CapSet.from_indices(S.n, (int(perm[p]) for p in S.points))


def apply_perm(perm: Sequence[int], S: CapSet) -> CapSet:
    return CapSet.from_indices(S.n, (int(perm[p]) for p in S.points))


def translate(S: CapSet, v: int) -> CapSet:
    add = space(S.n).add_list[v]
    return CapSet.from_indices(S.n, (add[p] for p in S.points))


def directions_with_triple(S: CapSet, triple: Sequence[int]) -> list[Direction]:
    want = tuple(sorted(triple, reverse=True))
    dirs = enumerate_directions(S.n)
    return [d for d, t in zip(dirs, direction_triples(S)) if t == want]
