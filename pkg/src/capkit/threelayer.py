"""Caps with a prescribed 3x3 point-count matrix for two coordinates.

Points of AG(n, 3) are indexed ``x1 + 3*x2 + 9*z``.  The caps in the
hyperplanes ``x1 = -1`` (the left column) and ``x2 = -1`` (the bottom row) are
taken from class representatives of dimension ``n - 1``, each placed so that a
chosen hyperplane direction with the right ordered counts becomes the other
coordinate.  The two hyperplanes share the codimension-2 flat
``(x1, x2) = (-1, -1)``; the left cap is moved onto the bottom cap there and
then composed with every symmetry of the shared cap.  A shear fixing the
bottom hyperplane pointwise absorbs the remaining freedom, so this covers
every configuration.  The four remaining flats are filled in the order
``(0,0), (1,0), (0,1), (1,1)`` using only points that are not midpoints of
known pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .canon import are_isomorphic, canonical_form, symmetry_group
from .caps import CapSet, is_cap
from .gf3 import AffineMap, rank, space
from .layers import caps_in


class BudgetExceeded(RuntimeError):
    pass


class InconsistentMatrix(ValueError):
    pass


Grid = tuple[tuple[int | None, int | None, int | None], ...]
FILL_ORDER = ((0, 0), (1, 0), (0, 1), (1, 1))


def _grid(matrix) -> Grid:
    g = tuple(tuple(None if v is None or v == "*" else int(v) for v in row) for row in matrix)
    if len(g) != 3 or any(len(r) != 3 for r in g):
        raise InconsistentMatrix("matrix must be 3x3")
    return g


def grid_images(grid: Grid):
    """The 72 rearrangements coming from affine changes of each coordinate and swapping them."""
    perms = list(itertools.permutations(range(3)))
    for g in (grid, tuple(zip(*grid))):
        for rp in perms:
            for cp in perms:
                yield tuple(tuple(g[rp[r]][cp[c]] for c in range(3)) for r in range(3))


def at(grid: Grid, x1: int, x2: int):
    """Entry at ``(x1, x2)`` with values in {-1, 0, 1}; rows run ``x2 = 1, 0, -1``."""
    return grid[1 - x2][x1 + 1]


@dataclass
class ThreeLayerTask:
    """``matrix`` in display layout (rows ``x2 = 1, 0, -1``, columns ``x1 = -1, 0, 1``);
    ``None`` or ``"*"`` leaves a count free.  ``classes`` maps sizes to class
    representatives of dimension ``n - 1``; ``left``/``bottom`` optionally
    restrict the candidates for the two hyperplanes."""

    matrix: Sequence[Sequence]
    classes: dict[int, list[CapSet]]
    left: list[CapSet] | None = None
    bottom: list[CapSet] | None = None
    node_limit: int = 2_000_000
    group_limit: int = 50_000
    grid: Grid = field(init=False)
    n: int = field(init=False)

    def __post_init__(self):
        self.grid = _grid(self.matrix)
        for row in self.grid:
            for v in row:
                if v is not None and v < 0:
                    raise InconsistentMatrix("negative count")
        dims = {S.n for caps in self.classes.values() for S in caps}
        if len(dims) > 1:
            raise ValueError("class representatives of mixed dimension")
        self.n = (dims.pop() if dims else 4) + 1
        for name, fixed in (("left", self.left), ("bottom", self.bottom)):
            if fixed is not None and any(S.n != self.n - 1 for S in fixed):
                raise ValueError(f"{name} candidates have the wrong dimension")


@dataclass
class ThreeLayerResult:
    caps: list[CapSet]  # canonical representatives, sorted by points
    grid: Grid  # the oriented matrix actually searched
    left_options: int = 0
    bottom_options: int = 0
    compatible_pairs: int = 0
    starts: int = 0
    nodes: int = 0


# --------------------------------------------------------------------------
# placing a layer so that a functional becomes the first coordinate


def _functionals(m: int):
    """Every nonconstant affine functional of AG(m, 3) as a value array over points."""
    vals = space(m).direction_values
    out = []
    for row in vals:
        for s in (1, 2):
            for c in range(3):
                out.append(((row * s + c) % 3).astype(np.int8))
    return out


def _placing_map(m: int, f: np.ndarray) -> np.ndarray:
    """A point permutation ``phi`` of AG(m, 3) with ``first_coord(phi(p)) = f(p)``."""
    sp = space(m)
    c = int(f[0])
    a = [int(f[sp.index([1 if j == i else 0 for j in range(m)])] - c) % 3 for i in range(m)]
    rows = [a]
    for i in range(m):
        e = [1 if j == i else 0 for j in range(m)]
        if rank(rows + [e]) == len(rows) + 1:
            rows.append(e)
        if len(rows) == m:
            break
    g = AffineMap(tuple(tuple(r) for r in rows), (c,) + (0,) * (m - 1))
    perm = g.permutation()
    assert all(sp.coords[int(perm[p])][0] == f[p] for p in range(sp.size))
    return perm


def _group_perms(S: CapSet, limit: int) -> list[np.ndarray]:
    """All symmetries of ``S`` as point permutations of its space."""
    G = symmetry_group(S, keep_elements=True)
    if G.order > limit:
        raise BudgetExceeded(f"symmetry group of order {G.order} exceeds {limit}")
    if G.elements is not None and len(G.elements) == G.order:
        return [a.permutation() for a in G.elements]
    size = space(S.n).size
    gens = [tuple(int(x) for x in a.permutation()) for a in G.generators]
    seen = {tuple(range(size))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    if len(seen) != G.order:
        raise AssertionError("group closure disagrees with the group order")
    return [np.array(p, dtype=np.int64) for p in sorted(seen)]


def layer_options(reps: list[CapSet], counts: tuple[int, int, int], limit: int) -> list[CapSet]:
    """Placements of each representative with first-coordinate counts ``counts``
    (at values -1, 0, 1), one per orbit of functionals under the cap's symmetries."""
    out = []
    for R in reps:
        m = R.n
        pts = np.array(R.points, dtype=np.int64)
        cands = []
        for f in _functionals(m):
            v = f[pts]
            got = (int((v == 2).sum()), int((v == 0).sum()), int((v == 1).sum()))
            if got == counts:
                cands.append(f)
        if not cands:
            continue
        perms = _group_perms(R, limit)
        seen = set()
        for f in cands:
            key = f.tobytes()
            if key in seen:
                continue
            for g in perms:
                h = np.empty_like(f)
                h[g] = f
                seen.add(h.tobytes())
            phi = _placing_map(m, f)
            out.append(CapSet.from_indices(m, (int(phi[p]) for p in R.points)))
    return out


# --------------------------------------------------------------------------
# the search


def _corner(L: CapSet) -> CapSet:
    return CapSet.from_indices(L.n - 1, (q // 3 for q in L.points if q % 3 == 2))


def _flat_points(n: int, x1: int, x2: int) -> list[int]:
    return [x1 % 3 + 3 * (x2 % 3) + 9 * z for z in range(3 ** (n - 2))]


def _blocked(third, pts: list[int]) -> int:
    b = 0
    for i, p in enumerate(pts):
        row = third[p]
        for q in pts[i + 1 :]:
            b |= 1 << row[q]
    return b


def _orient(grid: Grid) -> Grid:
    for g in grid_images(grid):
        if all(at(g, -1, j) is not None for j in (-1, 0, 1)) and all(
            at(g, i, -1) is not None for i in (-1, 0, 1)
        ):
            return g
    raise InconsistentMatrix("matrix needs one fully known row and one fully known column")


def scan_three_layer(task: ThreeLayerTask) -> ThreeLayerResult:
    n = task.n
    if n < 3:
        raise ValueError("three-layer search needs n >= 3")
    grid = _orient(task.grid)
    col = tuple(at(grid, -1, j) for j in (-1, 0, 1))
    row = tuple(at(grid, i, -1) for i in (-1, 0, 1))
    res = ThreeLayerResult([], grid)
    for counts, fixed in ((col, task.left), (row, task.bottom)):
        if fixed is None and sum(counts) > 0 and sum(counts) not in task.classes:
            raise InconsistentMatrix(f"no class list for {sum(counts)}-caps")
    lefts = layer_options(task.left if task.left is not None else task.classes.get(sum(col), []), col, task.group_limit)
    bottoms = layer_options(task.bottom if task.bottom is not None else task.classes.get(sum(row), []), row, task.group_limit)
    if sum(col) == 0:
        lefts = [CapSet.empty(n - 1)]
    if sum(row) == 0:
        bottoms = [CapSet.empty(n - 1)]
    res.left_options, res.bottom_options = len(lefts), len(bottoms)

    sp = space(n)
    third = sp.third_list
    starts: dict[int, None] = {}
    for B in bottoms:
        Bc = _corner(B)
        perms = None
        bpts = [q % 3 + 6 + 9 * (q // 3) for q in B.points]
        for L in lefts:
            Lc = _corner(L)
            if not L.size and not Bc.size:
                res.compatible_pairs += 1
                starts.setdefault(sum(1 << p for p in bpts))
                continue
            if perms is None:
                perms = _group_perms(Bc, task.group_limit)
            ok, psi = are_isomorphic(Lc, Bc)
            if not ok:
                continue
            res.compatible_pairs += 1
            psi_p = psi.permutation()
            for T in perms:
                img = [2 + 3 * ((q % 3) + 3 * int(T[psi_p[q // 3]])) for q in L.points]
                mask = 0
                for p in img + bpts:
                    mask |= 1 << p
                starts.setdefault(mask)
    res.starts = len(starts)

    wanted = [at(grid, i, j) for i, j in FILL_ORDER]
    flats = [_flat_points(n, i, j) for i, j in FILL_ORDER]
    found: dict[int, CapSet] = {}
    nodes = 0

    def fill(k: int, pts: list[int], blocked: int):
        nonlocal nodes
        nodes += 1
        if nodes > task.node_limit:
            raise BudgetExceeded(f"more than {task.node_limit} partial fills")
        if k == len(FILL_ORDER):
            found.setdefault(sum(1 << p for p in pts))
            return
        flat = flats[k]
        local = 0
        taken = set(pts)
        for z, p in enumerate(flat):
            if not (blocked >> p) & 1 and p not in taken:
                local |= 1 << z
        want = wanted[k]
        lo, hi = (0, None) if want is None else (want, want)
        for mid in caps_in(local, n - 2, lo, hi):
            new = [flat[z] for z in range(len(flat)) if (mid >> z) & 1]
            b = blocked
            for p in new:
                row_ = third[p]
                for q in pts:
                    b |= 1 << row_[q]
            b |= _blocked(third, new)
            fill(k + 1, pts + new, b)

    for mask in starts:
        S = CapSet(n, mask)
        if not is_cap(S):
            continue
        pts = list(S.points)
        fill(0, pts, _blocked(third, pts))
    res.nodes = nodes

    classes: dict[tuple, CapSet] = {}
    for mask in sorted(found):
        S = CapSet(n, mask)
        T = canonical_form(S).canonical
        classes.setdefault(T.points, T)
    res.caps = [classes[k] for k in sorted(classes)]
    return res
