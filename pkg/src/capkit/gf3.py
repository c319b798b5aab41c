"""Affine geometry AG(n, 3): points, lines, hyperplane directions, affine maps.

Points are stored as integers ``index = sum(coords[i] * 3**i)`` (coordinate 0 is
least significant).  Field element 2 stands for the coordinate value -1.

Over GF(3) the midpoint of two points and the third point of the line through
them coincide: both equal ``-(p + q)``.  :func:`third_point` is the single
implementation of that operation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

MAX_DIM = 6


def _check_dim(n: int, hi: int = MAX_DIM) -> None:
    if not 1 <= n <= hi:
        raise ValueError(f"dimension {n} out of range 1..{hi}")


class Space:
    """Lookup tables for AG(n, 3); obtain instances through :func:`space`."""

    def __init__(self, n: int):
        self.n = n
        self.size = 3**n
        self.powers = tuple(3**i for i in range(n))
        coords = np.array(
            [[(i // 3**k) % 3 for k in range(n)] for i in range(self.size)],
            dtype=np.int64,
        ).reshape(self.size, n)
        self.coords = coords
        pw = np.array(self.powers, dtype=np.int64)
        self.add = ((coords[:, None, :] + coords[None, :, :]) % 3) @ pw
        self.neg = ((-coords) % 3) @ pw
        # third[p, q] = -(p + q): the third point on the line through p and q
        self.third = self.neg[self.add]
        self.sub = self.add[:, self.neg]
        self.add_list = self.add.tolist()
        self.neg_list = self.neg.tolist()
        self.third_list = self.third.tolist()
        self.full_mask = (1 << self.size) - 1

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        return sum((int(c) % 3) * p for c, p in zip(coords, self.powers))

    def coords_of(self, index: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords[index])

    def scale(self, c: int, v: int) -> int:
        c %= 3
        if c == 0:
            return 0
        return v if c == 1 else self.neg_list[v]

    def combine(self, coeffs: Sequence[int], vectors: Sequence[int]) -> int:
        out = 0
        for c, v in zip(coeffs, vectors):
            if c % 3:
                out = self.add_list[out][self.scale(c, v)]
        return out

    def span_mask(self, vectors: Sequence[int]) -> int:
        """Bit mask of the linear span of ``vectors`` (always contains 0)."""
        pts = {0}
        for v in vectors:
            nv = self.neg_list[v]
            pts |= {self.add_list[p][v] for p in pts} | {self.add_list[p][nv] for p in pts}
        m = 0
        for p in pts:
            m |= 1 << p
        return m

    @property
    def directions(self) -> list["Direction"]:
        return enumerate_directions(self.n)

    @property
    def direction_values(self) -> np.ndarray:
        """Array ``(num_directions, 3**n)`` of ``w . x mod 3``."""
        return _direction_values(self.n)


@lru_cache(maxsize=None)
def space(n: int) -> Space:
    _check_dim(n)
    return Space(n)


@dataclass(frozen=True)
class Point:
    n: int
    index: int

    def __post_init__(self):
        _check_dim(self.n)
        if not 0 <= self.index < 3**self.n:
            raise ValueError(f"index {self.index} outside AG({self.n},3)")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "Point":
        n = len(coords)
        return cls(n, space(n).index(coords))

    @property
    def coords(self) -> tuple[int, ...]:
        return space(self.n).coords_of(self.index)

    def __add__(self, other: "Point") -> "Point":
        _same_dim(self, other)
        return Point(self.n, int(space(self.n).add[self.index, other.index]))

    def __neg__(self) -> "Point":
        return Point(self.n, int(space(self.n).neg[self.index]))

    def __sub__(self, other: "Point") -> "Point":
        return self + (-other)

    def __repr__(self) -> str:
        return "Point(" + "".join(map(str, self.coords)) + ")"


def _same_dim(p: Point, q: Point) -> None:
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: {p.n} vs {q.n}")


def third_point(p: Point, q: Point) -> Point:
    """Third point of the line through ``p`` and ``q`` (also their midpoint)."""
    _same_dim(p, q)
    if p.index == q.index:
        raise ValueError("degenerate segment")
    return Point(p.n, space(p.n).third_list[p.index][q.index])


@dataclass(frozen=True)
class Line:
    n: int
    points: frozenset[int]

    def __post_init__(self):
        pts = sorted(self.points)
        if len(pts) != 3:
            raise ValueError("a line has three distinct points")
        if space(self.n).third_list[pts[0]][pts[1]] != pts[2]:
            raise ValueError("points are not collinear")


@lru_cache(maxsize=None)
def _lines(n: int) -> tuple[tuple[int, int, int], ...]:
    sp = space(n)
    out = []
    for p in range(sp.size):
        row = sp.third_list[p]
        for q in range(p + 1, sp.size):
            r = row[q]
            if r > q:
                out.append((p, q, r))
    return tuple(out)


def enumerate_lines(n: int) -> list[Line]:
    _check_dim(n)
    return [Line(n, frozenset(t)) for t in _lines(n)]


@dataclass(frozen=True)
class Direction:
    """A parallel class of hyperplanes ``{x : covector . x = t}``."""

    covector: tuple[int, ...]

    def __post_init__(self):
        nz = [c for c in self.covector if c % 3]
        if not nz:
            raise ValueError("zero covector")
        if nz[0] % 3 != 1:
            raise ValueError("covector not normalized (first nonzero entry must be 1)")

    @classmethod
    def normalized(cls, covector: Sequence[int]) -> "Direction":
        cv = [int(c) % 3 for c in covector]
        lead = next((c for c in cv if c), 0)
        if lead == 0:
            raise ValueError("zero covector")
        if lead == 2:
            cv = [(-c) % 3 for c in cv]
        return cls(tuple(cv))

    @property
    def n(self) -> int:
        return len(self.covector)

    def value(self, index: int) -> int:
        c = space(self.n).coords[index]
        return int(np.dot(c, self.covector) % 3)

    def hyperplane(self, t: int) -> list[int]:
        return [i for i in range(3**self.n) if self.value(i) == t % 3]


@lru_cache(maxsize=None)
def _directions(n: int) -> tuple[Direction, ...]:
    out = []
    for idx in range(1, 3**n):
        cv = [(idx // 3**k) % 3 for k in range(n)]
        # lexicographic order on the covector tuple
        if next(c for c in cv if c) == 1:
            out.append(tuple(cv))
    return tuple(Direction(c) for c in sorted(out))


def enumerate_directions(n: int) -> list[Direction]:
    _check_dim(n)
    return list(_directions(n))


@lru_cache(maxsize=None)
def _direction_values(n: int) -> np.ndarray:
    sp = space(n)
    cov = np.array([d.covector for d in _directions(n)], dtype=np.int64)
    vals = (cov @ sp.coords.T) % 3
    vals.flags.writeable = False
    return vals


# --------------------------------------------------------------------------
# matrices over GF(3)

Matrix = tuple[tuple[int, ...], ...]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) % 3 for j in range(m)) for i in range(n)
    )


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(r * x for r, x in zip(row, v)) % 3 for row in a)


def mat_inv(a: Matrix) -> Matrix:
    """Inverse over GF(3) by Gauss-Jordan; raises ``ValueError`` if singular."""
    n = len(a)
    m = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] % 3), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 if m[col][col] % 3 == 1 else 2
        m[col] = [(x * inv) % 3 for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] % 3:
                f = m[r][col]
                m[r] = [(x - f * y) % 3 for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def rank(rows: Sequence[Sequence[int]]) -> int:
    m = [list(int(x) % 3 for x in r) for r in rows]
    if not m:
        return 0
    rk, ncol = 0, len(m[0])
    for col in range(ncol):
        piv = next((r for r in range(rk, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 if m[rk][col] == 1 else 2
        m[rk] = [(x * inv) % 3 for x in m[rk]]
        for r in range(len(m)):
            if r != rk and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % 3 for x, y in zip(m[r], m[rk])]
        rk += 1
    return rk


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + translation`` over GF(3); the matrix must be invertible."""

    matrix: Matrix
    translation: tuple[int, ...]

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(r) != n for r in self.matrix) or len(self.translation) != n:
            raise ValueError("shape mismatch")
        object.__setattr__(self, "matrix", tuple(tuple(int(x) % 3 for x in r) for r in self.matrix))
        object.__setattr__(self, "translation", tuple(int(x) % 3 for x in self.translation))
        if rank(self.matrix) != n:
            raise ValueError("singular matrix")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls(identity(n), (0,) * n)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[int]]) -> "AffineMap":
        m = tuple(tuple(r) for r in matrix)
        return cls(m, (0,) * len(m))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], translation: Sequence[int]) -> "AffineMap":
        n = len(columns)
        return cls(tuple(tuple(columns[j][i] for j in range(n)) for i in range(n)), tuple(translation))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((a + b) % 3 for a, b in zip(mat_vec(self.matrix, x), self.translation))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        m = mat_mul(self.matrix, other.matrix)
        t = self(other.translation)
        return AffineMap(m, t)

    def inverse(self) -> "AffineMap":
        mi = mat_inv(self.matrix)
        t = mat_vec(mi, [(-x) % 3 for x in self.translation])
        return AffineMap(mi, t)

    def permutation(self) -> np.ndarray:
        """Image index of every point of AG(n, 3)."""
        sp = space(self.n)
        m = np.array(self.matrix, dtype=np.int64)
        img = (sp.coords @ m.T + np.array(self.translation, dtype=np.int64)) % 3
        return img @ np.array(sp.powers, dtype=np.int64)

    def apply_index(self, index: int) -> int:
        sp = space(self.n)
        return sp.index(self(sp.coords_of(index)))


def agl_order(n: int) -> int:
    return 3**n * gl_order(n)


def gl_order(n: int) -> int:
    out = 1
    for i in range(n):
        out *= 3**n - 3**i
    return out


def enumerate_linear_maps(n: int) -> Iterator[AffineMap]:
    """Every invertible n x n matrix over GF(3), columns chosen in index order."""
    _check_dim(n)
    sp = space(n)

    def rec(cols: list[int], span: int) -> Iterator[list[int]]:
        if len(cols) == n:
            yield cols
            return
        for v in range(1, sp.size):
            if not (span >> v) & 1:
                yield from rec(cols + [v], sp.span_mask(cols + [v]))

    zero = (0,) * n
    for cols in rec([], 1):
        yield AffineMap.from_columns([sp.coords_of(c) for c in cols], zero)


def linear_map_columns(n: int) -> Iterator[tuple[int, ...]]:
    """Like :func:`enumerate_linear_maps` but yields column index tuples (fast path)."""
    sp = space(n)

    def rec(cols: tuple[int, ...], span: int) -> Iterator[tuple[int, ...]]:
        if len(cols) == n:
            yield cols
            return
        for v in range(1, sp.size):
            if not (span >> v) & 1:
                nxt = cols + (v,)
                yield from rec(nxt, sp.span_mask(nxt))

    yield from rec((), 1)


def random_affine_map(n: int, rng) -> AffineMap:
    """Uniform element of AGL(n, 3) drawn with ``rng`` (a ``random.Random``)."""
    while True:
        m = tuple(tuple(rng.randrange(3) for _ in range(n)) for _ in range(n))
        if rank(m) == n:
            return AffineMap(m, tuple(rng.randrange(3) for _ in range(n)))


def points_iter(n: int) -> Iterator[tuple[int, ...]]:
    for t in itertools.product(range(3), repeat=n):
        yield tuple(reversed(t))
