"""Standard diagrams: direction point counts as points (x, y) with a forced centroid.

A direction with point count ``{a, b, c}`` contributes the point
``x = C(a,2)+C(b,2)+C(c,2)``, ``y = C(a,3)+C(b,3)+C(c,3)``.  Each pair of cap
points shares a hyperplane in ``(3^(n-1)-1)/2`` directions and each cap triple
in ``(3^(n-2)-1)/2``, so the average point over all ``D_n = (3^n-1)/2``
directions depends only on ``n`` and ``s``.  If every admissible point lies on
or above a line and the centroid lies strictly below it, no cap exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .layers import MAXCAP

Triple = tuple[int, int, int]


class BudgetExceeded(RuntimeError):
    pass


def _triple(t: Sequence[int]) -> Triple:
    t = tuple(sorted((int(v) for v in t), reverse=True))
    if len(t) != 3 or t[-1] < 0:
        raise ValueError(f"bad point-count triple {t}")
    return t


def diagram_xy(triple: Sequence[int]) -> tuple[int, int]:
    return sum(math.comb(v, 2) for v in triple), sum(math.comb(v, 3) for v in triple)


@dataclass(frozen=True)
class DiagramLine:
    """The line ``alpha * y = beta * x + gamma`` with integer (or rational) coefficients."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("vertical lines are not supported")
        for f in ("alpha", "beta", "gamma"):
            object.__setattr__(self, f, Fraction(getattr(self, f)))

    @classmethod
    def parse(cls, text: str) -> "DiagramLine":
        a, b, c = (Fraction(v.strip()) for v in text.split(","))
        return cls(a, b, c)

    @classmethod
    def through(cls, p: tuple, q: tuple) -> "DiagramLine":
        (x1, y1), (x2, y2) = p, q
        if x1 == x2:
            raise ValueError("points share an x coordinate")
        # (x2 - x1) y = (y2 - y1) x + (y1 x2 - y2 x1)
        return cls(Fraction(x2) - x1, Fraction(y2) - y1, Fraction(y1) * x2 - Fraction(y2) * x1)

    @property
    def slope(self) -> Fraction:
        return self.beta / self.alpha

    @property
    def intercept(self) -> Fraction:
        return self.gamma / self.alpha

    def d(self, x, y) -> Fraction:
        """Signed vertical distance of (x, y) above the line."""
        return Fraction(y) - self.slope * x - self.intercept

    def __str__(self) -> str:
        def f(v):
            return str(v.numerator) if v.denominator == 1 else str(v)

        sign = "-" if self.gamma < 0 else "+"
        return f"{f(self.alpha)}y = {f(self.beta)}x {sign} {f(abs(self.gamma))}"


@dataclass(frozen=True)
class DiagramPoint:
    triple: Triple
    x: int
    y: int
    d: Fraction | None = None


def diagram_point(triple: Sequence[int], line: DiagramLine | None = None) -> DiagramPoint:
    t = _triple(triple)
    x, y = diagram_xy(t)
    return DiagramPoint(t, x, y, line.d(x, y) if line else None)


def directions_count(n: int) -> int:
    return (3**n - 1) // 2


def centroid_sums(n: int, s: int) -> tuple[int, int]:
    """Sums of x and y over all directions (integers)."""
    if n < 2:
        raise ValueError("centroid needs n >= 2")
    return math.comb(s, 2) * (3 ** (n - 1) - 1) // 2, math.comb(s, 3) * (3 ** (n - 2) - 1) // 2


def centroid(n: int, s: int) -> tuple[Fraction, Fraction]:
    X, Y = centroid_sums(n, s)
    D = directions_count(n)
    return Fraction(X, D), Fraction(Y, D)


def allowed_triples(n: int, s: int, forbidden: Iterable[Sequence[int]] = (), maxcap: dict | None = None) -> list[Triple]:
    top = (maxcap or MAXCAP)[n - 1]
    bad = {_triple(t) for t in forbidden}
    out = []
    for a in range(min(top, s), -1, -1):
        for b in range(min(a, s - a), -1, -1):
            c = s - a - b
            if 0 <= c <= b and (a, b, c) not in bad:
                out.append((a, b, c))
    return out


@dataclass
class DiagramSpec:
    n: int
    s: int
    forbidden: tuple[Triple, ...] = ()
    line: DiagramLine | None = None
    maxcap: dict | None = None
    allowed: list[Triple] = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("diagrams need n >= 2")
        self.forbidden = tuple(_triple(t) for t in self.forbidden)
        self.allowed = allowed_triples(self.n, self.s, self.forbidden, self.maxcap)

    @property
    def centroid(self) -> tuple[Fraction, Fraction]:
        return centroid(self.n, self.s)

    @property
    def points(self) -> list[DiagramPoint]:
        return [diagram_point(t, self.line) for t in self.allowed]


@dataclass(frozen=True)
class Certificate:
    n: int
    s: int
    line: DiagramLine
    centroid: tuple[Fraction, Fraction]
    centroid_d: Fraction
    min_point_d: Fraction

    def __str__(self) -> str:
        cx, cy = self.centroid
        return (
            f"INFEASIBLE n={self.n} s={self.s}: all allowed points have d >= {self.min_point_d} "
            f"above {self.line}; centroid ({cx}, {cy}) has d = {self.centroid_d} < 0"
        )


def infeasible_by_line(spec: DiagramSpec, line: DiagramLine | None = None) -> Certificate | str:
    line = line or spec.line
    if line is None:
        raise ValueError("no line given")
    if not spec.allowed:
        raise ValueError("spec has no allowed triples")
    ds = [diagram_point(t, line).d for t in spec.allowed]
    cx, cy = spec.centroid
    cd = line.d(cx, cy)
    if min(ds) >= 0 and cd < 0:
        return Certificate(spec.n, spec.s, line, (cx, cy), cd, min(ds))
    return "inconclusive"


# --------------------------------------------------------------------------
# exact direction-count distributions


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_hull(points: list[tuple[int, int]], r: int, X: int, Y: int) -> bool:
    """Whether (X/r, Y/r) lies in the convex hull of ``points`` (exact)."""
    h = _hull(points)
    if not h:
        return False
    scaled = [(px * r, py * r) for px, py in h]
    t = (X, Y)
    if len(scaled) == 1:
        return scaled[0] == t
    if len(scaled) == 2:
        a, b = scaled
        if _cross(a, b, t) != 0:
            return False
        return min(a[0], b[0]) <= X <= max(a[0], b[0]) and min(a[1], b[1]) <= Y <= max(a[1], b[1])
    for i in range(len(scaled)):
        if _cross(scaled[i], scaled[(i + 1) % len(scaled)], t) < 0:
            return False
    return True


def solve_distribution(spec: DiagramSpec, budget: int = 10**6) -> list[dict[Triple, int]]:
    """Every assignment of direction counts k_t >= 0 to allowed triples meeting the three sums."""
    D = directions_count(spec.n)
    X, Y = centroid_sums(spec.n, spec.s)
    trip = list(spec.allowed)
    xy = [diagram_xy(t) for t in trip]
    N = len(trip)
    suffix = [xy[i:] for i in range(N + 1)]
    out: list[dict[Triple, int]] = []
    nodes = 0
    ks = [0] * N

    def rec(i, r, x, y):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"more than {budget} search nodes")
        if r == 0:
            if x == 0 and y == 0:
                out.append({trip[j]: ks[j] for j in range(i) if ks[j]})
            return
        if i == N or not _in_hull(suffix[i], r, x, y):
            return
        xi, yi = xy[i]
        if i == N - 1:
            if r * xi == x and r * yi == y:
                ks[i] = r
                out.append({trip[j]: ks[j] for j in range(N) if ks[j]})
                ks[i] = 0
            return
        for k in range(r, -1, -1):
            if k * xi > x or k * yi > y:
                continue
            ks[i] = k
            rec(i + 1, r - k, x - k * xi, y - k * yi)
        ks[i] = 0

    rec(0, D, X, Y)
    out.sort(key=lambda d: sorted(d.items(), reverse=True), reverse=True)
    return out


# --------------------------------------------------------------------------
# output


def _fmt(v) -> str:
    if v is None:
        return "NA"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def render(spec: DiagramSpec, out_dir: str | Path, stem: str | None = None) -> tuple[Path, Path]:
    """Write ``<stem>.tsv`` and ``<stem>.svg`` for the diagram; returns both paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or f"diagram_n{spec.n}_s{spec.s}"
    tsv = out_dir / f"{stem}.tsv"
    svg = out_dir / f"{stem}.svg"
    pts = spec.points
    with open(tsv, "w", newline="\n") as fh:
        fh.write("a\tb\tc\tx\ty\td\n")
        for p in pts:
            a, b, c = p.triple
            fh.write(f"{a}\t{b}\t{c}\t{p.x}\t{p.y}\t{_fmt(p.d)}\n")

    fig, ax = plt.subplots(figsize=(6, 4.5))
    if pts:
        ax.scatter([p.x for p in pts], [p.y for p in pts], s=10, color="k")
    cx, cy = spec.centroid
    ax.plot([float(cx)], [float(cy)], marker="+", markersize=12, color="r", linestyle="none")
    if spec.line is not None and pts:
        xs = [min(min(p.x for p in pts), float(cx)), max(max(p.x for p in pts), float(cx))]
        ys = [float(spec.line.slope * Fraction(x) + spec.line.intercept) for x in xs]
        ax.plot(xs, ys, color="b", linewidth=1)
        ax.set_title(f"n={spec.n}, s={spec.s}; L: {spec.line}", fontsize=9)
    else:
        ax.set_title(f"n={spec.n}, s={spec.s}", fontsize=9)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(svg, format="svg")
    plt.close(fig)
    return tsv, svg
