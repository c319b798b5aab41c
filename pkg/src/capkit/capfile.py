"""Plain-text cap files.

::

    capv1 n=3
    # optional comments
    000
    100
    010

One point per line as ``n`` digits ``x_1 .. x_n`` (``2`` is -1), sorted by
point index ascending.
"""

from __future__ import annotations

from pathlib import Path

from .caps import CapSet, is_cap
from .gf3 import MAX_DIM, space


class CapFileError(ValueError):
    def __init__(self, msg: str, line: int | None = None, path: str | None = None):
        where = "" if line is None else f"line {line}: "
        if path:
            where = f"{path}: {where}"
        super().__init__(where + msg)
        self.line = line


def serialize(S: CapSet, comments: list[str] | None = None) -> str:
    sp = space(S.n)
    out = [f"capv1 n={S.n}"]
    for c in comments or ():
        out.append(f"# {c}")
    for p in S.points:
        out.append("".join(str(x) for x in sp.coords_of(p)))
    return "\n".join(out) + "\n"


def parse(text: str, allow_noncap: bool = False, path: str | None = None) -> CapSet:
    n = None
    idx: list[int] = []
    last = -1
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "capv1" or not parts[1].startswith("n="):
                raise CapFileError("expected header 'capv1 n=<dim>'", no, path)
            try:
                n = int(parts[1][2:])
            except ValueError:
                raise CapFileError("bad dimension in header", no, path) from None
            if not 1 <= n <= MAX_DIM:
                raise CapFileError(f"dimension {n} out of range", no, path)
            sp = space(n)
            continue
        if len(line) != n or any(ch not in "012" for ch in line):
            raise CapFileError(f"expected {n} digits from 0,1,2, got {line!r}", no, path)
        p = sp.index([int(ch) for ch in line])
        if p == last:
            raise CapFileError(f"duplicate point {line}", no, path)
        if p < last:
            raise CapFileError(f"points not in ascending order at {line}", no, path)
        last = p
        idx.append(p)
    if n is None:
        raise CapFileError("missing header", None, path)
    S = CapSet.from_indices(n, idx)
    if not allow_noncap and not is_cap(S):
        raise CapFileError("point set is not a cap (use allow_noncap to load it anyway)", None, path)
    return S


def read(path, allow_noncap: bool = False) -> CapSet:
    return parse(Path(path).read_text(), allow_noncap, str(path))


def write(path, S: CapSet, comments: list[str] | None = None) -> None:
    Path(path).write_text(serialize(S, comments))
