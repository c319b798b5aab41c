"""Two-layer scans: maximize the middle layer over all embeddings of a right cap.

For an n-dimensional configuration the left cap ``A`` sits in ``x_1 = -1``,
an image ``g(B0)`` of the right representative in ``x_1 = 1``, and the scan
asks for the largest cap among middle points that are not midpoints of an
(a, b) segment.  Results are weighted by the number of linear maps of the
right layer they stand for, so tallies count linear maps ``T`` exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .caps import CapSet, bits, is_cap, stack
from .gf3 import space
from .layers import Embedder, caps_in, max_cap, max_middle, normalize_translation

MODES = ("symmetry", "none")


class BudgetExceeded(RuntimeError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


@dataclass
class ScanTask:
    left: CapSet
    right: CapSet
    tallies: tuple[int, ...] = ()
    mode: str = "symmetry"  # "symmetry": left-orbit reduction plus bound pruning
    witness_limit: int = 4096
    probe: int = 7
    chunks: int = 32
    engine: str = "auto"  # auto | python | compiled
    label: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown pruning mode {self.mode!r}")
        if self.left.n != self.right.n:
            raise ValueError("dimension mismatch")
        if not (is_cap(self.left) and is_cap(self.right)):
            raise ValueError("scan layers must be caps")


@dataclass
class ScanResult:
    max_middle: int
    left_size: int
    right_size: int
    tallies: dict[int, int]
    histogram: dict[int, int]  # weighted counts, exact for values >= exact_from
    exact_from: int
    records: list[tuple[tuple[int, ...], int, int]]  # (images, right mask, value)
    records_complete: bool
    probe_weight: int
    probe_violations: int
    leaves: int
    m: int
    left: CapSet = field(repr=False, default=None)
    right0: CapSet = field(repr=False, default=None)

    @property
    def total(self) -> int:
        return self.left_size + self.right_size + self.max_middle

    @property
    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.max_middle, sorted(self.tallies.items()))).encode())
        h.update(repr(sorted((v, w) for v, w in self.histogram.items() if v >= self.exact_from)).encode())
        return h.hexdigest()[:16]

    def witnesses(self, min_value: int | None = None, limit: int | None = None) -> list[CapSet]:
        """Full caps built from recorded embeddings with every maximum middle cap.

        Right layers are moved to their smallest translate, so identical
        configurations coincide as masks.
        """
        lo = self.max_middle if min_value is None else min_value
        out = {}
        for images, right, value in self.records:
            if value < lo:
                continue
            excl = _exclusion(self.left, right, self.m)
            allowed = space(self.m).full_mask & ~excl
            size, mids = max_cap(allowed, self.m, all_witnesses=True)
            for mid in mids:
                r, mm = normalize_translation(right, mid, self.m)
                S = stack(self.left, CapSet(self.m, mm), CapSet(self.m, r))
                out.setdefault(S.mask, S)
                if limit and len(out) >= limit:
                    return [out[k] for k in sorted(out)]
        return [out[k] for k in sorted(out)]


def _exclusion(A: CapSet, right_mask: int, m: int) -> int:
    third = space(m).third_list
    e = 0
    for b in bits(right_mask):
        row = third[b]
        for a in A.points:
            e |= 1 << row[a]
    return e


def _split(mask: int) -> tuple[int, int]:
    return mask & ((1 << 64) - 1), mask >> 64


def _threads(threads: int | None) -> int:
    if threads:
        return max(1, int(threads))
    return max(1, int(os.environ.get("CAPKIT_THREADS", "1")))


@dataclass
class _Prepared:
    emb: Embedder
    prefixes: np.ndarray
    pre_lo: np.ndarray
    pre_hi: np.ndarray
    pre_vs: list
    coef3: np.ndarray
    coef4: np.ndarray
    na_lo: np.ndarray
    na_hi: np.ndarray


def _prepare(task: ScanTask) -> _Prepared:
    emb = Embedder(task.left, task.right, threshold=0, reduce_left=task.mode == "symmetry")
    k = emb.k
    depth = min(2, k)
    rows, lo, hi, vs = [], [], [], []
    for e in emb.walk(depth):
        v = list(e.images) + [0] * (2 - len(e.images))
        rows.append((v[0], v[1], e.weight))
        a, b = _split(e.excluded)
        lo.append(a)
        hi.append(b)
        vs.append(e.images)
    c3 = [c[:3] for c, lv in zip(emb.coeffs, emb.level) if lv == 3]
    c4 = [c[:4] for c, lv in zip(emb.coeffs, emb.level) if lv == 4]
    na = emb.na
    return _Prepared(
        emb,
        np.array(rows, dtype=np.int64).reshape(-1, 3),
        np.array(lo, dtype=np.uint64),
        np.array(hi, dtype=np.uint64),
        vs,
        np.array(c3, dtype=np.int64).reshape(-1, 3),
        np.array(c4, dtype=np.int64).reshape(-1, 4),
        np.array([_split(x)[0] for x in na], dtype=np.uint64),
        np.array([_split(x)[1] for x in na], dtype=np.uint64),
    )


def _right_mask(emb: Embedder, images: tuple[int, ...]) -> int:
    sp = emb.sp
    add, neg = sp.add_list, sp.neg_list
    r = 0
    for c in emb.coeffs:
        out = 0
        for ci, v in zip(c, images):
            if ci == 1:
                out = add[out][v]
            elif ci == 2:
                out = add[out][neg[v]]
        r |= 1 << out
    return r


def _floor(task: ScanTask) -> int:
    vals = list(task.tallies) + [task.probe]
    return min(vals)


def _keep_min(task: ScanTask) -> int:
    return min(task.tallies) if task.tallies else 1 << 30


def _run_chunk(prep: _Prepared, task: ScanTask, lo: int, hi: int, start_best: int):
    from .kernels import scan_levels

    sp = prep.emb.sp
    hist = np.zeros(sp.size + 1, dtype=np.int64)
    wit = np.zeros((task.witness_limit, 4), dtype=np.int64)
    state = np.zeros(7, dtype=np.int64)
    state[0] = start_best
    scan_levels(
        prep.prefixes[lo:hi],
        prep.pre_lo[lo:hi],
        prep.pre_hi[lo:hi],
        prep.coef3,
        prep.coef4,
        prep.emb.k,
        sp.size,
        sp.add,
        sp.neg,
        sp.third,
        prep.na_lo,
        prep.na_hi,
        _floor(task),
        _keep_min(task),
        task.probe,
        hist,
        wit,
        state,
    )
    if state[4]:
        raise BudgetExceeded("witness buffer too small for deferred leaves")
    recs = [(int(r[0]) + lo, int(r[1]), int(r[2]), int(r[3])) for r in wit[: state[1]]]
    return {
        "lo": lo,
        "hi": hi,
        "best": int(state[0]),
        "hist": {int(v): int(c) for v, c in enumerate(hist) if c},
        "records": recs,
        "dropped": int(state[2]),
        "leaves": int(state[3]),
        "probe": [int(state[5]), int(state[6])],
    }


def _load_log(path: Path) -> dict[int, dict]:
    done = {}
    if path and path.exists():
        for line in path.read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                rec["hist"] = {int(k): v for k, v in rec["hist"].items()}
                rec["records"] = [tuple(r) for r in rec["records"]]
                done[rec["lo"]] = rec
    return done


def _append_log(path: Path, rec: dict, wall: float) -> None:
    out = dict(rec)
    out["wall"] = round(wall, 3)
    with open(path, "a") as fh:
        fh.write(json.dumps(out) + "\n")


def scan_pair(
    task: ScanTask,
    checkpoint: str | Path | None = None,
    time_limit: float | None = None,
    threads: int | None = None,
    chunk_limit: int | None = None,
) -> ScanResult:
    """Maximum middle layer over all embeddings of ``task.right`` against ``task.left``.

    With ``checkpoint``, finished chunks are appended to a log and skipped on
    the next call.  ``time_limit`` and ``chunk_limit`` raise
    :class:`BudgetExceeded` carrying the partial result.
    """
    m = task.left.n
    engine = task.engine
    if engine == "auto":
        engine = "compiled" if m <= 4 and task.right.size else "python"
    if engine == "python":
        return _scan_python(task)
    prep = _prepare(task)
    if prep.emb.k < 2:
        return _scan_python(task)
    P = len(prep.prefixes)
    nch = max(1, min(task.chunks, P))
    bounds = [(P * i // nch, P * (i + 1) // nch) for i in range(nch)]
    log = Path(checkpoint) if checkpoint else None
    done = _load_log(log) if log else {}
    t0 = time.time()
    best = max([r["best"] for r in done.values()], default=0)
    todo = [b for b in bounds if b[0] not in done]
    cut = chunk_limit is not None and len(todo) > chunk_limit
    if cut:
        todo = todo[:chunk_limit]
    nthreads = _threads(threads)

    def run(b):
        return _run_chunk(prep, task, b[0], b[1], best)

    results = dict(done)
    if nthreads == 1:
        for b in todo:
            rec = run(b)
            best = max(best, rec["best"])
            results[b[0]] = rec
            if log:
                _append_log(log, rec, time.time() - t0)
            if time_limit and time.time() - t0 > time_limit and b != todo[-1]:
                raise BudgetExceeded("scan time limit reached", _merge(task, prep, results, m, partial=True))
    else:
        with ThreadPoolExecutor(nthreads) as ex:
            for b, rec in zip(todo, ex.map(run, todo)):
                results[b[0]] = rec
                if log:
                    _append_log(log, rec, time.time() - t0)
    if cut:
        raise BudgetExceeded("scan chunk limit reached", _merge(task, prep, results, m, partial=True))
    return _merge(task, prep, results, m)


def _merge(task: ScanTask, prep: _Prepared, results: dict, m: int, partial: bool = False) -> ScanResult:
    best = max((r["best"] for r in results.values()), default=0)
    hist: dict[int, int] = {}
    for r in results.values():
        for v, c in r["hist"].items():
            hist[v] = hist.get(v, 0) + c
    floor = _floor(task)
    exact_from = min(floor, best)
    hist = {v: c for v, c in sorted(hist.items()) if v >= exact_from}
    cut = min(_keep_min(task), best)
    recs = []
    dropped = 0
    for lo in sorted(results):
        r = results[lo]
        dropped += r["dropped"]
        for pi, v3, v4, value in r["records"]:
            if value < 0:
                raise BudgetExceeded("allowed set too large for the compiled search")
            if value >= cut:
                images = tuple(prep.pre_vs[pi]) + ((v3,) if prep.emb.k >= 3 else ()) + ((v4,) if prep.emb.k >= 4 else ())
                recs.append((images, _right_mask(prep.emb, images), value))
    recs.sort()
    tallies = {k: sum(c for v, c in hist.items() if v >= k) for k in task.tallies}
    probe_w = sum(r["probe"][0] for r in results.values())
    probe_v = sum(r["probe"][1] for r in results.values())
    res = ScanResult(
        best,
        task.left.size,
        task.right.size,
        tallies,
        hist,
        exact_from,
        recs,
        dropped == 0 and not partial,
        probe_w,
        probe_v,
        sum(r["leaves"] for r in results.values()),
        m,
        task.left,
        task.right,
    )
    return res


def _scan_python(task: ScanTask) -> ScanResult:
    """Reference implementation: plain embedding walk and branch-and-bound per leaf."""
    m = task.left.n
    floor = _floor(task)
    keep = _keep_min(task)
    emb = Embedder(task.left, task.right, threshold=0, reduce_left=task.mode == "symmetry")
    hist: dict[int, int] = {}
    best = 0
    recs = []
    probe_w = probe_v = 0
    leaves = 0
    for e in emb:
        allowed = e.allowed(m)
        L = allowed.bit_count()
        if L < min(floor, best):
            continue
        leaves += 1
        value = max_middle(allowed, m)[0]
        if L >= task.probe:
            probe_w += e.weight
            if L != 9 or value != 9:
                probe_v += e.weight
        hist[value] = hist.get(value, 0) + e.weight
        best = max(best, value)
        recs.append((e.images, e.right, value))
    exact_from = min(floor, best)
    hist = {v: c for v, c in sorted(hist.items()) if v >= exact_from}
    cut = min(keep, best)
    recs = sorted(r for r in recs if r[2] >= cut)
    tallies = {k: sum(c for v, c in hist.items() if v >= k) for k in task.tallies}
    return ScanResult(
        best, task.left.size, task.right.size, tallies, hist, exact_from, recs, True,
        probe_w, probe_v, leaves, m, task.left, task.right,
    )


def table_cell(A: CapSet, B: CapSet, **kw) -> int:
    """Maximum middle layer for the class pair; the larger symmetry group goes left."""
    from .canon import symmetry_group

    if symmetry_group(B).order > symmetry_group(A).order:
        A, B = B, A
    return scan_pair(ScanTask(A, B, **kw)).max_middle


def layered_caps(
    left: CapSet,
    right: CapSet,
    min_total: int,
    max_total: int | None = None,
    complete: bool | None = None,
) -> tuple[list[CapSet], ScanResult]:
    """All caps, up to translation of the right layer, with the given outer layers.

    Every middle subcap of the allowed set reaching ``min_total`` is listed
    (not only maximum ones); the result is deduplicated by mask only.
    """
    from .caps import is_complete

    need = max(0, min_total - left.size - right.size)
    res = scan_pair(ScanTask(left, right, tallies=(need,), witness_limit=1 << 16))
    if not res.records_complete:
        raise BudgetExceeded("witness buffer overflow")
    m = res.m
    top = None if max_total is None else max_total - left.size - right.size
    out = {}
    for images, rmask, value in res.records:
        if value < need:
            continue
        allowed = space(m).full_mask & ~_exclusion(left, rmask, m)
        for mid in caps_in(allowed, m, need, top):
            r, mm = normalize_translation(rmask, mid, m)
            S = stack(left, CapSet(m, mm), CapSet(m, r))
            if S.mask in out:
                continue
            if complete is not None and is_complete(S) != complete:
                continue
            out[S.mask] = S
    return [out[k] for k in sorted(out)], res


def linear_maps_reaching(res: ScanResult, min_value: int) -> set[tuple[int, ...]]:
    """Every linear part (as frame images) whose allowed middle reaches ``min_value``.

    Records hold one representative per orbit of the left cap's linear
    symmetries; this expands them back to the full set.
    """
    from .canon import linear_parts, symmetry_group

    if min_value < min(res.tallies or [min_value]) or not res.records_complete:
        raise ValueError("records do not cover this threshold")
    G = symmetry_group(res.left, keep_elements=True)
    group = linear_parts(G) if G.elements is not None and len(G.elements) == G.order else None
    if group is None:
        raise BudgetExceeded("left symmetry group not available elementwise")
    out = set()
    for images, _, value in res.records:
        if value >= min_value:
            for g in group:
                out.add(tuple(int(g[v]) for v in images))
    return out


def right_classes(res: ScanResult, maps: set[tuple[int, ...]]) -> list[int]:
    """Sizes of the classes of ``maps`` under composition with the right cap's
    linear symmetries (``T1 ~ T2`` iff ``T1^-1 T2`` is one)."""
    from .canon import linear_parts, symmetry_group

    emb = Embedder(res.left, res.right0, reduce_left=False)
    sp = emb.sp
    k = emb.k
    diffs = [int(sp.sub[b][emb.frame[0]]) for b in emb.frame[1:]]
    coeff = {}
    for c in np.ndindex(*(3,) * k):
        coeff[sp.combine(c, diffs)] = c
    G = symmetry_group(res.right0, keep_elements=True)
    if G.elements is None or len(G.elements) != G.order:
        raise BudgetExceeded("right symmetry group not available elementwise")
    hs = [[coeff[int(h[d])] for d in diffs] for h in linear_parts(G)]
    left = set(maps)
    sizes = []
    while left:
        T = min(left)
        orbit = {tuple(sp.combine(c, T) for c in h) for h in hs}
        if not orbit <= maps:
            raise AssertionError("map set is not closed under right symmetries")
        left -= orbit
        sizes.append(len(orbit))
    return sorted(sizes)
