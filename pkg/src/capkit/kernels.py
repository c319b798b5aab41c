"""Compiled inner loops for layer scans.

Masks over AG(m, 3) with m <= 4 fit in two 64-bit words (``lo`` holds points
0..63, ``hi`` points 64..80).  Everything here works on plain arrays so that
numba can compile it; the Python side prepares the orbit representatives of
the first two frame images and reads back histograms and witness records.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def lowest_bit(x):
    i = 0
    while not (x >> np.uint64(i)) & _ONE:
        i += 1
    return i


@njit(cache=True)
def max_cap_local(pts, L, third, member, blk, chosen, cs, bs):
    """Largest cap among ``pts[:L]``; ``member[p]`` is the local index of p or -1."""
    for i in range(L):
        for j in range(L):
            if i == j:
                blk[i, j] = _ZERO
            else:
                r = member[third[pts[i], pts[j]]]
                blk[i, j] = (_ONE << np.uint64(r)) if r >= 0 else _ZERO
    if L == 64:
        full = ~_ZERO
    else:
        full = (_ONE << np.uint64(L)) - _ONE
    best = 0
    d = 0
    cs[0] = full
    bs[0] = _ZERO
    while d >= 0:
        c = cs[d]
        if c == _ZERO or d + popcount(c) <= best:
            d -= 1
            continue
        i = lowest_bit(c)
        cs[d] = c & (c - _ONE)
        nb = bs[d]
        for t in range(d):
            nb |= blk[i, chosen[t]]
        chosen[d] = i
        if d + 1 > best:
            best = d + 1
        bs[d + 1] = nb
        cs[d + 1] = cs[d] & ~nb
        d += 1
    return best


@njit(cache=True)
def _image(coef, vs, nv, add, neg):
    out = 0
    for i in range(nv):
        c = coef[i]
        if c == 1:
            out = add[out, vs[i]]
        elif c == 2:
            out = add[out, neg[vs[i]]]
    return out


@njit(cache=True)
def scan_levels(
    prefixes,  # int64[P, 3]: v1, v2, weight
    pre_lo,
    pre_hi,  # exclusion after frame levels 0..2
    coef3,  # int64[n3, 3]
    coef4,  # int64[n4, 4]
    k,
    size,
    add,
    neg,
    third,
    na_lo,
    na_hi,
    floor,
    keep_min,
    probe,
    hist,  # int64[size + 1], weighted counts per middle value
    wit,  # int64[W, 4]: prefix index, v3, v4, value
    state,  # int64[7]: best, witness count, dropped witnesses, leaves evaluated,
    # dropped deferred leaves, weight with >= probe allowed, weight of those not a full 9-cap
):
    best = state[0]
    nw = state[1]
    pts = np.empty(64, dtype=np.int64)
    member = -np.ones(size, dtype=np.int64)
    blk = np.zeros((64, 64), dtype=np.uint64)
    chosen = np.zeros(65, dtype=np.int64)
    cs = np.zeros(66, dtype=np.uint64)
    bs = np.zeros(66, dtype=np.uint64)
    span2 = np.zeros(size, dtype=np.bool_)
    span3 = np.zeros(size, dtype=np.bool_)
    vs = np.zeros(4, dtype=np.int64)
    W = wit.shape[0]
    thr = min(floor, best)
    for pi in range(prefixes.shape[0]):
        v1 = prefixes[pi, 0]
        v2 = prefixes[pi, 1]
        w = prefixes[pi, 2]
        vs[0] = v1
        vs[1] = v2
        span2[:] = False
        for a in range(3):
            ta = 0
            for _ in range(a):
                ta = add[ta, v1]
            for b in range(3):
                tb = ta
                for _ in range(b):
                    tb = add[tb, v2]
                span2[tb] = True
        v3_lo = 1 if k >= 3 else 0
        v3_hi = size if k >= 3 else 1
        for v3 in range(v3_lo, v3_hi):
            if k >= 3 and span2[v3]:
                continue
            vs[2] = v3
            e3l = pre_lo[pi]
            e3h = pre_hi[pi]
            if k >= 3:
                for r in range(coef3.shape[0]):
                    img = _image(coef3[r], vs, 3, add, neg)
                    e3l |= na_lo[img]
                    e3h |= na_hi[img]
                if size - popcount(e3l) - popcount(e3h) < thr:
                    continue
                span3[:] = False
                for s in range(size):
                    if span2[s]:
                        span3[s] = True
                        span3[add[s, v3]] = True
                        span3[add[s, neg[v3]]] = True
            v4_lo = 1 if k >= 4 else 0
            v4_hi = size if k >= 4 else 1
            for v4 in range(v4_lo, v4_hi):
                if k >= 4 and span3[v4]:
                    continue
                vs[3] = v4
                el = e3l
                eh = e3h
                if k >= 4:
                    for r in range(coef4.shape[0]):
                        img = _image(coef4[r], vs, 4, add, neg)
                        el |= na_lo[img]
                        eh |= na_hi[img]
                L = size - popcount(el) - popcount(eh)
                if L < thr:
                    continue
                # leaf: collect allowed points
                if L > 64:
                    value = -1
                else:
                    n = 0
                    for p in range(size):
                        if p < 64:
                            if not (el >> np.uint64(p)) & _ONE:
                                pts[n] = p
                                member[p] = n
                                n += 1
                        else:
                            if not (eh >> np.uint64(p - 64)) & _ONE:
                                pts[n] = p
                                member[p] = n
                                n += 1
                    value = max_cap_local(pts, L, third, member, blk, chosen, cs, bs)
                    for t in range(L):
                        member[pts[t]] = -1
                state[3] += 1
                if L >= probe:
                    state[5] += w
                    if L != 9 or value != 9:
                        state[6] += w
                if value >= 0:
                    hist[value] += w
                if value > best:
                    best = value
                    thr = min(floor, best)
                    cut = min(keep_min, best)
                    j = 0
                    for t in range(nw):
                        if wit[t, 3] >= cut or wit[t, 3] < 0:
                            wit[j, 0] = wit[t, 0]
                            wit[j, 1] = wit[t, 1]
                            wit[j, 2] = wit[t, 2]
                            wit[j, 3] = wit[t, 3]
                            j += 1
                    nw = j
                if value < 0 or value >= min(keep_min, best):
                    if nw < W:
                        wit[nw, 0] = pi
                        wit[nw, 1] = v3
                        wit[nw, 2] = v4
                        wit[nw, 3] = value
                        nw += 1
                    elif value < 0:
                        state[4] += 1
                    else:
                        state[2] += 1
    state[0] = best
    state[1] = nw
