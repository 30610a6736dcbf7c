"""numba-compiled kernels; same contracts and output order as the numpy path."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def encode_rows(rows, radix):
    n, k = rows.shape
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        acc = 0
        for j in range(k):
            acc = acc * radix + np.int64(rows[i, j])
        out[i] = acc
    return out


@njit(cache=True)
def _join_pairs(left_ids, right_ids):
    order = np.argsort(right_ids, kind="mergesort")
    ordered = right_ids[order]
    n = left_ids.shape[0]
    lo = np.searchsorted(ordered, left_ids, side="left")
    hi = np.searchsorted(ordered, left_ids, side="right")
    total = 0
    for i in range(n):
        total += hi[i] - lo[i]
    li = np.empty(total, dtype=np.int64)
    ri = np.empty(total, dtype=np.int64)
    pos = 0
    for i in range(n):
        for p in range(lo[i], hi[i]):
            li[pos] = i
            ri[pos] = order[p]
            pos += 1
    return li, ri


def join_pairs(left_ids, right_ids):
    return _join_pairs(left_ids, right_ids)


@njit(cache=True)
def member_mask(ids, pool):
    ordered = np.sort(pool)
    out = np.zeros(ids.shape[0], dtype=np.bool_)
    m = ordered.shape[0]
    if m == 0:
        return out
    pos = np.searchsorted(ordered, ids)
    for i in range(ids.shape[0]):
        p = pos[i]
        if p < m and ordered[p] == ids[i]:
            out[i] = True
    return out


@njit(cache=True)
def single_valued(groups, values):
    n = groups.shape[0]
    if n < 2:
        return True
    order = np.argsort(groups, kind="mergesort")
    for q in range(1, n):
        a = order[q - 1]
        b = order[q]
        if groups[a] == groups[b] and values[a] != values[b]:
            return False
    return True


@njit(cache=True)
def _first_feasible_split(mask, feasible):
    low = mask & -mask
    s = 0
    while True:
        s = (s - mask) & mask
        if s == 0 or s == mask:
            return -1
        if s & low and feasible[s] and feasible[mask ^ s]:
            return s


def first_feasible_split(mask, feasible):
    return int(_first_feasible_split(np.int64(mask), feasible))


@njit(cache=True)
def _best_split(mask, cost):
    low = mask & -mask
    best = np.int64(-1)
    best_s = np.int64(-1)
    s = np.int64(0)
    while True:
        s = (s - mask) & mask
        if s == 0 or s == mask:
            break
        if s & low:
            a = cost[s]
            b = cost[mask ^ s]
            v = a if a > b else b
            if best_s < 0 or v < best:
                best = v
                best_s = s
    return best, best_s


def best_split(mask, cost):
    v, s = _best_split(np.int64(mask), cost)
    return int(v), int(s)


@njit(cache=True)
def _first_cover_pair(mask, feasible, boundary):
    a = np.int64(0)
    while True:
        a = (a - mask) & mask
        if a == 0 or a == mask:
            return -1, -1
        if not feasible[a]:
            continue
        rest = mask ^ a
        if feasible[rest]:
            return a, rest
        t = np.int64(0)
        while True:
            t = (t - a) & a
            if t == 0 or t == a:
                break
            b = rest | t
            if feasible[b] and (t & ~(boundary[a] & boundary[b])) == 0:
                return a, b


def first_cover_pair(mask, feasible, boundary):
    a, b = _first_cover_pair(np.int64(mask), feasible, boundary)
    return int(a), int(b)
