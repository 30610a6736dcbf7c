"""Pure-numpy kernels. Reference path and fallback when numba is disabled."""
from __future__ import annotations

import numpy as np


def encode_rows(rows: np.ndarray, radix: int) -> np.ndarray:
    """Mixed-radix encode each row of a 2-D integer array into one int64."""
    n, k = rows.shape
    if k == 0:
        return np.zeros(n, dtype=np.int64)
    weights = radix ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return rows.astype(np.int64) @ weights


def join_pairs(left_ids: np.ndarray, right_ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j) with left_ids[i] == right_ids[j].

    Pairs come out grouped by ascending i; within a group, j follows the
    stable sort order of right_ids.
    """
    order = np.argsort(right_ids, kind="mergesort")
    ordered = right_ids[order]
    lo = np.searchsorted(ordered, left_ids, side="left")
    hi = np.searchsorted(ordered, left_ids, side="right")
    counts = hi - lo
    total = int(counts.sum())
    li = np.repeat(np.arange(left_ids.shape[0], dtype=np.int64), counts)
    starts = np.repeat(lo - (np.cumsum(counts) - counts), counts)
    ri = order[starts + np.arange(total, dtype=np.int64)]
    return li, ri.astype(np.int64)


def member_mask(ids: np.ndarray, pool: np.ndarray) -> np.ndarray:
    return np.isin(ids, pool)


def single_valued(groups: np.ndarray, values: np.ndarray) -> bool:
    """True iff every group id maps to exactly one value."""
    if groups.shape[0] < 2:
        return True
    order = np.lexsort((values, groups))
    g = groups[order]
    v = values[order]
    clash = (g[1:] == g[:-1]) & (v[1:] != v[:-1])
    return not bool(clash.any())


def _submasks(mask: int) -> np.ndarray:
    bits = [b for b in range(mask.bit_length()) if mask >> b & 1]
    k = len(bits)
    combos = np.arange(1 << k, dtype=np.int64)
    subs = np.zeros(1 << k, dtype=np.int64)
    for j, b in enumerate(bits):
        subs |= ((combos >> j) & 1) << b
    return subs


def first_feasible_split(mask: int, feasible: np.ndarray) -> int:
    """Smallest proper submask s holding mask's lowest bit with both halves feasible; -1 if none."""
    low = mask & -mask
    subs = _submasks(mask)
    subs = subs[((subs & low) != 0) & (subs != mask)]
    ok = feasible[subs] & feasible[mask ^ subs]
    hits = np.flatnonzero(ok)
    return int(subs[hits[0]]) if hits.size else -1


def best_split(mask: int, cost: np.ndarray) -> tuple[int, int]:
    """Minimise max(cost[s], cost[mask ^ s]) over splits; ties go to the smallest s."""
    low = mask & -mask
    subs = _submasks(mask)
    subs = subs[((subs & low) != 0) & (subs != mask)]
    vals = np.maximum(cost[subs], cost[mask ^ subs])
    i = int(np.argmin(vals))
    return int(vals[i]), int(subs[i])


def first_cover_pair(mask: int, feasible: np.ndarray, boundary: np.ndarray) -> tuple[int, int]:
    """First cover (a, b) of ``mask`` by feasible proper submasks that overlap only on shared boundary.

    Candidates run over ascending a, then ascending b. A pair qualifies when
    ``a | b == mask`` and ``a & b`` lies inside ``boundary[a] & boundary[b]``.
    Returns (-1, -1) if no pair qualifies.
    """
    subs = _submasks(mask)
    subs = subs[(subs != 0) & (subs != mask)]
    cand = subs[feasible[subs]]
    for a in cand:
        a = int(a)
        rest = mask ^ a
        bs = cand[(cand & rest) == rest]
        ok = ((a & bs) & ~(boundary[a] & boundary[bs])) == 0
        hits = np.flatnonzero(ok)
        if hits.size:
            return a, int(bs[hits[0]])
    return -1, -1
