"""Hot inner loops, compiled with numba when available.

Set ``JOINWIDTH_DISABLE_NUMBA=1`` to force the pure-numpy path. Both
backends honour the same contracts and produce identical outputs, including
element order, so results never depend on which one is active.
"""
from __future__ import annotations

import os
import warnings

from joinwidth.kernels import _numpy as numpy_backend

_FLAG = "JOINWIDTH_DISABLE_NUMBA"

numba_backend = None
if os.environ.get(_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}:
    try:
        from joinwidth.kernels import _numba as numba_backend
    except ImportError:  # pragma: no cover - numba is a hard dependency in CI
        warnings.warn("numba unavailable, falling back to numpy kernels")

_active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if numba_backend is not None else "numpy"

encode_rows = _active.encode_rows
join_pairs = _active.join_pairs
single_valued = _active.single_valued
first_feasible_split = _active.first_feasible_split
best_split = _active.best_split
first_cover_pair = _active.first_cover_pair

# numba's compiled sort loses to numpy's on large pools; both give the same mask
_MEMBER_MASK_CUTOFF = 512


def member_mask(ids, pool):
    if ids.shape[0] + pool.shape[0] > _MEMBER_MASK_CUTOFF:
        return numpy_backend.member_mask(ids, pool)
    return _active.member_mask(ids, pool)


__all__ = [
    "BACKEND",
    "best_split",
    "encode_rows",
    "first_cover_pair",
    "first_feasible_split",
    "join_pairs",
    "member_mask",
    "numba_backend",
    "numpy_backend",
    "single_valued",
]
