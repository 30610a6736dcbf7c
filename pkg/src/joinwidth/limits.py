"""Default budgets, overridable through environment variables.

``JOINWIDTH_MAX_CONSTRAINTS``  subset limit for the constraint DP (default 20)
``JOINWIDTH_MAX_VARIABLES``    subset limit for variable-subset search (default 16)
``JOINWIDTH_ENUM_BUDGET``      assignments the brute-force enumerator may visit (default 10**7)
"""
from __future__ import annotations

import os

_DEFAULTS = {
    "JOINWIDTH_MAX_CONSTRAINTS": 20,
    "JOINWIDTH_MAX_VARIABLES": 16,
    "JOINWIDTH_ENUM_BUDGET": 10**7,
}


def _read(name: str) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return _DEFAULTS[name]
    return int(raw)


def max_constraints() -> int:
    return _read("JOINWIDTH_MAX_CONSTRAINTS")


def max_variables() -> int:
    return _read("JOINWIDTH_MAX_VARIABLES")


def enum_budget() -> int:
    return _read("JOINWIDTH_ENUM_BUDGET")
