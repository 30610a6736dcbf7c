"""Detectors for tractable classes, with the decompositions they induce.

Covers functionality and root sets, constraint-root sets, hereditary
boundedness and fixing sets. Every decomposition built here is linear.
"""
from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Iterable

import numpy as np

from joinwidth import kernels, limits
from joinwidth.decomposition import JoinDecomposition, linear_from_order
from joinwidth.errors import LimitExceeded
from joinwidth.oracle import count_solutions
from joinwidth.relational import Constraint, Instance, induced_subinstance, natural_join
from joinwidth.width import fits, width_base


def is_functional_on(c: Constraint, W: Iterable[str], v: str) -> bool:
    """True iff no two tuples of ``c`` restricted to ``W`` and ``v`` differ only at ``v``."""
    if v not in c.scope:
        raise ValueError(f"variable {v!r} is not in the scope {c.scope}")
    keep = set(W) - {v}
    cols = [i for i, u in enumerate(c.scope) if u in keep]
    rows = c.rows.astype(np.int64)
    values = np.ascontiguousarray(rows[:, c.position(v)])
    if not cols:
        return len(np.unique(values)) <= 1
    radix = int(rows.max(initial=0)) + 1
    keys = np.ascontiguousarray(rows[:, cols])
    if len(cols) * np.log2(max(radix, 2)) < 62:
        groups = kernels.encode_rows(keys, radix)
    else:
        groups = np.unique(keys, axis=0, return_inverse=True)[1].reshape(-1).astype(np.int64)
    return bool(kernels.single_valued(groups, values))


@dataclasses.dataclass(frozen=True)
class RootSetWitness:
    roots: tuple[str, ...]
    order: tuple[str, ...]
    certificates: dict[str, int]


def find_root_set_witness(inst: Instance, Q: Iterable[str]) -> RootSetWitness | None:
    """Greedily extend ``Q`` to a full functionality-witnessing variable order.

    Roots come first in instance order. Each later variable is the first
    one (in instance order) that some constraint, lowest index first, makes
    functional given everything already placed. Functionality only improves
    as the prefix grows, so a stall means no witness with prefix ``Q`` exists.
    """
    roots = set(Q)
    unknown = roots - set(inst.variables)
    if unknown:
        raise ValueError(f"not variables of the instance: {sorted(unknown)}")
    order = [v for v in inst.variables if v in roots]
    placed = set(order)
    certificates: dict[str, int] = {}
    holders: dict[str, list[int]] = {v: [] for v in inst.variables}
    for i, c in enumerate(inst.constraints):
        for v in c.scope:
            holders[v].append(i)
    progress = True
    while progress and len(order) < len(inst.variables):
        progress = False
        for v in inst.variables:
            if v in placed:
                continue
            for i in holders[v]:
                if is_functional_on(inst.constraints[i], placed, v):
                    order.append(v)
                    placed.add(v)
                    certificates[v] = i
                    progress = True
                    break
            if progress:
                break
    if len(order) < len(inst.variables):
        return None
    return RootSetWitness(tuple(v for v in inst.variables if v in roots), tuple(order), certificates)


def find_root_set(inst: Instance, k: int) -> RootSetWitness | None:
    """A root set of at most ``k`` variables, smallest first, then lexicographic."""
    for size in range(0, min(k, len(inst.variables)) + 1):
        for Q in itertools.combinations(inst.variables, size):
            witness = find_root_set_witness(inst, Q)
            if witness is not None:
                return witness
    return None


def _order_from_witness(inst: Instance, first: Iterable[int], witness: RootSetWitness) -> list[int]:
    order = list(first)
    seen = set(order)
    for v in witness.order:
        i = witness.certificates.get(v)
        if i is not None and i not in seen:
            order.append(i)
            seen.add(i)
    order.extend(i for i in range(len(inst.constraints)) if i not in seen)
    return order


@dataclasses.dataclass(frozen=True)
class ConstraintRootSet:
    constraints: tuple[int, ...]
    witness: RootSetWitness
    decomposition: JoinDecomposition


def find_constraint_root_set(inst: Instance, k: int) -> ConstraintRootSet | None:
    """Smallest constraint set (at most ``k``, lexicographic) whose joint scope is a root set.

    The decomposition joins those constraints first, then each certifying
    constraint in witness order, then whatever is left.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    m = len(inst.constraints)
    for size in range(1, min(k, m) + 1):
        for P in itertools.combinations(range(m), size):
            roots = {v for i in P for v in inst.constraints[i].scope}
            witness = find_root_set_witness(inst, roots)
            if witness is not None:
                order = _order_from_witness(inst, P, witness)
                return ConstraintRootSet(P, witness, linear_from_order(order))
    return None


def is_hereditarily_k_bounded(inst: Instance, k, max_variables: int | None = None,
                              budget: int | None = None) -> bool:
    """True iff every induced subinstance has at most ``b ** k`` solutions."""
    n = len(inst.variables)
    limit = limits.max_variables() if max_variables is None else max_variables
    if n > limit:
        raise LimitExceeded("variables", n, limit)
    base = width_base(inst)
    for size in range(n + 1):
        for vs in itertools.combinations(inst.variables, size):
            if not fits(count_solutions(induced_subinstance(inst, vs), budget), base, k):
                return False
    return True


@dataclasses.dataclass(frozen=True)
class FixingAssignment:
    fix: dict[int, tuple[int, ...]]

    @property
    def k(self) -> int:
        return max((len(s) for s in self.fix.values()), default=0)


def _at_most_one(inst: Instance, members: tuple[int, ...]) -> bool:
    acc = Constraint.tautology()
    for i in members:
        acc = natural_join(acc, inst.constraints[i])
        if len(acc) == 0:
            return True
    return len(acc) <= 1


def find_fixing_sets(inst: Instance, k: int) -> FixingAssignment | None:
    """For every constraint, the first fixing set containing it, smallest size first."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    m = len(inst.constraints)
    verdict: dict[tuple[int, ...], bool] = {}
    fix: dict[int, tuple[int, ...]] = {}
    for c in range(m):
        others = [i for i in range(m) if i != c]
        for size in range(1, min(k, m) + 1):
            for rest in itertools.combinations(others, size - 1):
                members = tuple(sorted((c, *rest)))
                ok = verdict.get(members)
                if ok is None:
                    ok = verdict[members] = _at_most_one(inst, members)
                if ok:
                    fix[c] = members
                    break
            if c in fix:
                break
        if c not in fix:
            return None
    return FixingAssignment(fix)


def decomposition_from_fixing_sets(inst: Instance, fix: FixingAssignment) -> JoinDecomposition:
    """Introduce Fix(c_1), then the unseen members of Fix(c_2), and so on."""
    missing = [i for i in range(len(inst.constraints)) if i not in fix.fix]
    if missing:
        raise ValueError(f"fixing assignment misses constraints {missing}")
    order: list[int] = []
    seen: set[int] = set()
    for c in range(len(inst.constraints)):
        for i in fix.fix[c]:
            if i not in seen:
                order.append(i)
                seen.add(i)
    return linear_from_order(order)


__all__ = [
    "ConstraintRootSet",
    "FixingAssignment",
    "RootSetWitness",
    "decomposition_from_fixing_sets",
    "find_constraint_root_set",
    "find_fixing_sets",
    "find_root_set",
    "find_root_set_witness",
    "is_functional_on",
    "is_hereditarily_k_bounded",
]
