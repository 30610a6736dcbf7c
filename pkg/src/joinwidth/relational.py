"""Exact relational operations over interned integer tuples.

A relation is a 2-D integer array, one row per tuple, kept in canonical form:
rows are lexicographically sorted and duplicate-free. Canonical form makes
equality a plain array comparison and lets projections onto a scope prefix
deduplicate with a single adjacent-row pass.
"""
from __future__ import annotations

import dataclasses
import functools
import math
from collections.abc import Iterable, Sequence

import numpy as np

from joinwidth import kernels
from joinwidth.errors import DegenerateInstance


def _value_dtype(max_value: int) -> np.dtype:
    return np.dtype(np.int16) if max_value < 2**15 else np.dtype(np.int32)


def _fits(radix: int, k: int) -> bool:
    return k * math.log2(max(radix, 2)) < 62


def _canonical(rows: np.ndarray, dedupe: bool = True) -> np.ndarray:
    n, k = rows.shape
    if k == 0:
        return rows[: min(n, 1)]
    if n <= 1:
        return rows
    radix = int(rows.max()) + 1
    if _fits(radix, k):
        ids = kernels.encode_rows(rows, radix)
        order = np.argsort(ids, kind="mergesort")
        rows = rows[order]
        if dedupe:
            ids = ids[order]
            keep = np.empty(n, dtype=bool)
            keep[0] = True
            np.not_equal(ids[1:], ids[:-1], out=keep[1:])
            rows = rows[keep]
        return rows
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    if dedupe:
        keep = np.empty(n, dtype=bool)
        keep[0] = True
        keep[1:] = (rows[1:] != rows[:-1]).any(axis=1)
        rows = rows[keep]
    return rows


def _key_ids(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map the rows of a and b to int64 ids such that equal rows share an id."""
    k = a.shape[1]
    if k == 0:
        return np.zeros(a.shape[0], np.int64), np.zeros(b.shape[0], np.int64)
    radix = max(int(a.max(initial=0)), int(b.max(initial=0))) + 1
    if _fits(radix, k):
        return kernels.encode_rows(a, radix), kernels.encode_rows(b, radix)
    _, inverse = np.unique(np.vstack([a, b]), axis=0, return_inverse=True)
    inverse = inverse.reshape(-1).astype(np.int64)
    return inverse[: a.shape[0]], inverse[a.shape[0]:]


@dataclasses.dataclass(frozen=True, eq=False)
class Constraint:
    """An ordered scope plus a duplicate-free set of tuples.

    ``rows`` holds interned value indices, shape ``(len(relation), len(scope))``.
    The array is stored canonicalised and read-only.
    """

    scope: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self) -> None:
        scope = tuple(self.scope)
        if len(set(scope)) != len(scope):
            raise ValueError(f"scope repeats a variable: {scope}")
        rows = np.asarray(self.rows)
        if rows.size == 0 and not (rows.ndim == 2 and rows.shape[1] == len(scope)):
            rows = np.zeros((0, len(scope)), np.int16)
        if rows.ndim != 2 or rows.shape[1] != len(scope):
            raise ValueError(f"tuples must have length {len(scope)}, got array of shape {rows.shape}")
        if rows.size and int(rows.min()) < 0:
            raise ValueError("value indices must be non-negative")
        top = int(rows.max()) if rows.size else 0
        rows = _canonical(rows.astype(_value_dtype(top), copy=False))
        rows.flags.writeable = False
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def _trusted(cls, scope: tuple[str, ...], rows: np.ndarray) -> Constraint:
        # rows must already be canonical
        obj = object.__new__(cls)
        if rows.flags.writeable:
            rows.flags.writeable = False
        object.__setattr__(obj, "scope", scope)
        object.__setattr__(obj, "rows", rows)
        return obj

    @classmethod
    def from_tuples(cls, scope: Sequence[str], tuples: Iterable[Sequence[int]]) -> Constraint:
        scope = tuple(scope)
        data = [tuple(t) for t in tuples]
        for t in data:
            if len(t) != len(scope):
                raise ValueError(f"tuple {t} does not match scope {scope}")
        rows = np.array(data, dtype=np.int64).reshape(len(data), len(scope))
        return cls(scope, rows)

    @classmethod
    def tautology(cls) -> Constraint:
        return cls._trusted((), np.zeros((1, 0), np.int16))

    @classmethod
    def contradiction(cls, scope: Sequence[str] = ()) -> Constraint:
        return cls._trusted(tuple(scope), np.zeros((0, len(tuple(scope))), np.int16))

    @property
    def arity(self) -> int:
        return len(self.scope)

    def __len__(self) -> int:
        return self.rows.shape[0]

    def position(self, var: str) -> int:
        return self.scope.index(var)

    def tuples(self) -> set[tuple[int, ...]]:
        return {tuple(int(x) for x in row) for row in self.rows}

    def decode(self, domain: Sequence[str]) -> set[tuple[str, ...]]:
        return {tuple(domain[int(x)] for x in row) for row in self.rows}

    def reorder(self, scope: Sequence[str]) -> Constraint:
        """Same relation with columns permuted into ``scope`` (same variable set)."""
        scope = tuple(scope)
        if set(scope) != set(self.scope) or len(scope) != len(self.scope):
            raise ValueError(f"{scope} is not a permutation of {self.scope}")
        if scope == self.scope:
            return self
        cols = [self.scope.index(v) for v in scope]
        return Constraint._trusted(scope, _canonical(self.rows[:, cols], dedupe=False))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Constraint):
            return NotImplemented
        return self.scope == other.scope and np.array_equal(self.rows, other.rows)

    def __hash__(self) -> int:
        return hash((self.scope, self.rows.shape, self.rows.astype(np.int64).tobytes()))

    def __repr__(self) -> str:
        return f"Constraint(scope={self.scope}, tuples={len(self)})"


@dataclasses.dataclass(frozen=True)
class Hypergraph:
    vertices: frozenset[str]
    edges: tuple[frozenset[str], ...]

    def cut(self, side: Iterable[int]) -> frozenset[str]:
        """Vertices incident to an edge in ``side`` and to an edge outside it."""
        side = set(side)
        inside: set[str] = set()
        outside: set[str] = set()
        for i, e in enumerate(self.edges):
            (inside if i in side else outside).update(e)
        return frozenset(inside & outside)


@dataclasses.dataclass(frozen=True)
class Instance:
    """A CSP instance: variables, a shared value table and an indexed constraint list."""

    variables: tuple[str, ...]
    domain: tuple[str, ...]
    constraints: tuple[Constraint, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable identifiers")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("duplicate domain values")
        declared = set(self.variables)
        covered: set[str] = set()
        for i, c in enumerate(self.constraints):
            unknown = set(c.scope) - declared
            if unknown:
                raise ValueError(f"constraint {i} uses undeclared variables {sorted(unknown)}")
            if len(c) and int(c.rows.max(initial=0)) >= len(self.domain):
                raise ValueError(f"constraint {i} references a value outside the domain")
            covered.update(c.scope)
        missing = declared - covered
        if missing:
            raise ValueError(f"variables not in any scope: {sorted(missing)}")

    @functools.cached_property
    def var_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @functools.cached_property
    def scope_masks(self) -> tuple[int, ...]:
        """Per constraint, its scope as a bitmask over variable positions."""
        idx = self.var_index
        return tuple(sum(1 << idx[v] for v in c.scope) for c in self.constraints)

    def vars_of_mask(self, mask: int) -> frozenset[str]:
        return frozenset(v for i, v in enumerate(self.variables) if mask >> i & 1)

    def mask_of_vars(self, vars: Iterable[str]) -> int:
        idx = self.var_index
        return sum(1 << idx[v] for v in set(vars))

    @functools.cached_property
    def _key_cache(self) -> dict[tuple[int, tuple[str, ...]], np.ndarray]:
        return {}

    def projected_keys(self, index: int, vars: tuple[str, ...]) -> np.ndarray:
        """Sorted int64 codes of ``constraints[index]`` projected onto ``vars`` (in that order)."""
        key = (index, vars)
        hit = self._key_cache.get(key)
        if hit is None:
            c = self.constraints[index]
            cols = [c.scope.index(v) for v in vars]
            hit = np.unique(kernels.encode_rows(np.ascontiguousarray(c.rows[:, cols]), len(self.domain)))
            self._key_cache[key] = hit
        return hit

    def value_index(self, name: str) -> int:
        return self.domain.index(name)

    def __repr__(self) -> str:
        return (f"Instance(|V|={len(self.variables)}, |D|={len(self.domain)}, "
                f"|C|={len(self.constraints)})")


def natural_join(c1: Constraint, c2: Constraint) -> Constraint:
    """Join with scope S(c1) followed by the variables of c2 not in c1."""
    in1 = set(c1.scope)
    in2 = set(c2.scope)
    shared = [v for v in c1.scope if v in in2]
    extra = [v for v in c2.scope if v not in in1]
    scope = c1.scope + tuple(extra)
    n1, n2 = len(c1), len(c2)
    if n1 == 0 or n2 == 0:
        return Constraint.contradiction(scope)
    if shared:
        a = c1.rows[:, [c1.scope.index(v) for v in shared]]
        b = c2.rows[:, [c2.scope.index(v) for v in shared]]
        ida, idb = _key_ids(a, b)
        li, ri = kernels.join_pairs(ida, idb)
    else:
        li = np.repeat(np.arange(n1), n2)
        ri = np.tile(np.arange(n2), n1)
    if li.shape[0] == 0:
        return Constraint.contradiction(scope)
    left = c1.rows[li]
    if extra:
        right = c2.rows[ri][:, [c2.scope.index(v) for v in extra]]
        rows = np.hstack([left, right])
    else:
        rows = left
    # canonical by construction: left rows ascend, ties follow c2's order on the extra columns
    return Constraint._trusted(scope, np.ascontiguousarray(rows))


def project(c: Constraint, vars: Iterable[str]) -> Constraint:
    """Restrict to ``S(c) ∩ vars`` in scope order, dropping duplicates."""
    keep = set(vars)
    cols = [i for i, v in enumerate(c.scope) if v in keep]
    if len(cols) == c.arity:
        return c
    if not cols:
        return Constraint.tautology() if len(c) else Constraint.contradiction()
    scope = tuple(c.scope[i] for i in cols)
    rows = c.rows[:, cols]
    if cols == list(range(len(cols))):
        n = rows.shape[0]
        if n > 1:
            fresh = np.empty(n, dtype=bool)
            fresh[0] = True
            fresh[1:] = (rows[1:] != rows[:-1]).any(axis=1)
            rows = rows[fresh]
        return Constraint._trusted(scope, np.ascontiguousarray(rows))
    return Constraint._trusted(scope, _canonical(np.ascontiguousarray(rows)))


def prune(c: Constraint, inst: Instance) -> Constraint:
    """Drop every tuple that some constraint of ``inst`` rules out on the shared variables."""
    n = len(c)
    if n == 0:
        return c
    radix = len(inst.domain)
    mask = None
    for i, other in enumerate(inst.constraints):
        theirs = set(other.scope)
        shared = tuple(v for v in c.scope if v in theirs)
        if not shared:
            if len(other) == 0:
                return Constraint.contradiction(c.scope)
            continue
        cols = [c.scope.index(v) for v in shared]
        if _fits(radix, len(shared)):
            ids = kernels.encode_rows(np.ascontiguousarray(c.rows[:, cols]), radix)
            hit = kernels.member_mask(ids, inst.projected_keys(i, shared))
        else:
            other_rows = other.rows[:, [other.scope.index(v) for v in shared]]
            ida, idb = _key_ids(np.ascontiguousarray(c.rows[:, cols]), np.ascontiguousarray(other_rows))
            hit = kernels.member_mask(ida, idb)
        mask = hit if mask is None else (mask & hit)
        if not mask.any():
            return Constraint.contradiction(c.scope)
    if mask is None or mask.all():
        return c
    return Constraint._trusted(c.scope, np.ascontiguousarray(c.rows[mask]))


def induced_subinstance(inst: Instance, vars: Iterable[str]) -> Instance:
    keep = set(vars)
    unknown = keep - set(inst.variables)
    if unknown:
        raise ValueError(f"not variables of the instance: {sorted(unknown)}")
    return Instance(
        tuple(v for v in inst.variables if v in keep),
        inst.domain,
        tuple(project(c, keep) for c in inst.constraints),
    )


def max_tuples(inst: Instance) -> int:
    if not inst.constraints:
        raise DegenerateInstance("instance has no constraints")
    return max(len(c) for c in inst.constraints)


def hypergraph(inst: Instance) -> Hypergraph:
    return Hypergraph(frozenset(inst.variables), tuple(frozenset(c.scope) for c in inst.constraints))


def join_all(constraints: Iterable[Constraint]) -> Constraint:
    """Left-to-right join of a sequence; the empty sequence gives the tautology."""
    acc = Constraint.tautology()
    for c in constraints:
        acc = natural_join(acc, c)
    return acc
