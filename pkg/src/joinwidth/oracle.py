"""Brute-force reference answers.

Everything here favours being obviously correct over being fast: solutions
come from enumerating every assignment, joinwidth from evaluating every
leaf-labelled binary tree, branchwidth from every unrooted ternary tree
(skipping only partial trees that provably cannot beat the best so far).
Budgets are hard preconditions; nothing is ever truncated or approximated.
"""
from __future__ import annotations

import dataclasses
from collections.abc import Iterator

import numpy as np

from joinwidth import limits
from joinwidth.decomposition import JoinDecomposition, Node, evaluate, join, leaf
from joinwidth.errors import LimitExceeded
from joinwidth.relational import Constraint, Hypergraph, Instance
from joinwidth.width import count_width, width_base

_CHUNK = 1 << 16


def enumerate_solutions(inst: Instance, budget: int | None = None) -> Constraint:
    """SOL(I) over the instance's variable order, by exhaustive assignment."""
    budget = limits.enum_budget() if budget is None else budget
    n = len(inst.variables)
    d = len(inst.domain)
    total = d ** n
    if total > budget:
        raise LimitExceeded("enumeration budget", total, budget)
    if n == 0:
        ok = all(len(c) > 0 for c in inst.constraints)
        return Constraint.tautology() if ok else Constraint.contradiction()
    pos = inst.var_index
    allowed = []
    for c in inst.constraints:
        cols = [pos[v] for v in c.scope]
        weights = d ** np.arange(len(cols) - 1, -1, -1, dtype=np.int64)
        codes = np.unique(c.rows.astype(np.int64) @ weights) if len(c) else np.zeros(0, np.int64)
        allowed.append((cols, weights, codes))
    place = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    found = []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        assignments = (idx[:, None] // place[None, :]) % d
        keep = np.ones(idx.shape[0], dtype=bool)
        for cols, weights, codes in allowed:
            if not cols:
                keep &= codes.size > 0
                continue
            keep &= np.isin(assignments[:, cols] @ weights, codes)
        found.append(assignments[keep])
    rows = np.vstack(found) if found else np.zeros((0, n), np.int64)
    return Constraint(inst.variables, rows)


def count_solutions(inst: Instance, budget: int | None = None) -> int:
    return len(enumerate_solutions(inst, budget))


def is_satisfiable(inst: Instance, budget: int | None = None) -> bool:
    return count_solutions(inst, budget) > 0


def all_trees(labels: tuple[int, ...]) -> Iterator[Node]:
    """Every rooted binary tree with leaves ``labels``, in canonical order.

    The left subtree always holds the smallest label, so each unordered tree
    appears exactly once; there are (2n-3)!! of them.
    """
    if len(labels) == 1:
        yield leaf(labels[0])
        return
    first, rest = labels[0], labels[1:]
    m = len(rest)
    for bits in range(1 << m):
        if bits == (1 << m) - 1:
            continue
        left = (first,) + tuple(rest[i] for i in range(m) if bits >> i & 1)
        right = tuple(rest[i] for i in range(m) if not bits >> i & 1)
        for lt in all_trees(left):
            for rt in all_trees(right):
                yield join(lt, rt)


def _is_caterpillar(node: Node) -> bool:
    if node.is_leaf:
        return True
    if not any(c.is_leaf for c in node.children):
        return False
    return all(_is_caterpillar(c) for c in node.children)


@dataclasses.dataclass(frozen=True)
class BruteForceResult:
    width: float
    decomposition: JoinDecomposition
    peak_count: int
    trees_evaluated: int


def brute_force_joinwidth(inst: Instance, linear_only: bool = False,
                          max_constraints: int = 6) -> BruteForceResult:
    """Minimum pruned width over every (linear) join decomposition."""
    m = len(inst.constraints)
    if m > max_constraints:
        raise LimitExceeded("brute-force constraint count", m, max_constraints)
    if m == 0:
        raise ValueError("instance has no constraints")
    best: tuple[int, Node] | None = None
    seen = 0
    for tree in all_trees(tuple(range(m))):
        if linear_only and not _is_caterpillar(tree):
            continue
        seen += 1
        peak = evaluate(JoinDecomposition(tree), inst, "pruned").peak
        if best is None or peak < best[0]:
            best = (peak, tree)
    peak, tree = best
    return BruteForceResult(count_width(peak, width_base(inst)), JoinDecomposition(tree), peak, seen)


def _unrooted_trees(m: int) -> Iterator[list[tuple[int, int]]]:
    """Unrooted trees whose leaves are 0..m-1 and inner nodes have degree 3.

    Built by inserting leaf i on every edge of each tree over leaves 0..i-1.
    """
    if m == 1:
        yield []
        return
    if m == 2:
        yield [(0, 1)]
        return

    def grow(edges: list[tuple[int, int]], nxt: int, inner: int) -> Iterator[list[tuple[int, int]]]:
        if nxt == m:
            yield edges
            return
        for k, (u, v) in enumerate(edges):
            rest = edges[:k] + edges[k + 1:]
            yield from grow(rest + [(u, inner), (inner, v), (inner, nxt)], nxt + 1, inner + 1)

    yield from grow([(0, m), (1, m), (2, m)], 3, m + 1)


def _sides(edges: list[tuple[int, int]], m: int) -> Iterator[frozenset[int]]:
    """For each tree edge, the set of leaves on one side of it."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    for u, v in edges:
        seen = {u, v}
        stack = [v]
        found = set()
        while stack:
            x = stack.pop()
            if x < m:
                found.add(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        yield frozenset(found)


def _linear(edges: list[tuple[int, int]], m: int) -> bool:
    inner_degree: dict[int, int] = {}
    for u, v in edges:
        if u >= m and v >= m:
            inner_degree[u] = inner_degree.get(u, 0) + 1
            inner_degree[v] = inner_degree.get(v, 0) + 1
    return all(d <= 2 for d in inner_degree.values())


def _partial_width(h: Hypergraph, edges: list[tuple[int, int]], m: int, placed: int) -> int:
    """Largest cut of a partial tree, counting only the ``placed`` hyperedges."""
    verts = [h.edges[i] for i in range(placed)]
    width = 0
    for side in _sides(edges, m):
        inside = frozenset().union(*(verts[i] for i in side))
        outside = frozenset().union(*(verts[i] for i in range(placed) if i not in side))
        width = max(width, len(inside & outside))
    return width


def brute_force_branchwidth(h: Hypergraph, linear_only: bool = False, max_edges: int = 6) -> int:
    """Minimum over branch decompositions of the largest cut-vertex set.

    Trees grow by inserting hyperedge i on every edge of each tree over
    hyperedges 0..i-1. A cut can only gain vertices as hyperedges are added,
    and removing a leaf from a caterpillar leaves a caterpillar, so partial
    trees that already match the best width (or stop being caterpillars)
    are abandoned without losing any optimum.
    """
    m = len(h.edges)
    if m > max_edges:
        raise LimitExceeded("brute-force edge count", m, max_edges)
    if m == 0:
        raise ValueError("hypergraph has no edges")
    if m == 1:
        return 0
    if m == 2:
        return len(h.edges[0] & h.edges[1])
    best = [None]

    def grow(edges: list[tuple[int, int]], nxt: int, inner: int) -> None:
        if linear_only and not _linear(edges, m):
            return
        width = _partial_width(h, edges, m, nxt)
        if best[0] is not None and width >= best[0]:
            return
        if nxt == m:
            best[0] = width
            return
        for k, (u, v) in enumerate(edges):
            rest = edges[:k] + edges[k + 1:]
            grow(rest + [(u, inner), (inner, v), (inner, nxt)], nxt + 1, inner + 1)

    grow([(0, m), (1, m), (2, m)], 3, m + 1)
    return best[0]


def iter_branch_decompositions(m: int) -> Iterator[list[tuple[int, int]]]:
    """Every unrooted ternary tree on leaves 0..m-1 (inner nodes numbered from m)."""
    return _unrooted_trees(m)


def branch_decomposition_width(h: Hypergraph, edges: list[tuple[int, int]]) -> int:
    m = len(h.edges)
    return max((len(h.cut(side)) for side in _sides(edges, m)), default=0)
