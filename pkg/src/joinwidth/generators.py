"""Constructors for the instance families used throughout the package.

Every generator returns a fully validated :class:`Instance`. Families whose
size explodes with their parameter refuse to build past desk scale unless
``allow_large`` is set.
"""
from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Hashable, Iterable, Sequence
from typing import Any

import networkx as nx
import numpy as np

from joinwidth.errors import LimitExceeded
from joinwidth.relational import Constraint, Instance, join_all, natural_join, project


def _names(values: Iterable[Any]) -> tuple[str, ...]:
    return tuple(str(v) for v in values)


def _complete(scope: Sequence[str], d: int) -> Constraint:
    k = len(scope)
    rows = np.array(list(itertools.product(range(d), repeat=k)), dtype=np.int64).reshape(d**k, k)
    return Constraint(tuple(scope), rows)


def gen_triangle(N: int) -> Instance:
    """Three binary constraints on a triangle, each holding (1, i) and (i, 1)."""
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    pairs = sorted({(0, i) for i in range(N)} | {(i, 0) for i in range(N)})
    scopes = [("a", "b"), ("b", "c"), ("a", "c")]
    return Instance(("a", "b", "c"), _names(range(1, N + 1)),
                    tuple(Constraint.from_tuples(s, pairs) for s in scopes))


def gen_star(omega: int) -> Instance:
    """A centre ``x`` pinned to 0 and ``omega`` free leaves."""
    if omega < 1:
        raise ValueError(f"omega must be at least 1, got {omega}")
    leaves = [f"v{i}" for i in range(1, omega + 1)]
    cons = tuple(Constraint.from_tuples(("x", v), [(0, 1), (0, 0)]) for v in leaves)
    return Instance(("x", *leaves), ("0", "1"), cons)


def gen_complete_hypergraph(edges: Sequence[Sequence[Hashable]], d: int) -> Instance:
    """One complete constraint per hyperedge, over a domain of size ``d``."""
    if d < 1:
        raise ValueError(f"domain size must be positive, got {d}")
    if not edges:
        raise ValueError("need at least one edge")
    scopes = []
    for e in edges:
        scope = _names(e)
        if len(set(scope)) != len(scope):
            raise ValueError(f"edge repeats a vertex: {tuple(e)}")
        scopes.append(scope)
    vertices = sorted({v for s in scopes for v in s}, key=_vertex_key)
    return Instance(tuple(vertices), _names(range(d)), tuple(_complete(s, d) for s in scopes))


def _vertex_key(v: str):
    return (0, int(v), v) if v.lstrip("-").isdigit() else (1, 0, v)


def gen_tree_complete(edges: Sequence[tuple[Hashable, Hashable]], d: int) -> Instance:
    """Complete binary constraints on the edges of a tree."""
    if d < 2:
        raise ValueError(f"domain size must be at least 2, got {d}")
    g = nx.Graph()
    g.add_edges_from(edges)
    if not edges or g.number_of_edges() != len(edges) or not nx.is_tree(g):
        raise ValueError("edge list is not a tree")
    return gen_complete_hypergraph(edges, d)


def gen_bw_reduction(edges: Sequence[tuple[Hashable, Hashable]], omega: int,
                     vertices: Sequence[Hashable] | None = None) -> Instance:
    """The branchwidth reduction: one ternary constraint per graph edge plus padding.

    Variables are ``a``, one ``v<name>`` per non-isolated vertex, and ``b``;
    the domain is ``1 .. n + omega`` with ``n`` counting every vertex,
    isolated ones included. ``a`` selects a vertex index, and only the
    selected endpoint of an edge may take the value 2.
    """
    if omega < 1:
        raise ValueError(f"omega must be at least 1, got {omega}")
    if not edges:
        raise ValueError("graph must have at least one edge")
    g = nx.Graph()
    g.add_nodes_from(vertices or ())
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        if g.has_edge(u, v):
            raise ValueError(f"repeated edge {u!r}-{v!r}")
        g.add_edge(u, v)
    order = sorted(g.nodes, key=lambda x: _vertex_key(str(x)))
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    name = {v: f"v{v}" for v in order}
    cons = []
    for u, v in edges:
        i, j = sorted((index[u], index[v]))
        rows = []
        for sel in range(n):
            for hi_i in ((0, 1) if sel == i else (0,)):
                for hi_j in ((0, 1) if sel == j else (0,)):
                    rows.append((sel, hi_i, hi_j))
        cons.append(Constraint.from_tuples(("a", name[order[i]], name[order[j]]), rows))
    cons.append(Constraint.from_tuples(("b",), [(x,) for x in range(n + omega)]))
    used = [name[v] for v in order if g.degree(v) > 0]
    return Instance(("a", *used, "b"), _names(range(1, n + omega + 1)), tuple(cons))


def gen_agm(omega: int, allow_large: bool = False) -> Instance:
    """One variable per m-subset of [2m], one star-shaped constraint per element of [2m].

    With ``m = 4 omega + 1``; each relation holds, for every scope variable
    ``v``, all tuples with ``v`` free and every other entry equal to 1.
    """
    if omega < 1:
        raise ValueError(f"omega must be at least 1, got {omega}")
    if omega > 1 and not allow_large:
        raise LimitExceeded("agm omega without allow_large", omega, 1)
    m = 4 * omega + 1
    subsets = list(itertools.combinations(range(1, 2 * m + 1), m))
    n = len(subsets)
    var = {s: "v" + "_".join(map(str, s)) for s in subsets}
    cons = []
    for i in range(1, 2 * m + 1):
        scope = [var[s] for s in subsets if i in s]
        k = len(scope)
        rows = np.zeros((k * n, k), dtype=np.int32)
        for p in range(k):
            rows[p * n:(p + 1) * n, p] = np.arange(n)
        cons.append(Constraint(tuple(scope), rows))
    return Instance(tuple(var[s] for s in subsets), _names(range(1, n + 1)), tuple(cons))


def gen_identity(n: int) -> Instance:
    """A single constraint over n Boolean variables allowing exactly one 1."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    scope = tuple(f"v{i}" for i in range(1, n + 1))
    return Instance(scope, ("0", "1"), (Constraint(scope, np.eye(n, dtype=np.int64)),))


def gen_functional_chain(n: int, d: int, seed: int = 0) -> Instance:
    """Binary constraints v_i -> v_{i+1}, each the graph of a random bijection."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    rng = np.random.default_rng(seed)
    names = tuple(f"v{i}" for i in range(1, n + 1))
    cons = []
    for i in range(n - 1):
        perm = rng.permutation(d)
        cons.append(Constraint((names[i], names[i + 1]), np.column_stack([np.arange(d), perm])))
    return Instance(names, _names(range(d)), tuple(cons))


def gen_chain(omega: int, n: int | None = None, allow_large: bool = False) -> Instance:
    """Strict ``<`` constraints along x_1..x_n plus complete constraints between non-neighbours.

    ``n`` defaults to ``16 * omega``; passing it explicitly builds a
    scaled variant for tests.
    """
    if omega < 1:
        raise ValueError(f"omega must be at least 1, got {omega}")
    n = 16 * omega if n is None else n
    if n < 2:
        raise ValueError(f"need at least 2 variables, got {n}")
    if n > 16 and not allow_large:
        raise LimitExceeded("chain variables without allow_large", n, 16)
    xs = tuple(f"x{i}" for i in range(1, n + 1))
    lt = np.array([(p, q) for p in range(n) for q in range(p + 1, n)], dtype=np.int64)
    cons = [Constraint((xs[i], xs[i + 1]), lt) for i in range(n - 1)]
    for l in range(n):
        for m in range(l + 2, n):
            cons.append(_complete((xs[l], xs[m]), n))
    return Instance(xs, _names(range(1, n + 1)), tuple(cons))


@dataclasses.dataclass(frozen=True)
class ChainResult:
    satisfiable: bool
    assignment: dict[str, str] | None
    joins: int


def solve_chain_by_propagation(inst: Instance) -> ChainResult:
    """Solve a chain-family instance with joins and projections only.

    Lower bounds travel forward along the chain and upper bounds backward;
    their joins pin every variable to a single value, and the resulting
    assignment is then joined with every constraint as a check.
    """
    xs = inst.variables
    n = len(xs)
    link = {}
    for c in inst.constraints:
        if len(c.scope) == 2:
            i = xs.index(c.scope[0])
            if i + 1 < n and c.scope[1] == xs[i + 1]:
                link.setdefault(i, c)
    if sorted(link) != list(range(n - 1)):
        raise ValueError("instance is not a chain: missing (x_i, x_{i+1}) constraints")
    joins = 0
    up = {1: project(link[0], {xs[1]})}
    for i in range(2, n):
        up[i] = project(natural_join(up[i - 1], link[i - 1]), {xs[i]})
        joins += 1
    down = {n - 2: project(link[n - 2], {xs[n - 2]})}
    for i in range(n - 3, -1, -1):
        down[i] = project(natural_join(down[i + 1], link[i]), {xs[i]})
        joins += 1
    pins = []
    for i in range(n):
        if i == 0:
            pins.append(down[0])
        elif i == n - 1:
            pins.append(up[n - 1])
        else:
            pins.append(natural_join(up[i], down[i]))
            joins += 1
    b = join_all(pins)
    joins += n
    for c in inst.constraints:
        b = natural_join(b, c)
        joins += 1
        if len(b) == 0:
            return ChainResult(False, None, joins)
    b = b.reorder(xs)
    row = b.rows[0]
    return ChainResult(True, {v: inst.domain[int(x)] for v, x in zip(xs, row)}, joins)


def gen_random(seed: int, n_vars: int, domain_size: int, n_constraints: int,
               arity: tuple[int, int] = (2, 2), density: float = 0.5) -> Instance:
    """Seeded random instance in which every variable lies in some scope.

    Each constraint draws its arity from ``arity`` (inclusive), and keeps
    each of the ``d ** k`` candidate tuples independently with probability
    ``density``.
    """
    lo, hi = arity
    if n_vars < 1 or domain_size < 1 or n_constraints < 1:
        raise ValueError("variable, domain and constraint counts must be positive")
    if not 1 <= lo <= hi:
        raise ValueError(f"bad arity range {arity}")
    if hi > n_vars:
        raise ValueError(f"arity {hi} exceeds the number of variables {n_vars}")
    if n_constraints * hi < n_vars:
        raise ValueError("too few constraint slots to cover every variable")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    sizes = rng.integers(lo, hi + 1, size=n_constraints)
    k = 0
    while sizes.sum() < n_vars:
        if sizes[k] < hi:
            sizes[k] += 1
        k = (k + 1) % n_constraints
    scopes: list[list[int]] = [[] for _ in range(n_constraints)]
    slot = 0
    for v in rng.permutation(n_vars):
        while len(scopes[slot]) >= sizes[slot]:
            slot = (slot + 1) % n_constraints
        scopes[slot].append(int(v))
        slot = (slot + 1) % n_constraints
    names = tuple(f"v{i}" for i in range(n_vars))
    cons = []
    for s, size in zip(scopes, sizes):
        free = [v for v in range(n_vars) if v not in s]
        s = s + [int(v) for v in rng.choice(free, size=int(size) - len(s), replace=False)]
        s = [s[i] for i in rng.permutation(len(s))]
        cand = np.array(list(itertools.product(range(domain_size), repeat=len(s))), dtype=np.int64)
        keep = rng.random(cand.shape[0]) < density
        cons.append(Constraint(tuple(names[v] for v in s), cand[keep].reshape(-1, len(s))))
    return Instance(names, _names(range(domain_size)), tuple(cons))


def random_corpus(count: int, seed: int = 0, max_vars: int = 6, max_domain: int = 3,
                  max_constraints: int = 5, max_arity: int = 3) -> list[Instance]:
    """Varied small random instances, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(1, max_vars + 1))
        d = int(rng.integers(1, max_domain + 1))
        hi = int(rng.integers(1, min(max_arity, n) + 1))
        lo = int(rng.integers(1, hi + 1))
        m_min = -(-n // hi)
        if m_min > max_constraints:
            continue
        m = int(rng.integers(m_min, max_constraints + 1))
        density = float(rng.choice([0.3, 0.5, 0.7, 0.9, 1.0]))
        out.append(gen_random(int(rng.integers(2**31)), n, d, m, (lo, hi), density))
    return out


@dataclasses.dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict[str, Any] = dataclasses.field(default_factory=dict)


_FAMILIES = {
    "triangle": gen_triangle,
    "star": gen_star,
    "tree-complete": gen_tree_complete,
    "complete": gen_complete_hypergraph,
    "bw-reduction": gen_bw_reduction,
    "agm": gen_agm,
    "chain": gen_chain,
    "identity": gen_identity,
    "functional-chain": gen_functional_chain,
    "random": gen_random,
}
FAMILIES: tuple[str, ...] = tuple(_FAMILIES)


def generate(spec: GeneratorSpec) -> Instance:
    try:
        fn = _FAMILIES[spec.family]
    except KeyError:
        raise ValueError(f"unknown family {spec.family!r}; choose from {FAMILIES}") from None
    return fn(**spec.params)
