"""Join decompositions: rooted binary trees with constraints on the leaves.

Node ids are post-order positions, so children always precede their parent
and the root is the last node.
"""
from __future__ import annotations

import dataclasses
from collections.abc import Iterator, Sequence
from typing import Literal

from joinwidth.errors import InvalidDecomposition, WidthExceeded
from joinwidth.relational import Constraint, Instance, natural_join, project, prune
from joinwidth.width import count_cap, count_width, width_base

Semantics = Literal["naive", "proj", "pruned"]
SEMANTICS: tuple[str, ...] = ("naive", "proj", "pruned")


@dataclasses.dataclass(frozen=True)
class Node:
    """A tree node. Leaves carry a constraint index; inner nodes carry children."""

    constraint: int | None = None
    children: tuple[Node, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children


def leaf(index: int) -> Node:
    return Node(constraint=index)


def join(left: Node, right: Node) -> Node:
    return Node(children=(left, right))


@dataclasses.dataclass(frozen=True)
class JoinDecomposition:
    root: Node

    def postorder(self) -> list[Node]:
        out: list[Node] = []
        stack: list[tuple[Node, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded or node.is_leaf:
                out.append(node)
                continue
            stack.append((node, True))
            for child in reversed(node.children):
                stack.append((child, False))
        return out

    def leaf_labels(self) -> list[int | None]:
        return [n.constraint for n in self.postorder() if n.is_leaf]

    def shape(self):
        """Nested-tuple rendering; leaves become their constraint index."""
        def walk(n: Node):
            return n.constraint if n.is_leaf else tuple(walk(c) for c in n.children)
        return walk(self.root)


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(dec: JoinDecomposition, inst: Instance) -> ValidationReport:
    problems: list[str] = []
    labels: list[int] = []
    for i, node in enumerate(dec.postorder()):
        if node.is_leaf:
            if node.constraint is None:
                problems.append(f"leaf node {i} carries no constraint index")
            else:
                labels.append(node.constraint)
        else:
            if len(node.children) != 2:
                problems.append(f"not binary: node {i} has {len(node.children)} children")
            if node.constraint is not None:
                problems.append(f"inner node {i} carries a constraint index")
    expected = set(range(len(inst.constraints)))
    seen = set(labels)
    dupes = sorted({x for x in labels if labels.count(x) > 1})
    if dupes:
        problems.append(f"leaf bijection violated: duplicate constraint indices {dupes}")
    unknown = sorted(seen - expected)
    if unknown:
        problems.append(f"leaf bijection violated: unknown constraint indices {unknown}")
    missing = sorted(expected - seen)
    if missing:
        problems.append(f"leaf bijection incomplete: missing constraint indices {missing}")
    return ValidationReport(tuple(problems))


def require_valid(dec: JoinDecomposition, inst: Instance) -> None:
    report = validate(dec, inst)
    if not report.ok:
        raise InvalidDecomposition(list(report.violations))


@dataclasses.dataclass(frozen=True)
class NodeSets:
    covered: frozenset[int]
    vars: frozenset[str]
    outside_vars: frozenset[str]
    boundary: frozenset[str]


def _covered(nodes: list[Node]) -> list[frozenset[int]]:
    pos = {id(n): i for i, n in enumerate(nodes)}
    out: list[frozenset[int]] = []
    for n in nodes:
        if n.is_leaf:
            out.append(frozenset() if n.constraint is None else frozenset({n.constraint}))
        else:
            out.append(frozenset().union(*(out[pos[id(c)]] for c in n.children)))
    return out


def node_sets(dec: JoinDecomposition, inst: Instance) -> dict[int, NodeSets]:
    nodes = dec.postorder()
    scopes = [frozenset(c.scope) for c in inst.constraints]
    result: dict[int, NodeSets] = {}
    for i, covered in enumerate(_covered(nodes)):
        inside = frozenset().union(*(scopes[k] for k in covered))
        outside = frozenset().union(*(s for k, s in enumerate(scopes) if k not in covered))
        result[i] = NodeSets(covered, inside, outside, inside & outside)
    return result


@dataclasses.dataclass(frozen=True)
class NodeEvaluation:
    node_id: int
    semantics: str
    constraint: Constraint
    count: int
    width: float


@dataclasses.dataclass(frozen=True)
class EvaluationReport:
    semantics: str
    base: int
    nodes: tuple[NodeEvaluation, ...]
    peak: int
    width: float
    satisfiable: bool | None

    @property
    def root(self) -> NodeEvaluation:
        return self.nodes[-1]


def iter_evaluate(dec: JoinDecomposition, inst: Instance, semantics: Semantics = "pruned",
                  cap=None) -> Iterator[NodeEvaluation]:
    """Evaluate bottom-up, yielding each node as soon as it is computed.

    ``cap`` is a width; evaluation stops with :class:`WidthExceeded` at the
    first node holding more than ``floor(base ** cap)`` tuples.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}; expected one of {SEMANTICS}")
    require_valid(dec, inst)
    base = width_base(inst)
    limit = None if cap is None else count_cap(base, cap)
    nodes = dec.postorder()
    sets = node_sets(dec, inst)
    pos = {id(n): i for i, n in enumerate(nodes)}
    computed: list[Constraint] = []
    for i, node in enumerate(nodes):
        if node.is_leaf:
            c = inst.constraints[node.constraint]
        else:
            left, right = (computed[pos[id(ch)]] for ch in node.children)
            c = natural_join(left, right)
        if semantics == "proj":
            c = project(c, sets[i].outside_vars)
        elif semantics == "pruned":
            c = prune(project(c, sets[i].boundary), inst)
        computed.append(c)
        count = len(c)
        if limit is not None and count > limit:
            raise WidthExceeded(i, count, limit)
        yield NodeEvaluation(i, semantics, c, count, count_width(count, base))


def evaluate(dec: JoinDecomposition, inst: Instance, semantics: Semantics = "pruned",
             cap=None) -> EvaluationReport:
    nodes = tuple(iter_evaluate(dec, inst, semantics, cap))
    peak = max(n.count for n in nodes)
    base = width_base(inst)
    sat = len(nodes[-1].constraint) > 0 if semantics == "pruned" else None
    return EvaluationReport(semantics, base, nodes, peak, count_width(peak, base), sat)


def linear_from_order(order: Sequence[int]) -> JoinDecomposition:
    """Left-deep caterpillar joining ``order[0]`` and ``order[1]`` first."""
    order = list(order)
    if not order or sorted(order) != list(range(len(order))):
        raise ValueError(f"not a permutation of constraint indices: {order}")
    acc = leaf(order[0])
    for k in order[1:]:
        acc = join(acc, leaf(k))
    return JoinDecomposition(acc)


def is_linear(dec: JoinDecomposition) -> bool:
    return all(n.is_leaf or any(c.is_leaf for c in n.children) for n in dec.postorder())


def from_shape(shape) -> JoinDecomposition:
    """Inverse of :meth:`JoinDecomposition.shape`: ints are leaves, tuples are joins."""
    def build(s):
        if isinstance(s, int):
            return leaf(s)
        return Node(children=tuple(build(x) for x in s))
    return JoinDecomposition(build(shape))
