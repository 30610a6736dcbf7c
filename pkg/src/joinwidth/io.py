"""JSON formats for instances, decompositions and graphs.

Instance files::

    {"variables": [...], "domain": [...],
     "constraints": [{"scope": [...], "tuples": [[...], ...]}, ...]}

Serialisation is canonical: fixed key order, tuples in sorted order, one
constraint per line, so equal instances always produce identical bytes.
"""
from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from joinwidth.decomposition import JoinDecomposition, Node
from joinwidth.errors import InstanceFormatError
from joinwidth.relational import Constraint, Instance

PathLike = str | os.PathLike


def _fail(where: str, msg: str) -> InstanceFormatError:
    return InstanceFormatError(f"{where}: {msg}" if where else msg)


def _loads(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{source}: malformed JSON at line {exc.lineno}, "
                                  f"column {exc.colno}: {exc.msg}") from None


def _str_list(value: Any, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise _fail(where, "expected a list of strings")
    if len(set(value)) != len(value):
        dupes = sorted({x for x in value if value.count(x) > 1})
        raise _fail(where, f"repeated entries {dupes}")
    return value


def instance_from_data(data: Any, source: str = "instance") -> Instance:
    """Build an instance from decoded JSON; tuples listed twice count once."""
    if not isinstance(data, dict):
        raise _fail(source, "top level must be an object")
    extra = set(data) - {"variables", "domain", "constraints"}
    if extra:
        raise _fail(source, f"unknown keys {sorted(extra)}")
    for key in ("variables", "domain", "constraints"):
        if key not in data:
            raise _fail(source, f"missing key {key!r}")
    variables = _str_list(data["variables"], f"{source}.variables")
    domain = _str_list(data["domain"], f"{source}.domain")
    declared = set(variables)
    value_of = {name: i for i, name in enumerate(domain)}
    raw = data["constraints"]
    if not isinstance(raw, list):
        raise _fail(f"{source}.constraints", "expected a list")
    constraints = []
    for ci, entry in enumerate(raw):
        where = f"{source}.constraints[{ci}]"
        if not isinstance(entry, dict) or set(entry) != {"scope", "tuples"}:
            raise _fail(where, 'expected an object with exactly "scope" and "tuples"')
        scope = _str_list(entry["scope"], f"{where}.scope")
        for v in scope:
            if v not in declared:
                raise _fail(f"{where}.scope", f"undeclared variable {v!r}")
        tuples = entry["tuples"]
        if not isinstance(tuples, list):
            raise _fail(f"{where}.tuples", "expected a list")
        rows = np.zeros((len(tuples), len(scope)), dtype=np.int64)
        for ti, t in enumerate(tuples):
            if not isinstance(t, list):
                raise _fail(f"{where}.tuples[{ti}]", "expected a list")
            if len(t) != len(scope):
                raise _fail(f"{where}.tuples[{ti}]",
                            f"tuple has {len(t)} values but the scope has {len(scope)}")
            for pos, name in enumerate(t):
                idx = value_of.get(name) if isinstance(name, str) else None
                if idx is None:
                    raise _fail(f"{where}.tuples[{ti}]", f"undeclared domain value {name!r}")
                rows[ti, pos] = idx
        constraints.append(Constraint(tuple(scope), rows))
    try:
        return Instance(tuple(variables), tuple(domain), tuple(constraints))
    except ValueError as exc:
        raise _fail(source, str(exc)) from None


def parse_instance_text(text: str, source: str = "instance") -> Instance:
    return instance_from_data(_loads(text, source), source)


def parse_instance(path: PathLike) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance_text(fh.read(), os.fspath(path))


def instance_to_text(inst: Instance) -> str:
    dump = json.dumps
    lines = [
        "{",
        f'  "variables": {dump(list(inst.variables))},',
        f'  "domain": {dump(list(inst.domain))},',
        '  "constraints": [',
    ]
    body = []
    for c in inst.constraints:
        tuples = [[inst.domain[int(x)] for x in row] for row in c.rows]
        body.append(f'    {{"scope": {dump(list(c.scope))}, "tuples": {dump(tuples)}}}')
    if body:
        lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def serialize_instance(inst: Instance, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_text(inst))


def decomposition_to_data(dec: JoinDecomposition) -> dict:
    def walk(n: Node) -> dict:
        if n.is_leaf:
            return {"leaf": n.constraint}
        if len(n.children) != 2:
            raise ValueError("only binary trees can be written")
        return {"left": walk(n.children[0]), "right": walk(n.children[1])}
    return walk(dec.root)


def decomposition_to_text(dec: JoinDecomposition) -> str:
    return json.dumps(decomposition_to_data(dec)) + "\n"


def decomposition_from_data(data: Any, source: str = "decomposition") -> JoinDecomposition:
    def build(node: Any, where: str) -> Node:
        if not isinstance(node, dict):
            raise _fail(where, "expected an object")
        if set(node) == {"leaf"}:
            idx = node["leaf"]
            if not isinstance(idx, int) or isinstance(idx, bool) or idx < 0:
                raise _fail(where, "leaf must be a non-negative integer")
            return Node(constraint=idx)
        if set(node) == {"left", "right"}:
            return Node(children=(build(node["left"], where + ".left"),
                                  build(node["right"], where + ".right")))
        raise _fail(where, 'expected {"leaf": i} or {"left": ..., "right": ...}')
    return JoinDecomposition(build(data, source))


def parse_decomposition(path: PathLike) -> JoinDecomposition:
    with open(path, encoding="utf-8") as fh:
        source = os.fspath(path)
        return decomposition_from_data(_loads(fh.read(), source), source)


def serialize_decomposition(dec: JoinDecomposition, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(decomposition_to_text(dec))


def graph_from_data(data: Any, source: str = "graph") -> tuple[list[tuple], list]:
    """Edge list plus vertex list from ``[[u, v], ...]`` or ``{"edges": ..., "vertices": ...}``."""
    vertices: list = []
    if isinstance(data, dict):
        extra = set(data) - {"edges", "vertices"}
        if extra or "edges" not in data:
            raise _fail(source, 'expected an object with "edges" and optional "vertices"')
        vertices = data.get("vertices", [])
        data = data["edges"]
        if not isinstance(vertices, list):
            raise _fail(f"{source}.vertices", "expected a list")
    if not isinstance(data, list):
        raise _fail(source, "expected a list of edges")
    edges = []
    for i, e in enumerate(data):
        if not isinstance(e, list) or len(e) < 1:
            raise _fail(f"{source}[{i}]", "edge must be a non-empty list of vertices")
        edges.append(tuple(e))
    return edges, vertices


def parse_graph(path: PathLike) -> tuple[list[tuple], list]:
    with open(path, encoding="utf-8") as fh:
        source = os.fspath(path)
        return graph_from_data(_loads(fh.read(), source), source)
