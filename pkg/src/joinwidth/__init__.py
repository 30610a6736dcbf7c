"""Join decompositions and joinwidth for constraint satisfaction."""
from __future__ import annotations

from joinwidth.decomposition import (
    JoinDecomposition,
    Node,
    evaluate,
    iter_evaluate,
    join,
    leaf,
    linear_from_order,
    validate,
)
from joinwidth.engines import (
    Verdict,
    exact_joinwidth,
    extract_witness,
    find_decomposition_dp,
    solve_variable_dp,
    solve_with_decomposition,
)
from joinwidth.errors import (
    DegenerateInstance,
    InstanceFormatError,
    InvalidDecomposition,
    JoinwidthError,
    LimitExceeded,
    WidthExceeded,
)
from joinwidth.io import parse_decomposition, parse_instance, serialize_decomposition, serialize_instance
from joinwidth.relational import Constraint, Instance, natural_join, project, prune

__version__ = "0.1.0"

__all__ = [
    "Constraint",
    "DegenerateInstance",
    "Instance",
    "InstanceFormatError",
    "InvalidDecomposition",
    "JoinDecomposition",
    "JoinwidthError",
    "LimitExceeded",
    "Node",
    "Verdict",
    "WidthExceeded",
    "evaluate",
    "exact_joinwidth",
    "extract_witness",
    "find_decomposition_dp",
    "iter_evaluate",
    "join",
    "leaf",
    "linear_from_order",
    "natural_join",
    "parse_decomposition",
    "parse_instance",
    "project",
    "prune",
    "serialize_decomposition",
    "serialize_instance",
    "solve_variable_dp",
    "solve_with_decomposition",
    "validate",
]
