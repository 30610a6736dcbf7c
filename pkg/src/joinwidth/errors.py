"""Exception hierarchy shared across the package."""
from __future__ import annotations


class JoinwidthError(Exception):
    """Base class for all errors raised by this package."""


class LimitExceeded(JoinwidthError):
    """A hard budget (subset count, enumeration size, ...) would be exceeded."""

    def __init__(self, limit: str, value: int, maximum: int) -> None:
        self.limit = limit
        self.value = value
        self.maximum = maximum
        super().__init__(f"limit '{limit}' exceeded: {value} > {maximum}")


class DegenerateInstance(JoinwidthError):
    """The instance lacks structure an operation needs (e.g. no constraints)."""


class InvalidDecomposition(JoinwidthError):
    def __init__(self, violations: list[str]) -> None:
        self.violations = list(violations)
        super().__init__("invalid join decomposition: " + "; ".join(self.violations))


class WidthExceeded(JoinwidthError):
    """Raised by capped evaluation as soon as one node grows past the cap."""

    def __init__(self, node_id: int, count: int, cap: int) -> None:
        self.node_id = node_id
        self.count = count
        self.cap = cap
        super().__init__(f"width exceeded at node {node_id}: {count} tuples > cap {cap}")


class InstanceFormatError(JoinwidthError, ValueError):
    """Malformed instance or decomposition file; message names the location."""
