"""Cohort-query AST.

Nodes are frozen dataclasses; structural equality is the round-trip
contract (parse(print(ast)) == ast). Numeric literals may be int or
float; Python's cross-type equality makes 48 == 48.0 compare equal,
which is intentional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
BP_SERIES = ("sbp", "dbp", "map")

Literal = Union[int, float, str]


@dataclass(frozen=True)
class Window:
    """Half-open [lo, hi) time window in hours since onset."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0 <= self.lo < self.hi):
            raise ValueError(f"window must satisfy 0 <= lo < hi, got [{self.lo}, {self.hi})")


@dataclass(frozen=True)
class Compare:
    field: str
    op: str
    value: Literal

    def __post_init__(self):
        if self.op not in COMPARE_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class In:
    field: str
    values: tuple[Literal, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("membership list must be non-empty")


@dataclass(frozen=True)
class ExistsBp:
    """At least one measurement of the series inside the window satisfies
    ``value op threshold``."""

    series: str
    window: Window
    op: str
    threshold: float

    def __post_init__(self):
        if self.series not in BP_SERIES:
            raise ValueError(f"unknown bp series {self.series!r}")
        if self.op not in COMPARE_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class HasEvent:
    kind: str
    window: Window | None = None


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Not:
    child: "Node"


@dataclass(frozen=True)
class And:
    children: tuple["Node", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("and-node needs at least 2 children")


@dataclass(frozen=True)
class Or:
    children: tuple["Node", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("or-node needs at least 2 children")


Node = Union[Compare, In, ExistsBp, HasEvent, BoolLit, Not, And, Or]


def walk(node: Node):
    """Depth-first, left-to-right traversal."""
    yield node
    if isinstance(node, Not):
        yield from walk(node.child)
    elif isinstance(node, (And, Or)):
        for child in node.children:
            yield from walk(child)
