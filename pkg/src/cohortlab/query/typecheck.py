"""Resolve a parsed AST against a codebook.

Resolution rewrites the tree: quoted categorical labels become integer
codes and event kinds take their canonical capitalization. The result
carries the ordered set of referenced identifiers (clinical fields, bp
series, event kinds), which downstream drives the per-field small
multiples.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

from cohortlab.dataset.codebook import Codebook, FieldDescriptor
from cohortlab.query.ast import (
    And,
    BoolLit,
    Compare,
    ExistsBp,
    HasEvent,
    In,
    Node,
    Not,
    Or,
)
from cohortlab.query.errors import (
    MissingField,
    TypeMismatch,
    UnknownEventKind,
    UnknownLabel,
)
from cohortlab.query.parser import parse
from cohortlab.query.printer import print_query


@dataclass(frozen=True)
class TypedQuery:
    """A resolved, evaluable query.

    ``involved_fields`` lists every identifier the query touches, in
    first-reference order; ``source_text`` is the canonical rendering of
    the resolved tree.
    """

    ast: Node
    involved_fields: tuple[str, ...]
    source_text: str


def _clinical_field(field: str, codebook: Codebook) -> FieldDescriptor:
    fd = codebook.get(field)
    if fd is None:
        pool = codebook.names("clinical")
        raise MissingField(field, difflib.get_close_matches(field, pool, n=3, cutoff=0.5))
    if fd.table != "clinical":
        raise TypeMismatch(field, "clinical field",
                           f"{fd.table}-table field (use exists(...)/has_event(...))")
    return fd


def _resolve_literal(fd: FieldDescriptor, op: str, value):
    if isinstance(value, str):
        if not fd.is_categorical:
            raise TypeMismatch(fd.name, "number", f"label {value!r}")
        if op not in ("==", "!="):
            raise TypeMismatch(fd.name, "integer code for an ordered comparison",
                               f"label {value!r}")
        code = fd.code_for_label(value)
        if code is None:
            raise UnknownLabel(fd.name, value, known=list(fd.coding.values()))
        return code
    if fd.is_categorical:
        if isinstance(value, float):
            if not value.is_integer():
                raise TypeMismatch(fd.name, "integer code or quoted label",
                                   f"non-integer {value}")
            return int(value)
        return int(value)
    return value


def typecheck(ast: Node, codebook: Codebook) -> TypedQuery:
    """Validate and resolve an AST; raises a :class:`TypecheckError`
    subclass on the first problem found."""
    involved: list[str] = []

    def note(name: str):
        if name not in involved:
            involved.append(name)

    def resolve(node: Node) -> Node:
        if isinstance(node, BoolLit):
            return node
        if isinstance(node, Compare):
            fd = _clinical_field(node.field, codebook)
            note(fd.name)
            return Compare(fd.name, node.op, _resolve_literal(fd, node.op, node.value))
        if isinstance(node, In):
            fd = _clinical_field(node.field, codebook)
            note(fd.name)
            values = tuple(_resolve_literal(fd, "==", v) for v in node.values)
            return In(fd.name, values)
        if isinstance(node, ExistsBp):
            note(node.series)
            return node
        if isinstance(node, HasEvent):
            canonical = codebook.canonical_event_kind(node.kind)
            if canonical is None:
                raise UnknownEventKind(node.kind, known=codebook.event_kinds())
            note(canonical)
            return HasEvent(canonical, node.window)
        if isinstance(node, Not):
            return Not(resolve(node.child))
        if isinstance(node, And):
            return And(tuple(resolve(c) for c in node.children))
        if isinstance(node, Or):
            return Or(tuple(resolve(c) for c in node.children))
        raise TypeError(f"not a query node: {node!r}")

    resolved = resolve(ast)
    return TypedQuery(ast=resolved, involved_fields=tuple(involved),
                      source_text=print_query(resolved))


def compile_query(text: str, codebook: Codebook) -> TypedQuery:
    """parse + typecheck in one step."""
    return typecheck(parse(text), codebook)
