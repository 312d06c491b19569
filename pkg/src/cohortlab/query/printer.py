"""Canonical query printing. parse(print_query(ast)) == ast."""

from __future__ import annotations

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
    Window,
)
from cohortlab.query.parser import _escape

_PREC = {Or: 1, And: 2, Not: 3}

# minimum child precedence that may appear bare under each parent; equal
# precedence is wrapped too so nested and/or nodes survive a round trip
_CHILD_MIN = {Or: 2, And: 3, Not: 3}


def _fmt_literal(v) -> str:
    if isinstance(v, str):
        return _escape(v)
    if isinstance(v, bool):
        raise TypeError("bool is not a query literal")
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def _fmt_window(w: Window) -> str:
    return f"hours({_fmt_literal(w.lo)},{_fmt_literal(w.hi)})"


def _prec(node: Node) -> int:
    return _PREC.get(type(node), 4)


def _print(node: Node, child_min: int) -> str:
    text = _print_bare(node)
    if _prec(node) < child_min:
        return f"({text})"
    return text


def _print_bare(node: Node) -> str:
    if isinstance(node, BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, Compare):
        return f"{node.field} {node.op} {_fmt_literal(node.value)}"
    if isinstance(node, In):
        return f"{node.field} in [{', '.join(_fmt_literal(v) for v in node.values)}]"
    if isinstance(node, ExistsBp):
        return (f"exists(bp.{node.series}, {_fmt_window(node.window)}, "
                f"value {node.op} {_fmt_literal(node.threshold)})")
    if isinstance(node, HasEvent):
        if node.window is None:
            return f"has_event({node.kind})"
        return f"has_event({node.kind}, {_fmt_window(node.window)})"
    if isinstance(node, Not):
        return f"not {_print(node.child, _CHILD_MIN[Not])}"
    if isinstance(node, And):
        return " and ".join(_print(c, _CHILD_MIN[And]) for c in node.children)
    if isinstance(node, Or):
        return " or ".join(_print(c, _CHILD_MIN[Or]) for c in node.children)
    raise TypeError(f"not a query node: {node!r}")


def print_query(node: Node) -> str:
    """Render an AST as canonical query text with minimal parentheses."""
    return _print(node, 0)
