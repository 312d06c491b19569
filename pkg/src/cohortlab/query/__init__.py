from cohortlab.query.ast import (
    And,
    BoolLit,
    Compare,
    ExistsBp,
    HasEvent,
    In,
    Not,
    Or,
    Window,
)
from cohortlab.query.errors import (
    MissingField,
    ParseError,
    QueryError,
    TypecheckError,
    TypeMismatch,
    UnknownEventKind,
    UnknownLabel,
)
from cohortlab.query.evaluate import evaluate
from cohortlab.query.parser import parse
from cohortlab.query.printer import print_query
from cohortlab.query.typecheck import TypedQuery, compile_query, typecheck

__all__ = [
    "And",
    "BoolLit",
    "Compare",
    "ExistsBp",
    "HasEvent",
    "In",
    "MissingField",
    "Not",
    "Or",
    "ParseError",
    "QueryError",
    "TypeMismatch",
    "TypecheckError",
    "TypedQuery",
    "UnknownEventKind",
    "UnknownLabel",
    "Window",
    "compile_query",
    "evaluate",
    "parse",
    "print_query",
    "typecheck",
]
